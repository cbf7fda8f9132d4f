#pragma once

// Numerical certification of the ratio lemmas for double perturbed PCMs, the
// positivity of the explicit eigenvector formulas and the directed cycles
// that make the eigenvector efficient.
//
// Every check reads w from power iteration on the explicit matrix, never from
// the closed-form formulas.

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dpcm/efficiency.hpp"
#include "dpcm/generators.hpp"
#include "dpcm/pcm.hpp"
#include "dpcm/spectral.hpp"

namespace dpcm {

enum class LemmaId {
  L1a, L1b, L1c, L1d, L1e, L1f, L1g, L1h, L1i, L1j,
  L2a, L2b, L2c, L2d, L2e, L2f, L2g, L2h, L2i, L2j,
  L3a, L3b, L3c, L3d, L3e, L3f, L3g, L3h,
  PositivityRemark,
  MainTheoremCycle,
};

inline constexpr std::size_t kRatioLemmaCount = 28;

/// All ids in declaration order.
std::span<const LemmaId> all_lemma_ids();
/// "1a" ... "3h", "positivity", "cycle".
std::string_view to_string(LemmaId id);
/// Accepts the names above, optionally prefixed with "L".
std::optional<LemmaId> parse_lemma_id(std::string_view name);
/// The case a ratio lemma belongs to; nullopt for the two case-independent ids.
std::optional<DoubleCase> case_of(LemmaId id);

struct LemmaSample {
  DoubleCase kase = DoubleCase::Case1;
  std::size_t n = 4;
  double delta = 2.0;
  double gamma = 2.0;
  std::vector<double> x;
  std::uint64_t seed = 0;

  PerturbationStructure structure() const;
};

/// AtLeast is the arc condition of the efficiency digraph.
enum class Relation { Less, Equal, Greater, AtLeast };

std::string_view to_string(Relation r);

/// One claimed relation w_i / w_j (rel) a_ij, 0-based.
struct Comparison {
  std::size_t i = 0;
  std::size_t j = 0;
  double ratio = 0.0;
  double target = 0.0;
  Relation expected = Relation::Equal;
  /// Normalized slack; positive when the claim holds with room to spare.
  double margin = 0.0;
};

struct CheckOptions {
  /// A strict inequality counts only if its normalized margin exceeds this.
  double strict_margin = 1e-10;
  /// Relative tolerance of the equality claims.
  double equality_tol = 1e-9;
  /// gamma * delta within this of 1 counts as equal to 1.
  double product_tol = 1e-12;
  double lambda_tol = 1e-9;
  double power_tol = kDefaultPowerTol;
  int power_max_iter = kDefaultPowerMaxIter;
  double tie_tol = kDefaultTieTol;
};

struct LemmaCheck {
  bool pass = false;
  /// Smallest margin over the comparisons. For the positivity remark: the
  /// smallest component over the largest, minimized over formula variants, or
  /// minus the relative disagreement between the closed-form and the
  /// power-iteration lambda_max when that exceeds lambda_tol.
  double margin = 0.0;
  std::vector<Comparison> comparisons;
};

bool hypothesis_holds(LemmaId id, const LemmaSample& sample);

/// Throws HypothesisViolated when the sample is outside the hypothesis region.
LemmaCheck check_lemma(LemmaId id, const LemmaSample& sample, const CheckOptions& options = {});

/// Same, reusing a precomputed eigenvector of sample.structure()'s matrix.
LemmaCheck check_lemma(LemmaId id, const LemmaSample& sample, const Pcm& m, std::span<const double> w,
                       const CheckOptions& options = {});

/// Sign region of (delta, gamma) used by the case analysis: 0..5 for Case 1,
/// 0..3 for Case 2A and Case 2B. Throws HypothesisViolated for delta or gamma = 1.
int sign_region(DoubleCase kase, double delta, double gamma);
int sign_region_count(DoubleCase kase);

/// The Hamiltonian cycle (0-based, first node repeated at the end) that the
/// case analysis establishes in the efficiency digraph. The trailing block of
/// unperturbed alternatives is traversed in ascending order at the position
/// of the generic block index.
std::vector<std::size_t> theorem_cycle(DoubleCase kase, std::size_t n, double delta, double gamma);

struct Violation {
  LemmaSample sample;
  std::vector<Comparison> observed;
  double margin = 0.0;
};

struct LemmaReport {
  LemmaId id = LemmaId::L1a;
  std::size_t samples_run = 0;
  std::size_t violation_count = 0;
  /// The first few violations (at most LemmaGrid::max_recorded_violations).
  std::vector<Violation> violations;
  double min_margin = 0.0;

  bool passed() const noexcept { return samples_run > 0 && violation_count == 0; }
};

struct LemmaGrid {
  std::vector<double> factors{1.0 / 9.0, 1.0 / 5.0, 1.0 / 2.0, 0.9, 1.1, 2.0, 5.0, 9.0};
  std::size_t case1_min_n = 4;
  std::size_t case1_max_n = 8;
  std::size_t case2b_min_n = 5;
  std::size_t case2b_max_n = 8;
  std::size_t bases_per_point = 20;
  std::size_t case2a_bases_per_point = 64;
  Range base_range;
  double exclusion = 1e-3;
  std::size_t max_recorded_violations = 10;
  CheckOptions check;
};

/// Enumerates every grid point, computes w once per sample and runs every id
/// in `ids` whose hypothesis holds. Reports come back in the order of `ids`.
std::vector<LemmaReport> run_lemma_suite(const LemmaGrid& grid, std::uint64_t seed,
                                         std::span<const LemmaId> ids = all_lemma_ids());

/// The samples run_lemma_suite visits, in visiting order.
std::vector<LemmaSample> lemma_grid_samples(const LemmaGrid& grid, std::uint64_t seed);

struct TheoremSummary {
  std::string name;
  std::size_t samples = 0;
  /// Samples with the expected verdict.
  std::size_t passed = 0;
  /// Descriptions of the first few failing samples.
  std::vector<std::string> failures;

  bool ok() const noexcept { return samples > 0 && passed == samples; }
};

struct TheoremOptions {
  std::size_t case1_max_n = 9;
  std::size_t case2b_max_n = 9;
  std::size_t simple_max_n = 9;
  Range factor_range;
  double exclusion = 1e-3;
  Range base_range;
  double power_tol = kDefaultPowerTol;
  int power_max_iter = kDefaultPowerMaxIter;
  double tie_tol = kDefaultTieTol;
};

/// Random double perturbed PCMs (case uniform, then order uniform): the
/// eigenvector must be efficient.
TheoremSummary verify_main_theorem(std::size_t samples, std::uint64_t seed, const TheoremOptions& options = {});

/// Random simple perturbed PCMs (n = 3..simple_max_n): the eigenvector must be efficient.
TheoremSummary verify_simple_theorem(std::size_t samples, std::uint64_t seed, const TheoremOptions& options = {});

/// Cycles through n = 4..8, p in {1/3, 1, 3}, q in {1/2, 2, 5}, starting at
/// an offset drawn from the seed: the eigenvector must be inefficient.
TheoremSummary verify_apq_inefficiency(std::size_t samples, std::uint64_t seed, const TheoremOptions& options = {});

}  // namespace dpcm
