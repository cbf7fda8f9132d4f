#pragma once

// Principal eigenpair of a PCM: numerically by power iteration, and in closed
// form for double-perturbed matrices via their characteristic polynomials
// and explicit eigenvector formulas.

#include <array>
#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "dpcm/pcm.hpp"
#include "dpcm/polynomial.hpp"

namespace dpcm {

struct SpectralResult {
  double lambda_max = 0.0;
  WeightVector w;
  /// max_i |(A w)_i - lambda w_i| / max_i w_i at the returned iterate.
  double residual = 0.0;
  int iterations = 0;
};

inline constexpr double kDefaultPowerTol = 1e-12;
inline constexpr int kDefaultPowerMaxIter = 10000;

/// Power iteration from the all-ones vector. Each step sum-normalizes the
/// iterate, so lambda = sum_i (A w)_i. Throws NoConvergence.
SpectralResult power_iteration(const Pcm& m, double tol = kDefaultPowerTol, int max_iter = kDefaultPowerMaxIter);

enum class DoubleCase { Case1, Case2A, Case2B };

std::string_view to_string(DoubleCase c);
DoubleCase double_case_of(PerturbationTag tag);
PerturbationTag tag_of(DoubleCase c);

/// Order constraints: Case1 n >= 4, Case2A n == 4, Case2B n >= 5; IncompatibleOrder otherwise.
class CharPolyParams {
 public:
  CharPolyParams(DoubleCase kase, std::size_t n, double delta, double gamma);
  static CharPolyParams from_structure(const PerturbationStructure& s);

  DoubleCase kase() const noexcept { return kase_; }
  std::size_t n() const noexcept { return n_; }
  double delta() const noexcept { return delta_; }
  double gamma() const noexcept { return gamma_; }
  /// (gamma - 1)^2 (delta - 1)^2 / (gamma delta); meaningful for Case 2.
  double c() const noexcept;
  bool degenerate() const noexcept { return delta_ == 1.0 || gamma_ == 1.0; }

 private:
  DoubleCase kase_;
  std::size_t n_;
  double delta_;
  double gamma_;
};

/// The low-degree factor carrying the nonzero roots: cubic (Case 1), quartic
/// (Case 2A) or quintic (Case 2B).
Polynomial bracket_polynomial(const CharPolyParams& params);

/// det(A - lambda I) of the canonical double-perturbed matrix, from the
/// closed-form characteristic polynomial.
double eval_charpoly(const CharPolyParams& params, double lambda);

/// det(A - lambda I) by LU factorization of the explicit matrix.
double charpoly_oracle(const Pcm& m, double lambda);

/// The unique real root greater than n of the bracketed factor; exactly n when
/// delta = gamma = 1.
double lambda_max_closed_form(const CharPolyParams& params);

/// One of the explicit eigenvector formulas. `column` selects which column of
/// the (rank one) adjugate of lambda I - A generates it: Case 1 and Case 2A
/// have columns 0..3, Case 2B has columns 0..4.
struct ClosedFormVariant {
  DoubleCase kase = DoubleCase::Case1;
  int column = 0;
  friend bool operator==(const ClosedFormVariant&, const ClosedFormVariant&) = default;
};

int variant_count(DoubleCase kase);
std::vector<ClosedFormVariant> variants_of(DoubleCase kase);

/// Unnormalized formula vector at an arbitrary lambda for the canonical form
/// with base `base`. No positivity is implied away from lambda_max.
std::vector<double> closed_form_raw(const CharPolyParams& params, const ConsistentBase& base,
                                    ClosedFormVariant variant, double lambda);

/// The variant whose pivot component (the one carrying no base factor) has the
/// largest magnitude at lambda_max.
ClosedFormVariant default_variant(const PerturbationStructure& s);

/// Sum-normalized formula vector at lambda_max, in canonical labels. Throws
/// DegenerateParameters when delta or gamma equals 1 and InvalidCase for a
/// structure that is not double perturbed.
WeightVector closed_form_eigenvector(const PerturbationStructure& s, ClosedFormVariant variant);

/// Maps a canonical-label weight vector back to the original labels.
WeightVector to_original_labels(const WeightVector& canonical, std::span<const std::size_t> permutation);

}  // namespace dpcm
