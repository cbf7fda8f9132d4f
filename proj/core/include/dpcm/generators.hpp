#pragma once

// Matrix families: consistent, simple perturbed, the three double perturbed
// cases, the fixed 4x4 worked example and the parametric family A(p, q).

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <random>
#include <string_view>
#include <vector>

#include "dpcm/pcm.hpp"

namespace dpcm {

/// Seedable generator with a platform-independent double conversion
/// (std::uniform_real_distribution is implementation defined).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double log_uniform(double lo, double hi);
  /// Uniform integer in [0, n) by rejection.
  std::size_t below(std::size_t n);

 private:
  std::mt19937_64 engine_;
};

/// Mixes a seed with extra keys (splitmix64) so independent streams can be
/// derived per sample.
std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> keys);

enum class Family { Consistent, Simple, Case1, Case2A, Case2B, Example1, ParametricAPQ };

std::string_view to_string(Family f);
std::optional<Family> parse_family(std::string_view name);

struct Range {
  double lo = 1.0 / 9.0;
  double hi = 9.0;
};

struct GeneratorSpec {
  Family family = Family::Consistent;
  std::size_t n = 4;
  /// Fixed perturbation factors; sampled log-uniformly from `perturbation_range`
  /// (outside the exclusion zone around 1) when absent.
  std::optional<double> delta;
  std::optional<double> gamma;
  Range perturbation_range;
  double exclusion = 1e-3;
  double p = 2.0;
  double q = 3.0;
  /// Fixed base x (n - 1 entries); sampled log-uniformly from `base_range` when absent.
  std::optional<std::vector<double>> x;
  Range base_range;
  std::uint64_t seed = 0;
};

struct Generated {
  Pcm matrix;
  /// Ground truth for the consistent, simple and double perturbed families.
  std::optional<PerturbationStructure> truth;
};

/// Throws IncompatibleOrder when the order does not fit the family.
Generated generate(const GeneratorSpec& spec);

Pcm example1_matrix();

/// Row 1 is p, a_{i,i+1} = q for i = 2..n-1, a_{2,n} = 1/q, all other upper
/// entries 1 (1-based). Requires n >= 4.
Pcm parametric_apq(std::size_t n, double p, double q);

ConsistentBase random_base(Rng& rng, std::size_t n, Range range = {});

/// Log-uniform factor with |factor - 1| >= exclusion.
double random_factor(Rng& rng, Range range = {}, double exclusion = 1e-3);

}  // namespace dpcm
