#include "dpcm/generators.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>

#include "dpcm/errors.hpp"

namespace dpcm {

double Rng::log_uniform(double lo, double hi) {
  if (!(lo > 0.0 && hi >= lo)) throw std::invalid_argument("log_uniform needs 0 < lo <= hi");
  return std::exp(uniform(std::log(lo), std::log(hi)));
}

std::size_t Rng::below(std::size_t n) {
  if (n == 0) throw std::invalid_argument("below(0)");
  const std::uint64_t bound = n;
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t r = 0;
  do {
    r = engine_();
  } while (r >= limit);
  return static_cast<std::size_t>(r % bound);
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::array<std::pair<Family, std::string_view>, 7> kFamilyNames{{
    {Family::Consistent, "consistent"},
    {Family::Simple, "simple"},
    {Family::Case1, "case1"},
    {Family::Case2A, "case2a"},
    {Family::Case2B, "case2b"},
    {Family::Example1, "example1"},
    {Family::ParametricAPQ, "apq"},
}};

void require_order(bool ok, Family f, std::size_t n, const char* rule) {
  if (!ok) {
    throw IncompatibleOrder("family " + std::string(to_string(f)) + " requires " + rule + ", got n = " + std::to_string(n));
  }
}

ConsistentBase base_for(const GeneratorSpec& spec, Rng& rng) {
  if (spec.x) {
    if (spec.x->size() + 1 != spec.n) throw std::invalid_argument("base x must have n - 1 entries");
    return ConsistentBase(*spec.x);
  }
  return random_base(rng, spec.n, spec.base_range);
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> keys) {
  std::uint64_t h = splitmix64(seed);
  for (std::uint64_t k : keys) h = splitmix64(h ^ splitmix64(k));
  return h;
}

std::string_view to_string(Family f) {
  for (const auto& [family, name] : kFamilyNames) {
    if (family == f) return name;
  }
  return "unknown";
}

std::optional<Family> parse_family(std::string_view name) {
  for (const auto& [family, n] : kFamilyNames) {
    if (n == name) return family;
  }
  return std::nullopt;
}

ConsistentBase random_base(Rng& rng, std::size_t n, Range range) {
  if (n < 2) throw IncompatibleOrder("order must be at least 2");
  std::vector<double> x(n - 1);
  for (double& v : x) v = rng.log_uniform(range.lo, range.hi);
  return ConsistentBase(std::move(x));
}

double random_factor(Rng& rng, Range range, double exclusion) {
  for (int attempt = 0; attempt < 10000; ++attempt) {
    const double f = rng.log_uniform(range.lo, range.hi);
    if (std::abs(f - 1.0) >= exclusion) return f;
  }
  throw std::invalid_argument("perturbation range lies inside the exclusion zone");
}

Pcm example1_matrix() {
  return make_pcm(std::vector<std::vector<double>>{
      {1.0, 1.0 / 2.0, 4.0, 2.0},
      {2.0, 1.0, 5.0, 7.0},
      {1.0 / 4.0, 1.0 / 5.0, 1.0, 2.0},
      {1.0 / 2.0, 1.0 / 7.0, 1.0 / 2.0, 1.0},
  });
}

Pcm parametric_apq(std::size_t n, double p, double q) {
  require_order(n >= 4, Family::ParametricAPQ, n, "n >= 4");
  if (!(p > 0.0) || !(q > 0.0)) throw std::invalid_argument("p and q must be positive");
  Eigen::MatrixXd m = Eigen::MatrixXd::Ones(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  auto set = [&m](std::size_t i, std::size_t j, double v) {
    m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
    m(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = 1.0 / v;
  };
  for (std::size_t j = 1; j < n; ++j) set(0, j, p);
  for (std::size_t i = 1; i + 1 < n; ++i) set(i, i + 1, q);
  set(1, n - 1, 1.0 / q);
  return make_pcm(m);
}

Generated generate(const GeneratorSpec& spec) {
  const std::size_t n = spec.n;
  Rng rng(spec.seed);
  switch (spec.family) {
    case Family::Example1:
      require_order(n == 4, spec.family, n, "n = 4");
      return {example1_matrix(), std::nullopt};
    case Family::ParametricAPQ:
      return {parametric_apq(n, spec.p, spec.q), std::nullopt};
    case Family::Consistent: {
      require_order(n >= 2, spec.family, n, "n >= 2");
      PerturbationStructure s;
      s.tag = PerturbationTag::Consistent;
      s.base = base_for(spec, rng);
      s.permutation.resize(n);
      std::iota(s.permutation.begin(), s.permutation.end(), std::size_t{0});
      s.alternatives = {{}};
      return {consistent_pcm(*s.base), s};
    }
    case Family::Simple: {
      require_order(n >= 3, spec.family, n, "n >= 3");
      ConsistentBase base = base_for(spec, rng);
      const double delta = spec.delta ? *spec.delta : random_factor(rng, spec.perturbation_range, spec.exclusion);
      PerturbationStructure s = simple_structure(std::move(base), delta);
      return {apply_perturbation(s), s};
    }
    case Family::Case1:
    case Family::Case2A:
    case Family::Case2B: {
      PerturbationTag tag = PerturbationTag::DoublePerturbedCase1;
      if (spec.family == Family::Case1) {
        require_order(n >= 4, spec.family, n, "n >= 4");
      } else if (spec.family == Family::Case2A) {
        require_order(n == 4, spec.family, n, "n = 4");
        tag = PerturbationTag::DoublePerturbedCase2A;
      } else {
        require_order(n >= 5, spec.family, n, "n >= 5");
        tag = PerturbationTag::DoublePerturbedCase2B;
      }
      ConsistentBase base = base_for(spec, rng);
      const double delta = spec.delta ? *spec.delta : random_factor(rng, spec.perturbation_range, spec.exclusion);
      const double gamma = spec.gamma ? *spec.gamma : random_factor(rng, spec.perturbation_range, spec.exclusion);
      PerturbationStructure s = double_structure(tag, std::move(base), delta, gamma);
      return {apply_perturbation(s), s};
    }
  }
  throw std::invalid_argument("unknown family");
}

}  // namespace dpcm
