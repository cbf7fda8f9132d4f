#include "dpcm/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/LU>

#include "dpcm/errors.hpp"

namespace dpcm {

SpectralResult power_iteration(const Pcm& m, double tol, int max_iter) {
  if (!(tol > 0.0)) throw std::invalid_argument("power iteration tolerance must be positive");
  const Eigen::MatrixXd& a = m.matrix();
  const Eigen::Index n = a.rows();
  Eigen::VectorXd w = Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n));
  for (int it = 1; it <= max_iter; ++it) {
    const Eigen::VectorXd y = a * w;
    const double lambda = y.sum();
    const double residual = (y - lambda * w).cwiseAbs().maxCoeff() / w.maxCoeff();
    if (residual <= tol) {
      std::vector<double> raw(w.data(), w.data() + n);
      return SpectralResult{lambda, WeightVector::normalized(raw), residual, it};
    }
    w = y / lambda;
  }
  throw NoConvergence(max_iter);
}

std::string_view to_string(DoubleCase c) {
  switch (c) {
    case DoubleCase::Case1:
      return "case1";
    case DoubleCase::Case2A:
      return "case2a";
    case DoubleCase::Case2B:
      return "case2b";
  }
  return "case1";
}

DoubleCase double_case_of(PerturbationTag tag) {
  switch (tag) {
    case PerturbationTag::DoublePerturbedCase1:
      return DoubleCase::Case1;
    case PerturbationTag::DoublePerturbedCase2A:
      return DoubleCase::Case2A;
    case PerturbationTag::DoublePerturbedCase2B:
      return DoubleCase::Case2B;
    default:
      throw InvalidCase("structure is not double perturbed (tag '" + std::string(to_string(tag)) + "')");
  }
}

PerturbationTag tag_of(DoubleCase c) {
  switch (c) {
    case DoubleCase::Case1:
      return PerturbationTag::DoublePerturbedCase1;
    case DoubleCase::Case2A:
      return PerturbationTag::DoublePerturbedCase2A;
    case DoubleCase::Case2B:
      return PerturbationTag::DoublePerturbedCase2B;
  }
  return PerturbationTag::DoublePerturbedCase1;
}

CharPolyParams::CharPolyParams(DoubleCase kase, std::size_t n, double delta, double gamma)
    : kase_(kase), n_(n), delta_(delta), gamma_(gamma) {
  if (!(delta > 0.0) || !(gamma > 0.0) || !std::isfinite(delta) || !std::isfinite(gamma)) {
    throw std::invalid_argument("delta and gamma must be positive");
  }
  if (kase == DoubleCase::Case1 && n < 4) throw IncompatibleOrder("case 1 requires n >= 4");
  if (kase == DoubleCase::Case2A && n != 4) throw IncompatibleOrder("case 2A requires n = 4");
  if (kase == DoubleCase::Case2B && n < 5) throw IncompatibleOrder("case 2B requires n >= 5");
}

CharPolyParams CharPolyParams::from_structure(const PerturbationStructure& s) {
  if (!s.delta || !s.gamma || !s.base) throw InvalidCase("structure lacks delta, gamma or base");
  return CharPolyParams(double_case_of(s.tag), s.base->order(), *s.delta, *s.gamma);
}

double CharPolyParams::c() const noexcept {
  const double dg = (gamma_ - 1.0) * (delta_ - 1.0);
  return dg * dg / (gamma_ * delta_);
}

namespace {

// (t - 1)^2 / t = t + 1/t - 2 without cancellation near t = 1.
double excess(double t) { return (t - 1.0) * (t - 1.0) / t; }

}  // namespace

Polynomial bracket_polynomial(const CharPolyParams& p) {
  const double n = static_cast<double>(p.n());
  const double d = p.delta();
  const double g = p.gamma();
  switch (p.kase()) {
    case DoubleCase::Case1: {
      // gamma/delta + delta/gamma + (n-3)(gamma + delta + 1/gamma + 1/delta) - 4n + 10
      const double k = (g - d) * (g - d) / (g * d) + (n - 3.0) * (excess(g) + excess(d));
      return Polynomial({-k, 0.0, -n, 1.0});
    }
    case DoubleCase::Case2A: {
      const double s = excess(g) + excess(d);
      return Polynomial({-p.c(), -2.0 * s, 0.0, -4.0, 1.0});
    }
    case DoubleCase::Case2B: {
      const double s = excess(g) + excess(d);
      const double c = p.c();
      return Polynomial({-(n - 4.0) * c, -c, -(n - 2.0) * s, 0.0, -n, 1.0});
    }
  }
  throw InvalidCase("unknown case");
}

double eval_charpoly(const CharPolyParams& params, double lambda) {
  const Polynomial bracket = bracket_polynomial(params);
  const int n = static_cast<int>(params.n());
  const double sign = n % 2 == 0 ? 1.0 : -1.0;
  switch (params.kase()) {
    case DoubleCase::Case1:
      return sign * std::pow(lambda, n - 3) * bracket(lambda);
    case DoubleCase::Case2A:
      return bracket(lambda);
    case DoubleCase::Case2B:
      return sign * std::pow(lambda, n - 5) * bracket(lambda);
  }
  throw InvalidCase("unknown case");
}

double charpoly_oracle(const Pcm& m, double lambda) {
  const Eigen::Index n = m.matrix().rows();
  const Eigen::MatrixXd shifted = m.matrix() - lambda * Eigen::MatrixXd::Identity(n, n);
  return Eigen::PartialPivLU<Eigen::MatrixXd>(shifted).determinant();
}

double lambda_max_closed_form(const CharPolyParams& params) {
  const double n = static_cast<double>(params.n());
  if (params.delta() == 1.0 && params.gamma() == 1.0) return n;
  const Polynomial bracket = bracket_polynomial(params);
  const double hi = std::max(bracket.cauchy_bound(), n + 1.0);
  if (bracket(n) >= 0.0) {
    // Only reachable when the perturbation is below floating-point resolution.
    if (bracket(n) == 0.0) return n;
    throw RootNotBracketed("bracketed factor is positive at lambda = n");
  }
  return bracketed_root(bracket, n, hi, 1e-12);
}

int variant_count(DoubleCase kase) { return kase == DoubleCase::Case2B ? 5 : 4; }

std::vector<ClosedFormVariant> variants_of(DoubleCase kase) {
  std::vector<ClosedFormVariant> v;
  for (int c = 0; c < variant_count(kase); ++c) v.push_back({kase, c});
  return v;
}

namespace {

std::vector<double> case1_formula(std::size_t size, double d, double g, const ConsistentBase& b, int column,
                                  double l) {
  const double n = static_cast<double>(size);
  auto X = [&](std::size_t k) { return b.at(k); };
  std::vector<double> w(size);
  switch (column) {
    case 0: {
      w[0] = d * g * l * (l - n + 1.0);
      w[1] = (g * l - (n - 2.0) * g + d + (n - 3.0) * d * g) / X(1);
      w[2] = (d * l - (n - 2.0) * d + g + (n - 3.0) * d * g) / X(2);
      const double t = g + d + d * g * l - 2.0 * d * g;
      for (std::size_t i = 3; i < size; ++i) w[i] = t / X(i);
      break;
    }
    case 1: {
      w[0] = X(1) * g * l * (d * l - (n - 2.0) * d + g + n - 3.0);
      w[1] = g * l * l * l - (n - 1.0) * g * l * l - (n - 3.0) * (g * g - 2.0 * g + 1.0);
      w[2] = X(1) / X(2) * (g * l * l - g * l + d * l + (n - 3.0) * (d * g - d - g + 1.0));
      const double t = g * l * l - g * l - g + d + d * g * l - d * g + g * g;
      for (std::size_t i = 3; i < size; ++i) w[i] = X(1) / X(i) * t;
      break;
    }
    case 2: {
      w[0] = X(2) * d * l * (d + g * l - (n - 2.0) * g + n - 3.0);
      w[1] = X(2) / X(1) * (d * l * l - d * l + g * l + (n - 3.0) * (d * g - d - g + 1.0));
      w[2] = d * l * l * l - (n - 1.0) * d * l * l - (n - 3.0) * (d * d - 2.0 * d + 1.0);
      const double t = d * l * l - d * l + g - d + d * d + d * g * l - d * g;
      for (std::size_t i = 3; i < size; ++i) w[i] = X(2) / X(i) * t;
      break;
    }
    case 3: {
      w[0] = X(3) * d * g * l * (d + g + l - 2.0);
      w[1] = X(3) / X(1) * (d * g * l * l - d * g * l + g * g + g * l - g - d * g + d);
      w[2] = X(3) / X(2) * (d * g * l * l - d * g * l - d * g + g + d * d + d * l - d);
      const double t = d * g * l * l - 4.0 * d * g + g + d + d * d * g + g * g * d;
      for (std::size_t i = 3; i < size; ++i) w[i] = X(3) / X(i) * t;
      break;
    }
    default:
      throw std::out_of_range("case 1 has formula columns 0..3");
  }
  return w;
}

std::vector<double> case2a_formula(double d, double g, const ConsistentBase& b, int column, double l) {
  auto X = [&](std::size_t k) { return b.at(k); };
  std::vector<double> w(4);
  switch (column) {
    case 0:
      w[0] = d * (l * l * l * g - 3.0 * l * l * g - 1.0 + 2.0 * g - g * g);
      w[1] = (l * l * g - 2.0 * l * g + d + 2.0 * l * d * g - 2.0 * d * g + d * g * g) / X(1);
      w[2] = g * (g + l - 1.0 + d * l * l - 2.0 * l * d + d + l * d * g - d * g) / X(2);
      w[3] = (1.0 + l * g - g + l * d - d + d * g * l * l - 2.0 * l * d * g + d * g) / X(3);
      break;
    case 1:
      w[0] = X(1) * (d * g * l * l - 2.0 * l * d * g + 1.0 + 2.0 * l * g - 2.0 * g + g * g);
      w[1] = l * l * l * g - 3.0 * l * l * g - 1.0 + 2.0 * g - g * g;
      w[2] = X(1) / X(2) * g * (l * g + l * l - 2.0 * l - g + 1.0 + l * d - d + d * g);
      w[3] = X(1) / X(3) * (l + l * l * g - 2.0 * l * g - 1.0 + g + d + l * d * g - d * g);
      break;
    case 2:
      w[0] = X(2) * d * (1.0 + l * g - g) * (d + l - 1.0);
      w[1] = X(2) / X(1) * (1.0 + l * g - g + l * d - d + d * g * l * l - 2.0 * l * d * g + d * g);
      w[2] = g * (d * l * l * l - 3.0 * d * l * l - 1.0 + 2.0 * d - d * d);
      w[3] = X(2) / X(3) * (2.0 * l * d * g + d * l * l - 2.0 * l * d - 2.0 * d * g + g + d * d * g);
      break;
    case 3:
      w[0] = X(3) * d * (l * g + l * l - 2.0 * l - g + 1.0 + l * d - d + d * g);
      w[1] = X(3) / X(1) * (g + l - 1.0 + d * l * l - 2.0 * l * d + d + l * d * g - d * g);
      w[2] = X(3) / X(2) * (2.0 * l * d + d * g * l * l - 2.0 * l * d * g - 2.0 * d + 1.0 + d * d);
      w[3] = d * l * l * l - 3.0 * d * l * l - 1.0 + 2.0 * d - d * d;
      break;
    default:
      throw std::out_of_range("case 2A has formula columns 0..3");
  }
  return w;
}

std::vector<double> case2b_formula(std::size_t size, double d, double g, const ConsistentBase& b, int column,
                                   double l) {
  const double n = static_cast<double>(size);
  auto X = [&](std::size_t k) { return b.at(k); };
  const double l2 = l * l;
  const double l3 = l2 * l;
  std::vector<double> w(size);
  switch (column) {
    case 0: {
      w[0] = d * l * (l3 * g - (n - 1.0) * l2 * g - (n - 3.0) * (g * g - 2.0 * g + 1.0));
      w[1] = (l3 * g - (n - 2.0) * l2 * g + (n - 2.0) * d * g * l2 +
              (l * d + (n - 4.0) * (d - 1.0)) * (g * g - 2.0 * g + 1.0)) /
             X(1);
      w[2] = g * l * (g + l - 1.0 + d * l2 - 2.0 * l * d + d + l * d * g - d * g) / X(2);
      w[3] = l * (1.0 + l * g - g + l * d - d + d * g * l2 - 2.0 * l * d * g + d * g) / X(3);
      const double t = g * g - 2.0 * g + l2 * g + 1.0 + l * d - d * g * l2 - 2.0 * l * d * g + l * g * g * d +
                       l3 * d * g - d + 2.0 * d * g - d * g * g;
      for (std::size_t i = 4; i < size; ++i) w[i] = t / X(i);
      break;
    }
    case 1: {
      w[0] = X(1) * (l3 * d * g - (n - 2.0) * d * g * l2 - (n - 4.0) * d * (g - 1.0) * (g - 1.0) + l +
                     (n - 2.0) * l2 * g - 2.0 * l * g + l * g * g + (n - 4.0) * (g - 1.0) * (g - 1.0));
      w[1] = l * (l3 * g - (n - 1.0) * l2 * g - (n - 3.0) * (g - 1.0) * (g - 1.0));
      w[2] = X(1) / X(2) * g * l * (l * g + l2 - 2.0 * l - g + 1.0 + d * l - d + d * g);
      w[3] = X(1) / X(3) * l * (l + l2 * g - 2.0 * l * g - 1.0 + g + d + l * d * g - d * g);
      const double t = l * g * g - 2.0 * l * g + l3 * g + l - g * g + 2.0 * g - l2 * g - 1.0 + d - 2.0 * d * g +
                       d * g * g + d * g * l2;
      for (std::size_t i = 4; i < size; ++i) w[i] = X(1) / X(i) * t;
      break;
    }
    case 2: {
      const double lg = 1.0 + l * g - g;
      w[0] = X(2) * d * l * lg * (d + l - 1.0);
      w[1] = X(2) / X(1) * l * lg * (1.0 + d * l - d);
      w[2] = g * l * (l3 * d - (n - 1.0) * d * l2 - (n - 3.0) * (d - 1.0) * (d - 1.0));
      w[3] = X(2) / X(3) *
             (d * l3 - (n - 2.0) * d * l2 * (1.0 - g) - 2.0 * l * d * g + 2.0 * (n - 4.0) * d * (1.0 - g) + l * g +
              d * d * l * g + (n - 4.0) * (-1.0 + g - d * d + d * d * g));
      const double t = lg * (d * l2 + 1.0 - 2.0 * d + d * d);
      for (std::size_t i = 4; i < size; ++i) w[i] = X(2) / X(i) * t;
      break;
    }
    case 3: {
      w[0] = X(3) * d * l * (l * g + l2 - 2.0 * l - g + 1.0 + d * l - d + d * g);
      w[1] = X(3) / X(1) * l * (g + l - 1.0) * (1.0 + d * l - d);
      w[2] = X(3) / X(2) *
             (l3 * d * g - (n - 2.0) * d * l2 * (g - 1.0) - 2.0 * d * l + 2.0 * (n - 4.0) * d * (g - 1.0) + l +
              d * d * l + (n - 4.0) * (1.0 - g + d * d - d * d * g));
      w[3] = l * (d * l3 - (n - 1.0) * d * l2 - (n - 3.0) * (d - 1.0) * (d - 1.0));
      const double t = d * g * l2 + l3 * d - d * l2 - 2.0 * d * l - 2.0 * d * g + 2.0 * d - 1.0 + g + l +
                       d * d * l - d * d + d * d * g;
      for (std::size_t i = 4; i < size; ++i) w[i] = X(3) / X(i) * t;
      break;
    }
    case 4: {
      const double q = g * g - 2.0 * g + l2 * g + 1.0;
      const double t = q * (d * l2 + 1.0 - 2.0 * d + d * d);
      w[0] = X(4) * d * l * q * (d + l - 1.0);
      w[1] = X(4) / X(1) * l * q * (1.0 + d * l - d);
      w[2] = X(4) / X(2) * g * l *
             (d * g * l2 + l3 * d - d * l2 - 2.0 * d * l - 2.0 * d * g + 2.0 * d - 1.0 + g + l + d * d * l - d * d +
              d * d * g);
      w[3] = X(4) / X(3) * l *
             (d * l2 + l3 * d * g - d * g * l2 - 2.0 * l * d * g - 2.0 * d + 2.0 * d * g - g + 1.0 + l * g + d * d +
              d * d * l * g - d * d * g);
      w[4] = t;
      for (std::size_t i = 5; i < size; ++i) w[i] = X(4) / X(i) * t;
      break;
    }
    default:
      throw std::out_of_range("case 2B has formula columns 0..4");
  }
  return w;
}

}  // namespace

std::vector<double> closed_form_raw(const CharPolyParams& params, const ConsistentBase& base,
                                    ClosedFormVariant variant, double lambda) {
  if (variant.kase != params.kase()) throw InvalidCase("variant case does not match parameters");
  if (base.order() != params.n()) throw InvalidCase("base order does not match parameters");
  const double d = params.delta();
  const double g = params.gamma();
  switch (params.kase()) {
    case DoubleCase::Case1:
      return case1_formula(params.n(), d, g, base, variant.column, lambda);
    case DoubleCase::Case2A:
      return case2a_formula(d, g, base, variant.column, lambda);
    case DoubleCase::Case2B:
      return case2b_formula(params.n(), d, g, base, variant.column, lambda);
  }
  throw InvalidCase("unknown case");
}

namespace {

void require_double_nondegenerate(const PerturbationStructure& s) {
  if (!is_double_perturbed(s.tag)) {
    throw InvalidCase("closed-form eigenvectors need a double-perturbed structure, got '" +
                      std::string(to_string(s.tag)) + "'");
  }
  if (!s.base || !s.delta || !s.gamma) throw InvalidCase("structure lacks delta, gamma or base");
  if (*s.delta == 1.0 || *s.gamma == 1.0) {
    throw DegenerateParameters("delta = 1 or gamma = 1: the matrix is simple perturbed or consistent");
  }
}

}  // namespace

ClosedFormVariant default_variant(const PerturbationStructure& s) {
  require_double_nondegenerate(s);
  const CharPolyParams params = CharPolyParams::from_structure(s);
  const double lambda = lambda_max_closed_form(params);
  ClosedFormVariant best{params.kase(), 0};
  double best_pivot = -1.0;
  for (const auto& v : variants_of(params.kase())) {
    const double pivot = std::abs(closed_form_raw(params, *s.base, v, lambda)[static_cast<std::size_t>(v.column)]);
    if (pivot > best_pivot) {
      best_pivot = pivot;
      best = v;
    }
  }
  return best;
}

WeightVector closed_form_eigenvector(const PerturbationStructure& s, ClosedFormVariant variant) {
  require_double_nondegenerate(s);
  const CharPolyParams params = CharPolyParams::from_structure(s);
  const double lambda = lambda_max_closed_form(params);
  const std::vector<double> raw = closed_form_raw(params, *s.base, variant, lambda);
  return WeightVector::normalized(raw);
}

WeightVector to_original_labels(const WeightVector& canonical, std::span<const std::size_t> permutation) {
  if (permutation.size() != canonical.size()) throw std::invalid_argument("permutation length mismatch");
  std::vector<double> w(canonical.size());
  for (std::size_t k = 0; k < canonical.size(); ++k) w.at(permutation[k]) = canonical[k];
  return WeightVector::normalized(w);
}

}  // namespace dpcm
