#pragma once

#include <span>
#include <utility>
#include <vector>

namespace dpcm {

/// Dense real polynomial, coefficients in ascending degree order.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<double> ascending);

  std::size_t degree() const noexcept { return c_.empty() ? 0 : c_.size() - 1; }
  std::span<const double> coefficients() const noexcept { return c_; }

  double operator()(double x) const;
  /// Value and first derivative by Horner's scheme.
  std::pair<double, double> value_and_derivative(double x) const;

  /// Cauchy bound: every root z satisfies |z| <= 1 + max_i |c_i / c_lead|.
  double cauchy_bound() const;

 private:
  std::vector<double> c_;
};

/// Root of `p` inside [lo, hi] where p(lo) < 0 < p(hi): bisection narrows the
/// bracket, Newton polishes to relative `rel_tol` while staying inside it.
/// Throws RootNotBracketed if the signs do not bracket a root.
double bracketed_root(const Polynomial& p, double lo, double hi, double rel_tol = 1e-12);

}  // namespace dpcm
