#include "dpcm/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "dpcm/errors.hpp"

namespace dpcm {

Polynomial::Polynomial(std::vector<double> ascending) : c_(std::move(ascending)) {
  while (c_.size() > 1 && c_.back() == 0.0) c_.pop_back();
  if (c_.empty()) c_.push_back(0.0);
}

double Polynomial::operator()(double x) const {
  double acc = 0.0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

std::pair<double, double> Polynomial::value_and_derivative(double x) const {
  double p = 0.0;
  double dp = 0.0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
    dp = dp * x + p;
    p = p * x + *it;
  }
  return {p, dp};
}

double Polynomial::cauchy_bound() const {
  const double lead = c_.back();
  if (lead == 0.0) throw std::domain_error("zero polynomial has no root bound");
  double m = 0.0;
  for (std::size_t i = 0; i + 1 < c_.size(); ++i) m = std::max(m, std::abs(c_[i] / lead));
  return 1.0 + m;
}

double bracketed_root(const Polynomial& p, double lo, double hi, double rel_tol) {
  double flo = p(lo);
  double fhi = p(hi);
  if (!(flo < 0.0 && fhi > 0.0)) {
    throw RootNotBracketed("p(lo) = " + std::to_string(flo) + ", p(hi) = " + std::to_string(fhi));
  }
  // Bisection until the bracket is reasonably tight, then Newton.
  for (int it = 0; it < 200 && hi - lo > 1e-6 * std::max(1.0, std::abs(hi)); ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = p(mid);
    if (fm == 0.0) return mid;
    (fm < 0.0 ? lo : hi) = mid;
  }
  double x = 0.5 * (lo + hi);
  for (int it = 0; it < 100; ++it) {
    const auto [f, df] = p.value_and_derivative(x);
    if (f == 0.0) return x;
    (f < 0.0 ? lo : hi) = x;
    double next = df != 0.0 ? x - f / df : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    const double step = std::abs(next - x);
    x = next;
    if (step <= rel_tol * std::abs(x) || hi - lo <= rel_tol * std::abs(x)) break;
  }
  return x;
}

}  // namespace dpcm
