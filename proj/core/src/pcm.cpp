#include "dpcm/pcm.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <stdexcept>

#include "dpcm/errors.hpp"

namespace dpcm {

Pcm Pcm::from_matrix(Eigen::MatrixXd entries) {
  if (entries.rows() != entries.cols()) {
    throw NotSquare("matrix is " + std::to_string(entries.rows()) + "x" + std::to_string(entries.cols()));
  }
  if (entries.rows() < 2) {
    throw NotSquare("matrix order must be at least 2");
  }
  const auto n = static_cast<std::size_t>(entries.rows());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double a = entries(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      if (!std::isfinite(a) || a <= 0.0) throw NonPositiveEntry(i, j, a);
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      const double p = entries(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) *
                       entries(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i));
      if (std::abs(p - 1.0) > kReciprocityTol * std::max(1.0, p)) throw ReciprocityViolation(i, j, p);
    }
  }
  return Pcm(std::move(entries));
}

Pcm Pcm::relabeled(std::span<const std::size_t> order) const {
  const std::size_t n = this->order();
  if (order.size() != n) throw std::invalid_argument("relabeling has wrong length");
  std::vector<bool> seen(n, false);
  for (auto k : order) {
    if (k >= n || seen[k]) throw std::invalid_argument("relabeling is not a permutation");
    seen[k] = true;
  }
  Eigen::MatrixXd r(m_.rows(), m_.cols());
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t l = 0; l < n; ++l) {
      r(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(l)) = (*this)(order[k], order[l]);
    }
  }
  return Pcm(std::move(r));
}

Pcm Pcm::transposed() const { return Pcm(m_.transpose()); }

Pcm make_pcm(const Eigen::MatrixXd& entries) { return Pcm::from_matrix(entries); }

Pcm make_pcm(const std::vector<std::vector<double>>& rows) {
  const auto n = static_cast<Eigen::Index>(rows.size());
  Eigen::MatrixXd m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& row = rows[static_cast<std::size_t>(i)];
    if (static_cast<Eigen::Index>(row.size()) != n) {
      throw NotSquare("row " + std::to_string(i + 1) + " has " + std::to_string(row.size()) + " entries, expected " +
                      std::to_string(n));
    }
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = row[static_cast<std::size_t>(j)];
  }
  return Pcm::from_matrix(std::move(m));
}

ConsistentBase::ConsistentBase(std::vector<double> x) : x_(std::move(x)) {
  if (x_.empty()) throw std::invalid_argument("consistent base needs at least one ratio (order >= 2)");
  for (double v : x_) {
    if (!std::isfinite(v) || v <= 0.0) throw std::invalid_argument("consistent base entries must be positive");
  }
}

WeightVector WeightVector::normalized(std::span<const double> raw) {
  if (raw.empty()) throw std::invalid_argument("empty weight vector");
  double sum = 0.0;
  for (double v : raw) {
    if (!std::isfinite(v) || v <= 0.0) throw std::invalid_argument("weights must be positive and finite");
    sum += v;
  }
  std::vector<double> w(raw.begin(), raw.end());
  for (double& v : w) v /= sum;
  return WeightVector(std::move(w));
}

std::string_view to_string(PerturbationTag tag) {
  switch (tag) {
    case PerturbationTag::Consistent:
      return "consistent";
    case PerturbationTag::SimplePerturbed:
      return "simple";
    case PerturbationTag::DoublePerturbedCase1:
      return "case1";
    case PerturbationTag::DoublePerturbedCase2A:
      return "case2a";
    case PerturbationTag::DoublePerturbedCase2B:
      return "case2b";
    case PerturbationTag::Other:
      return "other";
  }
  return "other";
}

bool is_double_perturbed(PerturbationTag tag) {
  return tag == PerturbationTag::DoublePerturbedCase1 || tag == PerturbationTag::DoublePerturbedCase2A ||
         tag == PerturbationTag::DoublePerturbedCase2B;
}

namespace {

std::vector<std::size_t> identity_permutation(std::size_t n) {
  std::vector<std::size_t> p(n);
  std::iota(p.begin(), p.end(), std::size_t{0});
  return p;
}

void require_positive(const std::optional<double>& v, const char* name) {
  if (!v || !std::isfinite(*v) || *v <= 0.0) {
    throw InvalidCase(std::string(name) + " must be present and positive");
  }
}

}  // namespace

PerturbationStructure simple_structure(ConsistentBase base, double delta) {
  PerturbationStructure s;
  s.tag = PerturbationTag::SimplePerturbed;
  s.permutation = identity_permutation(base.order());
  s.positions = {{0, 1}};
  s.alternatives = {s.positions};
  s.base = std::move(base);
  s.delta = delta;
  return s;
}

PerturbationStructure double_structure(PerturbationTag tag, ConsistentBase base, double delta, double gamma) {
  if (!is_double_perturbed(tag)) throw InvalidCase("double_structure needs a double-perturbed tag");
  PerturbationStructure s;
  s.tag = tag;
  s.permutation = identity_permutation(base.order());
  s.positions = tag == PerturbationTag::DoublePerturbedCase1 ? std::vector<Position>{{0, 1}, {0, 2}}
                                                            : std::vector<Position>{{0, 1}, {2, 3}};
  s.alternatives = {s.positions};
  s.base = std::move(base);
  s.delta = delta;
  s.gamma = gamma;
  return s;
}

Pcm consistent_pcm(const ConsistentBase& base) {
  const auto n = static_cast<Eigen::Index>(base.order());
  Eigen::MatrixXd m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      m(i, j) = i == j ? 1.0 : base.at(static_cast<std::size_t>(j)) / base.at(static_cast<std::size_t>(i));
    }
  }
  return Pcm::from_matrix(std::move(m));
}

Pcm apply_perturbation(const PerturbationStructure& s) {
  if (s.tag == PerturbationTag::Other) throw InvalidCase("cannot build a matrix for tag 'other'");
  if (!s.base) throw InvalidCase("perturbation structure has no consistent base");
  const ConsistentBase& b = *s.base;
  const std::size_t n = b.order();
  if (s.tag == PerturbationTag::Consistent) return consistent_pcm(b);

  Eigen::MatrixXd m = consistent_pcm(b).matrix();
  require_positive(s.delta, "delta");
  const double d = *s.delta;
  m(0, 1) = d * b.at(1);
  m(1, 0) = 1.0 / (d * b.at(1));
  if (s.tag == PerturbationTag::SimplePerturbed) return Pcm::from_matrix(std::move(m));

  require_positive(s.gamma, "gamma");
  const double g = *s.gamma;
  switch (s.tag) {
    case PerturbationTag::DoublePerturbedCase1:
      if (n < 4) throw InvalidCase("case 1 requires n >= 4, got n = " + std::to_string(n));
      m(0, 2) = g * b.at(2);
      m(2, 0) = 1.0 / (g * b.at(2));
      break;
    case PerturbationTag::DoublePerturbedCase2A:
    case PerturbationTag::DoublePerturbedCase2B:
      if (s.tag == PerturbationTag::DoublePerturbedCase2A && n != 4) {
        throw InvalidCase("case 2A requires n = 4, got n = " + std::to_string(n));
      }
      if (s.tag == PerturbationTag::DoublePerturbedCase2B && n < 5) {
        throw InvalidCase("case 2B requires n >= 5, got n = " + std::to_string(n));
      }
      m(2, 3) = g * (b.at(3) / b.at(2));
      m(3, 2) = (b.at(2) / b.at(3)) / g;
      break;
    default:
      break;
  }
  return Pcm::from_matrix(std::move(m));
}

Pcm apply_perturbation_original(const PerturbationStructure& s) {
  const Pcm canonical = apply_perturbation(s);
  const std::size_t n = canonical.order();
  if (s.permutation.empty()) return canonical;
  // canonical(k, l) = original(perm[k], perm[l])  =>  original(i, j) = canonical(inv[i], inv[j])
  std::vector<std::size_t> inverse(n);
  for (std::size_t k = 0; k < n; ++k) inverse.at(s.permutation.at(k)) = k;
  return canonical.relabeled(inverse);
}

bool is_consistent(const Pcm& m, double tol) {
  const std::size_t n = m.order();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) {
      for (std::size_t j = 0; j < n; ++j) {
        if (std::abs(m(i, k) * m(k, j) - m(i, j)) > tol * m(i, j)) return false;
      }
    }
  }
  return true;
}

namespace {

// Log-potentials u (u[0] = 0) with log a_ij = u[j] - u[i] on every pair not in
// `excluded`, or nullopt when the remaining entries admit no consistent completion.
std::optional<std::vector<double>> consistent_completion(const Eigen::MatrixXd& logs,
                                                         const std::vector<Position>& excluded, double tol) {
  const auto n = static_cast<std::size_t>(logs.rows());
  auto is_excluded = [&](std::size_t i, std::size_t j) {
    const Position p{std::min(i, j), std::max(i, j)};
    return std::find(excluded.begin(), excluded.end(), p) != excluded.end();
  };
  auto lg = [&](std::size_t i, std::size_t j) {
    return logs(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  };

  std::vector<double> u(n, 0.0);
  std::vector<bool> seen(n, false);
  std::queue<std::size_t> q;
  seen[0] = true;
  q.push(0);
  while (!q.empty()) {
    const std::size_t i = q.front();
    q.pop();
    for (std::size_t j = 0; j < n; ++j) {
      if (seen[j] || j == i || is_excluded(i, j)) continue;
      u[j] = u[i] + lg(i, j);
      seen[j] = true;
      q.push(j);
    }
  }
  if (std::find(seen.begin(), seen.end(), false) != seen.end()) return std::nullopt;

  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (is_excluded(i, j)) continue;
      if (std::abs(lg(i, j) - (u[j] - u[i])) > tol) return std::nullopt;
    }
  }
  return u;
}

std::vector<std::vector<Position>> subsets_of_size(const std::vector<Position>& all, std::size_t k) {
  std::vector<std::vector<Position>> out;
  if (k == 0) {
    out.emplace_back();
  } else if (k == 1) {
    for (const auto& p : all) out.push_back({p});
  } else {
    for (std::size_t a = 0; a < all.size(); ++a) {
      for (std::size_t b = a + 1; b < all.size(); ++b) out.push_back({all[a], all[b]});
    }
  }
  return out;
}

}  // namespace

PerturbationStructure classify_perturbation(const Pcm& m, double tol) {
  const std::size_t n = m.order();
  const Eigen::MatrixXd logs = m.matrix().array().log().matrix();
  // log(1 + tol) ~ tol for the tolerances of interest.
  const double log_tol = std::log1p(tol);

  std::vector<Position> upper;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) upper.push_back({i, j});
  }

  PerturbationStructure result;
  result.tag = PerturbationTag::Other;
  result.permutation = identity_permutation(n);

  for (std::size_t k = 0; k <= 2 && k <= upper.size(); ++k) {
    std::vector<std::vector<Position>> repairs;
    std::optional<std::vector<double>> primary_u;
    for (auto& subset : subsets_of_size(upper, k)) {
      auto u = consistent_completion(logs, subset, log_tol);
      if (!u) continue;
      if (!primary_u) primary_u = std::move(u);
      repairs.push_back(std::move(subset));
    }
    if (repairs.empty()) continue;

    const std::vector<double>& u = *primary_u;
    const std::vector<Position>& primary = repairs.front();
    // Ratio of the observed entry a_ij to its consistent completion value.
    auto factor = [&](std::size_t i, std::size_t j) { return m(i, j) / std::exp(u[j] - u[i]); };

    std::vector<std::size_t> order;
    if (k == 0) {
      result.tag = PerturbationTag::Consistent;
      order = identity_permutation(n);
    } else if (k == 1) {
      result.tag = PerturbationTag::SimplePerturbed;
      order = {primary[0].row, primary[0].col};
      result.delta = factor(primary[0].row, primary[0].col);
    } else {
      const Position p = primary[0];
      const Position q = primary[1];
      std::optional<std::size_t> shared;
      for (std::size_t a : {p.row, p.col}) {
        if (a == q.row || a == q.col) shared = a;
      }
      if (shared) {
        const std::size_t s = *shared;
        const std::size_t first = p.row == s ? p.col : p.row;
        const std::size_t second = q.row == s ? q.col : q.row;
        result.tag = PerturbationTag::DoublePerturbedCase1;
        order = {s, first, second};
        result.delta = factor(s, first);
        result.gamma = factor(s, second);
      } else {
        result.tag = n == 4 ? PerturbationTag::DoublePerturbedCase2A : PerturbationTag::DoublePerturbedCase2B;
        order = {p.row, p.col, q.row, q.col};
        result.delta = factor(p.row, p.col);
        result.gamma = factor(q.row, q.col);
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (std::find(order.begin(), order.end(), i) == order.end()) order.push_back(i);
    }

    std::vector<double> x(n - 1);
    for (std::size_t c = 1; c < n; ++c) x[c - 1] = std::exp(u[order[c]] - u[order[0]]);
    result.base = ConsistentBase(std::move(x));
    result.permutation = std::move(order);
    result.positions = primary;
    result.alternatives = std::move(repairs);
    return result;
  }
  return result;
}

}  // namespace dpcm
