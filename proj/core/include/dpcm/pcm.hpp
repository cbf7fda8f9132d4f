#pragma once

// Pairwise comparison matrices (PCMs), their consistent and perturbed
// canonical forms, and classification of an arbitrary PCM by the minimal
// number of entries that must be altered to make it consistent.
//
// Indices are 0-based throughout the API. Human-facing output (CLI, DOT)
// converts to 1-based labels.

#include <compare>
#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Core>

namespace dpcm {

inline constexpr double kReciprocityTol = 1e-12;
inline constexpr double kDefaultConsistencyTol = 1e-9;

/// Positive reciprocal square matrix: a_ij > 0 and a_ij * a_ji = 1.
class Pcm {
 public:
  /// Validates without repairing. Throws NotSquare, NonPositiveEntry or
  /// ReciprocityViolation.
  static Pcm from_matrix(Eigen::MatrixXd entries);

  std::size_t order() const noexcept { return static_cast<std::size_t>(m_.rows()); }
  double operator()(std::size_t i, std::size_t j) const {
    return m_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }
  const Eigen::MatrixXd& matrix() const noexcept { return m_; }

  /// Simultaneous row/column relabeling: result(k, l) = (*this)(order[k], order[l]).
  Pcm relabeled(std::span<const std::size_t> order) const;
  Pcm transposed() const;

  friend bool operator==(const Pcm& a, const Pcm& b) { return a.m_ == b.m_; }

 private:
  explicit Pcm(Eigen::MatrixXd m) : m_(std::move(m)) {}
  Eigen::MatrixXd m_;
};

Pcm make_pcm(const Eigen::MatrixXd& entries);
Pcm make_pcm(const std::vector<std::vector<double>>& rows);

/// First row of a consistent PCM without the leading 1: (x_1, ..., x_{n-1}).
/// The first alternative is the numeraire (x_0 = 1).
class ConsistentBase {
 public:
  explicit ConsistentBase(std::vector<double> x);
  static ConsistentBase unit(std::size_t n) { return ConsistentBase(std::vector<double>(n - 1, 1.0)); }

  std::size_t order() const noexcept { return x_.size() + 1; }
  const std::vector<double>& x() const noexcept { return x_; }
  /// Gauge-extended value: at(0) == 1, at(k) == x_k.
  double at(std::size_t k) const { return k == 0 ? 1.0 : x_[k - 1]; }

 private:
  std::vector<double> x_;
};

/// Positive weights normalized to sum 1.
class WeightVector {
 public:
  WeightVector() = default;
  /// Normalizes `raw` by its sum. Throws std::invalid_argument unless every
  /// component is positive and finite.
  static WeightVector normalized(std::span<const double> raw);

  std::size_t size() const noexcept { return w_.size(); }
  double operator[](std::size_t i) const { return w_[i]; }
  std::span<const double> values() const noexcept { return w_; }
  operator std::span<const double>() const noexcept { return w_; }

 private:
  explicit WeightVector(std::vector<double> w) : w_(std::move(w)) {}
  std::vector<double> w_;
};

enum class PerturbationTag {
  Consistent,
  SimplePerturbed,
  DoublePerturbedCase1,
  DoublePerturbedCase2A,
  DoublePerturbedCase2B,
  Other,
};

std::string_view to_string(PerturbationTag tag);
bool is_double_perturbed(PerturbationTag tag);

/// Upper-triangle position (row < col), 0-based.
struct Position {
  std::size_t row = 0;
  std::size_t col = 0;
  friend auto operator<=>(const Position&, const Position&) = default;
};

/// Minimal perturbation structure. `base`, `delta` and `gamma` always refer to
/// the canonical labeling; `permutation[k]` is the original index placed at
/// canonical position k, and `positions` are in original indices.
struct PerturbationStructure {
  PerturbationTag tag = PerturbationTag::Other;
  std::optional<ConsistentBase> base;
  std::optional<double> delta;
  std::optional<double> gamma;
  std::vector<Position> positions;
  std::vector<std::size_t> permutation;
  /// Every minimal repair set found (the primary one first, lexicographic order).
  std::vector<std::vector<Position>> alternatives;

  std::size_t order() const { return base ? base->order() : permutation.size(); }
};

/// Builders for the canonical forms with the identity permutation.
PerturbationStructure simple_structure(ConsistentBase base, double delta);
PerturbationStructure double_structure(PerturbationTag tag, ConsistentBase base, double delta, double gamma);

Pcm consistent_pcm(const ConsistentBase& base);

/// Canonical matrix of the structure: delta multiplies a_12; gamma multiplies
/// a_13 (Case 1) or a_34 (Case 2A/2B). Throws InvalidCase on tag/order mismatch.
Pcm apply_perturbation(const PerturbationStructure& s);

/// Matrix in the original labeling: the canonical form with the permutation undone.
Pcm apply_perturbation_original(const PerturbationStructure& s);

bool is_consistent(const Pcm& m, double tol = kDefaultConsistencyTol);

PerturbationStructure classify_perturbation(const Pcm& m, double tol = kDefaultConsistencyTol);

}  // namespace dpcm
