#pragma once

// Efficiency (Pareto optimality) of a weight vector for a PCM, decided by
// strong connectivity of the digraph with an arc i -> j whenever
// w_i / w_j >= a_ij.

#include <compare>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "dpcm/pcm.hpp"

namespace dpcm {

inline constexpr double kDefaultTieTol = 1e-9;

struct Arc {
  std::size_t from = 0;
  std::size_t to = 0;
  friend auto operator<=>(const Arc&, const Arc&) = default;
};

class EfficiencyDigraph {
 public:
  EfficiencyDigraph(std::size_t n, double tie_tol);
  static EfficiencyDigraph from_arcs(std::size_t n, std::span<const Arc> arcs, double tie_tol = 0.0);

  std::size_t order() const noexcept { return n_; }
  double tie_tol() const noexcept { return tie_tol_; }
  bool has_arc(std::size_t from, std::size_t to) const { return adj_.at(from * n_ + to); }
  void add_arc(std::size_t from, std::size_t to);
  /// Arcs in ascending (from, to) order.
  std::vector<Arc> arcs() const;
  std::vector<std::size_t> successors(std::size_t from) const;

 private:
  std::size_t n_;
  double tie_tol_;
  std::vector<bool> adj_;
};

/// Strongly connected components in the order Tarjan's algorithm emits them
/// (reverse topological: sink components first). Each component is sorted.
struct SccDecomposition {
  std::vector<std::vector<std::size_t>> components;
  std::vector<std::size_t> component_of;
};

struct Connectivity {
  bool strongly_connected = false;
  SccDecomposition scc;
};

/// Arc i -> j iff w_i / w_j >= a_ij (1 - tie_tol), i != j.
EfficiencyDigraph build_digraph(const Pcm& m, std::span<const double> w, double tie_tol = kDefaultTieTol);

/// Tarjan's algorithm (iterative).
Connectivity strongly_connected(const EfficiencyDigraph& g);

/// Independent check: breadth-first search from every node.
bool reachability_oracle(const EfficiencyDigraph& g);

/// Components with no arc leaving them, each sorted, ordered by smallest member.
std::vector<std::vector<std::size_t>> sink_components(const EfficiencyDigraph& g, const SccDecomposition& scc);

struct EfficiencyVerdict {
  bool efficient = false;
  EfficiencyDigraph digraph{0, 0.0};
  SccDecomposition scc;
  /// Closed node set with no outgoing arc; empty when efficient.
  std::vector<std::size_t> sink_set;
};

EfficiencyVerdict is_efficient(const Pcm& m, std::span<const double> w, double tie_tol = kDefaultTieTol);

/// True iff w_prime approximates every a_ij at least as well as w and some
/// entry strictly better. Ratios that differ by no more than `ulp_band`
/// (relative, default a few machine epsilons) count as unchanged.
bool dominates(const Pcm& m, std::span<const double> w, std::span<const double> w_prime,
               double ulp_band = 8.0 * 2.220446049250313e-16);

/// For an inefficient verdict, scales the sink set of `verdict` by the
/// midpoint factor between 1 and the largest non-worsening scale, and returns
/// the resulting (unnormalized) dominating weights. Returns nullopt when the
/// verdict is efficient. Throws ImprovementFailed if the result does not
/// dominate w.
std::optional<std::vector<double>> find_sink_improvement(const Pcm& m, std::span<const double> w,
                                                         const EfficiencyVerdict& verdict);

}  // namespace dpcm
