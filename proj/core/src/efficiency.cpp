#include "dpcm/efficiency.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>

#include "dpcm/errors.hpp"

namespace dpcm {

EfficiencyDigraph::EfficiencyDigraph(std::size_t n, double tie_tol) : n_(n), tie_tol_(tie_tol), adj_(n * n, false) {}

EfficiencyDigraph EfficiencyDigraph::from_arcs(std::size_t n, std::span<const Arc> arcs, double tie_tol) {
  EfficiencyDigraph g(n, tie_tol);
  for (const Arc& a : arcs) g.add_arc(a.from, a.to);
  return g;
}

void EfficiencyDigraph::add_arc(std::size_t from, std::size_t to) {
  if (from >= n_ || to >= n_ || from == to) throw std::invalid_argument("invalid arc");
  adj_[from * n_ + to] = true;
}

std::vector<Arc> EfficiencyDigraph::arcs() const {
  std::vector<Arc> out;
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = 0; j < n_; ++j) {
      if (adj_[i * n_ + j]) out.push_back({i, j});
    }
  }
  return out;
}

std::vector<std::size_t> EfficiencyDigraph::successors(std::size_t from) const {
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < n_; ++j) {
    if (adj_[from * n_ + j]) out.push_back(j);
  }
  return out;
}

namespace {

void require_positive_weights(std::span<const double> w, std::size_t n) {
  if (w.size() != n) throw std::invalid_argument("weight vector length does not match matrix order");
  for (double v : w) {
    if (!std::isfinite(v) || v <= 0.0) throw std::invalid_argument("weights must be positive and finite");
  }
}

}  // namespace

EfficiencyDigraph build_digraph(const Pcm& m, std::span<const double> w, double tie_tol) {
  const std::size_t n = m.order();
  require_positive_weights(w, n);
  if (!(tie_tol >= 0.0)) throw std::invalid_argument("tie tolerance must be non-negative");
  EfficiencyDigraph g(n, tie_tol);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j && w[i] / w[j] >= m(i, j) * (1.0 - tie_tol)) g.add_arc(i, j);
    }
  }
  return g;
}

Connectivity strongly_connected(const EfficiencyDigraph& g) {
  const std::size_t n = g.order();
  constexpr std::size_t kUnvisited = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> index(n, kUnvisited);
  std::vector<std::size_t> low(n, 0);
  std::vector<bool> on_stack(n, false);
  std::vector<std::size_t> stack;
  std::size_t next_index = 0;

  SccDecomposition scc;
  scc.component_of.assign(n, 0);

  struct Frame {
    std::size_t node;
    std::size_t next_succ;
  };
  for (std::size_t root = 0; root < n; ++root) {
    if (index[root] != kUnvisited) continue;
    std::vector<Frame> call{{root, 0}};
    index[root] = low[root] = next_index++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!call.empty()) {
      Frame& f = call.back();
      const std::size_t v = f.node;
      bool descended = false;
      while (f.next_succ < n) {
        const std::size_t u = f.next_succ++;
        if (!g.has_arc(v, u)) continue;
        if (index[u] == kUnvisited) {
          index[u] = low[u] = next_index++;
          stack.push_back(u);
          on_stack[u] = true;
          call.push_back({u, 0});
          descended = true;
          break;
        }
        if (on_stack[u]) low[v] = std::min(low[v], index[u]);
      }
      if (descended) continue;
      if (low[v] == index[v]) {
        std::vector<std::size_t> comp;
        std::size_t u = 0;
        do {
          u = stack.back();
          stack.pop_back();
          on_stack[u] = false;
          scc.component_of[u] = scc.components.size();
          comp.push_back(u);
        } while (u != v);
        std::sort(comp.begin(), comp.end());
        scc.components.push_back(std::move(comp));
      }
      call.pop_back();
      if (!call.empty()) {
        const std::size_t parent = call.back().node;
        low[parent] = std::min(low[parent], low[v]);
      }
    }
  }
  const bool connected = scc.components.size() <= 1;
  return Connectivity{connected, std::move(scc)};
}

bool reachability_oracle(const EfficiencyDigraph& g) {
  const std::size_t n = g.order();
  for (std::size_t s = 0; s < n; ++s) {
    std::vector<bool> seen(n, false);
    std::queue<std::size_t> q;
    seen[s] = true;
    q.push(s);
    std::size_t reached = 1;
    while (!q.empty()) {
      const std::size_t v = q.front();
      q.pop();
      for (std::size_t u = 0; u < n; ++u) {
        if (!seen[u] && g.has_arc(v, u)) {
          seen[u] = true;
          ++reached;
          q.push(u);
        }
      }
    }
    if (reached != n) return false;
  }
  return true;
}

std::vector<std::vector<std::size_t>> sink_components(const EfficiencyDigraph& g, const SccDecomposition& scc) {
  std::vector<std::vector<std::size_t>> sinks;
  for (std::size_t c = 0; c < scc.components.size(); ++c) {
    bool leaves = false;
    for (std::size_t v : scc.components[c]) {
      for (std::size_t u : g.successors(v)) {
        if (scc.component_of[u] != c) leaves = true;
      }
    }
    if (!leaves) sinks.push_back(scc.components[c]);
  }
  std::sort(sinks.begin(), sinks.end(), [](const auto& a, const auto& b) { return a.front() < b.front(); });
  return sinks;
}

EfficiencyVerdict is_efficient(const Pcm& m, std::span<const double> w, double tie_tol) {
  EfficiencyDigraph g = build_digraph(m, w, tie_tol);
  Connectivity c = strongly_connected(g);
  EfficiencyVerdict v;
  v.efficient = c.strongly_connected;
  if (!v.efficient) v.sink_set = sink_components(g, c.scc).front();
  v.digraph = std::move(g);
  v.scc = std::move(c.scc);
  return v;
}

bool dominates(const Pcm& m, std::span<const double> w, std::span<const double> w_prime, double ulp_band) {
  const std::size_t n = m.order();
  require_positive_weights(w, n);
  require_positive_weights(w_prime, n);
  bool strict = false;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const double r = w[i] / w[j];
      const double r_prime = w_prime[i] / w_prime[j];
      if (std::abs(r_prime - r) <= ulp_band * r) continue;
      const double before = std::abs(m(i, j) - r);
      const double after = std::abs(m(i, j) - r_prime);
      if (after > before) return false;
      if (after < before) strict = true;
    }
  }
  return strict;
}

std::optional<std::vector<double>> find_sink_improvement(const Pcm& m, std::span<const double> w,
                                                         const EfficiencyVerdict& verdict) {
  if (verdict.efficient) return std::nullopt;
  const std::size_t n = m.order();
  require_positive_weights(w, n);
  const auto& sink = verdict.sink_set;
  if (sink.empty() || sink.size() >= n) throw ImprovementFailed("inefficiency certificate has no proper sink set");
  std::vector<bool> in_sink(n, false);
  for (std::size_t v : sink) in_sink.at(v) = true;

  // Scaling the sink by t moves r = w_i/w_j (i in S, j outside) up towards
  // a_ij; |a - t r| <= |a - r| holds while t <= (2a - r) / r. The reverse
  // ratio moves down and stays non-worsening while t <= r / (2a - r).
  double t_max = std::numeric_limits<double>::infinity();
  for (std::size_t i : sink) {
    for (std::size_t j = 0; j < n; ++j) {
      if (in_sink[j]) continue;
      const double r = w[i] / w[j];
      const double a = m(i, j);
      if (!(r < a)) throw ImprovementFailed("sink set has an outgoing arc");
      t_max = std::min(t_max, (2.0 * a - r) / r);
      const double r_back = w[j] / w[i];
      const double a_back = m(j, i);
      if (2.0 * a_back > r_back) t_max = std::min(t_max, r_back / (2.0 * a_back - r_back));
    }
  }
  const double t = 0.5 * (1.0 + t_max);
  std::vector<double> improved(w.begin(), w.end());
  for (std::size_t i : sink) improved[i] *= t;
  if (!dominates(m, w, improved)) throw ImprovementFailed("scaled sink vector does not dominate the input");
  return improved;
}

}  // namespace dpcm
