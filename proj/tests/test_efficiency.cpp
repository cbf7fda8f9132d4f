#include <gtest/gtest.h>

#include <vector>

#include "dpcm/efficiency.hpp"
#include "dpcm/errors.hpp"
#include "dpcm/generators.hpp"
#include "dpcm/spectral.hpp"

using namespace dpcm;

namespace {

const std::vector<double> kExample1W{0.27471631866551033, 0.53204485128649415, 0.10869376652649564,
                                     0.08454506352149975};

// Random digraph where every pair has at least one arc.
EfficiencyDigraph random_pair_complete(std::size_t n, Rng& rng) {
  EfficiencyDigraph g(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      switch (rng.below(3)) {
        case 0:
          g.add_arc(i, j);
          break;
        case 1:
          g.add_arc(j, i);
          break;
        default:
          g.add_arc(i, j);
          g.add_arc(j, i);
      }
    }
  }
  return g;
}

}  // namespace

TEST(Digraph, Example1Arcs) {
  const EfficiencyDigraph g = build_digraph(example1_matrix(), kExample1W);
  const std::vector<Arc> expected{{0, 1}, {0, 3}, {2, 0}, {2, 1}, {3, 1}, {3, 2}};
  EXPECT_EQ(g.arcs(), expected);
  EXPECT_TRUE(g.successors(1).empty());
}

TEST(Digraph, TieCountsAsArc) {
  // consistent: every ratio equals its entry, so the digraph is complete
  const Pcm m = consistent_pcm(ConsistentBase({2.0, 6.0}));
  const std::vector<double> w{1.0, 0.5, 1.0 / 6.0};
  const EfficiencyDigraph g = build_digraph(m, w);
  EXPECT_EQ(g.arcs().size(), 6u);
}

TEST(Digraph, RejectsBadWeights) {
  const std::vector<double> short_w{0.5, 0.5};
  const std::vector<double> zero_w{0.5, 0.0, 0.25, 0.25};
  EXPECT_THROW(build_digraph(example1_matrix(), short_w), std::invalid_argument);
  EXPECT_THROW(build_digraph(example1_matrix(), zero_w), std::invalid_argument);
}

TEST(Scc, Example1SinkIsNodeTwo) {
  const EfficiencyVerdict v = is_efficient(example1_matrix(), kExample1W);
  EXPECT_FALSE(v.efficient);
  EXPECT_EQ(v.sink_set, std::vector<std::size_t>{1});
  ASSERT_EQ(v.scc.components.size(), 2u);
  EXPECT_EQ(v.scc.components.front(), std::vector<std::size_t>{1});
}

TEST(Scc, TarjanMatchesReachability) {
  Rng rng(99);
  for (int k = 0; k < 500; ++k) {
    const std::size_t n = 2 + rng.below(11);
    const EfficiencyDigraph g = random_pair_complete(n, rng);
    const Connectivity c = strongly_connected(g);
    EXPECT_EQ(c.strongly_connected, reachability_oracle(g));
    std::size_t covered = 0;
    for (const auto& comp : c.scc.components) {
      covered += comp.size();
      for (std::size_t v : comp) EXPECT_EQ(c.scc.components[c.scc.component_of[v]], comp);
    }
    EXPECT_EQ(covered, n);
    // pair-complete digraphs have a single sink component
    EXPECT_EQ(sink_components(g, c.scc).size(), 1u);
  }
}

TEST(Scc, SparseGraphs) {
  const std::vector<Arc> chain{{0, 1}, {1, 2}, {2, 3}};
  const EfficiencyDigraph g = EfficiencyDigraph::from_arcs(4, chain);
  const Connectivity c = strongly_connected(g);
  EXPECT_FALSE(c.strongly_connected);
  EXPECT_EQ(c.scc.components.size(), 4u);
  const auto sinks = sink_components(g, c.scc);
  ASSERT_EQ(sinks.size(), 1u);
  EXPECT_EQ(sinks.front(), std::vector<std::size_t>{3});

  const std::vector<Arc> cycle{{0, 1}, {1, 2}, {2, 0}};
  EXPECT_TRUE(strongly_connected(EfficiencyDigraph::from_arcs(3, cycle)).strongly_connected);
  EXPECT_THROW(EfficiencyDigraph(3, 0.0).add_arc(1, 1), std::invalid_argument);
}

TEST(Dominates, PaperImprovedVector) {
  std::vector<double> improved = kExample1W;
  improved[1] = 0.54346883;
  EXPECT_TRUE(dominates(example1_matrix(), kExample1W, improved));
  EXPECT_FALSE(dominates(example1_matrix(), improved, kExample1W));
  EXPECT_FALSE(dominates(example1_matrix(), kExample1W, kExample1W));
}

TEST(Dominates, ScaleInvariant) {
  std::vector<double> scaled = kExample1W;
  for (double& x : scaled) x *= 3.0;
  EXPECT_FALSE(dominates(example1_matrix(), kExample1W, scaled));
}

TEST(Improvement, Example1) {
  const Pcm m = example1_matrix();
  const EfficiencyVerdict v = is_efficient(m, kExample1W);
  const auto w = find_sink_improvement(m, kExample1W, v);
  ASSERT_TRUE(w);
  EXPECT_TRUE(dominates(m, kExample1W, *w));
  // the midpoint scale makes w'_2 / w_3 hit a_23 = 5
  EXPECT_NEAR((*w)[1] / (*w)[2], 5.0, 1e-12);
  EXPECT_NEAR((*w)[1], 0.54346883, 1e-8);
}

TEST(Improvement, EfficientGivesNothing) {
  const Pcm m = consistent_pcm(ConsistentBase({2.0, 6.0}));
  const std::vector<double> w{1.0, 0.5, 1.0 / 6.0};
  const EfficiencyVerdict v = is_efficient(m, w);
  EXPECT_TRUE(v.efficient);
  EXPECT_TRUE(v.sink_set.empty());
  EXPECT_FALSE(find_sink_improvement(m, w, v));
}

TEST(Improvement, ParametricFamily) {
  for (std::size_t n = 4; n <= 8; ++n) {
    for (double p : {1.0 / 3.0, 1.0, 3.0}) {
      for (double q : {0.5, 2.0, 5.0}) {
        const Pcm m = parametric_apq(n, p, q);
        const SpectralResult r = power_iteration(m);
        const EfficiencyVerdict v = is_efficient(m, r.w.values());
        ASSERT_FALSE(v.efficient) << n << " " << p << " " << q;
        const auto w = find_sink_improvement(m, r.w.values(), v);
        ASSERT_TRUE(w);
        EXPECT_TRUE(dominates(m, r.w.values(), *w));
      }
    }
  }
}

TEST(Improvement, NotASinkRejected) {
  const Pcm m = example1_matrix();
  EfficiencyVerdict v = is_efficient(m, kExample1W);
  v.sink_set = {0};
  EXPECT_THROW(find_sink_improvement(m, kExample1W, v), ImprovementFailed);
}
