#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include <Eigen/Eigenvalues>

#include "dpcm/errors.hpp"
#include "dpcm/generators.hpp"
#include "dpcm/polynomial.hpp"
#include "dpcm/spectral.hpp"

using namespace dpcm;

namespace {

struct Principal {
  double lambda;
  std::vector<double> w;
};

// Oracle: dense nonsymmetric eigensolver, eigenvalue of largest real part.
Principal eigen_oracle(const Pcm& m) {
  Eigen::EigenSolver<Eigen::MatrixXd> es(m.matrix());
  Eigen::Index best = 0;
  for (Eigen::Index k = 1; k < es.eigenvalues().size(); ++k) {
    if (es.eigenvalues()[k].real() > es.eigenvalues()[best].real()) best = k;
  }
  const Eigen::VectorXd v = es.eigenvectors().col(best).real();
  std::vector<double> w(v.data(), v.data() + v.size());
  const double s = std::accumulate(w.begin(), w.end(), 0.0);
  for (double& x : w) x /= s;
  return {es.eigenvalues()[best].real(), w};
}

PerturbationStructure random_double(DoubleCase kase, std::size_t n, Rng& rng) {
  return double_structure(tag_of(kase), random_base(rng, n), random_factor(rng), random_factor(rng));
}

std::size_t order_for(DoubleCase kase, Rng& rng) {
  switch (kase) {
    case DoubleCase::Case1:
      return 4 + rng.below(5);
    case DoubleCase::Case2A:
      return 4;
    case DoubleCase::Case2B:
      return 5 + rng.below(4);
  }
  return 4;
}

constexpr DoubleCase kCases[] = {DoubleCase::Case1, DoubleCase::Case2A, DoubleCase::Case2B};

}  // namespace

TEST(Polynomial, HornerAndBounds) {
  const Polynomial p({-6.0, 11.0, -6.0, 1.0});  // (x-1)(x-2)(x-3)
  EXPECT_DOUBLE_EQ(p(4.0), 6.0);
  const auto [v, d] = p.value_and_derivative(2.0);
  EXPECT_DOUBLE_EQ(v, 0.0);
  EXPECT_DOUBLE_EQ(d, -1.0);
  EXPECT_EQ(p.degree(), 3u);
  EXPECT_GE(p.cauchy_bound(), 3.0);
  EXPECT_NEAR(bracketed_root(p, 2.5, 10.0), 3.0, 1e-12);
  EXPECT_THROW(bracketed_root(p, 3.5, 10.0), RootNotBracketed);
  EXPECT_EQ(Polynomial({1.0, 2.0, 0.0, 0.0}).degree(), 1u);
}

TEST(PowerIteration, Example1Golden) {
  const SpectralResult r = power_iteration(example1_matrix());
  const double expected[] = {0.27471631866551033, 0.53204485128649415, 0.10869376652649564, 0.08454506352149975};
  for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(r.w[i], expected[i], 1e-12);
  EXPECT_NEAR(r.lambda_max, 4.1664941602955476, 1e-11);
  EXPECT_LE(r.residual, kDefaultPowerTol);
  // paper digits, truncated at 8
  const double truncated[] = {0.27471631, 0.53204485, 0.10869376, 0.08454506};
  for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(r.w[i], truncated[i], 1e-7);
}

TEST(PowerIteration, ConsistentIsExact) {
  const ConsistentBase base({2.0, 6.0});
  const SpectralResult r = power_iteration(consistent_pcm(base));
  EXPECT_NEAR(r.lambda_max, 3.0, 1e-12);
  EXPECT_NEAR(r.w[0] / r.w[1], 2.0, 1e-12);
  EXPECT_NEAR(r.w[0] / r.w[2], 6.0, 1e-12);
}

TEST(PowerIteration, AgreesWithEigenSolver) {
  Rng rng(5);
  for (int k = 0; k < 40; ++k) {
    const std::size_t n = 3 + rng.below(8);
    Eigen::MatrixXd a = Eigen::MatrixXd::Ones(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      for (Eigen::Index j = i + 1; j < a.cols(); ++j) {
        a(i, j) = rng.log_uniform(1.0 / 9.0, 9.0);
        a(j, i) = 1.0 / a(i, j);
      }
    }
    const Pcm m = make_pcm(a);
    const SpectralResult r = power_iteration(m);
    const Principal o = eigen_oracle(m);
    EXPECT_NEAR(r.lambda_max, o.lambda, 1e-9 * o.lambda);
    for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(r.w[i], o.w[i], 1e-9);
  }
}

TEST(PowerIteration, NoConvergenceReported) {
  EXPECT_THROW(power_iteration(example1_matrix(), 1e-12, 2), NoConvergence);
  EXPECT_THROW(power_iteration(example1_matrix(), 0.0), std::invalid_argument);
}

TEST(CharPoly, OracleOnRankOne) {
  const Pcm ones = consistent_pcm(ConsistentBase::unit(5));
  EXPECT_NEAR(charpoly_oracle(ones, 0.0), 0.0, 1e-12);
  // det(J - lambda I) = (-1)^n (lambda^n - n lambda^(n-1))
  EXPECT_NEAR(charpoly_oracle(ones, 2.0), -(32.0 - 5.0 * 16.0), 1e-9);
}

TEST(CharPoly, MatchesDeterminant) {
  Rng rng(17);
  for (DoubleCase kase : kCases) {
    for (int k = 0; k < 100; ++k) {
      const auto s = random_double(kase, order_for(kase, rng), rng);
      const auto params = CharPolyParams::from_structure(s);
      const Pcm m = apply_perturbation(s);
      const double n = static_cast<double>(s.order());
      for (double lambda : {-3.0 * n, -n - 0.5, 1.75 * n, 2.5 * n, 4.0 * n}) {
        const double p1 = eval_charpoly(params, lambda);
        const double p2 = charpoly_oracle(m, lambda);
        EXPECT_LE(std::abs(p1 - p2) / std::max(std::abs(p1), std::abs(p2)), 1e-8)
            << to_string(kase) << " n=" << n << " lambda=" << lambda;
      }
    }
  }
}

TEST(CharPoly, OrderValidation) {
  EXPECT_THROW(CharPolyParams(DoubleCase::Case2A, 5, 2.0, 3.0), IncompatibleOrder);
  EXPECT_THROW(CharPolyParams(DoubleCase::Case2B, 4, 2.0, 3.0), IncompatibleOrder);
  EXPECT_THROW(CharPolyParams(DoubleCase::Case1, 3, 2.0, 3.0), IncompatibleOrder);
}

TEST(LambdaMax, MatchesOracleAndExceedsOrder) {
  Rng rng(23);
  for (DoubleCase kase : kCases) {
    for (int k = 0; k < 60; ++k) {
      const auto s = random_double(kase, order_for(kase, rng), rng);
      const double lambda = lambda_max_closed_form(CharPolyParams::from_structure(s));
      const Principal o = eigen_oracle(apply_perturbation(s));
      EXPECT_NEAR(lambda, o.lambda, 1e-10 * o.lambda);
      EXPECT_GT(lambda, static_cast<double>(s.order()));
    }
  }
}

TEST(LambdaMax, UnperturbedEqualsOrder) {
  for (DoubleCase kase : kCases) {
    const std::size_t n = kase == DoubleCase::Case2B ? 6 : 4;
    EXPECT_EQ(lambda_max_closed_form(CharPolyParams(kase, n, 1.0, 1.0)), static_cast<double>(n));
    EXPECT_NEAR(lambda_max_closed_form(CharPolyParams(kase, n, 1.0, 3.0)),
                eigen_oracle(apply_perturbation(double_structure(tag_of(kase), ConsistentBase::unit(n), 1.0, 3.0)))
                    .lambda,
                1e-10);
  }
}

TEST(ClosedForm, EveryVariantIsThePerronVector) {
  Rng rng(31);
  for (DoubleCase kase : kCases) {
    EXPECT_EQ(variants_of(kase).size(), static_cast<std::size_t>(variant_count(kase)));
    for (int k = 0; k < 60; ++k) {
      const auto s = random_double(kase, order_for(kase, rng), rng);
      const Principal o = eigen_oracle(apply_perturbation(s));
      for (const auto& v : variants_of(kase)) {
        const WeightVector w = closed_form_eigenvector(s, v);
        for (std::size_t i = 0; i < w.size(); ++i) {
          EXPECT_GT(w[i], 0.0);
          EXPECT_NEAR(w[i], o.w[i], 1e-10) << to_string(kase) << " column " << v.column;
        }
      }
    }
  }
}

TEST(ClosedForm, DefaultVariantPicksLargestPivot) {
  const auto s = double_structure(PerturbationTag::DoublePerturbedCase2B, ConsistentBase({2.0, 0.5, 3.0, 4.0}), 9.0,
                                  1.0 / 9.0);
  const auto params = CharPolyParams::from_structure(s);
  const double lambda = lambda_max_closed_form(params);
  const ClosedFormVariant chosen = default_variant(s);
  const double pivot = std::abs(closed_form_raw(params, *s.base, chosen, lambda)[chosen.column]);
  for (const auto& v : variants_of(DoubleCase::Case2B)) {
    EXPECT_GE(pivot, std::abs(closed_form_raw(params, *s.base, v, lambda)[v.column]));
  }
}

TEST(ClosedForm, Errors) {
  const auto degenerate = double_structure(PerturbationTag::DoublePerturbedCase1, ConsistentBase({2, 3, 4}), 1.0, 2.0);
  EXPECT_THROW(closed_form_eigenvector(degenerate, {DoubleCase::Case1, 0}), DegenerateParameters);
  const auto simple = simple_structure(ConsistentBase({2, 3, 4}), 2.0);
  EXPECT_THROW(closed_form_eigenvector(simple, {DoubleCase::Case1, 0}), InvalidCase);
}

TEST(ClosedForm, OriginalLabels) {
  const std::vector<double> raw{0.1, 0.2, 0.3, 0.4};
  const WeightVector canonical = WeightVector::normalized(raw);
  const std::vector<std::size_t> perm{2, 0, 3, 1};
  const WeightVector w = to_original_labels(canonical, perm);
  for (std::size_t k = 0; k < 4; ++k) EXPECT_DOUBLE_EQ(w[perm[k]], canonical[k]);
}
