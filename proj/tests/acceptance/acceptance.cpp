// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "dpcm/efficiency.hpp"
#include "dpcm/errors.hpp"
#include "dpcm/generators.hpp"
#include "dpcm/pcm.hpp"
#include "dpcm/spectral.hpp"
#include "dpcm/verification.hpp"

using namespace dpcm;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = true;
  std::string detail;
};

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

constexpr DoubleCase kCases[] = {DoubleCase::Case1, DoubleCase::Case2A, DoubleCase::Case2B};

std::size_t random_order(DoubleCase kase, Rng& rng) {
  switch (kase) {
    case DoubleCase::Case1:
      return 4 + rng.below(6);
    case DoubleCase::Case2A:
      return 4;
    case DoubleCase::Case2B:
      return 5 + rng.below(5);
  }
  return 4;
}

PerturbationStructure random_double(DoubleCase kase, Rng& rng) {
  const std::size_t n = random_order(kase, rng);
  const ConsistentBase base = random_base(rng, n);
  const double delta = random_factor(rng);
  const double gamma = random_factor(rng);
  return double_structure(tag_of(kase), base, delta, gamma);
}

Outcome example1() {
  Outcome o;
  const auto t0 = Clock::now();
  const Pcm m = example1_matrix();
  const SpectralResult r = power_iteration(m);
  const double paper_w[] = {0.27471631, 0.53204485, 0.10869376, 0.08454506};
  double w_err = 0.0;
  for (std::size_t i = 0; i < 4; ++i) w_err = std::max(w_err, std::abs(r.w[i] - paper_w[i]));
  const bool w_ok = w_err <= 1e-7;

  const double paper_ratios[4][4] = {{1, 0.5163, 2.5274, 3.2493},
                                     {1.9367, 1, 4.8948, 6.2930},
                                     {0.3956, 0.2042, 1, 1.2856},
                                     {0.3077, 0.1589, 0.7778, 1}};
  double ratio_err = 0.0;
  bool truncation_consistent = true;
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 4; ++j) {
      const double ratio = r.w[i] / r.w[j];
      ratio_err = std::max(ratio_err, std::abs(ratio - paper_ratios[i][j]));
      if (std::abs(std::floor(ratio * 1e4) / 1e4 - paper_ratios[i][j]) > 1e-12) truncation_consistent = false;
    }
  }
  const bool ratios_ok = ratio_err <= 5e-5;

  const EfficiencyVerdict v = is_efficient(m, r.w);
  const bool verdict_ok = !v.efficient && v.sink_set == std::vector<std::size_t>{1};
  std::vector<double> improved(r.w.values().begin(), r.w.values().end());
  improved[1] = 0.54346883;
  const bool dominates_ok = dominates(m, r.w, improved);
  const double elapsed = seconds_since(t0);

  o.pass = w_ok && ratios_ok && verdict_ok && dominates_ok && elapsed < 1.0;
  o.detail = "w err " + fmt("%.2e", w_err) + (w_ok ? " ok" : " BAD") + "; ratio table err " + fmt("%.2e", ratio_err) +
             (ratios_ok ? " ok" : " > 5e-5 BAD") + " (floor-to-4-decimals " +
             (truncation_consistent ? "matches" : "differs") + "); sink {2} " + (verdict_ok ? "ok" : "BAD") +
             "; dominates " + (dominates_ok ? "ok" : "BAD") + "; " + fmt("%.3fs", elapsed);
  return o;
}

Outcome theorem(const TheoremSummary& s, double elapsed, double limit) {
  Outcome o;
  o.pass = s.ok() && elapsed < limit;
  o.detail = s.name + " " + std::to_string(s.passed) + "/" + std::to_string(s.samples) + "; " + fmt("%.2fs", elapsed);
  if (!s.failures.empty()) o.detail += "; first failure: " + s.failures.front();
  return o;
}

Outcome main_theorem() {
  const auto t0 = Clock::now();
  const TheoremSummary s = verify_main_theorem(1000, 2024);
  return theorem(s, seconds_since(t0), 30.0);
}

Outcome simple_theorem() {
  const auto t0 = Clock::now();
  const TheoremSummary s = verify_simple_theorem(500, 2024);
  return theorem(s, seconds_since(t0), 1e9);
}

Outcome parametric() {
  Outcome o;
  std::size_t inefficient = 0;
  std::size_t total = 0;
  for (std::size_t n = 4; n <= 8; ++n) {
    for (double p : {1.0 / 3.0, 1.0, 3.0}) {
      for (double q : {0.5, 2.0, 5.0}) {
        const Pcm m = parametric_apq(n, p, q);
        const SpectralResult r = power_iteration(m);
        ++total;
        if (!is_efficient(m, r.w).efficient) {
          ++inefficient;
        } else if (o.detail.empty()) {
          o.detail = "efficient at n=" + std::to_string(n) + fmt(" p=%g", p) + fmt(" q=%g", q) + "; ";
        }
      }
    }
  }
  o.pass = inefficient == 45 && total == 45;
  o.detail += "inefficient " + std::to_string(inefficient) + "/" + std::to_string(total);
  return o;
}

Outcome charpoly() {
  Outcome o;
  Rng rng(derive_seed(2024, {5}));
  double worst = 0.0;
  std::size_t evaluations = 0;
  for (DoubleCase kase : kCases) {
    for (int k = 0; k < 500; ++k) {
      const PerturbationStructure s = random_double(kase, rng);
      const CharPolyParams params = CharPolyParams::from_structure(s);
      const Pcm m = apply_perturbation(s);
      const double n = static_cast<double>(s.order());
      for (double lambda : {-3.0 * n, -n - 0.5, 1.75 * n, 2.5 * n, 4.0 * n}) {
        const double a = eval_charpoly(params, lambda);
        const double b = charpoly_oracle(m, lambda);
        worst = std::max(worst, std::abs(a - b) / std::max(std::abs(a), std::abs(b)));
        ++evaluations;
      }
    }
  }
  o.pass = worst <= 1e-8;
  o.detail = std::to_string(evaluations) + " evaluations; max rel err " + fmt("%.2e", worst);
  return o;
}

struct EigenStats {
  std::size_t samples = 0;
  std::size_t nonpositive = 0;
  double worst_residual = 0.0;
  double worst_parallel = 0.0;
  double worst_lambda = 0.0;
  bool exceeds_n = true;
};

EigenStats eigen_stats() {
  EigenStats st;
  Rng rng(derive_seed(2024, {6}));
  for (DoubleCase kase : kCases) {
    for (int k = 0; k < 500; ++k) {
      const PerturbationStructure s = random_double(kase, rng);
      const CharPolyParams params = CharPolyParams::from_structure(s);
      const Pcm m = apply_perturbation(s);
      const double lambda = lambda_max_closed_form(params);
      ++st.samples;
      if (!(lambda > static_cast<double>(s.order()))) st.exceeds_n = false;

      std::vector<std::vector<double>> vecs;
      for (const ClosedFormVariant& v : variants_of(kase)) {
        const std::vector<double> raw = closed_form_raw(params, *s.base, v, lambda);
        if (std::any_of(raw.begin(), raw.end(), [](double x) { return !(x > 0.0); })) {
          ++st.nonpositive;
          continue;
        }
        const WeightVector w = closed_form_eigenvector(s, v);
        const Eigen::Map<const Eigen::VectorXd> wv(w.values().data(), static_cast<Eigen::Index>(w.size()));
        const Eigen::VectorXd res = m.matrix() * wv - lambda * wv;
        st.worst_residual = std::max(st.worst_residual, res.cwiseAbs().maxCoeff() / (lambda * wv.cwiseAbs().maxCoeff()));
        vecs.emplace_back(w.values().begin(), w.values().end());
      }
      for (std::size_t a = 1; a < vecs.size(); ++a) {
        for (std::size_t i = 0; i < vecs[0].size(); ++i) {
          for (std::size_t j = i + 1; j < vecs[0].size(); ++j) {
            st.worst_parallel =
                std::max(st.worst_parallel, std::abs(vecs[0][i] * vecs[a][j] - vecs[0][j] * vecs[a][i]));
          }
        }
      }
      const SpectralResult r = power_iteration(m);
      st.worst_lambda = std::max(st.worst_lambda, std::abs(r.lambda_max - lambda) / lambda);
    }
  }
  return st;
}

Outcome closed_form(const EigenStats& st) {
  Outcome o;
  o.pass = st.nonpositive == 0 && st.worst_residual <= 1e-8 && st.worst_parallel <= 1e-9;
  o.detail = std::to_string(st.samples) + " samples; non-positive variants " + std::to_string(st.nonpositive) +
             "; max residual " + fmt("%.2e", st.worst_residual) + "; max cross product " +
             fmt("%.2e", st.worst_parallel);
  return o;
}

Outcome lambda_agreement(const EigenStats& st) {
  Outcome o;
  double unit_err = 0.0;
  for (DoubleCase kase : kCases) {
    for (std::size_t n : {4u, 5u, 6u, 9u}) {
      if ((kase == DoubleCase::Case2A && n != 4) || (kase == DoubleCase::Case2B && n < 5)) continue;
      const double lambda = lambda_max_closed_form(CharPolyParams(kase, n, 1.0, 1.0));
      unit_err = std::max(unit_err, std::abs(lambda - static_cast<double>(n)));
    }
  }
  o.pass = st.worst_lambda <= 1e-9 && st.exceeds_n && unit_err <= 1e-10;
  o.detail = "max rel diff vs power iteration " + fmt("%.2e", st.worst_lambda) + "; lambda > n " +
             (st.exceeds_n ? "always" : "VIOLATED") + "; unperturbed err " + fmt("%.1e", unit_err);
  return o;
}

Outcome lemma_suite() {
  Outcome o;
  const auto t0 = Clock::now();
  const LemmaGrid grid;
  const std::vector<LemmaReport> reports = run_lemma_suite(grid, 42);
  std::size_t min_samples = SIZE_MAX;
  double min_margin = INFINITY;
  std::string failed;
  for (const LemmaReport& r : reports) {
    const bool ratio_lemma = r.id != LemmaId::PositivityRemark && r.id != LemmaId::MainTheoremCycle;
    if (ratio_lemma) min_samples = std::min(min_samples, r.samples_run);
    min_margin = std::min(min_margin, r.min_margin);
    if (!r.passed() || !(r.min_margin > 0.0) || (ratio_lemma && r.samples_run < 1000)) {
      failed += " " + std::string(to_string(r.id));
    }
  }
  o.pass = failed.empty() && reports.size() == kRatioLemmaCount + 2;
  o.detail = std::to_string(reports.size()) + " checks; min samples per lemma " + std::to_string(min_samples) +
             "; min margin " + fmt("%.3e", min_margin) + "; " + fmt("%.2fs", seconds_since(t0));
  if (!failed.empty()) o.detail += "; failed:" + failed;
  return o;
}

Outcome scc_oracle() {
  Outcome o;
  Rng rng(derive_seed(2024, {9}));
  std::size_t agree = 0;
  std::size_t connected = 0;
  for (int k = 0; k < 1000; ++k) {
    const std::size_t n = 2 + rng.below(11);
    EfficiencyDigraph g(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        const std::uint64_t pick = rng.below(3);
        if (pick != 1) g.add_arc(i, j);
        if (pick != 0) g.add_arc(j, i);
      }
    }
    const bool tarjan = strongly_connected(g).strongly_connected;
    if (tarjan == reachability_oracle(g)) ++agree;
    if (tarjan) ++connected;
  }
  o.pass = agree == 1000;
  o.detail = "agree " + std::to_string(agree) + "/1000 (" + std::to_string(connected) + " strongly connected)";
  return o;
}

Outcome classification() {
  Outcome o;
  const Family families[] = {Family::Consistent, Family::Simple, Family::Case1, Family::Case2A, Family::Case2B};
  std::size_t ok = 0;
  std::size_t total = 0;
  Rng rng(derive_seed(2024, {10}));
  for (int k = 0; k < 300; ++k) {
    GeneratorSpec spec;
    spec.family = families[k % 5];
    switch (spec.family) {
      case Family::Consistent:
        spec.n = 2 + rng.below(8);
        break;
      case Family::Simple:
        spec.n = 3 + rng.below(7);
        break;
      case Family::Case1:
        spec.n = 4 + rng.below(6);
        break;
      case Family::Case2A:
        spec.n = 4;
        break;
      default:
        spec.n = 5 + rng.below(5);
    }
    spec.seed = derive_seed(2024, {10, static_cast<std::uint64_t>(k)});
    const Generated g = generate(spec);
    const PerturbationStructure s = classify_perturbation(g.matrix);
    ++total;
    auto close = [](const std::optional<double>& a, const std::optional<double>& b) {
      if (!a || !b) return !a && !b;
      return std::abs(*a / *b - 1.0) <= 1e-6;
    };
    if (s.tag == g.truth->tag && close(s.delta, g.truth->delta) && close(s.gamma, g.truth->gamma)) {
      ++ok;
    } else if (o.detail.empty()) {
      o.detail = "mismatch for " + std::string(to_string(spec.family)) + " n=" + std::to_string(spec.n) + "; ";
    }
  }
  o.pass = ok == total;
  o.detail += "recovered " + std::to_string(ok) + "/" + std::to_string(total);
  return o;
}

Outcome guarded(const std::function<Outcome()>& f) {
  try {
    return f();
  } catch (const std::exception& e) {
    return {false, std::string("exception: ") + e.what()};
  }
}

}  // namespace

int main() {
  std::vector<Outcome> outcomes;
  outcomes.push_back(guarded(example1));
  outcomes.push_back(guarded(main_theorem));
  outcomes.push_back(guarded(simple_theorem));
  outcomes.push_back(guarded(parametric));
  outcomes.push_back(guarded(charpoly));
  EigenStats st;
  try {
    st = eigen_stats();
    outcomes.push_back(closed_form(st));
    outcomes.push_back(lambda_agreement(st));
  } catch (const std::exception& e) {
    outcomes.push_back({false, std::string("exception: ") + e.what()});
    outcomes.push_back({false, std::string("exception: ") + e.what()});
  }
  outcomes.push_back(guarded(lemma_suite));
  outcomes.push_back(guarded(scc_oracle));
  outcomes.push_back(guarded(classification));

  int failures = 0;
  for (std::size_t k = 0; k < outcomes.size(); ++k) {
    std::printf("criterion %zu: %s  %s\n", k + 1, outcomes[k].pass ? "PASS" : "FAIL", outcomes[k].detail.c_str());
    if (!outcomes[k].pass) ++failures;
  }
  std::printf("%d of %zu criteria failed\n", failures, outcomes.size());
  return failures == 0 ? 0 : 1;
}
