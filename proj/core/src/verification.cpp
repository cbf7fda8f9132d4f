#include "dpcm/verification.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <utility>

#include "dpcm/errors.hpp"

namespace dpcm {

namespace {

constexpr std::array<LemmaId, 30> kAllIds{
    LemmaId::L1a, LemmaId::L1b, LemmaId::L1c, LemmaId::L1d, LemmaId::L1e, LemmaId::L1f,
    LemmaId::L1g, LemmaId::L1h, LemmaId::L1i, LemmaId::L1j, LemmaId::L2a, LemmaId::L2b,
    LemmaId::L2c, LemmaId::L2d, LemmaId::L2e, LemmaId::L2f, LemmaId::L2g, LemmaId::L2h,
    LemmaId::L2i, LemmaId::L2j, LemmaId::L3a, LemmaId::L3b, LemmaId::L3c, LemmaId::L3d,
    LemmaId::L3e, LemmaId::L3f, LemmaId::L3g, LemmaId::L3h, LemmaId::PositivityRemark,
    LemmaId::MainTheoremCycle,
};

constexpr std::array<std::string_view, 30> kNames{
    "1a", "1b", "1c", "1d", "1e", "1f", "1g", "1h", "1i", "1j",
    "2a", "2b", "2c", "2d", "2e", "2f", "2g", "2h", "2i", "2j",
    "3a", "3b", "3c", "3d", "3e", "3f", "3g", "3h", "positivity", "cycle",
};

std::size_t min_order(DoubleCase kase) { return kase == DoubleCase::Case2B ? 5 : 4; }

bool order_fits(DoubleCase kase, std::size_t n) {
  if (kase == DoubleCase::Case2A) return n == 4;
  return n >= min_order(kase);
}

Relation less_if(bool condition) { return condition ? Relation::Less : Relation::Greater; }
Relation greater_if(bool condition) { return condition ? Relation::Greater : Relation::Less; }

/// Three-way relation: Greater when a > b, Equal when they coincide.
Relation ordering(double a, double b, double tol = 0.0) {
  if (std::abs(a - b) <= tol) return Relation::Equal;
  return a > b ? Relation::Greater : Relation::Less;
}

struct Evaluator {
  const Pcm& m;
  std::span<const double> w;
  const CheckOptions& opt;
  std::vector<Comparison> out;

  void add(std::size_t i, std::size_t j, Relation rel) {
    Comparison c;
    c.i = i;
    c.j = j;
    c.ratio = w[i] / w[j];
    c.target = m(i, j);
    c.expected = rel;
    switch (rel) {
      case Relation::Less:
        c.margin = (c.target - c.ratio) / c.target;
        break;
      case Relation::Greater:
        c.margin = (c.ratio - c.target) / c.target;
        break;
      case Relation::Equal:
        c.margin = opt.equality_tol - std::abs(c.ratio - c.target) / c.target;
        break;
      case Relation::AtLeast:
        c.margin = (c.ratio - c.target * (1.0 - opt.tie_tol)) / c.target;
        break;
    }
    out.push_back(c);
  }

  void add_block(std::size_t i, std::size_t from, Relation rel) {
    for (std::size_t k = from; k < m.order(); ++k) add(i, k, rel);
  }

  void add_block_equalities(std::size_t from) {
    for (std::size_t i = from; i < m.order(); ++i) {
      for (std::size_t j = i + 1; j < m.order(); ++j) add(i, j, Relation::Equal);
    }
  }
};

bool holds(const Comparison& c, const CheckOptions& opt) {
  switch (c.expected) {
    case Relation::Less:
    case Relation::Greater:
      return c.margin > opt.strict_margin;
    case Relation::Equal:
    case Relation::AtLeast:
      return c.margin >= 0.0;
  }
  return false;
}

LemmaCheck summarize(std::vector<Comparison> comparisons, const CheckOptions& opt) {
  LemmaCheck r;
  r.pass = !comparisons.empty();
  r.margin = std::numeric_limits<double>::infinity();
  for (const auto& c : comparisons) {
    r.pass = r.pass && holds(c, opt);
    r.margin = std::min(r.margin, c.margin);
  }
  r.comparisons = std::move(comparisons);
  return r;
}

double rayleigh_lambda(const Pcm& m, std::span<const double> w) {
  double aw = 0.0;
  double sw = 0.0;
  for (std::size_t i = 0; i < m.order(); ++i) {
    sw += w[i];
    for (std::size_t j = 0; j < m.order(); ++j) aw += m(i, j) * w[j];
  }
  return aw / sw;
}

LemmaCheck check_positivity(const LemmaSample& s, const Pcm& m, std::span<const double> w, const CheckOptions& opt) {
  const CharPolyParams params(s.kase, s.n, s.delta, s.gamma);
  const ConsistentBase base(s.x);
  const double lambda = lambda_max_closed_form(params);
  LemmaCheck r;
  r.pass = true;
  r.margin = std::numeric_limits<double>::infinity();
  for (const auto& v : variants_of(s.kase)) {
    const std::vector<double> raw = closed_form_raw(params, base, v, lambda);
    const auto [lo, hi] = std::minmax_element(raw.begin(), raw.end());
    const double ratio = *hi > 0.0 ? *lo / *hi : -1.0;
    r.margin = std::min(r.margin, ratio);
    if (!(*lo > 0.0)) r.pass = false;
  }
  const double lambda_pi = rayleigh_lambda(m, w);
  const double disagreement = std::abs(lambda_pi - lambda) / lambda;
  if (!(disagreement <= opt.lambda_tol)) {
    r.pass = false;
    r.margin = -disagreement;
  }
  return r;
}

LemmaCheck check_cycle(const LemmaSample& s, const Pcm& m, std::span<const double> w, const CheckOptions& opt) {
  const std::vector<std::size_t> cycle = theorem_cycle(s.kase, s.n, s.delta, s.gamma);
  Evaluator e{m, w, opt, {}};
  for (std::size_t k = 0; k + 1 < cycle.size(); ++k) e.add(cycle[k], cycle[k + 1], Relation::AtLeast);
  LemmaCheck r = summarize(std::move(e.out), opt);

  // The cycle visits every node, so with it the digraph must be strongly
  // connected whatever the remaining arcs are; every pair also has an arc in
  // at least one direction.
  const EfficiencyDigraph g = build_digraph(m, w, opt.tie_tol);
  for (std::size_t i = 0; i < s.n; ++i) {
    for (std::size_t j = i + 1; j < s.n; ++j) {
      if (!g.has_arc(i, j) && !g.has_arc(j, i)) r.pass = false;
    }
  }
  if (r.pass && !strongly_connected(g).strongly_connected) r.pass = false;
  return r;
}

std::string describe(const LemmaSample& s) {
  std::ostringstream os;
  os.precision(17);
  os << to_string(s.kase) << " n=" << s.n << " delta=" << s.delta << " gamma=" << s.gamma << " seed=" << s.seed;
  return os.str();
}

}  // namespace

std::span<const LemmaId> all_lemma_ids() { return kAllIds; }

std::string_view to_string(LemmaId id) { return kNames.at(static_cast<std::size_t>(id)); }

std::optional<LemmaId> parse_lemma_id(std::string_view name) {
  if (name.size() == 3 && (name.front() == 'L' || name.front() == 'l')) name.remove_prefix(1);
  for (std::size_t k = 0; k < kNames.size(); ++k) {
    if (kNames[k] == name) return kAllIds[k];
  }
  return std::nullopt;
}

std::optional<DoubleCase> case_of(LemmaId id) {
  const auto k = static_cast<int>(id);
  if (k <= static_cast<int>(LemmaId::L1j)) return DoubleCase::Case1;
  if (k <= static_cast<int>(LemmaId::L2j)) return DoubleCase::Case2A;
  if (k <= static_cast<int>(LemmaId::L3h)) return DoubleCase::Case2B;
  return std::nullopt;
}

std::string_view to_string(Relation r) {
  switch (r) {
    case Relation::Less:
      return "<";
    case Relation::Equal:
      return "=";
    case Relation::Greater:
      return ">";
    case Relation::AtLeast:
      return ">=";
  }
  return "?";
}

PerturbationStructure LemmaSample::structure() const {
  return double_structure(tag_of(kase), ConsistentBase(x), delta, gamma);
}

bool hypothesis_holds(LemmaId id, const LemmaSample& s) {
  const double d = s.delta;
  const double g = s.gamma;
  if (!(d > 0.0) || !(g > 0.0) || d == 1.0 || g == 1.0) return false;
  if (!order_fits(s.kase, s.n) || s.x.size() + 1 != s.n) return false;
  const auto kase = case_of(id);
  if (kase && *kase != s.kase) return false;
  switch (id) {
    case LemmaId::L1a:
      return d > 1.0 && d >= g;
    case LemmaId::L1b:
      return d < 1.0 && d <= g;
    case LemmaId::L1c:
      return g > 1.0 && g >= d;
    case LemmaId::L1d:
      return g < 1.0 && g <= d;
    case LemmaId::L1e:
    case LemmaId::L2e:
    case LemmaId::L2g:
      return d > 1.0 && g > 1.0;
    case LemmaId::L1f:
    case LemmaId::L2d:
    case LemmaId::L2f:
      return d < 1.0 && g < 1.0;
    case LemmaId::L1j:
      return s.n >= 5;
    case LemmaId::L2b:
    case LemmaId::L2i:
      return d > 1.0 && g < 1.0;
    case LemmaId::L2c:
    case LemmaId::L2h:
      return d < 1.0 && g > 1.0;
    case LemmaId::L3h:
      return s.n >= 6;
    default:
      return true;
  }
}

LemmaCheck check_lemma(LemmaId id, const LemmaSample& sample, const CheckOptions& options) {
  if (!hypothesis_holds(id, sample)) {
    throw HypothesisViolated("sample " + describe(sample) + " is outside the hypothesis of " +
                             std::string(to_string(id)));
  }
  const Pcm m = apply_perturbation(sample.structure());
  const SpectralResult eig = power_iteration(m, options.power_tol, options.power_max_iter);
  return check_lemma(id, sample, m, eig.w.values(), options);
}

LemmaCheck check_lemma(LemmaId id, const LemmaSample& s, const Pcm& m, std::span<const double> w,
                       const CheckOptions& opt) {
  if (!hypothesis_holds(id, s)) {
    throw HypothesisViolated("sample " + describe(s) + " is outside the hypothesis of " + std::string(to_string(id)));
  }
  if (m.order() != s.n || w.size() != s.n) throw std::invalid_argument("matrix or weights do not match the sample");
  const double d = s.delta;
  const double g = s.gamma;
  Evaluator e{m, w, opt, {}};
  switch (id) {
    case LemmaId::L1a:
      e.add(0, 1, Relation::Less);
      break;
    case LemmaId::L1b:
      e.add(0, 1, Relation::Greater);
      break;
    case LemmaId::L1c:
      e.add(0, 2, Relation::Less);
      break;
    case LemmaId::L1d:
      e.add(0, 2, Relation::Greater);
      break;
    case LemmaId::L1e:
      e.add_block(0, 3, Relation::Greater);
      break;
    case LemmaId::L1f:
      e.add_block(0, 3, Relation::Less);
      break;
    case LemmaId::L1g:
      e.add(1, 2, ordering(g, d));
      break;
    case LemmaId::L1h:
      e.add_block(1, 3, less_if(d > 1.0));
      break;
    case LemmaId::L1i:
      e.add_block(2, 3, less_if(g > 1.0));
      break;
    case LemmaId::L1j:
      e.add_block_equalities(3);
      break;
    case LemmaId::L2a:
    case LemmaId::L3b:
      e.add(0, 1, less_if(d > 1.0));
      break;
    case LemmaId::L2b:
      e.add(0, 2, Relation::Greater);
      break;
    case LemmaId::L2c:
      e.add(0, 2, Relation::Less);
      break;
    case LemmaId::L2d:
      e.add(0, 3, Relation::Less);
      break;
    case LemmaId::L2e:
      e.add(0, 3, Relation::Greater);
      break;
    case LemmaId::L2f:
      e.add(1, 2, Relation::Greater);
      break;
    case LemmaId::L2g:
      e.add(1, 2, Relation::Less);
      break;
    case LemmaId::L2h:
      e.add(1, 3, Relation::Greater);
      break;
    case LemmaId::L2i:
      e.add(1, 3, Relation::Less);
      break;
    case LemmaId::L2j:
    case LemmaId::L3a:
      e.add(2, 3, less_if(g > 1.0));
      break;
    case LemmaId::L3c:
      e.add_block(0, 4, greater_if(d > 1.0));
      break;
    case LemmaId::L3d:
      e.add_block(1, 4, less_if(d > 1.0));
      break;
    case LemmaId::L3e:
      e.add_block(2, 4, greater_if(g > 1.0));
      break;
    case LemmaId::L3f:
      e.add(1, 3, ordering(g, d));
      break;
    case LemmaId::L3g:
      e.add(0, 3, ordering(g * d, 1.0, opt.product_tol));
      break;
    case LemmaId::L3h:
      e.add_block_equalities(4);
      break;
    case LemmaId::PositivityRemark:
      return check_positivity(s, m, w, opt);
    case LemmaId::MainTheoremCycle:
      return check_cycle(s, m, w, opt);
  }
  return summarize(std::move(e.out), opt);
}

int sign_region(DoubleCase kase, double d, double g) {
  if (d == 1.0 || g == 1.0) throw HypothesisViolated("the case analysis excludes delta = 1 and gamma = 1");
  if (kase == DoubleCase::Case1) {
    if (d > 1.0 && g >= d) return 0;
    if (g > 1.0 && g < d) return 1;
    if (d > 1.0 && g < 1.0) return 2;
    if (d < 1.0 && g <= d) return 3;
    if (g < 1.0 && g > d) return 4;
    return 5;
  }
  if (d > 1.0) return g > 1.0 ? 0 : 1;
  return g < 1.0 ? 2 : 3;
}

int sign_region_count(DoubleCase kase) { return kase == DoubleCase::Case1 ? 6 : 4; }

std::vector<std::size_t> theorem_cycle(DoubleCase kase, std::size_t n, double delta, double gamma) {
  if (!order_fits(kase, n)) throw IncompatibleOrder("order " + std::to_string(n) + " does not fit " + std::string(to_string(kase)));
  const int region = sign_region(kase, delta, gamma);
  constexpr std::size_t B = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> pattern;
  std::size_t block_start = n;
  switch (kase) {
    case DoubleCase::Case1: {
      static const std::vector<std::size_t> kCase1[6] = {
          {0, B, 1, 2, 0}, {0, B, 2, 1, 0}, {0, 2, B, 1, 0},
          {0, 2, 1, B, 0}, {0, 1, 2, B, 0}, {0, 1, B, 2, 0},
      };
      pattern = kCase1[region];
      block_start = 3;
      break;
    }
    case DoubleCase::Case2A: {
      static const std::vector<std::size_t> kCase2A[4] = {
          {0, 3, 2, 1, 0}, {0, 2, 3, 1, 0}, {0, 1, 2, 3, 0}, {0, 1, 3, 2, 0},
      };
      pattern = kCase2A[region];
      break;
    }
    case DoubleCase::Case2B: {
      static const std::vector<std::size_t> kCase2B[4] = {
          {0, 3, 2, B, 1, 0}, {0, B, 2, 3, 1, 0}, {0, 1, B, 2, 3, 0}, {0, 1, 3, 2, B, 0},
      };
      pattern = kCase2B[region];
      block_start = 4;
      break;
    }
  }
  std::vector<std::size_t> cycle;
  for (std::size_t v : pattern) {
    if (v != B) {
      cycle.push_back(v);
      continue;
    }
    for (std::size_t k = block_start; k < n; ++k) cycle.push_back(k);
  }
  return cycle;
}

std::vector<LemmaSample> lemma_grid_samples(const LemmaGrid& grid, std::uint64_t seed) {
  std::vector<double> factors;
  for (double f : grid.factors) {
    if (f > 0.0 && std::abs(f - 1.0) >= grid.exclusion) factors.push_back(f);
  }
  std::vector<LemmaSample> samples;
  auto add_points = [&](DoubleCase kase, std::size_t n, std::size_t bases) {
    for (std::size_t di = 0; di < factors.size(); ++di) {
      for (std::size_t gi = 0; gi < factors.size(); ++gi) {
        for (std::size_t b = 0; b < bases; ++b) {
          LemmaSample s;
          s.kase = kase;
          s.n = n;
          s.delta = factors[di];
          s.gamma = factors[gi];
          s.seed = derive_seed(seed, {static_cast<std::uint64_t>(kase), n, di, gi, b});
          Rng rng(s.seed);
          s.x = random_base(rng, n, grid.base_range).x();
          samples.push_back(std::move(s));
        }
      }
    }
  };
  for (std::size_t n = std::max<std::size_t>(grid.case1_min_n, 4); n <= grid.case1_max_n; ++n) {
    add_points(DoubleCase::Case1, n, grid.bases_per_point);
  }
  add_points(DoubleCase::Case2A, 4, grid.case2a_bases_per_point);
  for (std::size_t n = std::max<std::size_t>(grid.case2b_min_n, 5); n <= grid.case2b_max_n; ++n) {
    add_points(DoubleCase::Case2B, n, grid.bases_per_point);
  }
  return samples;
}

std::vector<LemmaReport> run_lemma_suite(const LemmaGrid& grid, std::uint64_t seed, std::span<const LemmaId> ids) {
  std::vector<LemmaReport> reports;
  for (LemmaId id : ids) {
    LemmaReport r;
    r.id = id;
    r.min_margin = std::numeric_limits<double>::infinity();
    reports.push_back(std::move(r));
  }
  auto record = [&grid](LemmaReport& r, const LemmaSample& s, LemmaCheck check) {
    ++r.samples_run;
    r.min_margin = std::min(r.min_margin, check.margin);
    if (check.pass) return;
    ++r.violation_count;
    if (r.violations.size() < grid.max_recorded_violations) {
      r.violations.push_back({s, std::move(check.comparisons), check.margin});
    }
  };

  for (const LemmaSample& s : lemma_grid_samples(grid, seed)) {
    const Pcm m = apply_perturbation(s.structure());
    std::optional<SpectralResult> eig;
    try {
      eig = power_iteration(m, grid.check.power_tol, grid.check.power_max_iter);
    } catch (const NoConvergence&) {
      eig.reset();
    }
    for (LemmaReport& r : reports) {
      if (!hypothesis_holds(r.id, s)) continue;
      if (!eig) {
        LemmaCheck failed;
        failed.margin = -std::numeric_limits<double>::infinity();
        record(r, s, std::move(failed));
        continue;
      }
      record(r, s, check_lemma(r.id, s, m, eig->w.values(), grid.check));
    }
  }
  return reports;
}

namespace {

constexpr std::size_t kMaxFailures = 10;

struct SampleOutcome {
  bool efficient = false;
  std::string label;
};

SampleOutcome run_sample(const GeneratorSpec& spec, const TheoremOptions& opt) {
  const Generated g = generate(spec);
  std::ostringstream os;
  os.precision(17);
  os << to_string(spec.family) << " n=" << spec.n;
  if (g.truth && g.truth->delta) os << " delta=" << *g.truth->delta;
  if (g.truth && g.truth->gamma) os << " gamma=" << *g.truth->gamma;
  if (spec.family == Family::ParametricAPQ) os << " p=" << spec.p << " q=" << spec.q;
  os << " seed=" << spec.seed;
  SampleOutcome out;
  out.label = os.str();
  const SpectralResult eig = power_iteration(g.matrix, opt.power_tol, opt.power_max_iter);
  out.efficient = is_efficient(g.matrix, eig.w.values(), opt.tie_tol).efficient;
  return out;
}

void tally(TheoremSummary& summary, bool ok, const std::string& label) {
  ++summary.samples;
  if (ok) {
    ++summary.passed;
  } else if (summary.failures.size() < kMaxFailures) {
    summary.failures.push_back(label);
  }
}

GeneratorSpec random_spec(Family family, std::size_t n, Rng& rng, const TheoremOptions& opt) {
  GeneratorSpec spec;
  spec.family = family;
  spec.n = n;
  spec.perturbation_range = opt.factor_range;
  spec.exclusion = opt.exclusion;
  spec.base_range = opt.base_range;
  spec.seed = rng.next();
  return spec;
}

}  // namespace

TheoremSummary verify_main_theorem(std::size_t samples, std::uint64_t seed, const TheoremOptions& opt) {
  TheoremSummary summary;
  summary.name = "main";
  for (std::size_t k = 0; k < samples; ++k) {
    Rng rng(derive_seed(seed, {0x6d61696eULL, k}));
    Family family = Family::Case1;
    std::size_t n = 4;
    switch (rng.below(3)) {
      case 0:
        n = 4 + rng.below(opt.case1_max_n - 3);
        break;
      case 1:
        family = Family::Case2A;
        break;
      default:
        family = Family::Case2B;
        n = 5 + rng.below(opt.case2b_max_n - 4);
        break;
    }
    const SampleOutcome out = run_sample(random_spec(family, n, rng, opt), opt);
    tally(summary, out.efficient, out.label);
  }
  return summary;
}

TheoremSummary verify_simple_theorem(std::size_t samples, std::uint64_t seed, const TheoremOptions& opt) {
  TheoremSummary summary;
  summary.name = "simple";
  for (std::size_t k = 0; k < samples; ++k) {
    Rng rng(derive_seed(seed, {0x73696d70ULL, k}));
    const std::size_t n = 3 + rng.below(opt.simple_max_n - 2);
    const SampleOutcome out = run_sample(random_spec(Family::Simple, n, rng, opt), opt);
    tally(summary, out.efficient, out.label);
  }
  return summary;
}

TheoremSummary verify_apq_inefficiency(std::size_t samples, std::uint64_t seed, const TheoremOptions& opt) {
  static constexpr double kP[] = {1.0 / 3.0, 1.0, 3.0};
  static constexpr double kQ[] = {0.5, 2.0, 5.0};
  struct Point {
    std::size_t n;
    double p;
    double q;
  };
  std::vector<Point> points;
  for (std::size_t n = 4; n <= 8; ++n) {
    for (double p : kP) {
      for (double q : kQ) points.push_back({n, p, q});
    }
  }
  TheoremSummary summary;
  summary.name = "apq";
  Rng rng(derive_seed(seed, {0x617071ULL}));
  const std::size_t offset = rng.below(points.size());
  for (std::size_t k = 0; k < samples; ++k) {
    const Point& pt = points[(offset + k) % points.size()];
    GeneratorSpec spec;
    spec.family = Family::ParametricAPQ;
    spec.n = pt.n;
    spec.p = pt.p;
    spec.q = pt.q;
    spec.seed = seed;
    const SampleOutcome out = run_sample(spec, opt);
    tally(summary, !out.efficient, out.label);
  }
  return summary;
}

}  // namespace dpcm
