#include "dpcm_cli/report.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "dpcm/errors.hpp"

namespace dpcm::cli {

namespace {

json one_based(const std::vector<std::size_t>& v) {
  json out = json::array();
  for (std::size_t k : v) out.push_back(k + 1);
  return out;
}

json numbers(std::span<const double> v) {
  json out = json::array();
  for (double x : v) out.push_back(number(x));
  return out;
}

json positions(const std::vector<Position>& ps) {
  json out = json::array();
  for (const Position& p : ps) out.push_back(json::array({p.row + 1, p.col + 1}));
  return out;
}

json comparison(const Comparison& c) {
  return {{"i", c.i + 1},           {"j", c.j + 1},
          {"ratio", number(c.ratio)}, {"target", number(c.target)},
          {"relation", std::string(to_string(c.expected))}, {"margin", number(c.margin)}};
}

bool is_scalar_array(const json& v) {
  return v.is_array() && std::all_of(v.begin(), v.end(), [](const json& e) { return e.is_primitive(); });
}

void render(const json& v, const std::string& path, std::ostringstream& os) {
  if (v.is_object()) {
    for (const auto& [key, child] : v.items()) render(child, path.empty() ? key : path + "." + key, os);
    return;
  }
  if (v.is_array() && !is_scalar_array(v)) {
    if (v.empty()) {
      os << path << ": []\n";
      return;
    }
    for (std::size_t k = 0; k < v.size(); ++k) render(v[k], path + "[" + std::to_string(k) + "]", os);
    return;
  }
  os << path << ":";
  if (v.is_array()) {
    if (v.empty()) os << " []";
    for (const json& e : v) os << " " << (e.is_string() ? e.get<std::string>() : e.dump());
  } else {
    os << " " << (v.is_string() ? v.get<std::string>() : v.dump());
  }
  os << "\n";
}

}  // namespace

json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

Analysis analyze(const Pcm& m, const AnalysisOptions& opt) {
  Analysis a{m, classify_perturbation(m, opt.consistency_tol), power_iteration(m, opt.power_tol, opt.power_max_iter),
             std::nullopt, EfficiencyVerdict{}, std::nullopt};
  if (is_double_perturbed(a.structure.tag)) {
    try {
      ClosedFormPath cf;
      cf.variant = default_variant(a.structure);
      cf.lambda_max = lambda_max_closed_form(CharPolyParams::from_structure(a.structure));
      cf.w = to_original_labels(closed_form_eigenvector(a.structure, cf.variant), a.structure.permutation);
      for (std::size_t i = 0; i < cf.w.size(); ++i) {
        cf.max_abs_diff = std::max(cf.max_abs_diff, std::abs(cf.w[i] - a.eig.w[i]));
      }
      a.closed_form = std::move(cf);
    } catch (const DegenerateParameters&) {
      a.closed_form.reset();
    }
  }
  a.verdict = is_efficient(m, a.eig.w.values(), opt.tie_tol);
  a.improvement = find_sink_improvement(m, a.eig.w.values(), a.verdict);
  return a;
}

json to_json(const PerturbationStructure& s) {
  json out = {{"tag", std::string(to_string(s.tag))}};
  if (s.base) out["base"] = numbers(s.base->x());
  if (s.delta) out["delta"] = number(*s.delta);
  if (s.gamma) out["gamma"] = number(*s.gamma);
  out["positions"] = positions(s.positions);
  out["permutation"] = one_based(s.permutation);
  json alts = json::array();
  for (const auto& alt : s.alternatives) alts.push_back(positions(alt));
  out["alternatives"] = alts;
  return out;
}

json to_json(const Analysis& a) {
  const std::size_t n = a.matrix.order();
  json matrix = json::array();
  for (std::size_t i = 0; i < n; ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < n; ++j) row.push_back(number(a.matrix(i, j)));
    matrix.push_back(row);
  }
  json out;
  out["order"] = n;
  out["matrix"] = matrix;
  out["classification"] = to_json(a.structure);
  out["eigen"] = {{"lambda_max", number(a.eig.lambda_max)},
                  {"w", numbers(a.eig.w.values())},
                  {"residual", number(a.eig.residual)},
                  {"iterations", a.eig.iterations}};
  if (a.closed_form) {
    out["closed_form"] = {{"lambda_max", number(a.closed_form->lambda_max)},
                          {"variant", a.closed_form->variant.column + 1},
                          {"w", numbers(a.closed_form->w.values())},
                          {"max_abs_diff", number(a.closed_form->max_abs_diff)}};
  } else {
    out["closed_form"] = nullptr;
  }
  json arcs = json::array();
  for (const Arc& arc : a.verdict.digraph.arcs()) arcs.push_back(json::array({arc.from + 1, arc.to + 1}));
  json components = json::array();
  for (const auto& c : a.verdict.scc.components) components.push_back(one_based(c));
  out["efficiency"] = {{"efficient", a.verdict.efficient},
                       {"arcs", arcs},
                       {"components", components},
                       {"sink_set", one_based(a.verdict.sink_set)},
                       {"dominating_w", a.improvement ? numbers(*a.improvement) : json(nullptr)}};
  return out;
}

json to_json(const LemmaReport& r) {
  json violations = json::array();
  for (const Violation& v : r.violations) {
    json observed = json::array();
    for (const Comparison& c : v.observed) observed.push_back(comparison(c));
    violations.push_back({{"case", std::string(to_string(v.sample.kase))},
                          {"n", v.sample.n},
                          {"delta", number(v.sample.delta)},
                          {"gamma", number(v.sample.gamma)},
                          {"x", numbers(v.sample.x)},
                          {"seed", v.sample.seed},
                          {"observed", observed},
                          {"margin", number(v.margin)}});
  }
  return {{"id", std::string(to_string(r.id))},
          {"passed", r.passed()},
          {"samples_run", r.samples_run},
          {"violation_count", r.violation_count},
          {"min_margin", number(r.min_margin)},
          {"violations", violations}};
}

json to_json(const TheoremSummary& s) {
  return {{"name", s.name}, {"ok", s.ok()}, {"samples", s.samples}, {"passed", s.passed}, {"failures", s.failures}};
}

json to_json(const GeneratorSpec& spec) {
  json out = {{"family", std::string(to_string(spec.family))}, {"n", spec.n}, {"seed", spec.seed}};
  if (spec.delta) out["delta"] = number(*spec.delta);
  if (spec.gamma) out["gamma"] = number(*spec.gamma);
  if (spec.family == Family::ParametricAPQ) {
    out["p"] = number(spec.p);
    out["q"] = number(spec.q);
  }
  if (spec.x) out["x"] = numbers(*spec.x);
  return out;
}

std::string render_text(const json& doc) {
  std::ostringstream os;
  render(doc, "", os);
  return os.str();
}

}  // namespace dpcm::cli
