#include "dpcm_cli/app.hpp"

#include <chrono>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dpcm/errors.hpp"
#include "dpcm_cli/dot.hpp"
#include "dpcm_cli/matrix_io.hpp"
#include "dpcm_cli/report.hpp"

namespace dpcm::cli {

namespace {

const std::map<std::string, MatrixFormat> kFormats{{"txt", MatrixFormat::Txt}, {"csv", MatrixFormat::Csv}};

struct AnalyzeArgs {
  std::string path;
  MatrixFormat format = MatrixFormat::Txt;
  bool json = false;
  std::string dot_path;
  AnalysisOptions options;
};

struct GenerateArgs {
  std::string family;
  std::size_t n = 4;
  std::optional<double> delta;
  std::optional<double> gamma;
  double p = 2.0;
  double q = 3.0;
  std::vector<double> x;
  std::uint64_t seed = 0;
  std::string out_path;
  std::string sidecar_path;
  MatrixFormat format = MatrixFormat::Txt;
};

struct VerifyArgs {
  std::string lemmas;
  std::vector<std::string> theorems;
  std::optional<std::size_t> samples;
  std::optional<std::size_t> bases;
  std::uint64_t seed = 42;
  bool json = false;
  CheckOptions check;
};

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << content;
  if (!f) throw std::runtime_error("failed writing " + path);
}

void emit(std::ostream& out, const json& doc, bool as_json) {
  if (as_json) {
    out << doc.dump(2) << "\n";
  } else {
    out << render_text(doc);
  }
}

int cmd_analyze(const AnalyzeArgs& args, std::ostream& out) {
  const auto start = std::chrono::steady_clock::now();
  const Pcm m = read_matrix_file(args.path, args.format);
  const Analysis a = analyze(m, args.options);
  if (!args.dot_path.empty()) write_file(args.dot_path, to_dot(a.verdict.digraph));

  json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["command"] = "analyze";
  doc["input"] = {{"path", args.path}, {"format", args.format == MatrixFormat::Csv ? "csv" : "txt"}};
  doc.update(to_json(a));
  doc["tolerances"] = {{"consistency", args.options.consistency_tol},
                       {"power", args.options.power_tol},
                       {"max_iter", args.options.power_max_iter},
                       {"tie", args.options.tie_tol}};
  doc["timing_ms"] = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  emit(out, doc, args.json);
  return a.verdict.efficient ? kExitOk : kExitNegative;
}

int cmd_generate(const GenerateArgs& args, std::ostream& out) {
  const auto family = parse_family(args.family);
  if (!family) throw std::invalid_argument("unknown family '" + args.family + "'");
  GeneratorSpec spec;
  spec.family = *family;
  spec.n = args.n;
  spec.delta = args.delta;
  spec.gamma = args.gamma;
  spec.p = args.p;
  spec.q = args.q;
  if (!args.x.empty()) spec.x = args.x;
  spec.seed = args.seed;
  const Generated g = generate(spec);

  const std::string text = format_matrix(g.matrix, args.format);
  if (args.out_path.empty()) {
    out << text;
  } else {
    write_file(args.out_path, text);
  }
  std::string sidecar = args.sidecar_path;
  if (sidecar.empty() && !args.out_path.empty()) sidecar = args.out_path + ".json";
  if (!sidecar.empty()) {
    json doc = {{"schema_version", kSchemaVersion}, {"command", "generate"}, {"spec", to_json(spec)}};
    doc["truth"] = g.truth ? to_json(*g.truth) : json(nullptr);
    write_file(sidecar, doc.dump(2) + "\n");
  }
  return kExitOk;
}

std::vector<LemmaId> parse_lemma_list(const std::string& spec) {
  if (spec == "all") return {all_lemma_ids().begin(), all_lemma_ids().end()};
  std::vector<LemmaId> ids;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto id = parse_lemma_id(item);
    if (!id) throw std::invalid_argument("unknown lemma '" + item + "'");
    ids.push_back(*id);
  }
  if (ids.empty()) throw std::invalid_argument("empty lemma list");
  return ids;
}

std::size_t ceil_div(std::size_t a, std::size_t b) { return (a + b - 1) / b; }

/// Raises the bases per grid point until every requested id sees at least
/// `min_samples` samples. Counts grow linearly in the bases, so one pass with
/// a single base per point is enough to size the grid.
void size_grid(LemmaGrid& grid, const std::vector<LemmaId>& ids, std::size_t min_samples) {
  LemmaGrid unit = grid;
  unit.bases_per_point = 1;
  unit.case2a_bases_per_point = 1;
  const auto samples = lemma_grid_samples(unit, 0);
  for (LemmaId id : ids) {
    std::size_t count = 0;
    for (const auto& s : samples) count += hypothesis_holds(id, s) ? 1 : 0;
    if (count == 0) continue;
    const std::size_t need = ceil_div(min_samples, count);
    const auto kase = case_of(id);
    if (!kase || *kase != DoubleCase::Case2A) grid.bases_per_point = std::max(grid.bases_per_point, need);
    if (!kase || *kase == DoubleCase::Case2A) grid.case2a_bases_per_point = std::max(grid.case2a_bases_per_point, need);
  }
}

int cmd_verify(const VerifyArgs& args, std::ostream& out) {
  const auto start = std::chrono::steady_clock::now();
  std::string lemma_spec = args.lemmas;
  std::vector<std::string> theorems = args.theorems;
  if (lemma_spec.empty() && theorems.empty()) {
    lemma_spec = "all";
    theorems = {"main", "simple", "apq"};
  }
  if (std::find(theorems.begin(), theorems.end(), "all") != theorems.end()) theorems = {"main", "simple", "apq"};

  json doc = {{"schema_version", kSchemaVersion}, {"command", "verify"}, {"seed", args.seed}};
  bool all_ok = true;

  json lemmas = json::array();
  if (!lemma_spec.empty()) {
    const std::vector<LemmaId> ids = parse_lemma_list(lemma_spec);
    LemmaGrid grid;
    grid.check = args.check;
    if (args.bases) grid.bases_per_point = *args.bases;
    if (args.samples) size_grid(grid, ids, *args.samples);
    for (const LemmaReport& r : run_lemma_suite(grid, args.seed, ids)) {
      all_ok = all_ok && r.passed();
      lemmas.push_back(to_json(r));
    }
    doc["grid"] = {{"bases_per_point", grid.bases_per_point}, {"case2a_bases_per_point", grid.case2a_bases_per_point}};
  }
  doc["lemmas"] = lemmas;

  json theorem_reports = json::array();
  for (const std::string& name : theorems) {
    TheoremSummary s;
    if (name == "main") {
      s = verify_main_theorem(args.samples.value_or(1000), args.seed);
    } else if (name == "simple") {
      s = verify_simple_theorem(args.samples.value_or(500), args.seed);
    } else if (name == "apq") {
      s = verify_apq_inefficiency(args.samples.value_or(100), args.seed);
    } else {
      throw std::invalid_argument("unknown theorem '" + name + "'");
    }
    all_ok = all_ok && s.ok();
    theorem_reports.push_back(to_json(s));
  }
  doc["theorems"] = theorem_reports;
  doc["all_passed"] = all_ok;
  doc["timing_ms"] = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();

  if (args.json) {
    out << doc.dump(2) << "\n";
  } else {
    for (const json& r : doc["lemmas"]) {
      out << "lemma " << r["id"].get<std::string>() << ": " << (r["passed"].get<bool>() ? "pass" : "FAIL")
          << " samples=" << r["samples_run"].dump() << " violations=" << r["violation_count"].dump()
          << " min_margin=" << r["min_margin"].dump() << "\n";
    }
    for (const json& t : doc["theorems"]) {
      out << "theorem " << t["name"].get<std::string>() << ": " << (t["ok"].get<bool>() ? "pass" : "FAIL") << " "
          << t["passed"].dump() << "/" << t["samples"].dump() << "\n";
      for (const json& f : t["failures"]) out << "  failed: " << f.get<std::string>() << "\n";
    }
    out << "all_passed: " << (all_ok ? "true" : "false") << "\n";
  }
  return all_ok ? kExitOk : kExitNegative;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Pairwise comparison matrices: eigenvector weights, efficiency and perturbation analysis", "dpcm"};
  app.require_subcommand(1);

  AnalyzeArgs an;
  auto* analyze_cmd = app.add_subcommand("analyze", "Classify a matrix, compute its eigenvector and decide efficiency");
  analyze_cmd->add_option("path", an.path, "Matrix file")->required();
  analyze_cmd->add_option("--format", an.format, "Input format")->transform(CLI::CheckedTransformer(kFormats));
  analyze_cmd->add_flag("--json", an.json, "Emit a JSON report");
  analyze_cmd->add_option("--digraph-dot", an.dot_path, "Write the efficiency digraph in DOT format");
  analyze_cmd->add_option("--tol-consistency", an.options.consistency_tol, "Relative tolerance of consistency")
      ->capture_default_str();
  analyze_cmd->add_option("--tol-power", an.options.power_tol, "Power iteration residual tolerance")
      ->capture_default_str();
  analyze_cmd->add_option("--max-iter", an.options.power_max_iter, "Power iteration limit")->capture_default_str();
  analyze_cmd->add_option("--tol-tie", an.options.tie_tol, "Relative tolerance for arcs w_i/w_j >= a_ij")
      ->capture_default_str();

  GenerateArgs gen;
  auto* generate_cmd = app.add_subcommand("generate", "Write a matrix of a given family");
  generate_cmd->add_option("--family", gen.family, "consistent, simple, case1, case2a, case2b, example1 or apq")
      ->required();
  generate_cmd->add_option("--n", gen.n, "Order")->capture_default_str();
  generate_cmd->add_option("--delta", gen.delta, "First perturbation factor (random when omitted)");
  generate_cmd->add_option("--gamma", gen.gamma, "Second perturbation factor (random when omitted)");
  generate_cmd->add_option("--p", gen.p, "Parameter p of the apq family")->capture_default_str();
  generate_cmd->add_option("--q", gen.q, "Parameter q of the apq family")->capture_default_str();
  generate_cmd->add_option("--x", gen.x, "Base vector x_1 .. x_{n-1} (random when omitted)");
  generate_cmd->add_option("--seed", gen.seed, "Random seed")->capture_default_str();
  generate_cmd->add_option("--out", gen.out_path, "Output file (stdout when omitted)");
  generate_cmd->add_option("--sidecar", gen.sidecar_path, "Ground-truth JSON (default: OUT.json)");
  generate_cmd->add_option("--format", gen.format, "Output format")->transform(CLI::CheckedTransformer(kFormats));

  VerifyArgs ver;
  auto* verify_cmd = app.add_subcommand("verify", "Run the lemma suite and theorem checks");
  verify_cmd->add_option("--lemmas", ver.lemmas, "'all' or a comma separated list such as 1a,2j,positivity");
  verify_cmd->add_option("--theorem", ver.theorems, "main, simple, apq or all (repeatable)");
  verify_cmd->add_option("--samples", ver.samples,
                         "Samples per theorem check; for lemmas, the minimum number of samples per lemma");
  verify_cmd->add_option("--bases", ver.bases, "Random bases per grid point");
  verify_cmd->add_option("--seed", ver.seed, "Random seed")->capture_default_str();
  verify_cmd->add_flag("--json", ver.json, "Emit a JSON report");
  verify_cmd->add_option("--tol-strict", ver.check.strict_margin, "Smallest normalized margin of a strict inequality")
      ->capture_default_str();
  verify_cmd->add_option("--tol-equality", ver.check.equality_tol, "Relative tolerance of equality claims")
      ->capture_default_str();
  verify_cmd->add_option("--tol-tie", ver.check.tie_tol, "Relative tolerance for arcs")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitError;
  }

  try {
    if (*analyze_cmd) return cmd_analyze(an, out);
    if (*generate_cmd) return cmd_generate(gen, out);
    if (*verify_cmd) return cmd_verify(ver, out);
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return kExitParseError;
  } catch (const IncompatibleOrder& e) {
    err << "incompatible order: " << e.what() << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}

}  // namespace dpcm::cli
