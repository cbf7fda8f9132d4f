#pragma once

// Machine-readable reports. Text output is rendered from the same JSON
// document, so both modes print identical numbers.

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "dpcm/efficiency.hpp"
#include "dpcm/generators.hpp"
#include "dpcm/pcm.hpp"
#include "dpcm/spectral.hpp"
#include "dpcm/verification.hpp"

namespace dpcm::cli {

inline constexpr int kSchemaVersion = 1;

using nlohmann::json;

struct AnalysisOptions {
  double consistency_tol = kDefaultConsistencyTol;
  double power_tol = kDefaultPowerTol;
  int power_max_iter = kDefaultPowerMaxIter;
  double tie_tol = kDefaultTieTol;
};

struct ClosedFormPath {
  double lambda_max = 0.0;
  ClosedFormVariant variant;
  /// Original labels.
  WeightVector w;
  double max_abs_diff = 0.0;
};

struct Analysis {
  Pcm matrix;
  PerturbationStructure structure;
  SpectralResult eig;
  std::optional<ClosedFormPath> closed_form;
  EfficiencyVerdict verdict;
  std::optional<std::vector<double>> improvement;
};

Analysis analyze(const Pcm& m, const AnalysisOptions& options = {});

/// Finite doubles as numbers, anything else as null.
json number(double v);

json to_json(const PerturbationStructure& s);
json to_json(const Analysis& a);
json to_json(const LemmaReport& r);
json to_json(const TheoremSummary& s);
json to_json(const GeneratorSpec& spec);

/// One "path: value" line per leaf; arrays of scalars on one line.
std::string render_text(const json& doc);

}  // namespace dpcm::cli
