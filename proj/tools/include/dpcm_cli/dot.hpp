#pragma once

#include <string>

#include "dpcm/efficiency.hpp"

namespace dpcm::cli {

/// Graphviz digraph with nodes 1..n and one edge per arc, ascending (i, j).
std::string to_dot(const EfficiencyDigraph& g, const std::string& name = "efficiency");

}  // namespace dpcm::cli
