#include "dpcm_cli/dot.hpp"

#include <sstream>

namespace dpcm::cli {

std::string to_dot(const EfficiencyDigraph& g, const std::string& name) {
  std::ostringstream os;
  os << "digraph " << name << " {\n";
  os << "  node [shape=circle];\n";
  for (std::size_t v = 0; v < g.order(); ++v) os << "  " << v + 1 << ";\n";
  for (const Arc& a : g.arcs()) os << "  " << a.from + 1 << " -> " << a.to + 1 << ";\n";
  os << "}\n";
  return os.str();
}

}  // namespace dpcm::cli
