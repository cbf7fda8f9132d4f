#include "dpcm/errors.hpp"

#include <sstream>

namespace dpcm {

namespace {

std::string entry_message(std::string_view what, std::size_t row, std::size_t col, double value) {
  std::ostringstream os;
  os.precision(17);
  os << what << " at (" << row + 1 << ", " << col + 1 << "): " << value;
  return os.str();
}

}  // namespace

NonPositiveEntry::NonPositiveEntry(std::size_t row, std::size_t col, double value)
    : Error(entry_message("entry is not a positive finite number", row, col, value)), row_(row), col_(col) {}

ReciprocityViolation::ReciprocityViolation(std::size_t row, std::size_t col, double product)
    : Error(entry_message("a_ij * a_ji differs from 1", row, col, product)), row_(row), col_(col) {}

NoConvergence::NoConvergence(int max_iter)
    : Error("power iteration did not converge within " + std::to_string(max_iter) + " iterations") {}

}  // namespace dpcm
