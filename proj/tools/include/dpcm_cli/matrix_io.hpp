#pragma once

// Matrix files: first nonblank line is the order n, then n rows of n values.
// Values are decimals or rationals "p/q". '#' starts a comment. The CSV
// variant separates values with commas and may omit the order line.

#include <cstddef>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

#include "dpcm/pcm.hpp"

namespace dpcm::cli {

enum class MatrixFormat { Txt, Csv };

class ParseError : public std::runtime_error {
 public:
  /// line and column are 1-based; column 0 means the whole line.
  ParseError(std::size_t line, std::size_t column, const std::string& what);
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// Parses the text and validates it as a PCM (validation errors propagate
/// from make_pcm unchanged).
Pcm parse_matrix(std::string_view text, MatrixFormat format = MatrixFormat::Txt);

/// Throws std::runtime_error when the file cannot be read.
Pcm read_matrix_file(const std::filesystem::path& path, MatrixFormat format = MatrixFormat::Txt);

/// Writes values that are exact reciprocals of integers as "1/k", the rest
/// in shortest round-trip form.
std::string format_matrix(const Pcm& m, MatrixFormat format = MatrixFormat::Txt);

/// Shortest decimal that reads back to the same double.
std::string format_number(double v);

}  // namespace dpcm::cli
