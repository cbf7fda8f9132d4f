#include "dpcm_cli/matrix_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <system_error>
#include <vector>

namespace dpcm::cli {

namespace {

struct Token {
  std::string_view text;
  std::size_t column;
};

struct Line {
  std::size_t number;
  std::vector<Token> tokens;
};

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\f' || c == '\v'; }

std::vector<Token> split(std::string_view line, std::size_t line_no, MatrixFormat format) {
  std::vector<Token> out;
  if (format == MatrixFormat::Txt) {
    std::size_t k = 0;
    while (k < line.size()) {
      while (k < line.size() && is_space(line[k])) ++k;
      const std::size_t start = k;
      while (k < line.size() && !is_space(line[k])) ++k;
      if (k > start) out.push_back({line.substr(start, k - start), start + 1});
    }
    return out;
  }
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    const std::size_t end = comma == std::string_view::npos ? line.size() : comma;
    std::size_t b = start;
    std::size_t e = end;
    while (b < e && is_space(line[b])) ++b;
    while (e > b && is_space(line[e - 1])) --e;
    if (b == e) throw ParseError(line_no, start + 1, "empty field");
    out.push_back({line.substr(b, e - b), b + 1});
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

std::vector<Line> tokenize(std::string_view text, MatrixFormat format) {
  std::vector<Line> lines;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    const std::size_t end = nl == std::string_view::npos ? text.size() : nl;
    std::string_view line = text.substr(pos, end - pos);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    bool blank = true;
    for (char c : line) blank = blank && is_space(c);
    if (!blank) lines.push_back({line_no, split(line, line_no, format)});
    if (nl == std::string_view::npos) break;
    pos = nl + 1;
  }
  return lines;
}

double parse_decimal(std::string_view s, std::size_t line, std::size_t column) {
  double v = 0.0;
  const char* first = s.data();
  if (!s.empty() && s.front() == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || first == s.data() + s.size()) {
    throw ParseError(line, column, "invalid number '" + std::string(s) + "'");
  }
  return v;
}

double parse_value(const Token& t, std::size_t line) {
  const auto slash = t.text.find('/');
  double v = 0.0;
  if (slash == std::string_view::npos) {
    v = parse_decimal(t.text, line, t.column);
  } else {
    const double num = parse_decimal(t.text.substr(0, slash), line, t.column);
    const double den = parse_decimal(t.text.substr(slash + 1), line, t.column + slash + 1);
    if (den == 0.0) throw ParseError(line, t.column + slash + 1, "zero denominator");
    v = num / den;
  }
  if (!std::isfinite(v)) throw ParseError(line, t.column, "value is not finite");
  return v;
}

std::size_t parse_order(const Token& t, std::size_t line) {
  std::size_t n = 0;
  const auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), n);
  if (ec != std::errc() || ptr != t.text.data() + t.text.size()) {
    throw ParseError(line, t.column, "expected the matrix order, found '" + std::string(t.text) + "'");
  }
  if (n < 2) throw ParseError(line, t.column, "matrix order must be at least 2");
  return n;
}

}  // namespace

ParseError::ParseError(std::size_t line, std::size_t column, const std::string& what)
    : std::runtime_error("line " + std::to_string(line) + (column ? ", column " + std::to_string(column) : "") +
                         ": " + what),
      line_(line),
      column_(column) {}

Pcm parse_matrix(std::string_view text, MatrixFormat format) {
  const std::vector<Line> lines = tokenize(text, format);
  if (lines.empty()) throw ParseError(1, 0, "empty input");

  std::size_t first_row = 0;
  std::size_t n = 0;
  const Line& head = lines.front();
  if (head.tokens.size() == 1) {
    n = parse_order(head.tokens.front(), head.number);
    first_row = 1;
  } else if (format == MatrixFormat::Csv) {
    n = head.tokens.size();
  } else {
    throw ParseError(head.number, head.tokens[1].column, "the first line must hold only the matrix order");
  }

  std::vector<std::vector<double>> rows;
  for (std::size_t k = first_row; k < lines.size(); ++k) {
    const Line& l = lines[k];
    if (rows.size() == n) throw ParseError(l.number, l.tokens.front().column, "unexpected content after the last row");
    if (l.tokens.size() != n) {
      const std::size_t col = l.tokens.size() > n ? l.tokens[n].column : 0;
      throw ParseError(l.number, col,
                       "expected " + std::to_string(n) + " values, found " + std::to_string(l.tokens.size()));
    }
    std::vector<double> row;
    row.reserve(n);
    for (const Token& t : l.tokens) row.push_back(parse_value(t, l.number));
    rows.push_back(std::move(row));
  }
  if (rows.size() != n) {
    const std::size_t next_line = lines.back().number + 1;
    throw ParseError(next_line, 0, "expected " + std::to_string(n) + " rows, found " + std::to_string(rows.size()));
  }
  return make_pcm(rows);
}

Pcm read_matrix_file(const std::filesystem::path& path, MatrixFormat format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_matrix(buf.str(), format);
}

std::string format_number(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return ec == std::errc() ? std::string(buf, ptr) : std::to_string(v);
}

std::string format_matrix(const Pcm& m, MatrixFormat format) {
  const std::size_t n = m.order();
  std::string out = std::to_string(n) + "\n";
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (j > 0) out += format == MatrixFormat::Csv ? "," : " ";
      const double v = m(i, j);
      const double k = std::round(1.0 / v);
      if (v < 1.0 && k >= 2.0 && k < 1e15 && 1.0 / k == v) {
        out += "1/" + format_number(k);
      } else {
        out += format_number(v);
      }
    }
    out += "\n";
  }
  return out;
}

}  // namespace dpcm::cli
