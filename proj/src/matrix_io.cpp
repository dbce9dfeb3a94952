#include "ripkit/matrix_io.hpp"

#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string_view>
#include <vector>

#include "ripkit/error.hpp"

namespace ripkit {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(',', start);
    out.push_back(trim(line.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

double parse_double(std::string_view token, int line_no) {
  std::string buf(token);
  char* end = nullptr;
  const double v = std::strtod(buf.c_str(), &end);
  if (buf.empty() || end != buf.c_str() + buf.size()) {
    throw Error(ErrorCode::kParseError, "line " + std::to_string(line_no) +
                                            ": cannot parse '" + buf + "'");
  }
  return v;
}

long parse_dim(std::string_view token) {
  long v = 0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
  if (ec != std::errc() || ptr != token.data() + token.size() || v < 1) {
    throw Error(ErrorCode::kParseError,
                "bad dimension '" + std::string(token) + "' in header");
  }
  return v;
}

}  // namespace

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_matrix_csv(std::ostream& os, const Matrix& m) {
  os << m.rows() << ',' << m.cols() << '\n';
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      if (j) os << ',';
      os << format_double(m(i, j));
    }
    os << '\n';
  }
}

void write_matrix_csv(const std::filesystem::path& path, const Matrix& m) {
  std::ofstream os(path);
  if (!os) throw Error(ErrorCode::kInvalidArgument, "cannot write " + path.string());
  write_matrix_csv(os, m);
}

Matrix read_matrix_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) {
    throw Error(ErrorCode::kParseError, "empty matrix file");
  }
  const auto header = split_commas(trim(line));
  if (header.size() != 2) {
    throw Error(ErrorCode::kParseError, "header must be 'rows,cols'");
  }
  const long rows = parse_dim(header[0]);
  const long cols = parse_dim(header[1]);
  Matrix m(rows, cols);
  int line_no = 1;
  long r = 0;
  while (r < rows && std::getline(is, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto tokens = split_commas(trim(line));
    if (static_cast<long>(tokens.size()) != cols) {
      throw Error(ErrorCode::kParseError,
                  "line " + std::to_string(line_no) + ": expected " +
                      std::to_string(cols) + " entries, got " +
                      std::to_string(tokens.size()));
    }
    for (long c = 0; c < cols; ++c) m(r, c) = parse_double(tokens[c], line_no);
    ++r;
  }
  if (r != rows) {
    throw Error(ErrorCode::kParseError, "expected " + std::to_string(rows) +
                                            " rows, got " + std::to_string(r));
  }
  if (!all_finite(m)) {
    throw Error(ErrorCode::kParseError, "matrix contains non-finite entries");
  }
  return m;
}

Matrix read_matrix_csv(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw Error(ErrorCode::kInvalidArgument, "cannot open " + path.string());
  return read_matrix_csv(is);
}

void write_vector_csv(std::ostream& os, const Vector& v) {
  write_matrix_csv(os, Matrix(v));
}

void write_vector_csv(const std::filesystem::path& path, const Vector& v) {
  write_matrix_csv(path, Matrix(v));
}

Vector read_vector_csv(std::istream& is) {
  const Matrix m = read_matrix_csv(is);
  if (m.cols() == 1) return m.col(0);
  if (m.rows() == 1) return m.row(0).transpose();
  throw Error(ErrorCode::kParseError, "vector file must have one row or one column");
}

Vector read_vector_csv(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw Error(ErrorCode::kInvalidArgument, "cannot open " + path.string());
  return read_vector_csv(is);
}

}  // namespace ripkit
