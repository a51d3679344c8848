#include "odeident/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

#include "odeident/errors.hpp"

namespace odeident {

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::IoError, "cannot open " + path + " for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void dump(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::IoError, "cannot open " + path + " for writing");
  out << text;
  if (!out) throw Error(ErrorKind::IoError, "write failed for " + path);
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_number(const std::string& field, int line) {
  const std::string t = trim(field);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size())
    throw Error(ErrorKind::IoError, "line " + std::to_string(line) + ": not a number: '" + t + "'");
  return v;
}

std::vector<std::vector<std::string>> split_lines(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    std::vector<std::string> fields;
    std::string field;
    std::istringstream ls(line);
    while (std::getline(ls, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.push_back("");
    rows.push_back(std::move(fields));
  }
  return rows;
}

}  // namespace

std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

Mat parse_matrix_csv(const std::string& text) {
  const auto rows = split_lines(text);
  if (rows.empty()) throw Error(ErrorKind::IoError, "empty matrix file");
  const size_t cols = rows.front().size();
  Mat M(rows.size(), cols);
  for (size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols)
      throw Error(ErrorKind::IoError, "ragged matrix row " + std::to_string(i + 1));
    for (size_t j = 0; j < cols; ++j)
      M(i, j) = parse_number(rows[i][j], static_cast<int>(i + 1));
  }
  return M;
}

Mat read_matrix_csv(const std::string& path) { return parse_matrix_csv(slurp(path)); }

std::string matrix_to_csv(const Mat& M) {
  std::string out;
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    for (Eigen::Index j = 0; j < M.cols(); ++j) {
      if (j) out += ',';
      out += format_double(M(i, j));
    }
    out += '\n';
  }
  return out;
}

void write_matrix_csv(const std::string& path, const Mat& M) { dump(path, matrix_to_csv(M)); }

Vec read_vector_csv(const std::string& path) {
  const Mat M = read_matrix_csv(path);
  if (M.cols() == 1) return M.col(0);
  if (M.rows() == 1) return M.row(0).transpose();
  throw Error(ErrorKind::IoError, path + " is not a single row or column");
}

std::string long_to_csv(const TimeGrid& grid, const Mat& Y) {
  std::string out = "time,dim,value\n";
  for (Eigen::Index j = 0; j < Y.cols(); ++j)
    for (Eigen::Index i = 0; i < Y.rows(); ++i)
      out += format_double(grid[static_cast<int>(j)]) + ',' + std::to_string(i + 1) + ',' +
             format_double(Y(i, j)) + '\n';
  return out;
}

void write_long_csv(const std::string& path, const TimeGrid& grid, const Mat& Y) {
  dump(path, long_to_csv(grid, Y));
}

Observations parse_long_csv(const std::string& text) {
  auto rows = split_lines(text);
  if (rows.empty()) throw Error(ErrorKind::IoError, "empty observation file");
  if (rows.front().size() != 3 || trim(rows.front()[0]) != "time" ||
      trim(rows.front()[1]) != "dim" || trim(rows.front()[2]) != "value")
    throw Error(ErrorKind::IoError, "expected header time,dim,value");
  std::map<double, std::map<int, double>> cells;
  int dmax = 0;
  for (size_t r = 1; r < rows.size(); ++r) {
    const int line = static_cast<int>(r + 1);
    if (rows[r].size() != 3)
      throw Error(ErrorKind::IoError, "line " + std::to_string(line) + ": expected 3 fields");
    const double t = parse_number(rows[r][0], line);
    const double dim = parse_number(rows[r][1], line);
    const double v = parse_number(rows[r][2], line);
    if (dim < 1 || dim != std::floor(dim))
      throw Error(ErrorKind::IoError, "line " + std::to_string(line) + ": dim must be a positive integer");
    const int di = static_cast<int>(dim);
    if (!cells[t].emplace(di, v).second)
      throw Error(ErrorKind::IoError, "line " + std::to_string(line) + ": duplicate (time, dim)");
    dmax = std::max(dmax, di);
  }
  std::vector<double> times;
  Mat Y(dmax, static_cast<Eigen::Index>(cells.size()));
  int j = 0;
  for (const auto& [t, dims] : cells) {
    if (static_cast<int>(dims.size()) != dmax)
      throw Error(ErrorKind::IoError, "time " + format_double(t) + " is missing dimensions");
    for (const auto& [di, v] : dims) Y(di - 1, j) = v;
    times.push_back(t);
    ++j;
  }
  return Observations{TimeGrid(std::move(times)), Y, 0.0};
}

Observations read_long_csv(const std::string& path) { return parse_long_csv(slurp(path)); }

}  // namespace odeident
