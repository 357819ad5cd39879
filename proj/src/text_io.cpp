#include "uos/text_io.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

namespace uos {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

void write_matrix(std::ostream& os, const Matrix& x, const std::vector<int>* labels) {
  os << x.rows() << ' ' << x.cols() << '\n';
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    for (Eigen::Index j = 0; j < x.cols(); ++j) os << (j ? " " : "") << format_double(x(i, j));
    os << '\n';
  }
  if (labels) {
    os << "labels:";
    for (int l : *labels) os << ' ' << (l + 1);
    os << '\n';
  }
}

namespace {

double parse_double(const std::string& token) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(token, &used);
  } catch (const std::exception&) {
    throw Error(ErrorKind::Parse, "not a number: '" + token + "'");
  }
  if (used != token.size()) throw Error(ErrorKind::Parse, "not a number: '" + token + "'");
  return v;
}

int parse_int(const std::string& token) {
  std::size_t used = 0;
  int v = 0;
  try {
    v = std::stoi(token, &used);
  } catch (const std::exception&) {
    throw Error(ErrorKind::Parse, "not an integer: '" + token + "'");
  }
  if (used != token.size()) throw Error(ErrorKind::Parse, "not an integer: '" + token + "'");
  return v;
}

}  // namespace

MatrixFile read_matrix(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw Error(ErrorKind::Parse, "missing matrix header");
  std::istringstream header(line);
  long rows = -1, cols = -1;
  if (!(header >> rows >> cols) || rows < 0 || cols < 0)
    throw Error(ErrorKind::Parse, "matrix header must be 'm n'");
  MatrixFile out{Matrix(rows, cols), std::nullopt};
  for (long i = 0; i < rows; ++i) {
    if (!std::getline(is, line)) throw Error(ErrorKind::Parse, "matrix has fewer than m rows");
    std::istringstream row(line);
    std::string token;
    long j = 0;
    while (row >> token) {
      if (j >= cols) throw Error(ErrorKind::Parse, "row " + std::to_string(i + 1) + " has too many values");
      out.data(i, j++) = parse_double(token);
    }
    if (j != cols) throw Error(ErrorKind::Parse, "row " + std::to_string(i + 1) + " has too few values");
  }
  while (std::getline(is, line)) {
    line = trim(line);
    if (line.empty()) continue;
    if (line.rfind("labels:", 0) != 0) throw Error(ErrorKind::Parse, "unexpected trailing line: " + line);
    std::istringstream rest(line.substr(7));
    std::vector<int> labels;
    std::string token;
    while (rest >> token) {
      const int l = parse_int(token);
      if (l < 1) throw Error(ErrorKind::Parse, "labels are one-based");
      labels.push_back(l - 1);
    }
    if (static_cast<long>(labels.size()) != cols) throw Error(ErrorKind::Parse, "label count differs from n");
    out.labels = std::move(labels);
  }
  return out;
}

void write_vector(std::ostream& os, const Vector& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) os << format_double(v(i)) << '\n';
}

Vector read_vector(std::istream& is) {
  std::vector<double> values;
  std::string line;
  while (std::getline(is, line)) {
    line = trim(line);
    if (line.empty()) continue;
    values.push_back(parse_double(line));
  }
  return Eigen::Map<const Vector>(values.data(), static_cast<Eigen::Index>(values.size()));
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) throw Error(ErrorKind::Parse, "empty entry in list '" + text + "'");
    out.push_back(parse_int(item));
  }
  if (out.empty()) throw Error(ErrorKind::Parse, "empty list");
  return out;
}

std::string join_ints(const std::vector<int>& values, char sep) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += sep;
    out += std::to_string(values[i]);
  }
  return out;
}

std::map<std::string, KeyValueEntry> parse_key_values(std::istream& is) {
  std::map<std::string, KeyValueEntry> out;
  std::string line;
  int number = 0;
  while (std::getline(is, line)) {
    ++number;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw Error(ErrorKind::Parse, "line " + std::to_string(number) + ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw Error(ErrorKind::Parse, "line " + std::to_string(number) + ": empty key");
    if (out.count(key)) throw Error(ErrorKind::Parse, "line " + std::to_string(number) + ": duplicate key " + key);
    out[key] = {trim(line.substr(eq + 1)), number};
  }
  return out;
}

}  // namespace uos
