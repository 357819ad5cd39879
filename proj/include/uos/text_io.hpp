#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "uos/common.hpp"

namespace uos {

/// Shortest round-trippable form: 17 significant digits.
std::string format_double(double v);

/// "m n", then m rows of n values, then optionally "labels: l_1 ... l_n"
/// with one-based labels.
void write_matrix(std::ostream& os, const Matrix& x, const std::vector<int>* labels = nullptr);

struct MatrixFile {
  Matrix data;
  std::optional<std::vector<int>> labels;  // zero-based
};
MatrixFile read_matrix(std::istream& is);

/// One value per line.
void write_vector(std::ostream& os, const Vector& v);
Vector read_vector(std::istream& is);

std::vector<int> parse_int_list(const std::string& text);
std::string join_ints(const std::vector<int>& values, char sep);
std::string trim(const std::string& s);

struct KeyValueEntry {
  std::string value;
  int line = 0;
};
/// `key = value` lines; blank lines and lines starting with '#' are skipped.
std::map<std::string, KeyValueEntry> parse_key_values(std::istream& is);

}  // namespace uos
