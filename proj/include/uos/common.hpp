#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace uos {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

enum class ErrorKind {
  InvalidDimension,
  InvalidAssignment,
  IndexOutOfRange,
  InvalidRank,
  Domain,
  EmptyInput,
  ShapeMismatch,
  SearchSpaceTooLarge,
  Parse,
};

const char* to_string(ErrorKind kind);

/// Every failure raised by the library carries one of the kinds above so
/// callers (and tests) can tell contract violations apart.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace uos
