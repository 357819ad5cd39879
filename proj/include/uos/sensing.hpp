#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "uos/common.hpp"

namespace uos {

enum class EnsembleKind { Gaussian, RankOne };

const char* to_string(EnsembleKind kind);
/// Accepts "gaussian", "rank1" and "rankOne".
EnsembleKind parse_ensemble_kind(const std::string& text);

/// k linear functionals X -> <A_i, X> = trace(A_i^T X) on m x n matrices.
///
/// Gaussian ensembles store every A_i densely; rank-one ensembles keep only
/// the factors (a_i, b_i) of A_i = a_i b_i^T and never form A_i.
class MeasurementEnsemble {
 public:
  /// Gaussian: entries i.i.d. N(0,1)/sqrt(k). Rank-one: a_i ~ N(0,I)/sqrt(k), b_i ~ N(0,I).
  static MeasurementEnsemble build(EnsembleKind kind, int k, int m, int n, std::uint64_t seed);
  static MeasurementEnsemble from_dense(const std::vector<Matrix>& matrices);
  /// Row i of `left` is a_i, row i of `right` is b_i.
  static MeasurementEnsemble from_rank_one(Matrix left, Matrix right);

  EnsembleKind kind() const { return kind_; }
  int k() const { return k_; }
  int m() const { return m_; }
  int n() const { return n_; }
  std::uint64_t seed() const { return seed_; }

  /// y_i = <A_i, X>.
  Vector apply(const Matrix& x) const;
  /// sum_i y_i A_i.
  Matrix adjoint(const Vector& y) const;
  Matrix materialize(int i) const;

  /// Row i holds vec(A_i * v) (m x p, column-major). Used by the left factor solve.
  Matrix left_design(const Matrix& v) const;
  /// Row i holds vec(A_i^T * u) (n x p, column-major). Used by the right factor solve.
  Matrix right_design(const Matrix& u) const;

  /// Number of doubles held by the representation.
  std::size_t stored_values() const;

 private:
  using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

  EnsembleKind kind_ = EnsembleKind::Gaussian;
  int k_ = 0, m_ = 0, n_ = 0;
  std::uint64_t seed_ = 0;
  RowMatrix dense_;  // k x (m n); row i = vec(A_i)
  Matrix left_;      // k x m
  Matrix right_;     // k x n
};

}  // namespace uos
