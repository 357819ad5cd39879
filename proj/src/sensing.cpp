#include "uos/sensing.hpp"

#include <cmath>
#include <random>

#include "uos/random.hpp"

namespace uos {

const char* to_string(EnsembleKind kind) {
  return kind == EnsembleKind::Gaussian ? "gaussian" : "rank1";
}

EnsembleKind parse_ensemble_kind(const std::string& text) {
  if (text == "gaussian") return EnsembleKind::Gaussian;
  if (text == "rank1" || text == "rankOne" || text == "rank-one") return EnsembleKind::RankOne;
  throw Error(ErrorKind::Parse, "unknown ensemble kind '" + text + "'");
}

namespace {

void check_sizes(int k, int m, int n) {
  if (k < 1) throw Error(ErrorKind::InvalidDimension, "measurement count must be positive");
  if (m < 1 || n < 1) throw Error(ErrorKind::InvalidDimension, "matrix dimensions must be positive");
}

}  // namespace

MeasurementEnsemble MeasurementEnsemble::build(EnsembleKind kind, int k, int m, int n, std::uint64_t seed) {
  check_sizes(k, m, n);
  MeasurementEnsemble e;
  e.kind_ = kind;
  e.k_ = k;
  e.m_ = m;
  e.n_ = n;
  e.seed_ = seed;
  Rng rng = make_rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const double scale = 1.0 / std::sqrt(static_cast<double>(k));

  if (kind == EnsembleKind::Gaussian) {
    e.dense_.resize(k, static_cast<Eigen::Index>(m) * n);
    for (int i = 0; i < k; ++i)
      for (Eigen::Index t = 0; t < e.dense_.cols(); ++t) e.dense_(i, t) = normal(rng) * scale;
  } else {
    e.left_.resize(k, m);
    e.right_.resize(k, n);
    for (int i = 0; i < k; ++i) {
      do {
        for (int p = 0; p < m; ++p) e.left_(i, p) = normal(rng) * scale;
      } while (e.left_.row(i).squaredNorm() == 0.0);
      do {
        for (int c = 0; c < n; ++c) e.right_(i, c) = normal(rng);
      } while (e.right_.row(i).squaredNorm() == 0.0);
    }
  }
  return e;
}

MeasurementEnsemble MeasurementEnsemble::from_dense(const std::vector<Matrix>& matrices) {
  if (matrices.empty()) throw Error(ErrorKind::InvalidDimension, "measurement count must be positive");
  MeasurementEnsemble e;
  e.kind_ = EnsembleKind::Gaussian;
  e.k_ = static_cast<int>(matrices.size());
  e.m_ = static_cast<int>(matrices.front().rows());
  e.n_ = static_cast<int>(matrices.front().cols());
  check_sizes(e.k_, e.m_, e.n_);
  e.dense_.resize(e.k_, static_cast<Eigen::Index>(e.m_) * e.n_);
  for (int i = 0; i < e.k_; ++i) {
    if (matrices[i].rows() != e.m_ || matrices[i].cols() != e.n_)
      throw Error(ErrorKind::ShapeMismatch, "measurement matrices differ in shape");
    e.dense_.row(i) = Eigen::Map<const Eigen::RowVectorXd>(matrices[i].data(), matrices[i].size());
  }
  return e;
}

MeasurementEnsemble MeasurementEnsemble::from_rank_one(Matrix left, Matrix right) {
  if (left.rows() != right.rows())
    throw Error(ErrorKind::ShapeMismatch, "rank-one factors need the same number of rows");
  MeasurementEnsemble e;
  e.kind_ = EnsembleKind::RankOne;
  e.k_ = static_cast<int>(left.rows());
  e.m_ = static_cast<int>(left.cols());
  e.n_ = static_cast<int>(right.cols());
  check_sizes(e.k_, e.m_, e.n_);
  for (int i = 0; i < e.k_; ++i)
    if (left.row(i).squaredNorm() == 0.0 || right.row(i).squaredNorm() == 0.0)
      throw Error(ErrorKind::Domain, "rank-one factors must be nonzero");
  e.left_ = std::move(left);
  e.right_ = std::move(right);
  return e;
}

Vector MeasurementEnsemble::apply(const Matrix& x) const {
  if (x.rows() != m_ || x.cols() != n_)
    throw Error(ErrorKind::ShapeMismatch, "matrix shape does not match the ensemble");
  if (kind_ == EnsembleKind::Gaussian)
    return dense_ * Eigen::Map<const Vector>(x.data(), x.size());
  // a_i^T X b_i for every i at once
  return (left_ * x).cwiseProduct(right_).rowwise().sum();
}

Matrix MeasurementEnsemble::adjoint(const Vector& y) const {
  if (y.size() != k_) throw Error(ErrorKind::ShapeMismatch, "measurement vector length differs from k");
  if (kind_ == EnsembleKind::Gaussian) {
    Vector flat = dense_.transpose() * y;
    return Eigen::Map<const Matrix>(flat.data(), m_, n_);
  }
  return left_.transpose() * y.asDiagonal() * right_;
}

Matrix MeasurementEnsemble::materialize(int i) const {
  if (i < 0 || i >= k_) throw Error(ErrorKind::IndexOutOfRange, "measurement index out of range");
  if (kind_ == EnsembleKind::Gaussian)
    return Eigen::Map<const Matrix>(dense_.row(i).data(), m_, n_);
  return left_.row(i).transpose() * right_.row(i);
}

Matrix MeasurementEnsemble::left_design(const Matrix& v) const {
  if (v.rows() != n_) throw Error(ErrorKind::ShapeMismatch, "right factor has wrong row count");
  const Eigen::Index p = v.cols();
  Matrix out(k_, m_ * p);
  if (kind_ == EnsembleKind::Gaussian) {
    Matrix prod(m_, p);
    for (int i = 0; i < k_; ++i) {
      prod.noalias() = Eigen::Map<const Matrix>(dense_.row(i).data(), m_, n_) * v;
      out.row(i) = Eigen::Map<const Eigen::RowVectorXd>(prod.data(), prod.size());
    }
  } else {
    const Matrix bv = right_ * v;  // k x p
    for (Eigen::Index q = 0; q < p; ++q)
      out.middleCols(q * m_, m_) = bv.col(q).asDiagonal() * left_;
  }
  return out;
}

Matrix MeasurementEnsemble::right_design(const Matrix& u) const {
  if (u.rows() != m_) throw Error(ErrorKind::ShapeMismatch, "left factor has wrong row count");
  const Eigen::Index p = u.cols();
  Matrix out(k_, n_ * p);
  if (kind_ == EnsembleKind::Gaussian) {
    Matrix prod(n_, p);
    for (int i = 0; i < k_; ++i) {
      prod.noalias() = Eigen::Map<const Matrix>(dense_.row(i).data(), m_, n_).transpose() * u;
      out.row(i) = Eigen::Map<const Eigen::RowVectorXd>(prod.data(), prod.size());
    }
  } else {
    const Matrix au = left_ * u;  // k x p
    for (Eigen::Index q = 0; q < p; ++q)
      out.middleCols(q * n_, n_) = au.col(q).asDiagonal() * right_;
  }
  return out;
}

std::size_t MeasurementEnsemble::stored_values() const {
  return static_cast<std::size_t>(dense_.size() + left_.size() + right_.size());
}

}  // namespace uos
