#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "uos/sensing.hpp"
#include "uos/uos_model.hpp"

namespace uos {

struct DecodeConfig {
  int max_iterations = 500;
  double rel_tolerance = 1e-10;  // stop when the residual shrinks by less than this fraction
  int restarts = 10;
  double ridge = 1e-10;
  double success_nmse = 1e-6;
  int outer_rounds = 20;  // alternating_decode only
};

/// X = left * right^T with left m x R and right n x R, R = sum of ranks.
/// Column block j (width r_j) belongs to subspace j; row c of `right` is
/// zero outside the block of column c's label.
struct Factors {
  Matrix left;
  Matrix right;
};

struct RecoveryResult {
  Matrix estimate;
  Assignment assignment;
  Factors factors;
  double residual_norm = 0.0;  // ||apply(estimate) - y||_2
  int iterations = 0;
  int restarts_used = 0;
  bool converged = false;
  std::vector<double> residual_trace;  // per-iteration residual of the returned restart
};

struct Nmse {
  double value = 0.0;
  bool zero_truth = false;  // truth was zero; value is ||estimate||_F^2
};

/// ||estimate - truth||_F^2 / ||truth||_F^2.
Nmse nmse(const Matrix& estimate, const Matrix& truth);

/// Factors of `x` under a known assignment: left blocks are the given bases,
/// right rows are the projection coefficients.
Factors factors_from_bases(const Matrix& x, const SubspaceEnsemble& ensemble, const Assignment& assignment);

/// Alternating least squares over the block factorization with the column
/// assignment known. Each half-step is one joint ridge-regularized least
/// squares over all clusters. Keeps the best of `config.restarts` random
/// starts, or runs once from `start` when given.
RecoveryResult als_decode(const Vector& y, const MeasurementEnsemble& ensemble, const Assignment& assignment,
                          const std::vector<int>& ranks, const DecodeConfig& config, std::uint64_t seed,
                          const Factors* start = nullptr);

/// Runs als_decode under every assignment of the n columns to K labels and
/// returns the smallest residual; ties go to the lexicographically smallest
/// labels. With equal ranks only one labeling per partition is tried.
/// Branches run in parallel; the result matches exhaustive_decode_serial.
RecoveryResult exhaustive_decode(const Vector& y, const MeasurementEnsemble& ensemble, int clusters,
                                 const std::vector<int>& ranks, const DecodeConfig& config, std::uint64_t seed);
RecoveryResult exhaustive_decode_serial(const Vector& y, const MeasurementEnsemble& ensemble, int clusters,
                                        const std::vector<int>& ranks, const DecodeConfig& config,
                                        std::uint64_t seed);

/// Upper limit on K^n accepted by exhaustive_decode.
inline constexpr std::int64_t kMaxExhaustiveAssignments = 1'000'000;

/// Heuristic joint recovery and clustering: recover with the current labels,
/// then move every column of the estimate to its nearest recovered subspace,
/// until the labels stop changing. No recovery guarantee.
RecoveryResult alternating_decode(const Vector& y, const MeasurementEnsemble& ensemble, int clusters,
                                  const std::vector<int>& ranks, const DecodeConfig& config, std::uint64_t seed,
                                  const std::optional<Assignment>& initial = std::nullopt);

}  // namespace uos
