#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace uos {

struct ProblemShape {
  int m = 1;
  int n = 1;
  std::vector<int> ranks;

  int clusters() const { return static_cast<int>(ranks.size()); }
};

/// Measurement counts for a shape. `sufficient` is always `dimension + 1`.
struct BoundReport {
  std::int64_t dimension = 0;
  std::int64_t sufficient = 0;
  std::optional<std::int64_t> single_subspace;
  std::optional<std::int64_t> savings;
};

// Upper bound on the Minkowski dimension of a bounded set of UOS matrices:
// m * sum(r) + n * max(r) - sum(r^2). Exact integer arithmetic.
std::int64_t dim_bound(const ProblemShape& shape);

// Smallest integer k strictly above dim_bound.
std::int64_t uos_sufficient_count(const ProblemShape& shape);

// Count for one rank-`total_rank` subspace: (m + n - R) R + 1.
// Throws InvalidRank when total_rank > min(m, n) or is negative.
std::int64_t single_subspace_count(int m, int n, int total_rank);

// (n - K r)(K - 1) r for K equal-rank independent subspaces. Throws Domain when n < K r.
std::int64_t uos_savings(int m, int n, int clusters, int rank);

/// Builds the full report. When `total_rank` is given the single-subspace
/// baseline is evaluated at that rank and savings = baseline - sufficient.
BoundReport make_bound_report(const ProblemShape& shape, std::optional<int> total_rank = std::nullopt);

}  // namespace uos
