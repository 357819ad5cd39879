#include "uos/bounds.hpp"

#include <algorithm>
#include <string>

#include "uos/common.hpp"

namespace uos {

std::int64_t dim_bound(const ProblemShape& shape) {
  std::int64_t sum = 0, sum_sq = 0, max_r = 0;
  for (int r : shape.ranks) {
    sum += r;
    sum_sq += static_cast<std::int64_t>(r) * r;
    max_r = std::max<std::int64_t>(max_r, r);
  }
  return static_cast<std::int64_t>(shape.m) * sum + static_cast<std::int64_t>(shape.n) * max_r - sum_sq;
}

std::int64_t uos_sufficient_count(const ProblemShape& shape) { return dim_bound(shape) + 1; }

std::int64_t single_subspace_count(int m, int n, int total_rank) {
  if (total_rank < 0 || total_rank > std::min(m, n))
    throw Error(ErrorKind::InvalidRank,
                "total rank " + std::to_string(total_rank) + " exceeds min(m, n)");
  const std::int64_t r = total_rank;
  return (static_cast<std::int64_t>(m) + n - r) * r + 1;
}

std::int64_t uos_savings(int /*m*/, int n, int clusters, int rank) {
  const std::int64_t kr = static_cast<std::int64_t>(clusters) * rank;
  if (n < kr)
    throw Error(ErrorKind::Domain, "savings comparison assumes n >= K r (n=" + std::to_string(n) +
                                       ", K r=" + std::to_string(kr) + ")");
  return (n - kr) * (clusters - 1) * static_cast<std::int64_t>(rank);
}

BoundReport make_bound_report(const ProblemShape& shape, std::optional<int> total_rank) {
  BoundReport report;
  report.dimension = dim_bound(shape);
  report.sufficient = report.dimension + 1;
  if (total_rank) {
    report.single_subspace = single_subspace_count(shape.m, shape.n, *total_rank);
    report.savings = *report.single_subspace - report.sufficient;
  }
  return report;
}

}  // namespace uos
