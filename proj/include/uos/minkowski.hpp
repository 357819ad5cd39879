#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "uos/uos_model.hpp"

namespace uos {

/// Finite sample of a bounded set, stored point-major (row i = point i).
class PointCloud {
 public:
  /// Throws EmptyInput for zero points and Domain for non-finite coordinates.
  PointCloud(int ambient_dim, std::vector<double> coords);

  int ambient_dim() const { return dim_; }
  std::size_t size() const { return coords_.size() / static_cast<std::size_t>(dim_); }
  std::span<const double> point(std::size_t i) const {
    return {coords_.data() + i * static_cast<std::size_t>(dim_), static_cast<std::size_t>(dim_)};
  }
  const std::vector<double>& coords() const { return coords_; }
  const std::vector<double>& lower() const { return lo_; }
  const std::vector<double>& upper() const { return hi_; }

 private:
  int dim_;
  std::vector<double> coords_;
  std::vector<double> lo_, hi_;
};

struct FitPolicy {
  enum class Kind { AllPoints, MiddleWindow } kind = Kind::MiddleWindow;
  int trim = 1;  // points dropped at each end of the ladder for MiddleWindow

  static FitPolicy all_points() { return {Kind::AllPoints, 0}; }
  static FitPolicy middle_window(int trim) { return {Kind::MiddleWindow, trim}; }
};

struct DimensionEstimate {
  std::vector<double> rho_ladder;
  std::vector<std::int64_t> counts;
  double slope = 0.0;
  std::size_t fit_begin = 0, fit_end = 0;  // half-open index range used by the fit
  double lower_slope = 0.0;
  double upper_slope = 0.0;
};

/// Occupied cells of the grid with side `rho`, anchored at the bounding-box
/// minimum shifted down by `anchor_shift * rho` along every axis.
std::int64_t box_count(const PointCloud& cloud, double rho, double anchor_shift = 0.0);

// One count per ladder entry. The OpenMP version splits the ladder across
// threads; the serial one is the reference it must match exactly.
std::vector<std::int64_t> box_counts(const PointCloud& cloud, std::span<const double> ladder,
                                     double anchor_shift = 0.0);
std::vector<std::int64_t> box_counts_serial(const PointCloud& cloud, std::span<const double> ladder,
                                            double anchor_shift = 0.0);

/// Powers of two 2^-first ... 2^-last.
std::vector<double> dyadic_ladder(int first = 1, int last = 5);

DimensionEstimate estimate_dimension(const PointCloud& cloud, std::span<const double> ladder,
                                     FitPolicy policy = {}, double anchor_shift = 0.0);

// Calibration sets.
PointCloud sample_unit_square(std::size_t samples, std::uint64_t seed);
PointCloud sample_segment(std::size_t samples, int ambient_dim, std::uint64_t seed);
PointCloud sample_rank1_2x2(std::size_t samples, std::uint64_t seed);

/// Vectorized UOS matrices: every trial redraws the subspaces (ranks and m
/// taken from `shape`), a uniform assignment and unit-box coefficients.
/// Requires m * n <= 8.
PointCloud uos_cloud(const SubspaceEnsemble& shape, int n, std::size_t trials, std::uint64_t seed);

PointCloud union_cloud(const PointCloud& a, const PointCloud& b);
/// Pairs point i of `a` with point i of `b`; both clouds must be the same size.
PointCloud product_cloud(const PointCloud& a, const PointCloud& b);

}  // namespace uos
