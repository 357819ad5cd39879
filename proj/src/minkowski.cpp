#include "uos/minkowski.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "uos/random.hpp"

namespace uos {

PointCloud::PointCloud(int ambient_dim, std::vector<double> coords)
    : dim_(ambient_dim), coords_(std::move(coords)) {
  if (dim_ < 1) throw Error(ErrorKind::InvalidDimension, "ambient dimension must be positive");
  if (coords_.empty()) throw Error(ErrorKind::EmptyInput, "point cloud is empty");
  if (coords_.size() % static_cast<std::size_t>(dim_) != 0)
    throw Error(ErrorKind::ShapeMismatch, "coordinate buffer is not a whole number of points");
  lo_.assign(static_cast<std::size_t>(dim_), INFINITY);
  hi_.assign(static_cast<std::size_t>(dim_), -INFINITY);
  for (std::size_t i = 0; i < coords_.size(); ++i) {
    const double v = coords_[i];
    if (!std::isfinite(v)) throw Error(ErrorKind::Domain, "point cloud has a non-finite coordinate");
    const std::size_t d = i % static_cast<std::size_t>(dim_);
    lo_[d] = std::min(lo_[d], v);
    hi_[d] = std::max(hi_[d], v);
  }
}

namespace {

// Cell indices are packed into fixed-width bit fields; a point's key spans
// `words` 64-bit words. Counting distinct keys is then a sort + unique.
struct CellPacking {
  std::vector<int> bits;
  std::vector<int> offset;  // bit offset of each axis within the key
  int words = 1;
};

CellPacking plan_packing(const PointCloud& cloud, double rho, double anchor_shift) {
  CellPacking p;
  int total = 0;
  for (int d = 0; d < cloud.ambient_dim(); ++d) {
    const double span = cloud.upper()[d] - cloud.lower()[d] + anchor_shift * rho;
    const double cells = std::floor(span / rho) + 1.0;
    if (cells > 9.0e15) throw Error(ErrorKind::Domain, "box size too small for the cloud extent");
    const auto ncell = static_cast<std::uint64_t>(cells);
    const int b = std::max(1, static_cast<int>(std::bit_width(ncell + 1)));
    p.bits.push_back(b);
    // Keep each field inside one word.
    if (total / 64 != (total + b - 1) / 64) total = (total / 64 + 1) * 64;
    p.offset.push_back(total);
    total += b;
  }
  p.words = std::max(1, (total + 63) / 64);
  return p;
}

}  // namespace

std::int64_t box_count(const PointCloud& cloud, double rho, double anchor_shift) {
  if (!(rho > 0.0)) throw Error(ErrorKind::Domain, "box size must be positive");
  const int dim = cloud.ambient_dim();
  const CellPacking pack = plan_packing(cloud, rho, anchor_shift);
  const std::size_t n = cloud.size();
  const auto words = static_cast<std::size_t>(pack.words);

  std::vector<std::uint64_t> keys(n * words, 0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto pt = cloud.point(i);
    std::uint64_t* key = keys.data() + i * words;
    for (int d = 0; d < dim; ++d) {
      const double anchor = cloud.lower()[d] - anchor_shift * rho;
      const auto cell = static_cast<std::uint64_t>(std::floor((pt[d] - anchor) / rho));
      key[pack.offset[d] / 64] |= cell << (pack.offset[d] % 64);
    }
  }

  if (words == 1) {
    std::sort(keys.begin(), keys.end());
    return std::unique(keys.begin(), keys.end()) - keys.begin();
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  auto key_of = [&](std::size_t i) { return keys.begin() + static_cast<std::ptrdiff_t>(i * words); };
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::lexicographical_compare(key_of(a), key_of(a) + words, key_of(b), key_of(b) + words);
  });
  std::int64_t distinct = 1;
  for (std::size_t i = 1; i < n; ++i)
    if (!std::equal(key_of(order[i]), key_of(order[i]) + words, key_of(order[i - 1]))) ++distinct;
  return distinct;
}

std::vector<std::int64_t> box_counts_serial(const PointCloud& cloud, std::span<const double> ladder,
                                            double anchor_shift) {
  std::vector<std::int64_t> out(ladder.size());
  for (std::size_t t = 0; t < ladder.size(); ++t) out[t] = box_count(cloud, ladder[t], anchor_shift);
  return out;
}

std::vector<std::int64_t> box_counts(const PointCloud& cloud, std::span<const double> ladder,
                                     double anchor_shift) {
  for (double rho : ladder)
    if (!(rho > 0.0)) throw Error(ErrorKind::Domain, "box size must be positive");
  std::vector<std::int64_t> out(ladder.size());
  const auto levels = static_cast<std::ptrdiff_t>(ladder.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t t = 0; t < levels; ++t) out[t] = box_count(cloud, ladder[t], anchor_shift);
  return out;
}

std::vector<double> dyadic_ladder(int first, int last) {
  std::vector<double> out;
  for (int e = first; e <= last; ++e) out.push_back(std::ldexp(1.0, -e));
  return out;
}

DimensionEstimate estimate_dimension(const PointCloud& cloud, std::span<const double> ladder,
                                     FitPolicy policy, double anchor_shift) {
  if (ladder.size() < 3) throw Error(ErrorKind::Domain, "box-size ladder needs at least 3 entries");
  for (std::size_t t = 0; t < ladder.size(); ++t) {
    if (!(ladder[t] > 0.0)) throw Error(ErrorKind::Domain, "box size must be positive");
    if (t > 0 && !(ladder[t] < ladder[t - 1]))
      throw Error(ErrorKind::Domain, "box-size ladder must be strictly decreasing");
  }

  DimensionEstimate est;
  est.rho_ladder.assign(ladder.begin(), ladder.end());
  est.counts = box_counts(cloud, ladder, anchor_shift);
  for (auto c : est.counts)
    if (c == 0) throw Error(ErrorKind::Domain, "zero occupied boxes");

  const std::size_t trim =
      policy.kind == FitPolicy::Kind::MiddleWindow ? static_cast<std::size_t>(std::max(0, policy.trim)) : 0;
  if (ladder.size() < 2 * trim + 2)
    throw Error(ErrorKind::Domain, "fit window leaves fewer than two ladder entries");
  est.fit_begin = trim;
  est.fit_end = ladder.size() - trim;

  // Least squares of log N against -log rho.
  std::vector<double> xs, ys;
  for (std::size_t t = est.fit_begin; t < est.fit_end; ++t) {
    xs.push_back(-std::log(ladder[t]));
    ys.push_back(std::log(static_cast<double>(est.counts[t])));
  }
  const double np = static_cast<double>(xs.size());
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / np;
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / np;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  est.slope = sxy / sxx;

  est.lower_slope = INFINITY;
  est.upper_slope = -INFINITY;
  for (std::size_t i = 1; i < xs.size(); ++i) {
    const double s = (ys[i] - ys[i - 1]) / (xs[i] - xs[i - 1]);
    est.lower_slope = std::min(est.lower_slope, s);
    est.upper_slope = std::max(est.upper_slope, s);
  }
  return est;
}

PointCloud sample_unit_square(std::size_t samples, std::uint64_t seed) {
  Rng rng = make_rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> coords(2 * samples);
  for (auto& c : coords) c = u(rng);
  return PointCloud(2, std::move(coords));
}

PointCloud sample_segment(std::size_t samples, int ambient_dim, std::uint64_t seed) {
  if (ambient_dim < 1) throw Error(ErrorKind::InvalidDimension, "ambient dimension must be positive");
  Rng rng = make_rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  // Unit-length segment along the main diagonal.
  const double step = 1.0 / std::sqrt(static_cast<double>(ambient_dim));
  std::vector<double> coords;
  coords.reserve(samples * static_cast<std::size_t>(ambient_dim));
  for (std::size_t i = 0; i < samples; ++i) {
    const double t = u(rng);
    for (int d = 0; d < ambient_dim; ++d) coords.push_back(t * step);
  }
  return PointCloud(ambient_dim, std::move(coords));
}

PointCloud sample_rank1_2x2(std::size_t samples, std::uint64_t seed) {
  Rng rng = make_rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> coords;
  coords.reserve(4 * samples);
  for (std::size_t i = 0; i < samples; ++i) {
    const double a0 = u(rng), a1 = u(rng), b0 = u(rng), b1 = u(rng);
    // vec(a b^T), column-major
    coords.insert(coords.end(), {a0 * b0, a1 * b0, a0 * b1, a1 * b1});
  }
  return PointCloud(4, std::move(coords));
}

PointCloud uos_cloud(const SubspaceEnsemble& shape, int n, std::size_t trials, std::uint64_t seed) {
  const long ambient = static_cast<long>(shape.m) * n;
  if (n < 1 || ambient > 8)
    throw Error(ErrorKind::InvalidDimension,
                "box counting needs m*n <= 8 (got " + std::to_string(ambient) + ")");
  std::vector<double> coords;
  coords.reserve(trials * static_cast<std::size_t>(ambient));
  for (std::size_t t = 0; t < trials; ++t) {
    const auto ens = sample_ensemble(shape.m, shape.ranks, derive_seed(seed, {t, 0}));
    const auto x = sample_uos(ens, n, UniformLabels{}, 1.0, derive_seed(seed, {t, 1}),
                              CoefficientLaw::UnitBox);
    coords.insert(coords.end(), x.data.data(), x.data.data() + x.data.size());
  }
  return PointCloud(static_cast<int>(ambient), std::move(coords));
}

PointCloud union_cloud(const PointCloud& a, const PointCloud& b) {
  if (a.ambient_dim() != b.ambient_dim())
    throw Error(ErrorKind::ShapeMismatch, "union of clouds in different ambient dimensions");
  std::vector<double> coords = a.coords();
  coords.insert(coords.end(), b.coords().begin(), b.coords().end());
  return PointCloud(a.ambient_dim(), std::move(coords));
}

PointCloud product_cloud(const PointCloud& a, const PointCloud& b) {
  if (a.size() != b.size()) throw Error(ErrorKind::ShapeMismatch, "product needs equally sized clouds");
  std::vector<double> coords;
  coords.reserve(a.size() * static_cast<std::size_t>(a.ambient_dim() + b.ambient_dim()));
  for (std::size_t i = 0; i < a.size(); ++i) {
    const auto pa = a.point(i);
    const auto pb = b.point(i);
    coords.insert(coords.end(), pa.begin(), pa.end());
    coords.insert(coords.end(), pb.begin(), pb.end());
  }
  return PointCloud(a.ambient_dim() + b.ambient_dim(), std::move(coords));
}

}  // namespace uos
