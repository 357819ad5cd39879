#include "uos/decoders.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include <omp.h>

#include "uos/random.hpp"

namespace uos {

namespace {

// Residuals at or below this fraction of ||y|| count as an exact fit.
constexpr double kExactFit = 1e-13;
// A restart this close to an exact fit ends the restart loop early.
constexpr double kGoodEnough = 1e-9;

struct BlockLayout {
  std::vector<int> ranks;
  std::vector<int> offset;  // first column of block j in the factors
  int total = 0;

  explicit BlockLayout(const std::vector<int>& r) : ranks(r) {
    for (int v : r) {
      offset.push_back(total);
      total += v;
    }
  }
};

void validate(const Vector& y, const MeasurementEnsemble& ens, const Assignment& assignment,
              const std::vector<int>& ranks, const DecodeConfig& config) {
  if (y.size() != ens.k()) throw Error(ErrorKind::ShapeMismatch, "measurement vector length differs from k");
  if (assignment.columns() != ens.n())
    throw Error(ErrorKind::ShapeMismatch, "assignment length differs from the ensemble's n");
  if (assignment.clusters() != static_cast<int>(ranks.size()))
    throw Error(ErrorKind::ShapeMismatch, "assignment cluster count differs from the number of ranks");
  for (int r : ranks)
    if (r < 0 || r > ens.m()) throw Error(ErrorKind::InvalidDimension, "rank outside [0, m]");
  if (config.max_iterations < 1 || config.restarts < 1 || !(config.ridge > 0.0) ||
      !(config.rel_tolerance > 0.0) || !(config.success_nmse > 0.0))
    throw Error(ErrorKind::Domain, "decode configuration values must be positive");
}

// Solves min ||D theta - y||^2 + ridge ||theta||^2 through the normal equations.
Vector ridge_solve(const Matrix& design, const Vector& y, double ridge) {
  const Eigen::Index p = design.cols();
  Matrix gram = Matrix::Zero(p, p);
  gram.selfadjointView<Eigen::Lower>().rankUpdate(design.transpose());
  gram.diagonal().array() += ridge;
  const Vector rhs = design.transpose() * y;
  Eigen::LLT<Matrix> llt(gram.selfadjointView<Eigen::Lower>());
  if (llt.info() == Eigen::Success) return llt.solve(rhs);
  return Matrix(gram.selfadjointView<Eigen::Lower>()).ldlt().solve(rhs);
}

class AlsSolver {
 public:
  AlsSolver(const Vector& y, const MeasurementEnsemble& ens, const Assignment& assignment,
            const std::vector<int>& ranks, const DecodeConfig& config)
      : y_(y), ens_(ens), assignment_(assignment), layout_(ranks), config_(config), y_norm_(y.norm()) {
    // Unknowns of the right solve: the r_{label(c)} coefficients of each column.
    for (int c = 0; c < ens.n(); ++c) {
      const int l = assignment.label(c);
      for (int t = 0; t < layout_.ranks[l]; ++t)
        right_index_.push_back(c + static_cast<Eigen::Index>(ens.n()) * (layout_.offset[l] + t));
    }
  }

  int total_rank() const { return layout_.total; }
  double y_norm() const { return y_norm_; }

  Matrix random_left(Rng& rng) const {
    Matrix left(ens_.m(), layout_.total);
    for (std::size_t j = 0; j < layout_.ranks.size(); ++j) {
      if (layout_.ranks[j] == 0) continue;
      left.middleCols(layout_.offset[j], layout_.ranks[j]) =
          orthonormalize(gaussian_matrix(ens_.m(), layout_.ranks[j], rng));
    }
    return left;
  }

  double residual(const Factors& f) const {
    return (ens_.apply(f.left * f.right.transpose()) - y_).norm();
  }

  RecoveryResult run(Factors f, bool have_right) const {
    RecoveryResult out;
    out.assignment = assignment_;
    double res = std::numeric_limits<double>::infinity();
    if (have_right) {
      res = residual(f);
      out.residual_trace.push_back(res);
    }
    int it = 0;
    bool converged = have_right && res <= kExactFit * y_norm_;
    while (!converged && it < config_.max_iterations) {
      ++it;
      solve_right(f);
      solve_left(f);
      rebalance(f);
      const double prev = res;
      res = residual(f);
      out.residual_trace.push_back(res);
      if (res <= kExactFit * y_norm_ || prev - res < config_.rel_tolerance * prev) converged = true;
    }
    out.residual_norm = res;
    out.iterations = it;
    out.converged = converged;
    out.estimate = f.left * f.right.transpose();
    out.factors = std::move(f);
    return out;
  }

 private:
  void solve_right(Factors& f) const {
    const Matrix full = ens_.right_design(f.left);
    Matrix design(ens_.k(), static_cast<Eigen::Index>(right_index_.size()));
    for (std::size_t t = 0; t < right_index_.size(); ++t) design.col(t) = full.col(right_index_[t]);
    const Vector theta = ridge_solve(design, y_, config_.ridge);
    f.right.setZero(ens_.n(), layout_.total);
    for (std::size_t t = 0; t < right_index_.size(); ++t) f.right.data()[right_index_[t]] = theta(t);
  }

  void solve_left(Factors& f) const {
    const Vector theta = ridge_solve(ens_.left_design(f.right), y_, config_.ridge);
    f.left = Eigen::Map<const Matrix>(theta.data(), ens_.m(), layout_.total);
  }

  // Orthonormalizes each left block and pushes the triangular factor into
  // the right block; the product is unchanged.
  void rebalance(Factors& f) const {
    for (std::size_t j = 0; j < layout_.ranks.size(); ++j) {
      const int r = layout_.ranks[j];
      if (r == 0) continue;
      const int off = layout_.offset[j];
      Eigen::HouseholderQR<Matrix> qr(f.left.middleCols(off, r));
      const Matrix tri = qr.matrixQR().topRows(r).triangularView<Eigen::Upper>();
      f.left.middleCols(off, r) = qr.householderQ() * Matrix::Identity(ens_.m(), r);
      f.right.middleCols(off, r) = f.right.middleCols(off, r) * tri.transpose();
    }
  }

  const Vector& y_;
  const MeasurementEnsemble& ens_;
  const Assignment& assignment_;
  BlockLayout layout_;
  const DecodeConfig& config_;
  double y_norm_;
  std::vector<Eigen::Index> right_index_;
};

bool better(const RecoveryResult& a, const RecoveryResult& b) { return a.residual_norm < b.residual_norm; }

}  // namespace

Nmse nmse(const Matrix& estimate, const Matrix& truth) {
  if (estimate.rows() != truth.rows() || estimate.cols() != truth.cols())
    throw Error(ErrorKind::ShapeMismatch, "estimate and truth differ in shape");
  const double denom = truth.squaredNorm();
  if (denom == 0.0) return {estimate.squaredNorm(), true};
  return {(estimate - truth).squaredNorm() / denom, false};
}

Factors factors_from_bases(const Matrix& x, const SubspaceEnsemble& ensemble, const Assignment& assignment) {
  if (x.rows() != ensemble.m || x.cols() != assignment.columns())
    throw Error(ErrorKind::ShapeMismatch, "matrix shape does not match ensemble and assignment");
  BlockLayout layout(ensemble.ranks);
  Factors f{Matrix(ensemble.m, layout.total), Matrix::Zero(x.cols(), layout.total)};
  for (int j = 0; j < ensemble.count(); ++j)
    if (ensemble.ranks[j] > 0) f.left.middleCols(layout.offset[j], ensemble.ranks[j]) = ensemble.bases[j];
  for (Eigen::Index c = 0; c < x.cols(); ++c) {
    const int l = assignment.label(static_cast<int>(c));
    if (ensemble.ranks[l] == 0) continue;
    f.right.row(c).segment(layout.offset[l], ensemble.ranks[l]) = (ensemble.bases[l].transpose() * x.col(c)).transpose();
  }
  return f;
}

RecoveryResult als_decode(const Vector& y, const MeasurementEnsemble& ensemble, const Assignment& assignment,
                          const std::vector<int>& ranks, const DecodeConfig& config, std::uint64_t seed,
                          const Factors* start) {
  validate(y, ensemble, assignment, ranks, config);
  AlsSolver solver(y, ensemble, assignment, ranks, config);

  if (solver.total_rank() == 0) {
    RecoveryResult out;
    out.estimate = Matrix::Zero(ensemble.m(), ensemble.n());
    out.assignment = assignment;
    out.factors = {Matrix(ensemble.m(), 0), Matrix(ensemble.n(), 0)};
    out.residual_norm = y.norm();
    out.restarts_used = 1;
    out.converged = true;
    out.residual_trace = {out.residual_norm};
    return out;
  }

  if (start) {
    if (start->left.rows() != ensemble.m() || start->right.rows() != ensemble.n() ||
        start->left.cols() != solver.total_rank() || start->right.cols() != solver.total_rank())
      throw Error(ErrorKind::ShapeMismatch, "starting factors do not match the problem");
    RecoveryResult out = solver.run(*start, true);
    out.restarts_used = 1;
    return out;
  }

  RecoveryResult best;
  best.residual_norm = std::numeric_limits<double>::infinity();
  int used = 0;
  for (int r = 0; r < config.restarts; ++r) {
    Rng rng = make_rng(derive_seed(seed, {static_cast<std::uint64_t>(r)}));
    Factors f{solver.random_left(rng), Matrix::Zero(ensemble.n(), solver.total_rank())};
    RecoveryResult candidate = solver.run(std::move(f), false);
    ++used;
    if (r == 0 || better(candidate, best)) best = std::move(candidate);
    if (best.residual_norm <= kGoodEnough * solver.y_norm()) break;
  }
  best.restarts_used = used;
  return best;
}

namespace {

struct SearchSpace {
  int clusters;
  int columns;
  bool dedupe;
  std::int64_t size;

  std::vector<int> labels(std::int64_t code) const {
    std::vector<int> out(static_cast<std::size_t>(columns));
    for (int c = columns - 1; c >= 0; --c) {
      out[c] = static_cast<int>(code % clusters);
      code /= clusters;
    }
    return out;
  }

  // Restricted-growth labelings: one representative per partition.
  bool canonical(const std::vector<int>& labels) const {
    if (!dedupe) return true;
    int next = 0;
    for (int l : labels) {
      if (l > next) return false;
      if (l == next) ++next;
    }
    return true;
  }
};

SearchSpace plan_search(const MeasurementEnsemble& ensemble, int clusters, const std::vector<int>& ranks) {
  if (clusters < 1 || static_cast<int>(ranks.size()) != clusters)
    throw Error(ErrorKind::ShapeMismatch, "one rank per cluster is required");
  std::int64_t size = 1;
  for (int c = 0; c < ensemble.n(); ++c) {
    size *= clusters;
    if (size > kMaxExhaustiveAssignments)
      throw Error(ErrorKind::SearchSpaceTooLarge, "K^n exceeds " + std::to_string(kMaxExhaustiveAssignments));
  }
  const bool equal = std::all_of(ranks.begin(), ranks.end(), [&](int r) { return r == ranks.front(); });
  return {clusters, ensemble.n(), equal && clusters > 1, size};
}

struct Candidate {
  RecoveryResult result;
  std::int64_t code = -1;
};

// Lower residual wins; equal residuals go to the smaller code, which is the
// lexicographically smaller label sequence.
bool prefer(const Candidate& a, const Candidate& b) {
  if (b.code < 0) return a.code >= 0;
  if (a.code < 0) return false;
  if (a.result.residual_norm != b.result.residual_norm) return a.result.residual_norm < b.result.residual_norm;
  return a.code < b.code;
}

Candidate try_branch(const SearchSpace& space, std::int64_t code, const Vector& y,
                     const MeasurementEnsemble& ensemble, const std::vector<int>& ranks,
                     const DecodeConfig& config, std::uint64_t seed) {
  auto labels = space.labels(code);
  if (!space.canonical(labels)) return {};
  Assignment a(std::move(labels), space.clusters);
  return {als_decode(y, ensemble, a, ranks, config, derive_seed(seed, {static_cast<std::uint64_t>(code)})), code};
}

}  // namespace

RecoveryResult exhaustive_decode_serial(const Vector& y, const MeasurementEnsemble& ensemble, int clusters,
                                        const std::vector<int>& ranks, const DecodeConfig& config,
                                        std::uint64_t seed) {
  const SearchSpace space = plan_search(ensemble, clusters, ranks);
  Candidate best;
  for (std::int64_t code = 0; code < space.size; ++code) {
    Candidate c = try_branch(space, code, y, ensemble, ranks, config, seed);
    if (prefer(c, best)) best = std::move(c);
  }
  return std::move(best.result);
}

RecoveryResult exhaustive_decode(const Vector& y, const MeasurementEnsemble& ensemble, int clusters,
                                 const std::vector<int>& ranks, const DecodeConfig& config, std::uint64_t seed) {
  const SearchSpace space = plan_search(ensemble, clusters, ranks);
  Candidate best;
#pragma omp parallel if (!omp_in_parallel())
  {
    Candidate local;
#pragma omp for schedule(dynamic, 1) nowait
    for (std::int64_t code = 0; code < space.size; ++code) {
      Candidate c = try_branch(space, code, y, ensemble, ranks, config, seed);
      if (prefer(c, local)) local = std::move(c);
    }
#pragma omp critical(uos_exhaustive_reduce)
    if (prefer(local, best)) best = std::move(local);
  }
  return std::move(best.result);
}

namespace {

// Moves each column to its closest recovered subspace. The columns come from
// a refit in which every column may use all K subspaces: the block-constrained
// estimate itself would place every column in its current subspace exactly.
// A column stays put when its current subspace is within tolerance of the best.
Assignment reassign(const RecoveryResult& r, const Vector& y, const MeasurementEnsemble& ens,
                    const std::vector<int>& ranks, const DecodeConfig& config) {
  const BlockLayout layout(ranks);
  const Matrix& left = r.factors.left;
  const Vector coeff = ridge_solve(ens.right_design(left), y, config.ridge);
  const Matrix free_fit = left * Eigen::Map<const Matrix>(coeff.data(), ens.n(), layout.total).transpose();

  const Assignment& current = r.assignment;
  std::vector<int> labels(current.labels());
  for (int c = 0; c < current.columns(); ++c) {
    const Vector x = free_fit.col(c);
    const double tol = 1e-10 * (x.norm() + 1.0);
    std::vector<double> dist(ranks.size());
    for (std::size_t j = 0; j < ranks.size(); ++j)
      dist[j] = project_residual(x, Matrix(left.middleCols(layout.offset[j], ranks[j])));
    const auto best = static_cast<int>(std::min_element(dist.begin(), dist.end()) - dist.begin());
    if (dist[current.label(c)] > dist[best] + tol) labels[c] = best;
  }
  return Assignment(std::move(labels), current.clusters());
}

}  // namespace

RecoveryResult alternating_decode(const Vector& y, const MeasurementEnsemble& ensemble, int clusters,
                                  const std::vector<int>& ranks, const DecodeConfig& config, std::uint64_t seed,
                                  const std::optional<Assignment>& initial) {
  if (clusters < 1 || static_cast<int>(ranks.size()) != clusters)
    throw Error(ErrorKind::ShapeMismatch, "one rank per cluster is required");
  if (clusters == 1) return als_decode(y, ensemble, Assignment::constant(ensemble.n(), 1), ranks, config, seed);

  const int starts = initial ? 1 : config.restarts;
  const double y_norm = y.norm();
  RecoveryResult best;
  best.residual_norm = std::numeric_limits<double>::infinity();
  int used = 0;
  for (int s = 0; s < starts; ++s) {
    ++used;
    Assignment labels = initial ? *initial
                                : draw_assignment(ensemble.n(), clusters, UniformLabels{},
                                                  derive_seed(seed, {static_cast<std::uint64_t>(s), 0}));
    const std::uint64_t als_seed = initial ? seed : derive_seed(seed, {static_cast<std::uint64_t>(s), 1});
    for (int round = 0; round < config.outer_rounds; ++round) {
      const std::uint64_t round_seed = round == 0 ? als_seed : derive_seed(als_seed, {static_cast<std::uint64_t>(round)});
      RecoveryResult r = als_decode(y, ensemble, labels, ranks, config, round_seed);
      Assignment next = reassign(r, y, ensemble, ranks, config);
      if (better(r, best) || (s == 0 && round == 0)) best = std::move(r);
      if (next == labels) break;
      labels = std::move(next);
    }
    if (best.residual_norm <= kGoodEnough * y_norm) break;
  }
  if (!initial) best.restarts_used = used;
  return best;
}

}  // namespace uos
