#include "uos/uos_model.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <string>

#include "uos/random.hpp"

namespace uos {

int SubspaceEnsemble::total_rank() const {
  return std::accumulate(ranks.begin(), ranks.end(), 0);
}

int SubspaceEnsemble::max_rank() const {
  return ranks.empty() ? 0 : *std::max_element(ranks.begin(), ranks.end());
}

Assignment::Assignment(std::vector<int> labels, int clusters)
    : labels_(std::move(labels)), clusters_(clusters) {
  if (clusters_ < 1) throw Error(ErrorKind::InvalidAssignment, "assignment needs at least one cluster");
  for (int l : labels_) {
    if (l < 0 || l >= clusters_)
      throw Error(ErrorKind::InvalidAssignment,
                  "label " + std::to_string(l + 1) + " outside [1, " + std::to_string(clusters_) + "]");
  }
}

Assignment Assignment::constant(int n, int clusters, int label) {
  return Assignment(std::vector<int>(static_cast<std::size_t>(n), label), clusters);
}

std::vector<int> Assignment::cluster_sizes() const {
  std::vector<int> sizes(static_cast<std::size_t>(clusters_), 0);
  for (int l : labels_) ++sizes[l];
  return sizes;
}

std::vector<int> Assignment::members(int cluster) const {
  std::vector<int> out;
  for (int j = 0; j < columns(); ++j)
    if (labels_[j] == cluster) out.push_back(j);
  return out;
}

SubspaceEnsemble sample_ensemble(int m, const std::vector<int>& ranks, std::uint64_t seed) {
  if (m < 1) throw Error(ErrorKind::InvalidDimension, "ambient dimension must be positive");
  if (ranks.empty()) throw Error(ErrorKind::InvalidDimension, "at least one subspace is required");
  for (int r : ranks) {
    if (r < 0 || r > m)
      throw Error(ErrorKind::InvalidDimension,
                  "rank " + std::to_string(r) + " not in [0, m=" + std::to_string(m) + "]");
  }
  Rng rng = make_rng(seed);
  SubspaceEnsemble out;
  out.m = m;
  out.ranks = ranks;
  out.bases.reserve(ranks.size());
  for (int r : ranks) out.bases.push_back(orthonormalize(gaussian_matrix(m, r, rng)));
  return out;
}

namespace {

Assignment draw_assignment(int n, int clusters, const AssignmentSpec& spec, Rng& rng) {
  if (n < 1) throw Error(ErrorKind::InvalidDimension, "column count must be positive");
  std::vector<int> labels(static_cast<std::size_t>(n));
  if (std::holds_alternative<UniformLabels>(spec)) {
    std::uniform_int_distribution<int> pick(0, clusters - 1);
    for (auto& l : labels) l = pick(rng);
  } else if (const auto* fixed = std::get_if<FixedSizes>(&spec)) {
    if (static_cast<int>(fixed->sizes.size()) != clusters)
      throw Error(ErrorKind::InvalidAssignment, "fixed sizes must list one count per subspace");
    long total = 0;
    for (int s : fixed->sizes) {
      if (s < 0) throw Error(ErrorKind::InvalidAssignment, "cluster sizes must be nonnegative");
      total += s;
    }
    if (total != n)
      throw Error(ErrorKind::InvalidAssignment,
                  "cluster sizes sum to " + std::to_string(total) + ", expected n=" + std::to_string(n));
    std::size_t pos = 0;
    for (int i = 0; i < clusters; ++i)
      for (int c = 0; c < fixed->sizes[i]; ++c) labels[pos++] = i;
    std::shuffle(labels.begin(), labels.end(), rng);
  } else {
    const auto& given = std::get<ExplicitLabels>(spec).labels;
    if (static_cast<int>(given.size()) != n)
      throw Error(ErrorKind::InvalidAssignment, "explicit labels must have length n");
    labels = given;
  }
  return Assignment(std::move(labels), clusters);
}

}  // namespace

Assignment draw_assignment(int n, int clusters, const AssignmentSpec& spec, std::uint64_t seed) {
  Rng rng = make_rng(seed);
  return draw_assignment(n, clusters, spec, rng);
}

UosMatrix sample_uos(const SubspaceEnsemble& ensemble, int n, const AssignmentSpec& spec,
                     double coeff_scale, std::uint64_t seed, CoefficientLaw law) {
  if (!(coeff_scale > 0.0)) throw Error(ErrorKind::Domain, "coefficient scale must be positive");
  Rng rng = make_rng(seed);
  UosMatrix out{Matrix::Zero(ensemble.m, n), draw_assignment(n, ensemble.count(), spec, rng), ensemble};

  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> box(-1.0, 1.0);
  for (int j = 0; j < n; ++j) {
    const Matrix& basis = ensemble.bases[out.assignment.label(j)];
    Vector coeff(basis.cols());
    for (Eigen::Index t = 0; t < coeff.size(); ++t)
      coeff(t) = law == CoefficientLaw::Gaussian ? normal(rng) : box(rng);
    if (coeff.size() > 0) out.data.col(j) = coeff_scale * (basis * coeff);
  }
  return out;
}

double project_residual(const Vector& x, const Matrix& basis) {
  if (x.size() != basis.rows()) throw Error(ErrorKind::ShapeMismatch, "vector length differs from m");
  if (basis.cols() == 0) return x.norm();
  return (x - basis * (basis.transpose() * x)).norm();
}

double project_residual(const Vector& x, const SubspaceEnsemble& ensemble, int i) {
  if (i < 0 || i >= ensemble.count())
    throw Error(ErrorKind::IndexOutOfRange, "subspace index " + std::to_string(i + 1) + " out of range");
  return project_residual(x, ensemble.bases[i]);
}

int numerical_rank(const Matrix& a, double rel_tol) {
  if (a.size() == 0) return 0;
  Eigen::JacobiSVD<Matrix> svd(a);
  const Vector& s = svd.singularValues();
  if (s(0) == 0.0) return 0;
  int rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > rel_tol * s(0)) ++rank;
  return rank;
}

}  // namespace uos
