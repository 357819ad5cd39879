#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "uos/common.hpp"

namespace uos {

/// K subspaces of R^m, each given by an orthonormal basis (m x r_i).
struct SubspaceEnsemble {
  int m = 0;
  std::vector<int> ranks;
  std::vector<Matrix> bases;

  int count() const { return static_cast<int>(ranks.size()); }
  int total_rank() const;
  int max_rank() const;
};

/// Column-to-subspace labels. Labels are zero-based in memory; text
/// interfaces print them one-based.
class Assignment {
 public:
  Assignment() = default;
  /// Throws InvalidAssignment if a label falls outside [0, K).
  Assignment(std::vector<int> labels, int clusters);

  static Assignment constant(int n, int clusters, int label = 0);

  int columns() const { return static_cast<int>(labels_.size()); }
  int clusters() const { return clusters_; }
  int label(int column) const { return labels_[column]; }
  const std::vector<int>& labels() const { return labels_; }
  std::vector<int> cluster_sizes() const;
  std::vector<int> members(int cluster) const;

  bool operator==(const Assignment&) const = default;

 private:
  std::vector<int> labels_;
  int clusters_ = 0;
};

struct UniformLabels {};
struct FixedSizes {
  std::vector<int> sizes;
};
struct ExplicitLabels {
  std::vector<int> labels;  // zero-based
};
using AssignmentSpec = std::variant<UniformLabels, FixedSizes, ExplicitLabels>;

enum class CoefficientLaw {
  Gaussian,  // i.i.d. N(0,1)
  UnitBox,   // i.i.d. uniform on [-1, 1]; keeps sampled sets bounded
};

struct UosMatrix {
  Matrix data;
  Assignment assignment;
  SubspaceEnsemble ensemble;
};

SubspaceEnsemble sample_ensemble(int m, const std::vector<int>& ranks, std::uint64_t seed);

Assignment draw_assignment(int n, int clusters, const AssignmentSpec& spec, std::uint64_t seed);

UosMatrix sample_uos(const SubspaceEnsemble& ensemble, int n, const AssignmentSpec& spec,
                     double coeff_scale, std::uint64_t seed,
                     CoefficientLaw law = CoefficientLaw::Gaussian);

/// ||x - B_i B_i^T x||_2 for the zero-based subspace index i.
double project_residual(const Vector& x, const SubspaceEnsemble& ensemble, int i);
double project_residual(const Vector& x, const Matrix& basis);

/// Number of singular values above rel_tol * sigma_max.
int numerical_rank(const Matrix& a, double rel_tol = 1e-10);

}  // namespace uos
