#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lipsel/errors.hpp"

namespace lipsel {

using Matrix = std::vector<std::vector<double>>;

/// Distance value +inf. Finite values never compare equal to it.
inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

inline bool is_infinite(double d) { return d == kInfinity; }

/// Extended addition on [0, +inf]: inf + x = inf.
inline double distance_add(double a, double b) {
  if (is_infinite(a) || is_infinite(b)) return kInfinity;
  return a + b;
}

/// Relative comparison tolerance used when validating user-supplied matrices.
inline constexpr double kValidationTol = 1e-9;

/// A finite pseudometric space. Only constructible through
/// validate_pseudometric, so every instance satisfies the axioms.
class PseudometricSpace {
 public:
  std::size_t size() const { return dist_.size(); }
  double operator()(std::size_t i, std::size_t j) const { return dist_[i][j]; }
  const Matrix& matrix() const { return dist_; }
  const std::vector<std::string>& labels() const { return labels_; }

  /// True when every off-diagonal entry is finite and strictly positive.
  bool is_finite_metric() const;

  /// Restriction to the given points, in the given order.
  PseudometricSpace restrict_to(const std::vector<std::size_t>& points) const;

 private:
  friend PseudometricSpace validate_pseudometric(const Matrix&, std::vector<std::string>);
  PseudometricSpace(Matrix dist, std::vector<std::string> labels)
      : dist_(std::move(dist)), labels_(std::move(labels)) {}

  Matrix dist_;
  std::vector<std::string> labels_;
};

/// Checks the pseudometric axioms and returns the validated space. Near-
/// symmetric entries (within kValidationTol) are replaced by the upper
/// triangle. Labels default to "0", "1", ...
///
/// Throws NonzeroDiagonalError, NegativeDistanceError, AsymmetryError or
/// TriangleViolation(i, j, k) for the first offending entry in row-major
/// order; MetricError for a non-square matrix or NaN entries.
PseudometricSpace validate_pseudometric(const Matrix& matrix,
                                        std::vector<std::string> labels = {});

struct Quotient {
  PseudometricSpace space;
  /// projection[i] = class of original point i. Classes are numbered by
  /// their lowest member.
  std::vector<std::size_t> projection;
  /// members[c] = original points of class c, ascending.
  std::vector<std::vector<std::size_t>> members;
};

/// Identifies points at distance zero.
Quotient quotient_zero_distances(const PseudometricSpace& space);

/// The complete graph on a metric space, edge {i,j} of length dist(i,j).
class MetricGraph {
 public:
  /// Throws NotAMetricGraph if some off-diagonal distance is zero or
  /// infinite.
  explicit MetricGraph(PseudometricSpace base);

  const PseudometricSpace& base() const { return base_; }
  std::size_t vertex_count() const { return base_.size(); }
  std::size_t edge_count() const { return base_.size() * (base_.size() - 1) / 2; }
  double length(std::size_t i, std::size_t j) const { return base_(i, j); }
  std::vector<std::pair<std::size_t, std::size_t>> edges() const;

 private:
  PseudometricSpace base_;
};

/// All-pairs shortest paths over the graph's edges.
Matrix path_metric(const MetricGraph& graph);

struct TreeEdge {
  std::size_t a, b;
  double length;
};

/// Rooted tree with positive finite edge lengths, stored as parent links.
class WeightedTree {
 public:
  static constexpr std::size_t kNoParent = std::numeric_limits<std::size_t>::max();

  /// parent[root] must be kNoParent. Throws NotATree when the parent links
  /// contain a cycle or leave a vertex unreachable from the root, and
  /// MetricError for non-positive or non-finite lengths.
  WeightedTree(std::size_t root, std::vector<std::size_t> parent, std::vector<double> length);

  /// Builds a tree from an undirected edge list rooted at vertex 0.
  static WeightedTree from_edges(std::size_t vertex_count, const std::vector<TreeEdge>& edges);

  std::size_t vertex_count() const { return parent_.size(); }
  std::size_t root() const { return root_; }
  std::size_t parent(std::size_t v) const { return parent_[v]; }
  double parent_length(std::size_t v) const { return length_[v]; }
  std::vector<TreeEdge> edges() const;

 private:
  std::size_t root_;
  std::vector<std::size_t> parent_;
  std::vector<double> length_;
};

struct TreeMetric {
  Matrix dist;
  bool four_point = false;
};

/// Sums edge lengths along unique paths. The four-point check costs
/// O(n^4); with check_four_point = false it is skipped and reported false.
TreeMetric tree_metric(const WeightedTree& tree, bool check_four_point = true);

/// d(a,b)+d(c,d) <= max(d(a,c)+d(b,d), d(a,d)+d(b,c)) over all quadruples,
/// with absolute slack tol * max(1, largest entry).
bool satisfies_four_point(const Matrix& dist, double tol = 1e-12);

}  // namespace lipsel
