#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "lipsel/convex_geometry.hpp"
#include "lipsel/metric_spaces.hpp"
#include "lipsel/selection_solver.hpp"

namespace lipsel {

/// A node of the truncated universal cover: a non-backtracking walk from
/// the basepoint.
struct CoverNode {
  static constexpr std::size_t kNoParent = std::numeric_limits<std::size_t>::max();

  std::vector<std::size_t> walk;
  std::size_t parent = kNoParent;
  double edge_length = 0.0;  // length of the edge to the parent
  /// children[v] = node reached by appending v, or kNoParent.
  std::vector<std::size_t> children;

  std::size_t depth() const { return walk.size() - 1; }
  std::size_t vertex() const { return walk.back(); }
};

struct CoverOptions {
  double node_cap = 1e5;
};

/// Universal cover of a complete metric graph, truncated at walks of
/// length L. Nodes are ordered by (depth, walk) lexicographically; node 0
/// is the basepoint. Deck transformations are not materialised: the fiber
/// over a vertex stands in for its orbit.
class CoveringTree {
 public:
  const MetricGraph& base() const { return base_; }
  std::size_t basepoint() const { return basepoint_; }
  std::size_t depth_limit() const { return depth_limit_; }
  std::size_t size() const { return nodes_.size(); }
  std::size_t edge_count() const { return nodes_.size() - 1; }
  const std::vector<CoverNode>& nodes() const { return nodes_; }
  const CoverNode& node(std::size_t i) const { return nodes_[i]; }
  /// Covering projection p.
  std::size_t projection(std::size_t i) const { return nodes_[i].vertex(); }

  std::optional<std::size_t> find(const std::vector<std::size_t>& walk) const;

  /// Path metric on the tree (sum of edge lengths up to the common prefix).
  double distance(std::size_t a, std::size_t b) const;
  Matrix distance_matrix() const;
  /// The node set with its tree metric; labels are the walks ("0-2-1").
  PseudometricSpace metric() const;
  WeightedTree as_weighted_tree() const;

 private:
  friend CoveringTree build_cover(const MetricGraph&, std::size_t, std::size_t,
                                  const CoverOptions&);
  CoveringTree(MetricGraph base, std::size_t basepoint, std::size_t depth)
      : base_(std::move(base)), basepoint_(basepoint), depth_limit_(depth) {}

  MetricGraph base_;
  std::size_t basepoint_;
  std::size_t depth_limit_;
  std::vector<CoverNode> nodes_;
};

/// 1 + Σ_{k=1..L} (n-1)(n-2)^(k-1): non-backtracking walks of length <= L
/// from a vertex of K_n.
double cover_node_count(std::size_t n, std::size_t depth);

/// Throws InvalidBasepoint, NodeBudgetExceeded, DepthOutOfRange for L == 0.
CoveringTree build_cover(const MetricGraph& graph, std::size_t basepoint, std::size_t depth,
                         const CoverOptions& options = {});

/// Rank of the free deck group: |E| - |V| + 1.
std::size_t deck_rank(const MetricGraph& graph);

/// Nodes over x with depth <= max_depth, in node order. Throws
/// DepthOutOfRange when max_depth exceeds the truncation depth.
std::vector<std::size_t> fiber(const CoveringTree& tree, std::size_t x, std::size_t max_depth);

struct FiberDistance {
  double value = kInfinity;
  /// Node of the fiber attaining the minimum.
  std::size_t witness = CoverNode::kNoParent;
  /// False when depth(node) + 1 > L: the truncated fiber may miss the true
  /// nearest lift and `value` is then only an upper bound.
  bool exact = true;
};

/// min over the truncated fiber over y of d_Γ(node, ·).
FiberDistance fiber_min_distance(const CoveringTree& tree, std::size_t node, std::size_t y);

/// node ↦ F(p(node)) on the tree metric.
SetValuedMap pullback_map(const SetValuedMap& map, const CoveringTree& tree);

struct PulledSelection {
  Selection selection;  // over `nodes`, with the tree metric
  std::vector<std::size_t> nodes;
};

/// node ↦ f(p(node)) for every node over `subset`; f.points[k] is the
/// value at base vertex subset[k].
PulledSelection pullback_selection(const Selection& f, const std::vector<std::size_t>& subset,
                                   const CoveringTree& tree);
PulledSelection pullback_selection(const Selection& f, const CoveringTree& tree);

/// G(x) = conv f(fiber(x, hull_depth)); witness_sets hold the same hulls
/// one level deeper, used by the one-sided check.
struct CoreMap {
  std::vector<Polytope> sets;
  std::vector<Polytope> witness_sets;
  double c = 0.0;
  std::size_t hull_depth = 0;
};

/// f is a selection on all tree nodes (node order). Throws DepthOutOfRange
/// unless hull_depth + 1 <= L, and EmptyFiber for a vertex with no lift
/// within hull_depth.
CoreMap build_core(const CoveringTree& tree, const Selection& f, std::size_t hull_depth,
                   bool prune = false);

struct CorePairCheck {
  std::size_t x = 0, y = 0;
  double distance = 0.0;  // d(x, y)
  double bound = 0.0;     // c * d(x, y)
  /// max over generators of G(y) of the distance to the witness hull over x,
  /// and the same with roles swapped.
  double one_sided_xy = 0.0;
  double one_sided_yx = 0.0;
  double one_sided_slack = 0.0;  // bound - max(one_sided_xy, one_sided_yx)
  bool one_sided_pass = true;
  double hausdorff = 0.0;
  double hausdorff_slack = 0.0;
  /// Two-sided excess above bound + tol; a truncation artifact, not a failure.
  bool hausdorff_flagged = false;
};

struct CoreReport {
  double tol = 0.0;
  /// Per vertex: max distance of a generator of G(x) to F(x).
  std::vector<double> containment;
  bool containment_pass = true;
  std::vector<CorePairCheck> pairs;  // x < y
  bool one_sided_pass = true;
  std::size_t hausdorff_flags = 0;
  double min_one_sided_slack = kInfinity;
  double min_hausdorff_slack = kInfinity;

  bool ok() const { return containment_pass && one_sided_pass; }
};

CoreReport verify_core(const CoreMap& core, const SetValuedMap& map, const CoveringTree& tree,
                       double tol);

struct CorePipelineOptions {
  std::size_t depth = 4;
  std::size_t hull_depth = 3;
  double tol = 1e-9;
  std::size_t basepoint = 0;
  double node_cap = 1e5;
  bool prune = false;
  SelectionOptions selection;
};

struct CorePipelineResult {
  Quotient quotient;
  SetValuedMap base_map;  // F on the quotient
  CoveringTree tree;
  OptimalSelection base_selection;
  PulledSelection pulled;
  SelectionReport pullback_report;
  OptimalSelection tree_selection;
  CoreMap core;
  CoreReport report;

  bool ok() const { return pullback_report.ok() && report.ok(); }
};

/// F on the quotient: every class must carry a single polytope (as a set).
/// Throws ZeroDistanceConflict otherwise.
SetValuedMap quotient_map(const SetValuedMap& map, const Quotient& quotient);

/// quotient → complete graph → cover → optimal selection on the cover →
/// pullback check of the base optimum → core → verification.
CorePipelineResult run_core_pipeline(const SetValuedMap& map, const CorePipelineOptions& options);

}  // namespace lipsel
