#include "lipsel/covering_core.hpp"

#include <algorithm>
#include <cmath>

namespace lipsel {

double cover_node_count(std::size_t n, std::size_t depth) {
  if (n <= 1) return 1.0;
  double total = 1.0, layer = static_cast<double>(n - 1);
  for (std::size_t k = 1; k <= depth; ++k) {
    total += layer;
    layer *= static_cast<double>(n - 2);
  }
  return total;
}

CoveringTree build_cover(const MetricGraph& graph, std::size_t basepoint, std::size_t depth,
                         const CoverOptions& options) {
  const std::size_t n = graph.vertex_count();
  if (basepoint >= n) throw InvalidBasepoint(basepoint, n);
  if (depth == 0) throw DepthOutOfRange("cover depth must be at least 1");
  const double projected = cover_node_count(n, depth);
  if (projected > options.node_cap) throw NodeBudgetExceeded(projected, options.node_cap);

  CoveringTree tree(graph, basepoint, depth);
  auto& nodes = tree.nodes_;
  nodes.reserve(static_cast<std::size_t>(projected));
  nodes.push_back(CoverNode{{basepoint}, CoverNode::kNoParent, 0.0,
                            std::vector<std::size_t>(n, CoverNode::kNoParent)});

  std::size_t layer_begin = 0;
  for (std::size_t k = 1; k <= depth; ++k) {
    const std::size_t layer_end = nodes.size();
    for (std::size_t i = layer_begin; i < layer_end; ++i) {
      for (std::size_t v = 0; v < n; ++v) {
        const auto& w = nodes[i].walk;
        if (v == w.back()) continue;
        if (w.size() >= 2 && v == w[w.size() - 2]) continue;
        std::vector<std::size_t> walk = w;
        walk.push_back(v);
        const double len = graph.length(w.back(), v);
        nodes[i].children[v] = nodes.size();
        nodes.push_back(CoverNode{std::move(walk), i, len,
                                  std::vector<std::size_t>(n, CoverNode::kNoParent)});
      }
    }
    layer_begin = layer_end;
  }
  return tree;
}

std::optional<std::size_t> CoveringTree::find(const std::vector<std::size_t>& walk) const {
  if (walk.empty() || walk.front() != basepoint_) return std::nullopt;
  std::size_t cur = 0;
  for (std::size_t i = 1; i < walk.size(); ++i) {
    if (walk[i] >= base_.vertex_count()) return std::nullopt;
    cur = nodes_[cur].children[walk[i]];
    if (cur == CoverNode::kNoParent) return std::nullopt;
  }
  return cur;
}

double CoveringTree::distance(std::size_t a, std::size_t b) const {
  const auto& wa = nodes_[a].walk;
  const auto& wb = nodes_[b].walk;
  std::size_t common = 0;
  while (common < wa.size() && common < wb.size() && wa[common] == wb[common]) ++common;
  // The lowest common ancestor sits at depth common - 1.
  double total = 0.0;
  for (std::size_t v = a; nodes_[v].depth() + 1 > common; v = nodes_[v].parent) {
    total += nodes_[v].edge_length;
  }
  for (std::size_t v = b; nodes_[v].depth() + 1 > common; v = nodes_[v].parent) {
    total += nodes_[v].edge_length;
  }
  return total;
}

Matrix CoveringTree::distance_matrix() const {
  const std::size_t n = size();
  Matrix d(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) d[i][j] = d[j][i] = distance(i, j);
  }
  return d;
}

PseudometricSpace CoveringTree::metric() const {
  std::vector<std::string> labels;
  labels.reserve(size());
  for (const auto& node : nodes_) {
    std::string s;
    for (std::size_t i = 0; i < node.walk.size(); ++i) {
      if (i) s += '-';
      s += std::to_string(node.walk[i]);
    }
    labels.push_back(std::move(s));
  }
  return validate_pseudometric(distance_matrix(), std::move(labels));
}

WeightedTree CoveringTree::as_weighted_tree() const {
  std::vector<std::size_t> parent;
  std::vector<double> length;
  for (const auto& node : nodes_) {
    parent.push_back(node.parent == CoverNode::kNoParent ? WeightedTree::kNoParent : node.parent);
    length.push_back(node.edge_length);
  }
  return WeightedTree(0, std::move(parent), std::move(length));
}

std::size_t deck_rank(const MetricGraph& graph) {
  const std::size_t n = graph.vertex_count();
  return graph.edge_count() + 1 - n;
}

std::vector<std::size_t> fiber(const CoveringTree& tree, std::size_t x, std::size_t max_depth) {
  if (max_depth > tree.depth_limit()) {
    throw DepthOutOfRange("fiber depth " + std::to_string(max_depth) + " exceeds cover depth " +
                          std::to_string(tree.depth_limit()));
  }
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < tree.size(); ++i) {
    const auto& node = tree.node(i);
    if (node.depth() > max_depth) break;  // nodes are sorted by depth
    if (node.vertex() == x) out.push_back(i);
  }
  return out;
}

FiberDistance fiber_min_distance(const CoveringTree& tree, std::size_t node, std::size_t y) {
  FiberDistance out;
  out.exact = tree.node(node).depth() + 1 <= tree.depth_limit();
  for (std::size_t other : fiber(tree, y, tree.depth_limit())) {
    const double d = tree.distance(node, other);
    if (d < out.value) {
      out.value = d;
      out.witness = other;
    }
  }
  return out;
}

SetValuedMap pullback_map(const SetValuedMap& map, const CoveringTree& tree) {
  if (map.size() != tree.base().vertex_count()) {
    throw Error("map has " + std::to_string(map.size()) + " points, base graph has " +
                std::to_string(tree.base().vertex_count()));
  }
  std::vector<Polytope> values;
  values.reserve(tree.size());
  for (std::size_t i = 0; i < tree.size(); ++i) values.push_back(map.value(tree.projection(i)));
  return SetValuedMap(tree.metric(), std::move(values), map.norm_kind(), map.m());
}

PulledSelection pullback_selection(const Selection& f, const std::vector<std::size_t>& subset,
                                   const CoveringTree& tree) {
  if (f.points.size() != subset.size()) {
    throw Error("selection has " + std::to_string(f.points.size()) + " points for a subset of " +
                std::to_string(subset.size()));
  }
  const std::size_t n = tree.base().vertex_count();
  std::vector<std::size_t> position(n, CoverNode::kNoParent);
  for (std::size_t k = 0; k < subset.size(); ++k) position.at(subset[k]) = k;

  std::vector<std::size_t> nodes;
  std::vector<Vector> points;
  for (std::size_t i = 0; i < tree.size(); ++i) {
    const std::size_t k = position[tree.projection(i)];
    if (k == CoverNode::kNoParent) continue;
    nodes.push_back(i);
    points.push_back(f.points[k]);
  }
  if (nodes.empty()) throw Error("no cover node lies over the selection's domain");
  Selection pulled = make_selection(tree.metric().restrict_to(nodes), std::move(points), f.norm);
  return PulledSelection{std::move(pulled), std::move(nodes)};
}

PulledSelection pullback_selection(const Selection& f, const CoveringTree& tree) {
  std::vector<std::size_t> all(tree.base().vertex_count());
  for (std::size_t v = 0; v < all.size(); ++v) all[v] = v;
  return pullback_selection(f, all, tree);
}

CoreMap build_core(const CoveringTree& tree, const Selection& f, std::size_t hull_depth,
                   bool prune) {
  if (f.points.size() != tree.size()) {
    throw Error("core needs a selection on all " + std::to_string(tree.size()) + " cover nodes");
  }
  if (hull_depth + 1 > tree.depth_limit()) {
    throw DepthOutOfRange("hull depth " + std::to_string(hull_depth) +
                          " needs a cover of depth at least " + std::to_string(hull_depth + 1));
  }
  auto hull_over = [&](std::size_t x, std::size_t depth) {
    std::vector<Vector> gens;
    for (std::size_t node : fiber(tree, x, depth)) gens.push_back(f.points[node]);
    if (gens.empty()) throw EmptyFiber(x, depth);
    Polytope p(std::move(gens));
    return prune ? prune_generators(p) : p;
  };
  CoreMap core;
  core.c = f.seminorm;
  core.hull_depth = hull_depth;
  for (std::size_t x = 0; x < tree.base().vertex_count(); ++x) {
    core.sets.push_back(hull_over(x, hull_depth));
    core.witness_sets.push_back(hull_over(x, hull_depth + 1));
  }
  return core;
}

CoreReport verify_core(const CoreMap& core, const SetValuedMap& map, const CoveringTree& tree,
                       double tol) {
  const std::size_t n = tree.base().vertex_count();
  if (map.size() != n || core.sets.size() != n || core.witness_sets.size() != n) {
    throw Error("core, map and cover disagree on the number of base points");
  }
  const NormKind kind = map.norm_kind();
  CoreReport report;
  report.tol = tol;

  for (std::size_t x = 0; x < n; ++x) {
    const double worst = directed_hausdorff(core.sets[x], map.value(x), kind);
    report.containment.push_back(worst);
    if (worst > kContainmentTol) report.containment_pass = false;
  }

  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = x + 1; y < n; ++y) {
      CorePairCheck pc;
      pc.x = x;
      pc.y = y;
      pc.distance = tree.base().length(x, y);
      pc.bound = core.c * pc.distance;
      pc.one_sided_xy = directed_hausdorff(core.sets[y], core.witness_sets[x], kind);
      pc.one_sided_yx = directed_hausdorff(core.sets[x], core.witness_sets[y], kind);
      const double worst = std::max(pc.one_sided_xy, pc.one_sided_yx);
      pc.one_sided_slack = pc.bound - worst;
      pc.one_sided_pass = worst <= pc.bound + tol;
      pc.hausdorff = hausdorff_distance(core.sets[x], core.sets[y], kind);
      pc.hausdorff_slack = pc.bound - pc.hausdorff;
      pc.hausdorff_flagged = pc.hausdorff > pc.bound + tol;

      report.one_sided_pass = report.one_sided_pass && pc.one_sided_pass;
      if (pc.hausdorff_flagged) ++report.hausdorff_flags;
      report.min_one_sided_slack = std::min(report.min_one_sided_slack, pc.one_sided_slack);
      report.min_hausdorff_slack = std::min(report.min_hausdorff_slack, pc.hausdorff_slack);
      report.pairs.push_back(pc);
    }
  }
  return report;
}

SetValuedMap quotient_map(const SetValuedMap& map, const Quotient& quotient) {
  std::vector<Polytope> values;
  for (const auto& members : quotient.members) {
    const Polytope& rep = map.value(members.front());
    for (std::size_t k = 1; k < members.size(); ++k) {
      const Polytope& other = map.value(members[k]);
      if (!(other == rep) &&
          hausdorff_distance(rep, other, NormKind::Linf) > kContainmentTol) {
        throw ZeroDistanceConflict(members.front(), members[k]);
      }
    }
    values.push_back(rep);
  }
  return SetValuedMap(quotient.space, std::move(values), map.norm_kind(), map.m());
}

CorePipelineResult run_core_pipeline(const SetValuedMap& map, const CorePipelineOptions& options) {
  if (options.hull_depth + 1 > options.depth) {
    throw DepthOutOfRange("hull depth " + std::to_string(options.hull_depth) +
                          " must be at most L - 1 = " +
                          std::to_string(static_cast<long>(options.depth) - 1));
  }
  Quotient quotient = quotient_zero_distances(map.space());
  SetValuedMap base_map = quotient_map(map, quotient);
  MetricGraph graph(base_map.space());
  CoveringTree tree = build_cover(graph, options.basepoint, options.depth,
                                  CoverOptions{options.node_cap});

  OptimalSelection base_selection = optimal_selection(base_map, options.selection);
  const SetValuedMap lifted = pullback_map(base_map, tree);
  PulledSelection pulled = pullback_selection(base_selection.selection, tree);
  SelectionReport pullback_report =
      verify_selection(pulled.selection, lifted, base_selection.selection.seminorm);

  OptimalSelection tree_selection = optimal_selection(lifted, options.selection);
  CoreMap core = build_core(tree, tree_selection.selection, options.hull_depth, options.prune);
  CoreReport report = verify_core(core, base_map, tree, options.tol);

  return CorePipelineResult{std::move(quotient),       std::move(base_map),
                            std::move(tree),           std::move(base_selection),
                            std::move(pulled),         std::move(pullback_report),
                            std::move(tree_selection), std::move(core),
                            std::move(report)};
}

}  // namespace lipsel
