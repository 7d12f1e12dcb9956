#include "lipsel/metric_spaces.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace lipsel {

namespace {

bool approx_equal(double a, double b) {
  if (is_infinite(a) || is_infinite(b)) return a == b;
  return std::abs(a - b) <= kValidationTol * std::max(std::abs(a), std::abs(b));
}

// a <= b up to relative tolerance; b may be infinite.
bool approx_le(double a, double b) {
  if (is_infinite(b)) return true;
  if (is_infinite(a)) return false;
  return a <= b + kValidationTol * std::max(std::abs(a), std::abs(b));
}

}  // namespace

PseudometricSpace validate_pseudometric(const Matrix& matrix, std::vector<std::string> labels) {
  const std::size_t n = matrix.size();
  if (n == 0) throw MetricError("distance matrix is empty");
  for (std::size_t i = 0; i < n; ++i) {
    if (matrix[i].size() != n) {
      throw MetricError("distance matrix is not square: row " + std::to_string(i) + " has " +
                        std::to_string(matrix[i].size()) + " entries, expected " +
                        std::to_string(n));
    }
    for (std::size_t j = 0; j < n; ++j) {
      if (std::isnan(matrix[i][j])) {
        throw MetricError("NaN distance at (" + std::to_string(i) + "," + std::to_string(j) + ")");
      }
    }
  }
  if (!labels.empty() && labels.size() != n) {
    throw MetricError("expected " + std::to_string(n) + " labels, got " +
                      std::to_string(labels.size()));
  }

  for (std::size_t i = 0; i < n; ++i) {
    if (matrix[i][i] != 0.0) throw NonzeroDiagonalError(i);
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (matrix[i][j] < 0.0) throw NegativeDistanceError(i, j);
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (!approx_equal(matrix[i][j], matrix[j][i])) throw AsymmetryError(i, j);
    }
  }

  Matrix dist = matrix;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) dist[j][i] = dist[i][j];
  }

  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      for (std::size_t k = 0; k < n; ++k) {
        if (k == i || k == j) continue;
        const double rhs = distance_add(dist[i][k], dist[k][j]);
        if (!approx_le(dist[i][j], rhs)) throw TriangleViolation(i, j, k);
      }
    }
  }

  if (labels.empty()) {
    labels.reserve(n);
    for (std::size_t i = 0; i < n; ++i) labels.push_back(std::to_string(i));
  }
  return PseudometricSpace(std::move(dist), std::move(labels));
}

bool PseudometricSpace::is_finite_metric() const {
  for (std::size_t i = 0; i < size(); ++i) {
    for (std::size_t j = 0; j < size(); ++j) {
      if (i != j && (dist_[i][j] <= 0.0 || is_infinite(dist_[i][j]))) return false;
    }
  }
  return true;
}

PseudometricSpace PseudometricSpace::restrict_to(const std::vector<std::size_t>& points) const {
  Matrix sub(points.size(), std::vector<double>(points.size()));
  std::vector<std::string> names;
  names.reserve(points.size());
  for (std::size_t a = 0; a < points.size(); ++a) {
    names.push_back(labels_.at(points[a]));
    for (std::size_t b = 0; b < points.size(); ++b) sub[a][b] = dist_[points[a]][points[b]];
  }
  return PseudometricSpace(std::move(sub), std::move(names));
}

Quotient quotient_zero_distances(const PseudometricSpace& space) {
  const std::size_t n = space.size();
  std::vector<std::size_t> root(n);
  std::iota(root.begin(), root.end(), 0);
  auto find = [&](std::size_t v) {
    while (root[v] != v) v = root[v] = root[root[v]];
    return v;
  };
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (space(i, j) == 0.0) {
        const std::size_t a = find(i), b = find(j);
        // Keep the lowest index as the class root.
        if (a < b) root[b] = a;
        else if (b < a) root[a] = b;
      }
    }
  }

  std::vector<std::size_t> projection(n);
  std::vector<std::vector<std::size_t>> members;
  constexpr std::size_t kUnset = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> class_of_root(n, kUnset);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t r = find(i);
    if (class_of_root[r] == kUnset) {
      class_of_root[r] = members.size();
      members.emplace_back();
    }
    projection[i] = class_of_root[r];
    members[projection[i]].push_back(i);
  }

  const std::size_t q = members.size();
  Matrix dist(q, std::vector<double>(q, 0.0));
  std::vector<std::string> labels;
  labels.reserve(q);
  for (std::size_t a = 0; a < q; ++a) {
    labels.push_back(space.labels()[members[a].front()]);
    for (std::size_t b = 0; b < q; ++b) {
      if (a != b) dist[a][b] = space(members[a].front(), members[b].front());
    }
  }
  return Quotient{validate_pseudometric(dist, std::move(labels)), std::move(projection),
                  std::move(members)};
}

MetricGraph::MetricGraph(PseudometricSpace base) : base_(std::move(base)) {
  for (std::size_t i = 0; i < base_.size(); ++i) {
    for (std::size_t j = i + 1; j < base_.size(); ++j) {
      const double d = base_(i, j);
      if (!(d > 0.0) || is_infinite(d)) {
        throw NotAMetricGraph("edge (" + std::to_string(i) + "," + std::to_string(j) +
                              ") needs a finite positive length");
      }
    }
  }
}

std::vector<std::pair<std::size_t, std::size_t>> MetricGraph::edges() const {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  out.reserve(edge_count());
  for (std::size_t i = 0; i < vertex_count(); ++i) {
    for (std::size_t j = i + 1; j < vertex_count(); ++j) out.emplace_back(i, j);
  }
  return out;
}

Matrix path_metric(const MetricGraph& graph) {
  const std::size_t n = graph.vertex_count();
  Matrix d(n, std::vector<double>(n, kInfinity));
  for (std::size_t i = 0; i < n; ++i) d[i][i] = 0.0;
  for (const auto& [i, j] : graph.edges()) d[i][j] = d[j][i] = graph.length(i, j);
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        const double via = distance_add(d[i][k], d[k][j]);
        if (via < d[i][j]) d[i][j] = via;
      }
    }
  }
  return d;
}

WeightedTree::WeightedTree(std::size_t root, std::vector<std::size_t> parent,
                           std::vector<double> length)
    : root_(root), parent_(std::move(parent)), length_(std::move(length)) {
  const std::size_t n = parent_.size();
  if (n == 0) throw NotATree("tree has no vertices");
  if (length_.size() != n) throw MetricError("parent and length arrays differ in size");
  if (root_ >= n) throw NotATree("root " + std::to_string(root_) + " out of range");
  if (parent_[root_] != kNoParent) throw NotATree("root has a parent");
  for (std::size_t v = 0; v < n; ++v) {
    if (v == root_) continue;
    if (parent_[v] == kNoParent) {
      throw NotATree("vertex " + std::to_string(v) + " is disconnected from the root");
    }
    if (parent_[v] >= n) throw NotATree("parent of vertex " + std::to_string(v) + " out of range");
    if (!(length_[v] > 0.0) || is_infinite(length_[v])) {
      throw MetricError("edge above vertex " + std::to_string(v) +
                        " needs a finite positive length");
    }
  }
  // Every parent chain must reach the root within n steps.
  for (std::size_t v = 0; v < n; ++v) {
    std::size_t u = v, steps = 0;
    while (u != root_) {
      u = parent_[u];
      if (++steps > n) throw NotATree("cycle through vertex " + std::to_string(v));
    }
  }
}

WeightedTree WeightedTree::from_edges(std::size_t vertex_count, const std::vector<TreeEdge>& edges) {
  if (vertex_count == 0) throw NotATree("tree has no vertices");
  if (edges.size() + 1 != vertex_count) {
    throw NotATree(std::to_string(edges.size()) + " edges for " + std::to_string(vertex_count) +
                   " vertices");
  }
  std::vector<std::vector<std::pair<std::size_t, double>>> adj(vertex_count);
  for (const auto& e : edges) {
    if (e.a >= vertex_count || e.b >= vertex_count) throw NotATree("edge endpoint out of range");
    if (e.a == e.b) throw NotATree("self-loop at vertex " + std::to_string(e.a));
    adj[e.a].emplace_back(e.b, e.length);
    adj[e.b].emplace_back(e.a, e.length);
  }
  std::vector<std::size_t> parent(vertex_count, kNoParent);
  std::vector<double> length(vertex_count, 0.0);
  std::vector<bool> seen(vertex_count, false);
  std::vector<std::size_t> stack{0};
  seen[0] = true;
  while (!stack.empty()) {
    const std::size_t u = stack.back();
    stack.pop_back();
    for (const auto& [v, len] : adj[u]) {
      if (seen[v]) continue;
      seen[v] = true;
      parent[v] = u;
      length[v] = len;
      stack.push_back(v);
    }
  }
  for (std::size_t v = 0; v < vertex_count; ++v) {
    if (!seen[v]) throw NotATree("vertex " + std::to_string(v) + " is disconnected (cycle elsewhere)");
  }
  return WeightedTree(0, std::move(parent), std::move(length));
}

std::vector<TreeEdge> WeightedTree::edges() const {
  std::vector<TreeEdge> out;
  for (std::size_t v = 0; v < vertex_count(); ++v) {
    if (v != root_) out.push_back({parent_[v], v, length_[v]});
  }
  return out;
}

TreeMetric tree_metric(const WeightedTree& tree, bool check_four_point) {
  const std::size_t n = tree.vertex_count();
  std::vector<std::vector<std::pair<std::size_t, double>>> adj(n);
  for (const auto& e : tree.edges()) {
    adj[e.a].emplace_back(e.b, e.length);
    adj[e.b].emplace_back(e.a, e.length);
  }
  TreeMetric out;
  out.dist.assign(n, std::vector<double>(n, kInfinity));
  for (std::size_t s = 0; s < n; ++s) {
    auto& row = out.dist[s];
    row[s] = 0.0;
    std::vector<std::size_t> stack{s};
    while (!stack.empty()) {
      const std::size_t u = stack.back();
      stack.pop_back();
      for (const auto& [v, len] : adj[u]) {
        if (!is_infinite(row[v])) continue;
        row[v] = row[u] + len;
        stack.push_back(v);
      }
    }
  }
  // Both directions are computed separately; make the result symmetric.
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) out.dist[j][i] = out.dist[i][j];
  }
  out.four_point = check_four_point && satisfies_four_point(out.dist);
  return out;
}

bool satisfies_four_point(const Matrix& d, double tol) {
  const std::size_t n = d.size();
  double scale = 1.0;
  for (const auto& row : d) {
    for (double v : row) {
      if (is_infinite(v)) return false;
      scale = std::max(scale, v);
    }
  }
  const double slack = tol * scale;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      for (std::size_t c = 0; c < n; ++c) {
        for (std::size_t e = 0; e < n; ++e) {
          const double lhs = d[a][b] + d[c][e];
          const double rhs = std::max(d[a][c] + d[b][e], d[a][e] + d[b][c]);
          if (lhs > rhs + slack) return false;
        }
      }
    }
  }
  return true;
}

}  // namespace lipsel
