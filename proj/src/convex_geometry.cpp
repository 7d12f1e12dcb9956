#include "lipsel/convex_geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "lipsel/simplex.hpp"

namespace lipsel {

const char* to_string(NormKind kind) {
  switch (kind) {
    case NormKind::Linf: return "linf";
    case NormKind::L1: return "l1";
    case NormKind::L2: return "l2";
  }
  return "?";
}

std::optional<NormKind> parse_norm(std::string_view name) {
  if (name == "linf") return NormKind::Linf;
  if (name == "l1") return NormKind::L1;
  if (name == "l2") return NormKind::L2;
  return std::nullopt;
}

double norm(std::span<const double> v, NormKind kind) {
  double acc = 0.0;
  switch (kind) {
    case NormKind::Linf:
      for (double x : v) acc = std::max(acc, std::abs(x));
      return acc;
    case NormKind::L1:
      for (double x : v) acc += std::abs(x);
      return acc;
    case NormKind::L2:
      for (double x : v) acc += x * x;
      return std::sqrt(acc);
  }
  return acc;
}

double norm_distance(std::span<const double> a, std::span<const double> b, NormKind kind) {
  if (a.size() != b.size()) throw DimensionMismatch(a.size(), b.size());
  Vector diff(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) diff[i] = a[i] - b[i];
  return norm(diff, kind);
}

Polytope::Polytope(std::vector<Vector> vertices) : vertices_(std::move(vertices)) {
  if (vertices_.empty()) throw EmptyInput("polytope needs at least one generator");
  const std::size_t d = vertices_.front().size();
  if (d == 0) throw DimensionMismatch(1, 0);
  for (const auto& v : vertices_) {
    if (v.size() != d) throw DimensionMismatch(d, v.size());
  }
}

Vector Polytope::combine(std::span<const double> weights) const {
  Vector out(dimension(), 0.0);
  for (std::size_t k = 0; k < vertices_.size(); ++k) {
    if (weights[k] == 0.0) continue;
    for (std::size_t c = 0; c < out.size(); ++c) out[c] += weights[k] * vertices_[k][c];
  }
  return out;
}

std::size_t affine_dimension(const Polytope& p) {
  const std::size_t d = p.dimension();
  std::vector<Vector> rows;
  double scale = 0.0;
  for (std::size_t k = 1; k < p.size(); ++k) {
    Vector r(d);
    for (std::size_t c = 0; c < d; ++c) {
      r[c] = p.vertex(k)[c] - p.vertex(0)[c];
      scale = std::max(scale, std::abs(r[c]));
    }
    rows.push_back(std::move(r));
  }
  if (rows.empty() || scale == 0.0) return 0;
  const double tol = 1e-9 * std::max(1.0, scale);

  std::size_t rank = 0;
  for (std::size_t col = 0; col < d && rank < rows.size(); ++col) {
    std::size_t pivot = rank;
    for (std::size_t i = rank + 1; i < rows.size(); ++i) {
      if (std::abs(rows[i][col]) > std::abs(rows[pivot][col])) pivot = i;
    }
    if (std::abs(rows[pivot][col]) <= tol) continue;
    std::swap(rows[pivot], rows[rank]);
    for (std::size_t i = rank + 1; i < rows.size(); ++i) {
      const double f = rows[i][col] / rows[rank][col];
      for (std::size_t c = col; c < d; ++c) rows[i][c] -= f * rows[rank][c];
    }
    ++rank;
  }
  return rank;
}

namespace {

void check_dimension(std::span<const double> x, const Polytope& p) {
  if (x.size() != p.dimension()) throw DimensionMismatch(p.dimension(), x.size());
}

// Clamp LP round-off so the weights form an exact convex combination.
std::vector<double> clean_weights(std::vector<double> w) {
  double sum = 0.0;
  for (double& v : w) {
    v = std::max(v, 0.0);
    sum += v;
  }
  if (sum <= 0.0) {
    std::fill(w.begin(), w.end(), 0.0);
    w.front() = 1.0;
    return w;
  }
  for (double& v : w) v /= sum;
  return w;
}

NearestPoint finish(std::span<const double> x, const Polytope& p, std::vector<double> weights,
                    NormKind kind) {
  NearestPoint out;
  out.weights = clean_weights(std::move(weights));
  out.point = p.combine(out.weights);
  out.distance = norm_distance(x, out.point, kind);
  return out;
}

NearestPoint nearest_polyhedral(std::span<const double> x, const Polytope& p, NormKind kind) {
  const std::size_t k = p.size(), d = p.dimension();
  // Linf: variables w (k) then t.  L1: variables w (k) then s_c (d).
  const std::size_t extra = kind == NormKind::Linf ? 1 : d;
  lp::LinearProgram prog(k + extra);
  for (std::size_t e = 0; e < extra; ++e) prog.objective[k + e] = 1.0;

  auto& simplex = prog.add_row(lp::Relation::Equal, 1.0);
  for (std::size_t j = 0; j < k; ++j) simplex.coeffs[j] = 1.0;

  for (std::size_t c = 0; c < d; ++c) {
    const std::size_t aux = kind == NormKind::Linf ? k : k + c;
    auto& upper = prog.add_row(lp::Relation::LessEqual, x[c]);
    for (std::size_t j = 0; j < k; ++j) upper.coeffs[j] = p.vertex(j)[c];
    upper.coeffs[aux] = -1.0;
    auto& lower = prog.add_row(lp::Relation::LessEqual, -x[c]);
    for (std::size_t j = 0; j < k; ++j) lower.coeffs[j] = -p.vertex(j)[c];
    lower.coeffs[aux] = -1.0;
  }

  const lp::Solution sol = lp::solve(prog);
  if (sol.status != lp::Status::Optimal) {
    throw SolverFailure(std::string("point distance LP: ") + lp::to_string(sol.status));
  }
  return finish(x, p, std::vector<double>(sol.x.begin(), sol.x.begin() + static_cast<long>(k)),
                kind);
}

double dot(const Vector& a, const Vector& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// argmin ||Σ α_i q_i|| subject to Σ α_i = 1 (affine hull), via the KKT system.
std::optional<std::vector<double>> affine_min_norm(const std::vector<const Vector*>& pts) {
  const std::size_t s = pts.size();
  const std::size_t n = s + 1;
  std::vector<std::vector<double>> a(n, std::vector<double>(n + 1, 0.0));
  for (std::size_t i = 0; i < s; ++i) {
    for (std::size_t j = 0; j < s; ++j) a[i][j] = dot(*pts[i], *pts[j]);
    a[i][s] = 1.0;
    a[s][i] = 1.0;
  }
  a[s][n] = 1.0;

  double scale = 1.0;
  for (const auto& row : a) {
    for (double v : row) scale = std::max(scale, std::abs(v));
  }
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t i = col + 1; i < n; ++i) {
      if (std::abs(a[i][col]) > std::abs(a[piv][col])) piv = i;
    }
    if (std::abs(a[piv][col]) <= 1e-14 * scale) return std::nullopt;
    std::swap(a[piv], a[col]);
    for (std::size_t i = 0; i < n; ++i) {
      if (i == col) continue;
      const double f = a[i][col] / a[col][col];
      if (f == 0.0) continue;
      for (std::size_t j = col; j <= n; ++j) a[i][j] -= f * a[col][j];
    }
  }
  std::vector<double> alpha(s);
  for (std::size_t i = 0; i < s; ++i) alpha[i] = a[i][n] / a[i][i];
  return alpha;
}

// Wolfe's minimum-norm-point algorithm on the translated generators
// v_k - x. Each major step adds the generator minimising <z, q>; minor
// steps project onto the affine hull of the active set and retreat
// towards the previous iterate when that projection leaves the simplex.
NearestPoint nearest_euclidean(std::span<const double> x, const Polytope& p) {
  const std::size_t k = p.size(), d = p.dimension();
  std::vector<Vector> q(k, Vector(d));
  double max_sq = 0.0;
  for (std::size_t j = 0; j < k; ++j) {
    for (std::size_t c = 0; c < d; ++c) q[j][c] = p.vertex(j)[c] - x[c];
    max_sq = std::max(max_sq, dot(q[j], q[j]));
  }

  std::size_t start = 0;
  for (std::size_t j = 1; j < k; ++j) {
    if (dot(q[j], q[j]) < dot(q[start], q[start])) start = j;
  }
  std::vector<std::size_t> active{start};
  std::vector<double> lambda{1.0};
  Vector z = q[start];

  // Stopping on |z|^2 - min <z, q> <= tol |z| scale bounds the distance
  // error by tol * scale, independent of how small |z| is.
  const double scale = std::sqrt(std::max(1.0, max_sq));
  for (int major = 0; major < 1000; ++major) {
    const double znorm = std::sqrt(dot(z, z));
    if (znorm <= 1e-15 * scale) break;
    std::size_t best = 0;
    double best_val = dot(z, q[0]);
    for (std::size_t j = 1; j < k; ++j) {
      const double v = dot(z, q[j]);
      if (v < best_val) {
        best_val = v;
        best = j;
      }
    }
    if (dot(z, z) - best_val <= 1e-12 * znorm * scale) break;
    if (std::find(active.begin(), active.end(), best) != active.end()) break;
    active.push_back(best);
    lambda.push_back(0.0);

    for (int minor = 0; minor < 1000; ++minor) {
      std::vector<const Vector*> pts;
      for (std::size_t j : active) pts.push_back(&q[j]);
      auto alpha = affine_min_norm(pts);
      if (!alpha) {
        // Numerically dependent active set: drop the newcomer and stop.
        active.pop_back();
        lambda.pop_back();
        major = 1000;
        break;
      }
      bool interior = true;
      for (double a : *alpha) interior = interior && a > 1e-14;
      if (interior) {
        lambda = *alpha;
        break;
      }
      double theta = 1.0;
      for (std::size_t i = 0; i < active.size(); ++i) {
        if ((*alpha)[i] <= 1e-14) {
          const double denom = lambda[i] - (*alpha)[i];
          if (denom > 0.0) theta = std::min(theta, lambda[i] / denom);
        }
      }
      for (std::size_t i = 0; i < active.size(); ++i) {
        lambda[i] = theta * (*alpha)[i] + (1.0 - theta) * lambda[i];
      }
      std::vector<std::size_t> keep_idx;
      std::vector<double> keep_lambda;
      for (std::size_t i = 0; i < active.size(); ++i) {
        if (lambda[i] > 1e-14) {
          keep_idx.push_back(active[i]);
          keep_lambda.push_back(lambda[i]);
        }
      }
      active = std::move(keep_idx);
      lambda = std::move(keep_lambda);
      if (active.empty()) break;
    }
    if (active.empty()) break;
    std::fill(z.begin(), z.end(), 0.0);
    for (std::size_t i = 0; i < active.size(); ++i) {
      for (std::size_t c = 0; c < d; ++c) z[c] += lambda[i] * q[active[i]][c];
    }
  }

  std::vector<double> weights(k, 0.0);
  if (active.empty()) {
    weights[start] = 1.0;
  } else {
    for (std::size_t i = 0; i < active.size(); ++i) weights[active[i]] = lambda[i];
  }
  return finish(x, p, std::move(weights), NormKind::L2);
}

}  // namespace

NearestPoint nearest_point(std::span<const double> x, const Polytope& p, NormKind kind) {
  check_dimension(x, p);
  if (p.size() == 1) {
    return NearestPoint{norm_distance(x, p.vertex(0), kind), p.vertex(0), {1.0}};
  }
  if (kind == NormKind::L2) return nearest_euclidean(x, p);
  return nearest_polyhedral(x, p, kind);
}

double point_distance(std::span<const double> x, const Polytope& p, NormKind kind) {
  return nearest_point(x, p, kind).distance;
}

double directed_hausdorff(const Polytope& from, const Polytope& to, NormKind kind) {
  if (from.dimension() != to.dimension()) throw DimensionMismatch(to.dimension(), from.dimension());
  double worst = 0.0;
  for (const auto& v : from.vertices()) worst = std::max(worst, point_distance(v, to, kind));
  return worst;
}

double hausdorff_distance(const Polytope& p, const Polytope& q, NormKind kind) {
  return std::max(directed_hausdorff(q, p, kind), directed_hausdorff(p, q, kind));
}

double polytope_distance(const Polytope& p, const Polytope& q, NormKind kind) {
  if (p.dimension() != q.dimension()) throw DimensionMismatch(p.dimension(), q.dimension());
  // Distance from the origin to the Minkowski difference p - q.
  std::vector<Vector> diff;
  diff.reserve(p.size() * q.size());
  for (const auto& a : p.vertices()) {
    for (const auto& b : q.vertices()) {
      Vector v(a.size());
      for (std::size_t c = 0; c < a.size(); ++c) v[c] = a[c] - b[c];
      diff.push_back(std::move(v));
    }
  }
  const Vector origin(p.dimension(), 0.0);
  return point_distance(origin, Polytope(std::move(diff)), kind);
}

bool contained_in_minkowski_ball(const Polytope& q, const Polytope& p, double r, NormKind kind,
                                 double tol) {
  if (r < 0.0) throw NegativeRadius(r);
  if (q.dimension() != p.dimension()) throw DimensionMismatch(p.dimension(), q.dimension());
  for (const auto& v : q.vertices()) {
    if (point_distance(v, p, kind) > r + tol) return false;
  }
  return true;
}

bool contains(const Polytope& p, std::span<const double> x, double tol) {
  return point_distance(x, p, NormKind::Linf) <= tol;
}

Polytope prune_generators(const Polytope& p) {
  std::vector<Vector> gens;
  for (const auto& v : p.vertices()) {
    if (std::find(gens.begin(), gens.end(), v) == gens.end()) gens.push_back(v);
  }
  // Drop from the back so earlier generators are preferred.
  for (std::size_t i = gens.size(); i-- > 0 && gens.size() > 1;) {
    std::vector<Vector> others;
    for (std::size_t j = 0; j < gens.size(); ++j) {
      if (j != i) others.push_back(gens[j]);
    }
    if (point_distance(gens[i], Polytope(others), NormKind::Linf) <= 1e-12) {
      gens.erase(gens.begin() + static_cast<long>(i));
    }
  }
  return Polytope(std::move(gens));
}

Polytope hull_union(std::span<const Polytope> ps, bool prune) {
  if (ps.empty()) throw EmptyInput("hull_union of an empty list");
  const std::size_t d = ps.front().dimension();
  std::vector<Vector> gens;
  for (const auto& p : ps) {
    if (p.dimension() != d) throw DimensionMismatch(d, p.dimension());
    gens.insert(gens.end(), p.vertices().begin(), p.vertices().end());
  }
  Polytope out(std::move(gens));
  return prune ? prune_generators(out) : out;
}

}  // namespace lipsel
