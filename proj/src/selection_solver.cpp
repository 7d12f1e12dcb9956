#include "lipsel/selection_solver.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <thread>

#include "lipsel/simplex.hpp"

namespace lipsel {

SetValuedMap::SetValuedMap(PseudometricSpace space, std::vector<Polytope> values, NormKind norm,
                           std::size_t m)
    : space_(std::move(space)), values_(std::move(values)), norm_(norm), m_(m) {
  if (values_.size() != space_.size()) {
    throw Error("set-valued map has " + std::to_string(values_.size()) + " values for " +
                std::to_string(space_.size()) + " points");
  }
  const std::size_t d = values_.front().dimension();
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (values_[i].dimension() != d) throw DimensionMismatch(d, values_[i].dimension());
    const std::size_t dim = affine_dimension(values_[i]);
    if (dim > m_) {
      throw Error("value at point " + std::to_string(i) + " has affine dimension " +
                  std::to_string(dim) + " > m = " + std::to_string(m_));
    }
  }
}

SetValuedMap SetValuedMap::restrict_to(const std::vector<std::size_t>& points) const {
  std::vector<Polytope> sub;
  sub.reserve(points.size());
  for (std::size_t p : points) sub.push_back(values_.at(p));
  return SetValuedMap(space_.restrict_to(points), std::move(sub), norm_, m_);
}

SetValuedMap SetValuedMap::with_norm(NormKind kind) const {
  SetValuedMap copy = *this;
  copy.norm_ = kind;
  return copy;
}

double certified_seminorm(const PseudometricSpace& space, const std::vector<Vector>& points,
                          NormKind norm) {
  double c = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = i + 1; j < points.size(); ++j) {
      const double d = space(i, j);
      if (is_infinite(d)) continue;
      const double gap = norm_distance(points[i], points[j], norm);
      if (gap == 0.0) continue;
      if (d == 0.0) return kInfinity;
      double r = gap / d;
      while (r * d < gap) r = std::nextafter(r, kInfinity);
      c = std::max(c, r);
    }
  }
  return c;
}

Selection make_selection(PseudometricSpace space, std::vector<Vector> points, NormKind norm) {
  if (points.size() != space.size()) {
    throw Error("selection has " + std::to_string(points.size()) + " points for a space of " +
                std::to_string(space.size()));
  }
  const double c = certified_seminorm(space, points, norm);
  return Selection{std::move(space), std::move(points), norm, c};
}

std::size_t subset_count_bound(std::size_t m, std::size_t d) {
  return std::size_t{1} << std::min(m + 1, d);
}

namespace {

using Pair = std::pair<std::size_t, std::size_t>;

// Pairs of the (zero-free) space whose constraint is not implied by two
// strictly shorter pairs through a third point.
std::vector<Pair> essential_pairs(const PseudometricSpace& space) {
  const std::size_t n = space.size();
  std::vector<Pair> out;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      const double dab = space(a, b);
      if (is_infinite(dab)) continue;
      bool implied = false;
      for (std::size_t k = 0; k < n && !implied; ++k) {
        if (k == a || k == b) continue;
        const double dak = space(a, k), dkb = space(k, b);
        if (!(dak < dab) || !(dkb < dab)) continue;
        implied = dak + dkb <= dab * (1.0 + 1e-12);
      }
      if (!implied) out.emplace_back(a, b);
    }
  }
  return out;
}

// Weight block for one distinct polytope inside a merged class. The block's
// point is v_0 + sum_{k>=1} w_k (v_k - v_0) with w >= 0 and sum w <= 1.
struct Block {
  std::size_t point;   // original point owning the polytope
  std::size_t offset;  // variable of w_1
};

// Selection LP in "slack from a reference selection" form. Every class starts
// at vertex 0 of its primary polytope, giving a reference seminorm lambda0;
// the program maximises nu with lambda = lambda0 - nu. A cut
//   u . (f_a - f_b) <= lambda d_ab,  with ||u||_* <= 1,
// then has right-hand side lambda0 d_ab - u . (v0_a - v0_b) >= 0, so the
// origin is a nondegenerate feasible vertex for every cut set.
class SelectionProgram {
 public:
  SelectionProgram(const SetValuedMap& map, const Quotient& quotient,
                   const std::vector<Pair>& pairs)
      : map_(map), q_(quotient) {
    const std::size_t classes = q_.members.size();
    blocks_.resize(classes);
    std::size_t next = 0;
    for (std::size_t c = 0; c < classes; ++c) {
      for (std::size_t member : q_.members[c]) {
        const bool seen = std::any_of(blocks_[c].begin(), blocks_[c].end(), [&](const Block& b) {
          return map_.value(b.point) == map_.value(member);
        });
        if (seen) continue;
        blocks_[c].push_back({member, next});
        next += map_.value(member).size() - 1;
      }
    }
    nu_ = next;

    double ratio = 0.0;
    for (const auto& [a, b] : pairs) {
      const double gap = norm_distance(reference(a), reference(b), map_.norm_kind());
      ratio = std::max(ratio, gap / q_.space(a, b));
    }
    lambda0_ = ratio * (1.0 + 1e-6) + 1e-12;

    program_ = lp::LinearProgram(nu_ + 1);
    program_.objective[nu_] = -1.0;
    program_.add_row(lp::Relation::LessEqual, lambda0_).coeffs[nu_] = 1.0;
    const std::size_t d = map_.dimension();
    for (const auto& blocks : blocks_) {
      for (const auto& b : blocks) {
        auto& row = program_.add_row(lp::Relation::LessEqual, 1.0);
        for (std::size_t k = 1; k < map_.value(b.point).size(); ++k) {
          row.coeffs[b.offset + k - 1] = 1.0;
        }
      }
      // Every further block of a merged class must produce the same point.
      for (std::size_t extra = 1; extra < blocks.size(); ++extra) {
        for (std::size_t c = 0; c < d; ++c) {
          const double rhs = map_.value(blocks.front().point).vertex(0)[c] -
                             map_.value(blocks[extra].point).vertex(0)[c];
          auto& row = program_.add_row(lp::Relation::Equal, rhs);
          add_coordinate(row.coeffs, blocks[extra], c, 1.0);
          add_coordinate(row.coeffs, blocks.front(), c, -1.0);
        }
      }
    }
  }

  const lp::LinearProgram& program() const { return program_; }

  /// u . (f_a - f_b) <= (lambda0 - nu) d_ab.
  void add_cut(std::size_t a, std::size_t b, const Vector& u) {
    const double dist = q_.space(a, b);
    const Vector& ra = reference(a);
    const Vector& rb = reference(b);
    double rhs = lambda0_ * dist;
    for (std::size_t c = 0; c < u.size(); ++c) rhs -= u[c] * (ra[c] - rb[c]);
    auto& row = program_.add_row(lp::Relation::LessEqual, std::max(rhs, 0.0));
    for (std::size_t c = 0; c < u.size(); ++c) {
      if (u[c] == 0.0) continue;
      add_coordinate(row.coeffs, blocks_[a].front(), c, u[c]);
      add_coordinate(row.coeffs, blocks_[b].front(), c, -u[c]);
    }
    row.coeffs[nu_] = dist;
  }

  double lambda(const std::vector<double>& x) const { return lambda0_ - x[nu_]; }

  std::vector<Vector> class_points(const std::vector<double>& x) const {
    std::vector<Vector> out;
    out.reserve(blocks_.size());
    for (const auto& blocks : blocks_) {
      const Block& b = blocks.front();
      const Polytope& p = map_.value(b.point);
      std::vector<double> w(p.size(), 0.0);
      double rest = 0.0;
      for (std::size_t k = 1; k < p.size(); ++k) {
        w[k] = std::max(x[b.offset + k - 1], 0.0);
        rest += w[k];
      }
      if (rest > 1.0) {
        for (double& v : w) v /= rest;
      } else {
        w[0] = 1.0 - rest;
      }
      out.push_back(p.combine(w));
    }
    // Points that agree up to rounding of the convex combinations are made
    // identical, so an exact consensus yields seminorm exactly 0.
    for (std::size_t a = 1; a < out.size(); ++a) {
      for (std::size_t b = 0; b < a; ++b) {
        const double scale = std::max(1.0, norm(out[b], NormKind::Linf));
        if (norm_distance(out[a], out[b], NormKind::Linf) <= 1e-12 * scale) {
          out[a] = out[b];
          break;
        }
      }
    }
    return out;
  }

 private:
  const Vector& reference(std::size_t cls) const {
    return map_.value(blocks_[cls].front().point).vertex(0);
  }

  void add_coordinate(std::vector<double>& coeffs, const Block& b, std::size_t c,
                      double scale) const {
    const Polytope& p = map_.value(b.point);
    const double base = p.vertex(0)[c];
    for (std::size_t k = 1; k < p.size(); ++k) {
      coeffs[b.offset + k - 1] += scale * (p.vertex(k)[c] - base);
    }
  }

  const SetValuedMap& map_;
  const Quotient& q_;
  std::vector<std::vector<Block>> blocks_;
  std::size_t nu_ = 0;
  double lambda0_ = 0.0;
  lp::LinearProgram program_;
};

[[noreturn]] void report_infeasible(const SetValuedMap& map, const Quotient& q) {
  for (const auto& members : q.members) {
    for (std::size_t i = 0; i < members.size(); ++i) {
      for (std::size_t j = i + 1; j < members.size(); ++j) {
        const std::size_t a = members[i], b = members[j];
        if (polytope_distance(map.value(a), map.value(b), NormKind::Linf) > kContainmentTol) {
          throw InfeasibleSelection({a, b}, "points " + std::to_string(a) + " and " +
                                                std::to_string(b) +
                                                " are at distance zero but their polytopes are "
                                                "disjoint");
        }
      }
    }
  }
  for (const auto& members : q.members) {
    if (members.size() > 2) {
      throw InfeasibleSelection(members, "polytopes of points at mutual distance zero have no "
                                         "common point");
    }
  }
  throw InfeasibleSelection({}, "selection program is infeasible");
}

std::vector<double> solve_or_throw(const lp::LinearProgram& prog, const SetValuedMap& map,
                                   const Quotient& q) {
  const lp::Solution sol = lp::solve(prog);
  if (sol.status == lp::Status::Infeasible) report_infeasible(map, q);
  if (sol.status != lp::Status::Optimal) {
    throw SolverFailure(std::string("selection LP: ") + lp::to_string(sol.status));
  }
  return sol.x;
}

std::vector<Vector> lift(const std::vector<Vector>& class_points, const Quotient& q) {
  std::vector<Vector> out;
  out.reserve(q.projection.size());
  for (std::size_t cls : q.projection) out.push_back(class_points[cls]);
  return out;
}

// A unit vector of the dual norm attaining u . v = ||v||.
Vector dual_direction(const Vector& v, NormKind kind) {
  Vector u(v.size(), 0.0);
  if (kind == NormKind::L1) {
    for (std::size_t c = 0; c < v.size(); ++c) u[c] = v[c] < 0.0 ? -1.0 : 1.0;
  } else if (kind == NormKind::L2) {
    const double len = norm(v, NormKind::L2);
    for (std::size_t c = 0; c < v.size(); ++c) u[c] = len > 0.0 ? v[c] / len : 0.0;
  } else {
    std::size_t best = 0;
    for (std::size_t c = 1; c < v.size(); ++c) {
      if (std::abs(v[c]) > std::abs(v[best])) best = c;
    }
    u[best] = v[best] < 0.0 ? -1.0 : 1.0;
  }
  return u;
}

}  // namespace

OptimalSelection optimal_selection(const SetValuedMap& map, const SelectionOptions& options) {
  const NormKind kind = map.norm_kind();
  if (map.size() == 1) {
    Selection f = make_selection(map.space(), {map.value(0).vertex(0)}, kind);
    return OptimalSelection{std::move(f), 0.0, 0.0};
  }

  const Quotient q = quotient_zero_distances(map.space());
  const std::vector<Pair> pairs = essential_pairs(q.space);
  SelectionProgram program(map, q, pairs);
  const std::size_t d = map.dimension();

  // Coordinate cuts are exact for Linf and valid for L1 and L2. L1 adds sign
  // vectors and L2 adds unit directions for pairs the current optimum
  // violates; L1 has finitely many cuts and ends exact, L2 stops when the LP
  // lower bound meets the certified seminorm of the best iterate.
  for (const auto& [a, b] : pairs) {
    for (std::size_t c = 0; c < d; ++c) {
      for (double sign : {1.0, -1.0}) {
        Vector u(d, 0.0);
        u[c] = sign;
        program.add_cut(a, b, u);
      }
    }
  }

  const double tol = kind == NormKind::L2 ? options.l2_tol : 0.0;
  const std::size_t max_rounds = kind == NormKind::Linf ? 1 : options.l2_max_rounds;
  std::vector<Vector> best_points;
  double best_upper = kInfinity;
  double lower = 0.0;
  for (std::size_t round = 0; round < max_rounds; ++round) {
    const auto x = solve_or_throw(program.program(), map, q);
    const double lambda = program.lambda(x);
    lower = std::max(lower, lambda);
    auto pts = program.class_points(x);
    const double upper = certified_seminorm(q.space, pts, kind);
    if (upper < best_upper) {
      best_upper = upper;
      best_points = pts;
    }
    if (best_upper - lower <= tol * std::max(1.0, best_upper)) break;

    std::size_t added = 0;
    for (const auto& [a, b] : pairs) {
      Vector diff(d);
      for (std::size_t c = 0; c < d; ++c) diff[c] = pts[a][c] - pts[b][c];
      if (norm(diff, kind) <= lambda * q.space(a, b) * (1.0 + 1e-12)) continue;
      program.add_cut(a, b, dual_direction(diff, kind));
      ++added;
    }
    if (added == 0) break;
  }
  Selection f = make_selection(map.space(), lift(best_points, q), kind);
  const double lambda = f.seminorm;
  return OptimalSelection{std::move(f), lambda, std::max(lower, 0.0)};
}

double finiteness_subset_count(std::size_t n, std::size_t N) {
  if (n <= 1) return static_cast<double>(n);
  double total = 0.0;
  const std::size_t top = std::min(N, n);
  for (std::size_t k = 2; k <= top; ++k) {
    double c = 1.0;
    for (std::size_t i = 0; i < k; ++i) c = c * static_cast<double>(n - i) / static_cast<double>(i + 1);
    total += std::round(c);
  }
  return total;
}

namespace {

std::vector<std::vector<std::size_t>> enumerate_subsets(std::size_t n, std::size_t N) {
  std::vector<std::vector<std::size_t>> out;
  if (n == 1) {
    out.push_back({0});
    return out;
  }
  for (std::size_t k = 2; k <= std::min(N, n); ++k) {
    std::vector<std::size_t> idx(k);
    for (std::size_t i = 0; i < k; ++i) idx[i] = i;
    while (true) {
      out.push_back(idx);
      std::size_t i = k;
      while (i > 0 && idx[i - 1] == n - k + (i - 1)) --i;
      if (i == 0) break;
      ++idx[i - 1];
      for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
  }
  return out;
}

}  // namespace

FinitenessReport finiteness_experiment(const SetValuedMap& map, std::size_t N,
                                       const FinitenessOptions& options) {
  if (N < 2) throw Error("finiteness experiment needs N >= 2, got " + std::to_string(N));
  const double count = finiteness_subset_count(map.size(), N);
  if (count > options.subset_cap) throw SubsetBudgetExceeded(count, options.subset_cap);

  FinitenessReport report;
  report.N = N;
  const auto subsets = enumerate_subsets(map.size(), N);
  std::vector<double> lambdas(subsets.size(), 0.0);
  std::vector<std::exception_ptr> errors(subsets.size());

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < subsets.size(); i = next++) {
      try {
        lambdas[i] = optimal_selection(map.restrict_to(subsets[i]), options.selection).lambda_star;
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  unsigned threads = options.threads ? options.threads : std::thread::hardware_concurrency();
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(subsets.size())));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  report.subsets.reserve(subsets.size());
  for (std::size_t i = 0; i < subsets.size(); ++i) {
    if (report.witness_subset.empty() || lambdas[i] > report.lambda_local) {
      report.lambda_local = lambdas[i];
      report.witness_subset = subsets[i];
    }
    report.subsets.push_back({subsets[i], lambdas[i]});
  }

  report.lambda_global = optimal_selection(map, options.selection).lambda_star;
  if (report.lambda_local > 0.0) {
    report.gamma_emp = report.lambda_global / report.lambda_local;
  } else {
    report.gamma_emp = report.lambda_global == 0.0 ? 1.0 : kInfinity;
  }
  return report;
}

const char* to_string(ViolationKind kind) {
  return kind == ViolationKind::Membership ? "membership" : "lipschitz";
}

SelectionReport verify_selection(const Selection& f, const SetValuedMap& map, double lambda,
                                 double tol) {
  if (f.points.size() != map.size()) {
    throw Error("selection has " + std::to_string(f.points.size()) + " points, map has " +
                std::to_string(map.size()));
  }
  SelectionReport report;
  const NormKind kind = map.norm_kind();
  for (std::size_t i = 0; i < map.size(); ++i) {
    const double dist = point_distance(f.points[i], map.value(i), kind);
    report.max_membership_distance = std::max(report.max_membership_distance, dist);
    if (dist > tol) report.violations.push_back({ViolationKind::Membership, i, i, dist});
  }
  for (std::size_t i = 0; i < map.size(); ++i) {
    for (std::size_t j = i + 1; j < map.size(); ++j) {
      const double d = map.space()(i, j);
      if (is_infinite(d)) continue;
      const double excess = norm_distance(f.points[i], f.points[j], kind) - lambda * d;
      report.max_lipschitz_excess = std::max(report.max_lipschitz_excess, excess);
      if (excess > tol) report.violations.push_back({ViolationKind::Lipschitz, i, j, excess});
    }
  }
  return report;
}

}  // namespace lipsel
