#pragma once

#include <cstddef>
#include <vector>

#include "lipsel/convex_geometry.hpp"
#include "lipsel/metric_spaces.hpp"

namespace lipsel {

/// Polytope-valued map F on a finite pseudometric space.
class SetValuedMap {
 public:
  /// Throws Error when the value count differs from the point count or some
  /// value has affine dimension above m, and DimensionMismatch when the
  /// polytopes disagree in dimension.
  SetValuedMap(PseudometricSpace space, std::vector<Polytope> values, NormKind norm,
               std::size_t m);

  const PseudometricSpace& space() const { return space_; }
  const std::vector<Polytope>& values() const { return values_; }
  const Polytope& value(std::size_t i) const { return values_[i]; }
  std::size_t size() const { return values_.size(); }
  std::size_t dimension() const { return values_.front().dimension(); }
  NormTag norm() const { return {norm_, dimension()}; }
  NormKind norm_kind() const { return norm_; }
  std::size_t m() const { return m_; }

  SetValuedMap restrict_to(const std::vector<std::size_t>& points) const;
  SetValuedMap with_norm(NormKind kind) const;

 private:
  PseudometricSpace space_;
  std::vector<Polytope> values_;
  NormKind norm_;
  std::size_t m_;
};

/// A map from the points of a space into R^d with its certified seminorm.
struct Selection {
  PseudometricSpace space;
  std::vector<Vector> points;
  NormKind norm = NormKind::Linf;
  /// Smallest double C with fl(C * dist(i,j)) >= ||points[i] - points[j]||
  /// for every finite pair; +inf if two points at distance zero differ.
  double seminorm = 0.0;
};

double certified_seminorm(const PseudometricSpace& space, const std::vector<Vector>& points,
                          NormKind norm);

Selection make_selection(PseudometricSpace space, std::vector<Vector> points, NormKind norm);

/// 2^min(m+1, d).
std::size_t subset_count_bound(std::size_t m, std::size_t d);

struct SelectionOptions {
  /// Stop the L2 cutting-plane loop once upper and lower bounds agree to
  /// this (relative to max(1, upper)).
  double l2_tol = 1e-7;
  std::size_t l2_max_rounds = 500;
};

struct OptimalSelection {
  Selection selection;
  /// Certified seminorm of `selection`; the minimum up to LP round-off
  /// (Linf, L1) or within l2_tol (L2).
  double lambda_star = 0.0;
  /// LP lower bound on the true minimum.
  double lower_bound = 0.0;
};

/// Minimises the Lipschitz seminorm over selections f(x) ∈ F(x).
///
/// Points at distance zero are merged first; when they carry different
/// polytopes the merged point must lie in all of them. Pairs at infinite
/// distance are unconstrained, and pairs implied by the triangle
/// inequality through a third point are dropped from the program.
///
/// Throws InfeasibleSelection when merged points have no common
/// admissible value, SolverFailure when the LP backend gives up.
OptimalSelection optimal_selection(const SetValuedMap& map, const SelectionOptions& options = {});

struct SubsetLambda {
  std::vector<std::size_t> subset;
  double lambda = 0.0;
};

struct FinitenessReport {
  std::size_t N = 0;
  double lambda_local = 0.0;
  double lambda_global = 0.0;
  double gamma_emp = 1.0;
  std::vector<std::size_t> witness_subset;
  /// Every evaluated subset, sizes ascending then lexicographic.
  std::vector<SubsetLambda> subsets;
};

struct FinitenessOptions {
  double subset_cap = 1e6;
  /// 0 = hardware concurrency.
  unsigned threads = 0;
  SelectionOptions selection;
};

/// Number of subsets of size 2..min(N, n) (or 1 when n == 1).
double finiteness_subset_count(std::size_t n, std::size_t N);

/// Optimal seminorm of every restriction to at most N points versus the
/// global optimum. Subsets are solved in parallel; the reduction runs in
/// enumeration order, so the report does not depend on scheduling.
/// Throws SubsetBudgetExceeded above options.subset_cap, Error for N < 2.
FinitenessReport finiteness_experiment(const SetValuedMap& map, std::size_t N,
                                       const FinitenessOptions& options = {});

enum class ViolationKind { Membership, Lipschitz };

const char* to_string(ViolationKind kind);

struct Violation {
  ViolationKind kind;
  std::size_t i;
  std::size_t j;  // equals i for membership violations
  double magnitude;
};

struct SelectionReport {
  std::vector<Violation> violations;
  double max_membership_distance = 0.0;
  /// max over finite pairs of ||f_i - f_j|| - lambda * dist(i,j).
  double max_lipschitz_excess = -kInfinity;
  bool ok() const { return violations.empty(); }
};

SelectionReport verify_selection(const Selection& f, const SetValuedMap& map, double lambda,
                                 double tol = 1e-9);

}  // namespace lipsel
