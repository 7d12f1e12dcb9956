#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "lipsel/errors.hpp"

namespace lipsel {

using Vector = std::vector<double>;

enum class NormKind { Linf, L1, L2 };

const char* to_string(NormKind kind);
/// Accepts "linf", "l1", "l2" (case-sensitive).
std::optional<NormKind> parse_norm(std::string_view name);

/// A norm on R^d.
struct NormTag {
  NormKind kind = NormKind::Linf;
  std::size_t dimension = 1;
};

double norm(std::span<const double> v, NormKind kind);
double norm_distance(std::span<const double> a, std::span<const double> b, NormKind kind);

/// Convex hull of a finite nonempty list of generators in R^d. Generators
/// need not be extreme points.
class Polytope {
 public:
  /// Throws EmptyInput for an empty list and DimensionMismatch when the
  /// generators disagree in length (or have length zero).
  explicit Polytope(std::vector<Vector> vertices);

  static Polytope singleton(Vector point) { return Polytope({std::move(point)}); }

  std::size_t dimension() const { return vertices_.front().size(); }
  std::size_t size() const { return vertices_.size(); }
  const std::vector<Vector>& vertices() const { return vertices_; }
  const Vector& vertex(std::size_t i) const { return vertices_[i]; }

  /// Σ w_k v_k. Weights are used as given.
  Vector combine(std::span<const double> weights) const;

  friend bool operator==(const Polytope&, const Polytope&) = default;

 private:
  std::vector<Vector> vertices_;
};

/// Rank of the difference vectors v_k - v_0.
std::size_t affine_dimension(const Polytope& p);

struct NearestPoint {
  double distance = 0.0;
  Vector point;           // attaining point of the polytope
  std::vector<double> weights;  // convex weights producing `point`
};

/// Distance from x to the polytope together with a nearest point. Linf
/// and L1 are solved as linear programs; L2 uses Wolfe's minimum-norm-point
/// iteration. The returned distance is the norm of x minus an explicit
/// convex combination, so it never understates the true distance by more
/// than rounding.
NearestPoint nearest_point(std::span<const double> x, const Polytope& p, NormKind kind);

double point_distance(std::span<const double> x, const Polytope& p, NormKind kind);

/// max over generators u of `from` of point_distance(u, to).
double directed_hausdorff(const Polytope& from, const Polytope& to, NormKind kind);

double hausdorff_distance(const Polytope& p, const Polytope& q, NormKind kind);

/// Minimum distance between the two sets; zero iff they intersect.
double polytope_distance(const Polytope& p, const Polytope& q, NormKind kind);

inline constexpr double kContainmentTol = 1e-9;

/// True iff q ⊂ p + closed ball of radius r (every generator of q within
/// r + tol of p). Throws NegativeRadius for r < 0.
bool contained_in_minkowski_ball(const Polytope& q, const Polytope& p, double r, NormKind kind,
                                 double tol = kContainmentTol);

/// Membership up to tol (norm independent; checked in Linf).
bool contains(const Polytope& p, std::span<const double> x, double tol = kContainmentTol);

/// Convex hull of the union, as the concatenated generator list. With
/// prune = true, duplicate generators and generators inside the hull of
/// the others are removed.
Polytope hull_union(std::span<const Polytope> ps, bool prune = false);

/// Removes duplicates and generators lying in the hull of the rest.
Polytope prune_generators(const Polytope& p);

}  // namespace lipsel
