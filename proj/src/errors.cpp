#include "lipsel/errors.hpp"

#include <cstdio>

namespace lipsel {

namespace {

std::string idx(std::size_t v) { return std::to_string(v); }

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

}  // namespace

NonzeroDiagonalError::NonzeroDiagonalError(std::size_t i)
    : MetricError("nonzero diagonal entry at (" + idx(i) + "," + idx(i) + ")"), index(i) {}

NegativeDistanceError::NegativeDistanceError(std::size_t i, std::size_t j)
    : MetricError("negative distance at (" + idx(i) + "," + idx(j) + ")"), row(i), col(j) {}

AsymmetryError::AsymmetryError(std::size_t i, std::size_t j)
    : MetricError("asymmetric entries at (" + idx(i) + "," + idx(j) + ") and (" + idx(j) + "," +
                  idx(i) + ")"),
      row(i), col(j) {}

TriangleViolation::TriangleViolation(std::size_t i_, std::size_t j_, std::size_t k_)
    : MetricError("triangle inequality violated: d(" + idx(i_) + "," + idx(j_) + ") > d(" +
                  idx(i_) + "," + idx(k_) + ") + d(" + idx(k_) + "," + idx(j_) + ")"),
      i(i_), j(j_), k(k_) {}

DimensionMismatch::DimensionMismatch(std::size_t expected, std::size_t actual)
    : GeometryError("dimension mismatch: expected " + idx(expected) + ", got " + idx(actual)) {}

NegativeRadius::NegativeRadius(double r) : GeometryError("negative radius " + num(r)) {}

InfeasibleSelection::InfeasibleSelection(std::vector<std::size_t> w, const std::string& what)
    : Error(what), witness(std::move(w)) {}

SubsetBudgetExceeded::SubsetBudgetExceeded(double c, double cap)
    : Error("subset budget exceeded: " + num(c) + " subsets, cap " + num(cap)), count(c) {}

NodeBudgetExceeded::NodeBudgetExceeded(double p, double cap)
    : Error("node budget exceeded: " + num(p) + " nodes, cap " + num(cap)), projected(p) {}

InvalidBasepoint::InvalidBasepoint(std::size_t b, std::size_t n)
    : Error("invalid basepoint " + idx(b) + " for " + idx(n) + " vertices") {}

EmptyFiber::EmptyFiber(std::size_t v, std::size_t depth)
    : Error("empty fiber over vertex " + idx(v) + " at depth <= " + idx(depth)), vertex(v) {}

ZeroDistanceConflict::ZeroDistanceConflict(std::size_t a, std::size_t b)
    : Error("points " + idx(a) + " and " + idx(b) +
            " are at distance zero but carry different polytopes"),
      first(a), second(b) {}

}  // namespace lipsel
