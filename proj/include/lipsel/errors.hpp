#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace lipsel {

/// Root of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// metric_spaces

class MetricError : public Error {
 public:
  using Error::Error;
};

class NonzeroDiagonalError : public MetricError {
 public:
  explicit NonzeroDiagonalError(std::size_t i);
  std::size_t index;
};

class NegativeDistanceError : public MetricError {
 public:
  NegativeDistanceError(std::size_t i, std::size_t j);
  std::size_t row, col;
};

class AsymmetryError : public MetricError {
 public:
  AsymmetryError(std::size_t i, std::size_t j);
  std::size_t row, col;
};

/// dist[i][j] > dist[i][k] + dist[k][j].
class TriangleViolation : public MetricError {
 public:
  TriangleViolation(std::size_t i, std::size_t j, std::size_t k);
  std::size_t i, j, k;
};

class NotAMetricGraph : public MetricError {
 public:
  using MetricError::MetricError;
};

class NotATree : public MetricError {
 public:
  using MetricError::MetricError;
};

// convex_geometry

class GeometryError : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public GeometryError {
 public:
  DimensionMismatch(std::size_t expected, std::size_t actual);
};

class NegativeRadius : public GeometryError {
 public:
  explicit NegativeRadius(double r);
};

class EmptyInput : public GeometryError {
 public:
  using GeometryError::GeometryError;
};

// selection_solver

/// Zero-distance points carry polytopes with no common point.
class InfeasibleSelection : public Error {
 public:
  InfeasibleSelection(std::vector<std::size_t> witness, const std::string& what);
  /// Original point indices; a pair when two polytopes are disjoint.
  std::vector<std::size_t> witness;
};

/// The LP backend stopped without an answer. Distinct from infeasibility.
class SolverFailure : public Error {
 public:
  using Error::Error;
};

class SubsetBudgetExceeded : public Error {
 public:
  SubsetBudgetExceeded(double count, double cap);
  double count;
};

// covering_core

class NodeBudgetExceeded : public Error {
 public:
  NodeBudgetExceeded(double projected, double cap);
  double projected;
};

class InvalidBasepoint : public Error {
 public:
  InvalidBasepoint(std::size_t basepoint, std::size_t n);
};

class EmptyFiber : public Error {
 public:
  EmptyFiber(std::size_t vertex, std::size_t depth);
  std::size_t vertex;
};

class DepthOutOfRange : public Error {
 public:
  using Error::Error;
};

/// Points at distance zero whose polytopes are different sets.
class ZeroDistanceConflict : public Error {
 public:
  ZeroDistanceConflict(std::size_t a, std::size_t b);
  std::size_t first, second;
};

}  // namespace lipsel
