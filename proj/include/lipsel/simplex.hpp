#pragma once

#include <cstddef>
#include <vector>

namespace lipsel::lp {

enum class Relation { LessEqual, Equal, GreaterEqual };

struct Constraint {
  std::vector<double> coeffs;  // one per structural variable
  Relation relation = Relation::LessEqual;
  double rhs = 0.0;
};

/// minimize objective·x subject to the constraints and x >= 0.
struct LinearProgram {
  std::size_t num_vars = 0;
  std::vector<double> objective;
  std::vector<Constraint> constraints;

  explicit LinearProgram(std::size_t n = 0) : num_vars(n), objective(n, 0.0) {}

  /// Appends a zero row and returns it for filling.
  Constraint& add_row(Relation rel, double rhs);
};

enum class Status { Optimal, Infeasible, Unbounded, IterationLimit };

const char* to_string(Status s);

struct Solution {
  Status status = Status::IterationLimit;
  double objective = 0.0;
  std::vector<double> x;
  std::size_t iterations = 0;
};

struct SimplexOptions {
  double pivot_tol = 1e-9;
  double feasibility_tol = 1e-9;
  std::size_t max_iterations = 200000;
};

/// Dense two-phase tableau simplex. Dantzig pricing with a Bland's-rule
/// fallback on degenerate stretches; ties go to the lowest index, so the pivot
/// sequence is fully determined by the input and cannot cycle.
Solution solve(const LinearProgram& program, const SimplexOptions& options = {});

}  // namespace lipsel::lp
