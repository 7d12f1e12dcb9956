#include "lipsel/simplex.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace lipsel::lp {

Constraint& LinearProgram::add_row(Relation rel, double rhs) {
  constraints.push_back(Constraint{std::vector<double>(num_vars, 0.0), rel, rhs});
  return constraints.back();
}

const char* to_string(Status s) {
  switch (s) {
    case Status::Optimal: return "optimal";
    case Status::Infeasible: return "infeasible";
    case Status::Unbounded: return "unbounded";
    case Status::IterationLimit: return "iteration limit";
  }
  return "unknown";
}

namespace {

constexpr double kOptimalityTol = 1e-10;
constexpr std::size_t kStallLimit = 50;
constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * (cols + 1), 0.0), cost_(cols + 1, 0.0),
        basis_(rows, kNone) {}

  double& at(std::size_t i, std::size_t j) { return data_[i * (cols_ + 1) + j]; }
  double at(std::size_t i, std::size_t j) const { return data_[i * (cols_ + 1) + j]; }
  double& rhs(std::size_t i) { return at(i, cols_); }
  double rhs(std::size_t i) const { return at(i, cols_); }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::vector<double>& cost() { return cost_; }
  std::vector<std::size_t>& basis() { return basis_; }

  void pivot(std::size_t r, std::size_t s) {
    const std::size_t width = cols_ + 1;
    double* prow = &data_[r * width];
    const double inv = 1.0 / prow[s];
    for (std::size_t j = 0; j < width; ++j) prow[j] *= inv;
    prow[s] = 1.0;
    for (std::size_t i = 0; i < rows_; ++i) {
      if (i == r) continue;
      double* row = &data_[i * width];
      const double f = row[s];
      if (f == 0.0) continue;
      for (std::size_t j = 0; j < width; ++j) row[j] -= f * prow[j];
      row[s] = 0.0;
    }
    const double f = cost_[s];
    if (f != 0.0) {
      for (std::size_t j = 0; j < width; ++j) cost_[j] -= f * prow[j];
      cost_[s] = 0.0;
    }
    basis_[r] = s;
  }

  void drop_row(std::size_t r) {
    const std::size_t width = cols_ + 1;
    data_.erase(data_.begin() + static_cast<std::ptrdiff_t>(r * width),
                data_.begin() + static_cast<std::ptrdiff_t>((r + 1) * width));
    basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(r));
    --rows_;
  }

  /// Simplex iterations over columns [0, eligible). Dantzig's rule picks the
  /// entering column; after kStallLimit consecutive degenerate pivots Bland's
  /// rule takes over until the objective moves again, which rules out cycling.
  /// Returns Optimal, Unbounded or IterationLimit.
  Status run(std::size_t eligible, const SimplexOptions& opt, std::size_t& iterations) {
    std::size_t stalled = 0;
    while (iterations < opt.max_iterations) {
      const bool bland = stalled >= kStallLimit;
      std::size_t enter = kNone;
      double most_negative = -kOptimalityTol;
      for (std::size_t j = 0; j < eligible; ++j) {
        if (cost_[j] < most_negative) {
          enter = j;
          if (bland) break;
          most_negative = cost_[j];
        }
      }
      if (enter == kNone) return Status::Optimal;

      std::size_t leave = kNone;
      double best = 0.0;
      for (std::size_t i = 0; i < rows_; ++i) {
        const double a = at(i, enter);
        if (a <= opt.pivot_tol) continue;
        const double ratio = std::max(rhs(i), 0.0) / a;
        if (leave == kNone) {
          leave = i;
          best = ratio;
          continue;
        }
        const double slack = 1e-12 * (1.0 + std::abs(best));
        if (ratio < best - slack) {
          leave = i;
          best = ratio;
        } else if (ratio <= best + slack && basis_[i] < basis_[leave]) {
          leave = i;
          best = std::min(best, ratio);
        }
      }
      if (leave == kNone) return Status::Unbounded;
      stalled = best * std::abs(cost_[enter]) > kOptimalityTol ? 0 : stalled + 1;
      pivot(leave, enter);
      // Basic values stay nonnegative up to rounding.
      for (std::size_t i = 0; i < rows_; ++i) {
        if (rhs(i) < 0.0 && rhs(i) > -opt.feasibility_tol) rhs(i) = 0.0;
      }
      ++iterations;
    }
    return Status::IterationLimit;
  }

 private:
  std::size_t rows_, cols_;
  std::vector<double> data_;
  std::vector<double> cost_;
  std::vector<std::size_t> basis_;
};

}  // namespace

Solution solve(const LinearProgram& program, const SimplexOptions& options) {
  const std::size_t n = program.num_vars;
  if (program.objective.size() != n) throw std::invalid_argument("objective size mismatch");

  std::size_t num_slack = 0, num_art = 0;
  for (const auto& c : program.constraints) {
    if (c.coeffs.size() != n) throw std::invalid_argument("constraint size mismatch");
    Relation rel = c.relation;
    if (c.rhs < 0.0) {
      if (rel == Relation::LessEqual) rel = Relation::GreaterEqual;
      else if (rel == Relation::GreaterEqual) rel = Relation::LessEqual;
    }
    if (rel != Relation::Equal) ++num_slack;
    if (rel != Relation::LessEqual) ++num_art;
  }

  const std::size_t m = program.constraints.size();
  const std::size_t art_begin = n + num_slack;
  Tableau t(m, art_begin + num_art);

  std::size_t slack = n, art = art_begin;
  for (std::size_t i = 0; i < m; ++i) {
    const auto& c = program.constraints[i];
    const double sign = c.rhs < 0.0 ? -1.0 : 1.0;
    Relation rel = c.relation;
    if (sign < 0.0) {
      if (rel == Relation::LessEqual) rel = Relation::GreaterEqual;
      else if (rel == Relation::GreaterEqual) rel = Relation::LessEqual;
    }
    for (std::size_t j = 0; j < n; ++j) t.at(i, j) = sign * c.coeffs[j];
    t.rhs(i) = sign * c.rhs;
    switch (rel) {
      case Relation::LessEqual:
        t.at(i, slack) = 1.0;
        t.basis()[i] = slack++;
        break;
      case Relation::GreaterEqual:
        t.at(i, slack++) = -1.0;
        t.at(i, art) = 1.0;
        t.basis()[i] = art++;
        break;
      case Relation::Equal:
        t.at(i, art) = 1.0;
        t.basis()[i] = art++;
        break;
    }
  }

  Solution sol;
  std::size_t iterations = 0;

  if (num_art > 0) {
    // Phase 1: minimise the sum of artificials.
    auto& cost = t.cost();
    for (std::size_t j = art_begin; j < t.cols(); ++j) cost[j] = 1.0;
    for (std::size_t i = 0; i < t.rows(); ++i) {
      if (t.basis()[i] < art_begin) continue;
      for (std::size_t j = 0; j <= t.cols(); ++j) cost[j] -= t.at(i, j);
    }
    const Status s = t.run(t.cols(), options, iterations);
    if (s == Status::IterationLimit) {
      sol.status = s;
      sol.iterations = iterations;
      return sol;
    }
    if (-cost[t.cols()] > options.feasibility_tol) {
      sol.status = Status::Infeasible;
      sol.iterations = iterations;
      return sol;
    }
    // Drive zero-level artificials out of the basis; drop redundant rows.
    for (std::size_t i = 0; i < t.rows();) {
      if (t.basis()[i] < art_begin) {
        ++i;
        continue;
      }
      std::size_t col = kNone;
      for (std::size_t j = 0; j < art_begin; ++j) {
        if (std::abs(t.at(i, j)) > options.pivot_tol) {
          col = j;
          break;
        }
      }
      if (col == kNone) {
        t.drop_row(i);
      } else {
        t.pivot(i, col);
        ++i;
      }
    }
  }

  // Phase 2.
  auto& cost = t.cost();
  std::fill(cost.begin(), cost.end(), 0.0);
  for (std::size_t j = 0; j < n; ++j) cost[j] = program.objective[j];
  for (std::size_t i = 0; i < t.rows(); ++i) {
    const std::size_t b = t.basis()[i];
    const double cb = b < n ? program.objective[b] : 0.0;
    if (cb == 0.0) continue;
    for (std::size_t j = 0; j <= t.cols(); ++j) cost[j] -= cb * t.at(i, j);
  }
  const Status s = t.run(art_begin, options, iterations);
  sol.status = s;
  sol.iterations = iterations;
  if (s != Status::Optimal) return sol;

  sol.x.assign(n, 0.0);
  for (std::size_t i = 0; i < t.rows(); ++i) {
    if (t.basis()[i] < n) sol.x[t.basis()[i]] = std::max(t.rhs(i), 0.0);
  }
  sol.objective = 0.0;
  for (std::size_t j = 0; j < n; ++j) sol.objective += program.objective[j] * sol.x[j];
  return sol;
}

}  // namespace lipsel::lp
