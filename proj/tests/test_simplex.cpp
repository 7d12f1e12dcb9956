#include <doctest.h>

#include <array>
#include <cmath>
#include <optional>

#include "lipsel/simplex.hpp"
#include "oracles.hpp"

using namespace lipsel::lp;

namespace {

// Minimum of c·x over {Ax <= b, x >= 0} in the plane by enumerating every
// intersection of two constraint lines (axes included).
struct PlaneLp {
  std::vector<std::array<double, 3>> rows;  // a0 x + a1 y <= b
  std::array<double, 2> c;
};

std::optional<double> brute_force(const PlaneLp& lp) {
  auto lines = lp.rows;
  lines.push_back({-1, 0, 0});
  lines.push_back({0, -1, 0});
  std::optional<double> best;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    for (std::size_t j = i + 1; j < lines.size(); ++j) {
      const auto& p = lines[i];
      const auto& q = lines[j];
      const double det = p[0] * q[1] - p[1] * q[0];
      if (std::abs(det) < 1e-12) continue;
      const double x = (p[2] * q[1] - p[1] * q[2]) / det;
      const double y = (p[0] * q[2] - p[2] * q[0]) / det;
      bool ok = x >= -1e-9 && y >= -1e-9;
      for (const auto& r : lp.rows) ok = ok && r[0] * x + r[1] * y <= r[2] + 1e-9;
      if (!ok) continue;
      const double v = lp.c[0] * x + lp.c[1] * y;
      if (!best || v < *best) best = v;
    }
  }
  return best;
}

}  // namespace

TEST_CASE("textbook program") {
  // max 3x + 5y s.t. x <= 4, 2y <= 12, 3x + 2y <= 18  ->  36 at (2, 6)
  LinearProgram p(2);
  p.objective = {-3, -5};
  p.add_row(Relation::LessEqual, 4).coeffs = {1, 0};
  p.add_row(Relation::LessEqual, 12).coeffs = {0, 2};
  p.add_row(Relation::LessEqual, 18).coeffs = {3, 2};
  const auto s = solve(p);
  REQUIRE(s.status == Status::Optimal);
  CHECK(s.objective == doctest::Approx(-36));
  CHECK(s.x[0] == doctest::Approx(2));
  CHECK(s.x[1] == doctest::Approx(6));
}

TEST_CASE("equalities, surplus rows and negative right-hand sides") {
  // min x + y s.t. x + y >= 2, x - y = 1, -x <= -0.5
  LinearProgram p(2);
  p.objective = {1, 1};
  p.add_row(Relation::GreaterEqual, 2).coeffs = {1, 1};
  p.add_row(Relation::Equal, 1).coeffs = {1, -1};
  p.add_row(Relation::LessEqual, -0.5).coeffs = {-1, 0};
  const auto s = solve(p);
  REQUIRE(s.status == Status::Optimal);
  CHECK(s.objective == doctest::Approx(2));
  CHECK(s.x[0] == doctest::Approx(1.5));
  CHECK(s.x[1] == doctest::Approx(0.5));
}

TEST_CASE("infeasible and unbounded programs") {
  LinearProgram infeasible(1);
  infeasible.objective = {1};
  infeasible.add_row(Relation::LessEqual, 1).coeffs = {1};
  infeasible.add_row(Relation::GreaterEqual, 2).coeffs = {1};
  CHECK(solve(infeasible).status == Status::Infeasible);

  LinearProgram unbounded(2);
  unbounded.objective = {-1, 0};
  unbounded.add_row(Relation::LessEqual, 1).coeffs = {-1, 1};
  CHECK(solve(unbounded).status == Status::Unbounded);
}

TEST_CASE("redundant equalities are dropped") {
  LinearProgram p(2);
  p.objective = {1, 2};
  p.add_row(Relation::Equal, 1).coeffs = {1, 1};
  p.add_row(Relation::Equal, 2).coeffs = {2, 2};
  const auto s = solve(p);
  REQUIRE(s.status == Status::Optimal);
  CHECK(s.objective == doctest::Approx(1));
}

TEST_CASE("degenerate program with many ties terminates") {
  // Forty constraints through the origin, where the simplex starts.
  LinearProgram p(3);
  p.objective = {-1, -1, -1};
  for (int k = 1; k <= 20; ++k) {
    p.add_row(Relation::LessEqual, 0).coeffs = {1.0, -1.0 * k, 0.5};
    p.add_row(Relation::LessEqual, 0).coeffs = {-1.0 * k, 1.0, 0.5};
  }
  p.add_row(Relation::LessEqual, 0).coeffs = {0, 0, 1};
  p.add_row(Relation::LessEqual, 2).coeffs = {1, 1, 0};
  const auto s = solve(p);
  REQUIRE(s.status == Status::Optimal);
  CHECK(s.objective == doctest::Approx(-2));
  CHECK(s.x[0] == doctest::Approx(1));
  CHECK(s.x[1] == doctest::Approx(1));
}

TEST_CASE("random planar programs match vertex enumeration") {
  oracle::Rng rng(21);
  int solved = 0;
  for (int trial = 0; trial < 300; ++trial) {
    PlaneLp lp;
    const std::size_t rows = 1 + rng.index(6);
    for (std::size_t r = 0; r < rows; ++r) {
      lp.rows.push_back({rng.grid(-2, 2), rng.grid(-2, 2), rng.grid(-1, 3)});
    }
    // A bounding box keeps every feasible program bounded.
    lp.rows.push_back({1, 0, 5});
    lp.rows.push_back({0, 1, 5});
    lp.c = {rng.grid(-2, 2), rng.grid(-2, 2)};

    LinearProgram p(2);
    p.objective = {lp.c[0], lp.c[1]};
    for (const auto& r : lp.rows) p.add_row(Relation::LessEqual, r[2]).coeffs = {r[0], r[1]};
    const auto s = solve(p);
    const auto expect = brute_force(lp);
    if (!expect) {
      CHECK(s.status == Status::Infeasible);
      continue;
    }
    REQUIRE(s.status == Status::Optimal);
    CHECK(s.objective == doctest::Approx(*expect).epsilon(1e-9));
    ++solved;
  }
  CHECK(solved > 100);
}
