#pragma once

// Random library instances shared by the unit and acceptance suites.

#include "lipsel/selection_solver.hpp"
#include "oracles.hpp"

namespace fixtures {

inline lipsel::SetValuedMap make_map(const lipsel::Matrix& d,
                                     std::vector<std::vector<lipsel::Vector>> values,
                                     lipsel::NormKind kind, std::size_t m) {
  std::vector<lipsel::Polytope> polys;
  for (auto& v : values) polys.emplace_back(std::move(v));
  return lipsel::SetValuedMap(lipsel::validate_pseudometric(d), std::move(polys), kind, m);
}

/// n points of a random metric; each value has 1 to 3 generators on the
/// dyadic grid in [-2, 2]^d.
inline lipsel::SetValuedMap random_map(oracle::Rng& rng, std::size_t n, std::size_t d,
                                       lipsel::NormKind kind) {
  const lipsel::Matrix dist = oracle::random_metric(n, rng);
  std::vector<std::vector<lipsel::Vector>> values;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<lipsel::Vector> verts(1 + rng.index(3), lipsel::Vector(d));
    for (auto& v : verts) {
      for (double& x : v) x = rng.grid(-2, 2);
    }
    values.push_back(verts);
  }
  return make_map(dist, values, kind, d);
}

/// Random interval-valued map on the line; about a third of the values are
/// single points.
inline lipsel::SetValuedMap random_interval_map(oracle::Rng& rng, std::size_t n,
                                                std::vector<double>& lo, std::vector<double>& hi,
                                                lipsel::NormKind kind = lipsel::NormKind::Linf) {
  const lipsel::Matrix dist = oracle::random_metric(n, rng);
  lo.clear();
  hi.clear();
  std::vector<std::vector<lipsel::Vector>> values;
  for (std::size_t i = 0; i < n; ++i) {
    const double a = rng.grid(-3, 3);
    const double w = rng.coin(0.3) ? 0.0 : rng.grid(0, 2);
    lo.push_back(a);
    hi.push_back(a + w);
    values.push_back({{a}, {a + w}});
  }
  return make_map(dist, values, kind, 1);
}

}  // namespace fixtures
