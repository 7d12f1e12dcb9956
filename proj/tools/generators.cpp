#include "generators.hpp"

#include <cmath>

namespace lipsel::cli {

namespace {

double rounded(double v) { return std::round(v * 1000.0) / 1000.0; }

}  // namespace

Matrix random_metric(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> weight(0.1, 2.0);
  Matrix d(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) d[i][j] = d[j][i] = rounded(weight(rng));
  }
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t k = 0; k < n; ++k) {
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
          if (d[i][k] + d[k][j] < d[i][j]) {
            d[i][j] = d[i][k] + d[k][j];
            changed = true;
          }
        }
      }
    }
  }
  return d;
}

std::vector<Vector> random_polytope(std::size_t d, std::size_t m, std::size_t vertices,
                                    std::mt19937_64& rng) {
  std::uniform_real_distribution<double> centre(-2.0, 2.0), dir(-1.0, 1.0), coef(0.0, 1.0);
  Vector base(d);
  for (auto& x : base) x = rounded(centre(rng));
  std::vector<Vector> dirs(std::min(m, d), Vector(d));
  for (auto& v : dirs) {
    for (auto& x : v) x = dir(rng);
  }
  std::vector<Vector> out;
  for (std::size_t k = 0; k < vertices; ++k) {
    Vector v = base;
    if (k > 0) {
      for (const auto& u : dirs) {
        const double t = coef(rng);
        for (std::size_t c = 0; c < d; ++c) v[c] += t * u[c];
      }
    }
    // Rounding within a subspace of dimension m could leave it when m < d,
    // so only round when the subspace is the whole space.
    if (dirs.size() == d) {
      for (auto& x : v) x = rounded(x);
    }
    out.push_back(std::move(v));
  }
  return out;
}

Instance random_instance(const GenSpec& spec) {
  std::mt19937_64 rng(spec.seed);
  Instance inst;
  inst.dist = random_metric(spec.n, rng);
  inst.norm = spec.norm;
  if (spec.intervals) {
    std::uniform_real_distribution<double> left(-3.0, 3.0), width(0.0, 2.0);
    inst.m = 1;
    for (std::size_t i = 0; i < spec.n; ++i) {
      const double a = rounded(left(rng));
      inst.values.push_back({{a}, {rounded(a + width(rng))}});
    }
  } else {
    inst.m = spec.m;
    const std::size_t k = spec.vertices ? spec.vertices : spec.m + 1;
    for (std::size_t i = 0; i < spec.n; ++i) {
      inst.values.push_back(random_polytope(spec.d, spec.m, k, rng));
    }
  }
  inst.experiment.seed = spec.seed;
  return inst;
}

}  // namespace lipsel::cli
