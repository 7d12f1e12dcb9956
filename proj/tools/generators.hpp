#pragma once

#include <cstdint>
#include <random>

#include "instance_io.hpp"

namespace lipsel::cli {

struct GenSpec {
  std::size_t n = 5;
  std::size_t d = 2;
  std::size_t m = 1;
  /// Generators per polytope; 0 means m + 1.
  std::size_t vertices = 0;
  NormKind norm = NormKind::Linf;
  /// d = 1 closed intervals instead of random polytopes.
  bool intervals = false;
  std::uint64_t seed = 1;
};

/// Shortest-path closure of random edge weights in [0.1, 2], iterated to a
/// fixed point so that path_metric reproduces it bit for bit.
Matrix random_metric(std::size_t n, std::mt19937_64& rng);

/// Polytope with `vertices` generators in an affine subspace of dimension
/// at most m.
std::vector<Vector> random_polytope(std::size_t d, std::size_t m, std::size_t vertices,
                                    std::mt19937_64& rng);

Instance random_instance(const GenSpec& spec);

}  // namespace lipsel::cli
