#pragma once

// Instance files and report serialisation for the lipsel command line.
//
// Instance schema (JSON object):
//   "points"     optional array of n labels (default "0".."n-1")
//   "dist"       n×n array; entries are numbers or the string "inf"
//   "norm"       "linf" | "l1" | "l2" (default "linf")
//   "m"          declared dimension bound (default: the ambient dimension)
//   "values"     n polytopes, each {"vertices": [[x_1..x_d], ...]}
//   "experiment" optional {"N", "L", "hull_depth", "cap", "node_cap",
//                "tol", "seed"}

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "lipsel/errors.hpp"
#include "lipsel/selection_solver.hpp"

namespace lipsel::cli {

using Json = nlohmann::ordered_json;

/// Malformed input: bad JSON, wrong types, missing fields, IO failure.
/// Distinct from a well-formed instance that violates an invariant.
class InstanceError : public Error {
 public:
  using Error::Error;
};

struct ExperimentParams {
  std::optional<std::size_t> N;
  std::optional<std::size_t> L;
  std::optional<std::size_t> hull_depth;
  std::optional<double> cap;
  std::optional<double> node_cap;
  std::optional<double> tol;
  std::optional<std::uint64_t> seed;
};

struct Instance {
  std::vector<std::string> labels;
  Matrix dist;
  NormKind norm = NormKind::Linf;
  std::optional<std::size_t> m;
  std::vector<std::vector<Vector>> values;
  ExperimentParams experiment;
  /// FNV-1a 64 of the source text, hex.
  std::string digest;
};

Instance parse_instance(std::string_view text);
Instance load_instance(const std::string& path);

/// Runs all validations; throws the library's error types.
SetValuedMap to_map(const Instance& instance);

Json instance_to_json(const Instance& instance);

std::string fnv1a_hex(std::string_view bytes);

/// Number rounded to 12 significant digits; infinities become "inf".
Json number(double v);
Json vector_json(const Vector& v);

/// Writes text to path, or to `fallback` when path is empty.
void write_text(const std::string& path, const std::string& text, std::ostream& fallback);

}  // namespace lipsel::cli
