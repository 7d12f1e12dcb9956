#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "generators.hpp"
#include "instance_io.hpp"
#include "lipsel/covering_core.hpp"

namespace lipsel::cli {

enum ExitCode : int { kOk = 0, kFailure = 1, kUsage = 2 };

/// Bad flag combination detected before any work.
class UsageError : public Error {
 public:
  using Error::Error;
};

struct SelectArgs {
  std::string path;
  std::optional<NormKind> norm;
  std::string out;
};

struct FinitenessArgs {
  std::string path;
  std::optional<NormKind> norm;
  std::optional<std::size_t> N;
  std::optional<double> cap;
  std::string out;
  std::string csv;
  unsigned threads = 0;
};

struct CoreArgs {
  std::string path;
  std::optional<NormKind> norm;
  std::optional<std::size_t> L;
  std::optional<std::size_t> hull_depth;
  std::optional<double> tol;
  std::optional<double> node_cap;
  std::size_t basepoint = 0;
  bool prune = false;
  bool timings = false;
  std::string out;
  std::string cover_out;
  std::string dot;
};

int cmd_validate(const std::string& path, std::ostream& out, std::ostream& err);
int cmd_select(const SelectArgs& args, std::ostream& out, std::ostream& err);
int cmd_finiteness(const FinitenessArgs& args, std::ostream& out, std::ostream& err);
int cmd_core(const CoreArgs& args, std::ostream& out, std::ostream& err);
int cmd_gen(const GenSpec& spec, const std::string& out_path, std::ostream& out, std::ostream& err);

// Report builders, shared with the tests.
Json selection_json(const Instance& inst, const OptimalSelection& result);
Json finiteness_json(const Instance& inst, const FinitenessReport& report);
std::string finiteness_csv(const FinitenessReport& report);
Json core_json(const Instance& inst, const CorePipelineOptions& options,
               const CorePipelineResult& result);
Json cover_json(const CoveringTree& tree);
std::string cover_dot(const CoveringTree& tree);

/// "TriangleViolation(0,2,1)" style tag for library errors.
std::string describe(const std::exception& e);

}  // namespace lipsel::cli
