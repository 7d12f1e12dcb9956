#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"

namespace {

std::optional<lipsel::NormKind> norm_flag(const std::string& s) {
  if (s.empty()) return std::nullopt;
  return lipsel::parse_norm(s);
}

}  // namespace

int main(int argc, char** argv) {
  using namespace lipsel::cli;

  CLI::App app{"Optimal Lipschitz selections, finiteness experiments and covering-tree cores"};
  app.require_subcommand(1);
  const auto norms = CLI::IsMember({"linf", "l1", "l2"});

  std::string path;

  auto* validate = app.add_subcommand("validate", "Check an instance file");
  validate->add_option("instance", path, "Instance JSON")->required();

  SelectArgs sel;
  std::string sel_norm;
  auto* select = app.add_subcommand("select", "Compute an optimal Lipschitz selection");
  select->add_option("instance", sel.path, "Instance JSON")->required();
  select->add_option("--norm", sel_norm, "Override the instance norm")->check(norms);
  select->add_option("--out", sel.out, "Write the JSON report here instead of stdout");

  FinitenessArgs fin;
  std::string fin_norm;
  auto* finiteness = app.add_subcommand("finiteness", "Local versus global optimal seminorms");
  finiteness->add_option("instance", fin.path, "Instance JSON")->required();
  finiteness->add_option("--N", fin.N, "Largest subset size (default 2^min(m+1,d))");
  finiteness->add_option("--cap", fin.cap, "Maximum number of subsets (default 1e6)");
  finiteness->add_option("--norm", fin_norm, "Override the instance norm")->check(norms);
  finiteness->add_option("--out", fin.out, "Write the JSON report here instead of stdout");
  finiteness->add_option("--csv", fin.csv, "Write per-subset lambdas as CSV");
  finiteness->add_option("--threads", fin.threads, "Worker threads (0 = all cores)");

  CoreArgs core;
  std::string core_norm;
  auto* core_cmd = app.add_subcommand("core", "Build and verify the covering-tree core");
  core_cmd->add_option("instance", core.path, "Instance JSON")->required();
  core_cmd->add_option("--L", core.L, "Cover depth (default 4)");
  core_cmd->add_option("--hull-depth", core.hull_depth, "Fiber depth for hulls (default L-1)");
  core_cmd->add_option("--tol", core.tol, "Verification tolerance (default 1e-9)");
  core_cmd->add_option("--node-cap", core.node_cap, "Maximum cover size (default 1e5)");
  core_cmd->add_option("--basepoint", core.basepoint, "Basepoint of the cover");
  core_cmd->add_option("--norm", core_norm, "Override the instance norm")->check(norms);
  core_cmd->add_flag("--prune", core.prune, "Drop redundant hull generators");
  core_cmd->add_flag("--timings", core.timings, "Print wall-clock timings to stderr");
  core_cmd->add_option("--out", core.out, "Write the JSON report here instead of stdout");
  core_cmd->add_option("--cover-out", core.cover_out, "Dump the cover as JSON");
  core_cmd->add_option("--dot", core.dot, "Dump the cover as Graphviz DOT");

  GenSpec gen;
  std::string gen_norm = "linf", gen_out;
  auto* gen_cmd = app.add_subcommand("gen", "Generate a random instance");
  gen_cmd->add_option("--n", gen.n, "Number of points");
  gen_cmd->add_option("--d", gen.d, "Ambient dimension");
  gen_cmd->add_option("--m", gen.m, "Affine dimension bound of the values");
  gen_cmd->add_option("--vertices", gen.vertices, "Generators per polytope (default m+1)");
  gen_cmd->add_option("--norm", gen_norm, "Norm recorded in the instance")->check(norms);
  gen_cmd->add_flag("--intervals", gen.intervals, "Interval-valued instance in dimension 1");
  gen_cmd->add_option("--seed", gen.seed, "Random seed");
  gen_cmd->add_option("--out", gen_out, "Output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsage;
  }

  if (*validate) return cmd_validate(path, std::cout, std::cerr);
  if (*select) {
    sel.norm = norm_flag(sel_norm);
    return cmd_select(sel, std::cout, std::cerr);
  }
  if (*finiteness) {
    fin.norm = norm_flag(fin_norm);
    return cmd_finiteness(fin, std::cout, std::cerr);
  }
  if (*core_cmd) {
    core.norm = norm_flag(core_norm);
    return cmd_core(core, std::cout, std::cerr);
  }
  if (*gen_cmd) {
    gen.norm = *lipsel::parse_norm(gen_norm);
    if (gen.intervals) gen.d = 1;
    return cmd_gen(gen, gen_out, std::cout, std::cerr);
  }
  return kUsage;
}
