#include "commands.hpp"

#include <chrono>
#include <cstdio>
#include <ostream>
#include <sstream>

namespace lipsel::cli {

namespace {

template <class Fn>
int guarded(std::ostream& err, Fn&& fn) {
  try {
    return fn();
  } catch (const InstanceError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const Error& e) {
    err << "error: " << describe(e) << '\n';
    return kFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

SetValuedMap load_map(const Instance& inst, std::optional<NormKind> norm) {
  SetValuedMap map = to_map(inst);
  return norm ? map.with_norm(*norm) : map;
}

Json labelled_points(const PseudometricSpace& space, const std::vector<Vector>& pts) {
  Json arr = Json::array();
  for (std::size_t i = 0; i < pts.size(); ++i) {
    arr.push_back(Json{{"point", space.labels()[i]}, {"value", vector_json(pts[i])}});
  }
  return arr;
}

Json violations_json(const SelectionReport& report) {
  Json arr = Json::array();
  for (const auto& v : report.violations) {
    arr.push_back(Json{{"kind", to_string(v.kind)},
                       {"i", v.i},
                       {"j", v.j},
                       {"magnitude", number(v.magnitude)}});
  }
  return arr;
}

std::string walk_label(const CoverNode& node) {
  std::string s;
  for (std::size_t i = 0; i < node.walk.size(); ++i) {
    if (i) s += '-';
    s += std::to_string(node.walk[i]);
  }
  return s;
}

}  // namespace

std::string describe(const std::exception& e) {
  auto tag = [&](const std::string& name) { return name + ": " + e.what(); };
  if (auto* t = dynamic_cast<const TriangleViolation*>(&e)) {
    return tag("TriangleViolation(" + std::to_string(t->i) + "," + std::to_string(t->j) + "," +
               std::to_string(t->k) + ")");
  }
  if (auto* a = dynamic_cast<const AsymmetryError*>(&e)) {
    return tag("AsymmetryError(" + std::to_string(a->row) + "," + std::to_string(a->col) + ")");
  }
  if (auto* n = dynamic_cast<const NegativeDistanceError*>(&e)) {
    return tag("NegativeDistanceError(" + std::to_string(n->row) + "," + std::to_string(n->col) +
               ")");
  }
  if (auto* z = dynamic_cast<const NonzeroDiagonalError*>(&e)) {
    return tag("NonzeroDiagonalError(" + std::to_string(z->index) + ")");
  }
  if (auto* inf = dynamic_cast<const InfeasibleSelection*>(&e)) {
    std::string w;
    for (std::size_t i : inf->witness) w += (w.empty() ? "" : ",") + std::to_string(i);
    return tag("Infeasible(" + w + ")");
  }
  if (dynamic_cast<const SubsetBudgetExceeded*>(&e)) return tag("SubsetBudgetExceeded");
  if (dynamic_cast<const NodeBudgetExceeded*>(&e)) return tag("NodeBudgetExceeded");
  if (auto* f = dynamic_cast<const EmptyFiber*>(&e)) {
    return tag("EmptyFiber(" + std::to_string(f->vertex) + ")");
  }
  if (dynamic_cast<const SolverFailure*>(&e)) return tag("SolverFailure");
  if (dynamic_cast<const ZeroDistanceConflict*>(&e)) return tag("ZeroDistanceConflict");
  return e.what();
}

int cmd_validate(const std::string& path, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const Instance inst = load_instance(path);
    const SetValuedMap map = to_map(inst);
    out << "ok: " << map.size() << " points, dimension " << map.dimension() << ", norm "
        << to_string(map.norm_kind()) << ", m = " << map.m() << '\n';
    return kOk;
  });
}

Json selection_json(const Instance& inst, const OptimalSelection& result) {
  Json j;
  j["command"] = "select";
  j["instance_digest"] = inst.digest;
  j["norm"] = to_string(result.selection.norm);
  j["n"] = result.selection.points.size();
  j["lambda_star"] = number(result.lambda_star);
  j["lower_bound"] = number(result.lower_bound);
  j["selection"] = labelled_points(result.selection.space, result.selection.points);
  return j;
}

int cmd_select(const SelectArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const Instance inst = load_instance(args.path);
    const SetValuedMap map = load_map(inst, args.norm);
    const OptimalSelection result = optimal_selection(map);
    write_text(args.out, dump(selection_json(inst, result)), out);
    return kOk;
  });
}

Json finiteness_json(const Instance& inst, const FinitenessReport& report) {
  Json j;
  j["command"] = "finiteness";
  j["instance_digest"] = inst.digest;
  j["N"] = report.N;
  j["subsets_evaluated"] = report.subsets.size();
  j["lambda_local"] = number(report.lambda_local);
  j["lambda_global"] = number(report.lambda_global);
  j["gamma_emp"] = number(report.gamma_emp);
  j["witness_subset"] = report.witness_subset;
  return j;
}

std::string finiteness_csv(const FinitenessReport& report) {
  std::ostringstream csv;
  csv << "size,subset,lambda\n";
  for (const auto& s : report.subsets) {
    csv << s.subset.size() << ',';
    for (std::size_t i = 0; i < s.subset.size(); ++i) csv << (i ? " " : "") << s.subset[i];
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", s.lambda);
    csv << ',' << buf << '\n';
  }
  return csv.str();
}

int cmd_finiteness(const FinitenessArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (args.N && *args.N < 2) throw UsageError("--N must be at least 2");
    const Instance inst = load_instance(args.path);
    const SetValuedMap map = load_map(inst, args.norm);
    const std::size_t N = args.N ? *args.N
                                 : inst.experiment.N.value_or(
                                       subset_count_bound(std::max<std::size_t>(map.m(), 1),
                                                          map.dimension()));
    FinitenessOptions options;
    options.subset_cap = args.cap ? *args.cap : inst.experiment.cap.value_or(1e6);
    options.threads = args.threads;
    const FinitenessReport report = finiteness_experiment(map, N, options);
    write_text(args.out, dump(finiteness_json(inst, report)), out);
    if (!args.csv.empty()) write_text(args.csv, finiteness_csv(report), out);
    return kOk;
  });
}

Json cover_json(const CoveringTree& tree) {
  Json j;
  j["basepoint"] = tree.basepoint();
  j["depth"] = tree.depth_limit();
  Json nodes = Json::array();
  for (std::size_t i = 0; i < tree.size(); ++i) {
    const auto& node = tree.node(i);
    Json n;
    n["id"] = i;
    n["walk"] = node.walk;
    n["projection"] = node.vertex();
    if (node.parent == CoverNode::kNoParent) {
      n["parent"] = nullptr;
      n["edge_length"] = nullptr;
    } else {
      n["parent"] = node.parent;
      n["edge_length"] = number(node.edge_length);
    }
    nodes.push_back(std::move(n));
  }
  j["nodes"] = std::move(nodes);
  return j;
}

std::string cover_dot(const CoveringTree& tree) {
  std::ostringstream dot;
  dot << "graph cover {\n";
  for (std::size_t i = 0; i < tree.size(); ++i) {
    dot << "  n" << i << " [label=\"" << walk_label(tree.node(i)) << "\"];\n";
  }
  for (std::size_t i = 1; i < tree.size(); ++i) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", tree.node(i).edge_length);
    dot << "  n" << tree.node(i).parent << " -- n" << i << " [label=\"" << buf << "\"];\n";
  }
  dot << "}\n";
  return dot.str();
}

Json core_json(const Instance& inst, const CorePipelineOptions& options,
               const CorePipelineResult& r) {
  Json j;
  j["command"] = "core";
  j["instance_digest"] = inst.digest;
  j["norm"] = to_string(r.base_map.norm_kind());
  j["parameters"] = Json{{"L", options.depth},
                         {"hull_depth", options.hull_depth},
                         {"tol", number(options.tol)},
                         {"basepoint", options.basepoint}};
  j["quotient"] = Json{{"n", r.quotient.members.size()}, {"classes", r.quotient.members}};
  j["cover"] = Json{{"nodes", r.tree.size()},
                    {"edges", r.tree.edge_count()},
                    {"deck_rank", deck_rank(r.tree.base())}};
  j["lambda_base"] = number(r.base_selection.lambda_star);
  j["lambda_tree"] = number(r.tree_selection.lambda_star);
  j["pullback_check"] = Json{{"lambda", number(r.base_selection.selection.seminorm)},
                             {"pullback_seminorm", number(r.pulled.selection.seminorm)},
                             {"ok", r.pullback_report.ok()},
                             {"violations", violations_json(r.pullback_report)}};

  Json sets = Json::array();
  for (std::size_t x = 0; x < r.core.sets.size(); ++x) {
    Json verts = Json::array();
    for (const auto& v : r.core.sets[x].vertices()) verts.push_back(vector_json(v));
    sets.push_back(Json{{"point", r.base_map.space().labels()[x]}, {"vertices", std::move(verts)}});
  }
  j["core"] = Json{{"c", number(r.core.c)}, {"hull_depth", r.core.hull_depth}, {"sets", sets}};

  const CoreReport& rep = r.report;
  Json containment = Json::array();
  for (double v : rep.containment) containment.push_back(number(v));
  Json pairs = Json::array();
  for (const auto& p : rep.pairs) {
    pairs.push_back(Json{{"x", p.x},
                         {"y", p.y},
                         {"distance", number(p.distance)},
                         {"bound", number(p.bound)},
                         {"one_sided_xy", number(p.one_sided_xy)},
                         {"one_sided_yx", number(p.one_sided_yx)},
                         {"one_sided_slack", number(p.one_sided_slack)},
                         {"one_sided_pass", p.one_sided_pass},
                         {"hausdorff", number(p.hausdorff)},
                         {"hausdorff_slack", number(p.hausdorff_slack)},
                         {"hausdorff_flagged", p.hausdorff_flagged}});
  }
  j["verify"] = Json{{"containment", containment},
                     {"containment_pass", rep.containment_pass},
                     {"one_sided_pass", rep.one_sided_pass},
                     {"min_one_sided_slack", number(rep.min_one_sided_slack)},
                     {"hausdorff_flags", rep.hausdorff_flags},
                     {"min_hausdorff_slack", number(rep.min_hausdorff_slack)},
                     {"pairs", pairs}};
  j["ok"] = r.ok();
  return j;
}

int cmd_core(const CoreArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (args.L && *args.L == 0) throw UsageError("--L must be at least 1");
    if (args.L && args.hull_depth && *args.hull_depth + 1 > *args.L) {
      throw UsageError("--hull-depth must be at most L - 1");
    }
    const auto t0 = std::chrono::steady_clock::now();
    const Instance inst = load_instance(args.path);

    CorePipelineOptions options;
    options.depth = args.L ? *args.L : inst.experiment.L.value_or(4);
    options.hull_depth = args.hull_depth ? *args.hull_depth
                                         : inst.experiment.hull_depth.value_or(options.depth - 1);
    if (options.depth == 0) throw UsageError("L must be at least 1");
    if (options.hull_depth + 1 > options.depth) {
      throw UsageError("hull depth " + std::to_string(options.hull_depth) +
                       " must be at most L - 1 = " + std::to_string(options.depth - 1));
    }
    options.tol = args.tol ? *args.tol : inst.experiment.tol.value_or(1e-9);
    options.node_cap = args.node_cap ? *args.node_cap : inst.experiment.node_cap.value_or(1e5);
    options.basepoint = args.basepoint;
    options.prune = args.prune;

    const SetValuedMap map = load_map(inst, args.norm);
    const CorePipelineResult result = run_core_pipeline(map, options);
    write_text(args.out, dump(core_json(inst, options, result)), out);
    if (!args.cover_out.empty()) write_text(args.cover_out, dump(cover_json(result.tree)), out);
    if (!args.dot.empty()) write_text(args.dot, cover_dot(result.tree), out);
    if (args.timings) {
      const auto ms = std::chrono::duration<double, std::milli>(
                          std::chrono::steady_clock::now() - t0)
                          .count();
      err << "timing: core pipeline " << ms << " ms\n";
    }
    if (!result.ok()) {
      err << "verification failed\n";
      return kFailure;
    }
    return kOk;
  });
}

int cmd_gen(const GenSpec& spec, const std::string& out_path, std::ostream& out,
            std::ostream& err) {
  return guarded(err, [&] {
    if (spec.n == 0) throw UsageError("--n must be at least 1");
    if (spec.d == 0) throw UsageError("--d must be at least 1");
    const Instance inst = random_instance(spec);
    write_text(out_path, dump(instance_to_json(inst)), out);
    return kOk;
  });
}

}  // namespace lipsel::cli
