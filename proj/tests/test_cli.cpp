#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "commands.hpp"

using namespace lipsel;
using namespace lipsel::cli;

namespace {

namespace fs = std::filesystem;

class Scratch {
 public:
  Scratch() : dir_(fs::temp_directory_path() / ("lipsel_cli_" + std::to_string(::getpid()))) {
    fs::create_directories(dir_);
  }
  ~Scratch() { fs::remove_all(dir_); }

  std::string write(const std::string& name, const std::string& text) const {
    const fs::path p = dir_ / name;
    std::ofstream(p) << text;
    return p.string();
  }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

 private:
  fs::path dir_;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Run {
  int code;
  std::string out, err;
};

template <class Fn>
Run run(Fn&& fn) {
  std::ostringstream out, err;
  const int code = fn(out, err);
  return {code, out.str(), err.str()};
}

const char* kThreeIntervals = R"({
  "points": ["a", "b", "c"],
  "dist": [[0, 1, 1], [1, 0, 1], [1, 1, 0]],
  "norm": "linf",
  "values": [{"vertices": [[0]]}, {"vertices": [[2]]}, {"vertices": [[0], [2]]}]
})";

const char* kK2 = R"({
  "dist": [[0, 1.5], [1.5, 0]],
  "values": [{"vertices": [[0, 0], [1, 0]]}, {"vertices": [[3, 0], [3, 1]]}]
})";

}  // namespace

TEST_CASE("validate exit codes") {
  Scratch s;
  auto ok = run([&](auto& o, auto& e) { return cmd_validate(s.write("ok.json", kThreeIntervals), o, e); });
  CHECK(ok.code == kOk);
  CHECK(ok.out.find("3 points") != std::string::npos);

  const auto bad = s.write("tri.json", R"({"dist": [[0,1,3],[1,0,1],[3,1,0]],
    "values": [{"vertices": [[0]]}, {"vertices": [[0]]}, {"vertices": [[0]]}]})");
  auto tri = run([&](auto& o, auto& e) { return cmd_validate(bad, o, e); });
  CHECK(tri.code == kFailure);
  CHECK(tri.err.find("TriangleViolation(0,2,1)") != std::string::npos);

  const auto broken = s.write("broken.json", "{\n  \"dist\": [[0, 1],\n  [1, 0]\n");
  auto parse = run([&](auto& o, auto& e) { return cmd_validate(broken, o, e); });
  CHECK(parse.code == kUsage);
  CHECK(parse.err.find("line 4") != std::string::npos);

  const auto cell = s.write("cell.json", R"({"dist": [[0, 1], [1, "x"]], "values": [{"vertices": [[0]]}, {"vertices": [[0]]}]})");
  auto where = run([&](auto& o, auto& e) { return cmd_validate(cell, o, e); });
  CHECK(where.code == kUsage);
  CHECK(where.err.find("dist[1][1]") != std::string::npos);

  auto missing = run([&](auto& o, auto& e) { return cmd_validate(s.path("nope.json"), o, e); });
  CHECK(missing.code == kUsage);
}

TEST_CASE("instance parsing") {
  const auto inst = parse_instance(R"({"points": ["p", "q"], "dist": [[0, "inf"], ["inf", 0]],
    "norm": "l2", "m": 0, "values": [{"vertices": [[1, 2]]}, {"vertices": [[3, 4]]}],
    "experiment": {"N": 2, "L": 3}})");
  CHECK(inst.labels == std::vector<std::string>{"p", "q"});
  CHECK(std::isinf(inst.dist[0][1]));
  CHECK(inst.norm == NormKind::L2);
  CHECK(inst.experiment.N == 2u);
  CHECK(inst.experiment.L == 3u);
  CHECK(to_map(inst).m() == 0);
  CHECK(to_map(parse_instance(kK2)).m() == 2);
  CHECK_THROWS_AS(parse_instance(R"({"dist": [[0]]})"), InstanceError);
  CHECK_THROWS_AS(parse_instance(R"({"dist": [[0]], "values": [{"vertices": [[0]]}], "norm": "l7"})"), InstanceError);
  const auto again = parse_instance(instance_to_json(inst).dump());
  CHECK(again.dist == inst.dist);
  CHECK(again.labels == inst.labels);
  CHECK(parse_instance(kK2).digest == parse_instance(kK2).digest);
  CHECK(parse_instance(kK2).digest != parse_instance(kThreeIntervals).digest);
}

TEST_CASE("select reports") {
  Scratch s;
  auto three = run([&](auto& o, auto& e) { return cmd_select({s.write("three.json", kThreeIntervals), {}, {}}, o, e); });
  REQUIRE(three.code == kOk);
  const auto j = Json::parse(three.out);
  CHECK(j["lambda_star"].get<double>() == 2.0);
  CHECK(j["selection"][0]["point"] == "a");

  const auto singletons = s.write("single.json", R"({"dist": [[0, 2, 4], [2, 0, 2], [4, 2, 0]],
    "values": [{"vertices": [[0]]}, {"vertices": [[3]]}, {"vertices": [[2]]}]})");
  auto single = run([&](auto& o, auto& e) { return cmd_select({singletons, {}, {}}, o, e); });
  CHECK(Json::parse(single.out)["lambda_star"].get<double>() == 1.5);

  const auto one = s.write("one.json", R"({"dist": [[0]], "values": [{"vertices": [[7, 7], [8, 8]]}]})");
  auto n1 = run([&](auto& o, auto& e) { return cmd_select({one, {}, {}}, o, e); });
  CHECK(Json::parse(n1.out)["lambda_star"].get<double>() == 0.0);
}

TEST_CASE("finiteness reports and CSV") {
  Scratch s;
  const auto path = s.write("three.json", kThreeIntervals);
  FinitenessArgs args;
  args.path = path;
  args.N = 3;
  args.csv = s.path("out.csv");
  auto full = run([&](auto& o, auto& e) { return cmd_finiteness(args, o, e); });
  REQUIRE(full.code == kOk);
  CHECK(Json::parse(full.out)["gamma_emp"].get<double>() == 1.0);
  const std::string csv = slurp(args.csv);
  CHECK(csv.rfind("size,subset,lambda\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + 3 + 1);

  args.N = 2;
  args.csv.clear();
  auto helly = run([&](auto& o, auto& e) { return cmd_finiteness(args, o, e); });
  CHECK(Json::parse(helly.out)["gamma_emp"].get<double>() == doctest::Approx(1.0).epsilon(1e-7));

  args.cap = 2;
  auto capped = run([&](auto& o, auto& e) { return cmd_finiteness(args, o, e); });
  CHECK(capped.code == kFailure);
  CHECK(capped.err.find("SubsetBudgetExceeded") != std::string::npos);

  args.cap.reset();
  args.N = 1;
  CHECK(run([&](auto& o, auto& e) { return cmd_finiteness(args, o, e); }).code == kUsage);
}

TEST_CASE("core command") {
  Scratch s;
  CoreArgs k2;
  k2.path = s.write("k2.json", kK2);
  k2.L = 2;
  k2.tol = 0.0;
  auto r = run([&](auto& o, auto& e) { return cmd_core(k2, o, e); });
  REQUIRE(r.code == kOk);
  auto j = Json::parse(r.out);
  CHECK(j["ok"] == true);
  CHECK(j["cover"]["nodes"] == 2);
  CHECK(j["verify"]["min_one_sided_slack"].get<double>() >= 0.0);

  CoreArgs k3;
  k3.path = s.write("three.json", kThreeIntervals);
  k3.L = 3;
  k3.hull_depth = 2;
  k3.cover_out = s.path("cover.json");
  k3.dot = s.path("cover.dot");
  auto tri = run([&](auto& o, auto& e) { return cmd_core(k3, o, e); });
  REQUIRE(tri.code == kOk);
  CHECK(Json::parse(tri.out)["verify"]["one_sided_pass"] == true);
  CHECK(Json::parse(slurp(k3.cover_out))["nodes"].size() == 7);
  CHECK(slurp(k3.dot).find("graph cover") != std::string::npos);

  k3.hull_depth = 3;
  k3.cover_out.clear();
  k3.dot.clear();
  auto usage = run([&](auto& o, auto& e) { return cmd_core(k3, o, e); });
  CHECK(usage.code == kUsage);
  CHECK(usage.out.empty());
}

TEST_CASE("reports are byte-identical across runs") {
  Scratch s;
  GenSpec spec;
  spec.n = 4;
  spec.seed = 7;
  const auto path = s.path("gen.json");
  std::ostringstream sink;
  REQUIRE(cmd_gen(spec, path, sink, sink) == kOk);
  std::string first_gen = slurp(path);
  REQUIRE(cmd_gen(spec, path, sink, sink) == kOk);
  CHECK(slurp(path) == first_gen);

  CoreArgs args;
  args.path = path;
  args.L = 3;
  auto a = run([&](auto& o, auto& e) { return cmd_core(args, o, e); });
  auto b = run([&](auto& o, auto& e) { return cmd_core(args, o, e); });
  CHECK(a.code == kOk);
  CHECK(a.out == b.out);

  FinitenessArgs fin;
  fin.path = path;
  fin.N = 3;
  fin.threads = 1;
  auto f1 = run([&](auto& o, auto& e) { return cmd_finiteness(fin, o, e); });
  fin.threads = 4;
  auto f4 = run([&](auto& o, auto& e) { return cmd_finiteness(fin, o, e); });
  CHECK(f1.out == f4.out);
}

TEST_CASE("report numbers round-trip to the library values") {
  Scratch s;
  GenSpec spec;
  spec.n = 5;
  spec.d = 2;
  spec.m = 1;
  spec.seed = 3;
  const Instance inst = random_instance(spec);
  const auto path = s.path("gen.json");
  std::ostringstream sink;
  REQUIRE(cmd_gen(spec, path, sink, sink) == kOk);

  auto twelve = [](double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return std::strtod(buf, nullptr);
  };

  const auto map = to_map(load_instance(path));
  const auto sel = optimal_selection(map);
  auto r = run([&](auto& o, auto& e) { return cmd_select({path, {}, {}}, o, e); });
  const auto j = Json::parse(r.out);
  CHECK(j["lambda_star"].get<double>() == twelve(sel.lambda_star));
  for (std::size_t i = 0; i < map.size(); ++i) {
    for (std::size_t c = 0; c < map.dimension(); ++c) {
      CHECK(j["selection"][i]["value"][c].get<double>() == twelve(sel.selection.points[i][c]));
    }
  }

  CorePipelineOptions opts;
  opts.depth = 3;
  opts.hull_depth = 2;
  const auto result = run_core_pipeline(map, opts);
  CoreArgs args;
  args.path = path;
  args.L = 3;
  const auto core = Json::parse(run([&](auto& o, auto& e) { return cmd_core(args, o, e); }).out);
  CHECK(core["lambda_tree"].get<double>() == twelve(result.tree_selection.lambda_star));
  CHECK(core["core"]["c"].get<double>() == twelve(result.core.c));
  CHECK(core["cover"]["deck_rank"] == deck_rank(result.tree.base()));
  for (std::size_t p = 0; p < result.report.pairs.size(); ++p) {
    CHECK(core["verify"]["pairs"][p]["one_sided_slack"].get<double>() ==
          twelve(result.report.pairs[p].one_sided_slack));
  }

  CHECK(number(kInfinity) == "inf");
  CHECK(number(-0.0).get<double>() == 0.0);
  CHECK(load_instance(path).dist == inst.dist);
}

TEST_CASE("describe tags library errors") {
  CHECK(describe(TriangleViolation(0, 2, 1)).rfind("TriangleViolation(0,2,1)", 0) == 0);
  CHECK(describe(AsymmetryError(1, 0)).rfind("AsymmetryError(1,0)", 0) == 0);
  CHECK(describe(InfeasibleSelection({0, 1}, "x")).rfind("Infeasible(0,1)", 0) == 0);
}
