#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "lipsel/covering_core.hpp"
#include "lipsel/errors.hpp"

using namespace lipsel;
using fixtures::make_map;

namespace {

Matrix complete(std::size_t n, double side = 1.0) {
  Matrix d(n, std::vector<double>(n, side));
  for (std::size_t i = 0; i < n; ++i) d[i][i] = 0.0;
  return d;
}

MetricGraph graph_of(const Matrix& d) { return MetricGraph(validate_pseudometric(d)); }

// Distances in the cover by Dijkstra over its parent links.
Matrix tree_oracle(const CoveringTree& tree) {
  const std::size_t n = tree.size();
  Matrix w(n, std::vector<double>(n, oracle::kInf));
  for (std::size_t i = 0; i < n; ++i) {
    w[i][i] = 0.0;
    const auto& node = tree.node(i);
    if (node.parent != CoverNode::kNoParent) w[i][node.parent] = w[node.parent][i] = node.edge_length;
  }
  return oracle::all_pairs(w);
}

// K_3 over {a, b, c} = {0, 1, 2}: points a and b carry fixed values, c an interval.
SetValuedMap triangle_map(double side = 1.0) {
  return make_map(complete(3, side), {{{0.0}}, {{2.0}}, {{0.0}, {2.0}}}, NormKind::Linf, 1);
}

}  // namespace

TEST_CASE("cover node counts") {
  CHECK(build_cover(graph_of(complete(2)), 0, 1).size() == 2);
  CHECK(build_cover(graph_of(complete(2)), 1, 5).size() == 2);
  CHECK(build_cover(graph_of(complete(2)), 0, 5).edge_count() == 1);
  CHECK(build_cover(graph_of(complete(3)), 0, 3).size() == 7);
  CHECK(build_cover(graph_of(complete(4)), 0, 2).size() == 10);
  for (std::size_t n = 2; n <= 6; ++n) {
    for (std::size_t L = 1; L <= 4; ++L) {
      const auto tree = build_cover(graph_of(complete(n)), n - 1, L);
      CHECK(tree.size() == oracle::count_walks(n, L));
      CHECK(cover_node_count(n, L) == static_cast<double>(tree.size()));
    }
  }
}

TEST_CASE("deck_rank") {
  CHECK(deck_rank(graph_of(complete(2))) == 0);
  CHECK(deck_rank(graph_of(complete(3))) == 1);
  CHECK(deck_rank(graph_of(complete(5))) == 6);
  CHECK(deck_rank(graph_of({{0}})) == 0);
}

TEST_CASE("single-vertex cover") {
  const auto g = graph_of(complete(1));
  const auto tree = build_cover(g, 0, 3);
  CHECK(tree.size() == 1);
  CHECK(deck_rank(g) == 0);
  CHECK(fiber_min_distance(tree, 0, 0).value == 0.0);
}

TEST_CASE("cover construction errors") {
  const auto g = graph_of(complete(3));
  CHECK_THROWS_AS(build_cover(g, 3, 2), InvalidBasepoint);
  CHECK_THROWS_AS(build_cover(g, 0, 0), DepthOutOfRange);
  CHECK_THROWS_AS(build_cover(graph_of(complete(12)), 0, 8), NodeBudgetExceeded);
  CHECK_THROWS_AS(build_cover(graph_of(complete(4)), 0, 3, {.node_cap = 10}), NodeBudgetExceeded);
  const auto tree = build_cover(g, 0, 2);
  CHECK_THROWS_AS(fiber(tree, 1, 3), DepthOutOfRange);
}

TEST_CASE("cover structure on random metrics") {
  oracle::Rng rng(51);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 2 + rng.index(4);
    const auto g = graph_of(oracle::random_metric(n, rng));
    const std::size_t base = rng.index(n);
    const auto tree = build_cover(g, base, 1 + rng.index(3));
    CHECK(tree.size() == tree.edge_count() + 1);
    CHECK(tree.node(0).walk == std::vector<std::size_t>{base});
    for (std::size_t i = 1; i < tree.size(); ++i) {
      const auto& node = tree.node(i);
      REQUIRE(node.parent < i);
      const auto& parent = tree.node(node.parent);
      // The parent walk is the walk minus its last step: the tree is connected.
      CHECK(std::equal(parent.walk.begin(), parent.walk.end(), node.walk.begin()));
      CHECK(node.walk.size() == parent.walk.size() + 1);
      CHECK(node.vertex() != parent.vertex());
      if (node.walk.size() >= 3) CHECK(node.walk[node.walk.size() - 3] != node.vertex());
      // Local isometry, exactly.
      CHECK(node.edge_length == g.length(parent.vertex(), node.vertex()));
      CHECK(tree.find(node.walk) == i);
    }
    const Matrix expect = tree_oracle(tree);
    for (std::size_t a = 0; a < tree.size(); ++a) {
      for (std::size_t b = 0; b < tree.size(); ++b) {
        const double d = tree.distance(a, b);
        CHECK(d == doctest::Approx(expect[a][b]).epsilon(1e-12));
        CHECK(g.length(tree.projection(a), tree.projection(b)) <= d + 1e-12);
      }
    }
    CHECK(satisfies_four_point(tree.distance_matrix()));
  }
}

TEST_CASE("fibers") {
  const auto tree = build_cover(graph_of(complete(3)), 0, 3);
  CHECK(fiber(tree, 0, 0) == std::vector<std::size_t>{0});
  CHECK(fiber(tree, 1, 0).empty());
  CHECK(fiber(tree, 2, 0).empty());
  const auto over_b = fiber(tree, 1, 2);
  REQUIRE(over_b.size() == 2);
  CHECK(tree.node(over_b[0]).walk == std::vector<std::size_t>{0, 1});
  CHECK(tree.node(over_b[1]).walk == std::vector<std::size_t>{0, 2, 1});
}

TEST_CASE("fiber_min_distance") {
  const auto tree = build_cover(graph_of(complete(3)), 0, 2);
  CHECK(fiber_min_distance(tree, 0, 0).value == 0.0);
  const auto ab = fiber_min_distance(tree, 0, 1);
  CHECK(ab.value == 1.0);
  CHECK(ab.exact);
  CHECK(tree.node(ab.witness).walk == std::vector<std::size_t>{0, 1});

  // A leaf at full depth: the truncation may hide the best witness.
  oracle::Rng rng(52);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 3 + rng.index(3);
    const auto g = graph_of(oracle::random_metric(n, rng));
    const auto t = build_cover(g, 0, 2);
    for (std::size_t i = 0; i < t.size(); ++i) {
      for (std::size_t y = 0; y < n; ++y) {
        const auto fd = fiber_min_distance(t, i, y);
        CHECK(fd.exact == (t.node(i).depth() + 1 <= 2));
        CHECK(fd.value >= g.length(t.projection(i), y));
        if (fd.exact) CHECK(fd.value == g.length(t.projection(i), y));
      }
    }
  }
}

TEST_CASE("pullbacks") {
  const auto map = triangle_map();
  const auto tree = build_cover(graph_of(complete(3)), 0, 3);
  const auto lifted = pullback_map(map, tree);
  CHECK(lifted.size() == tree.size());
  for (std::size_t i = 0; i < tree.size(); ++i) CHECK(lifted.value(i) == map.value(tree.projection(i)));

  const auto constant = make_selection(map.space(), {{1.0}, {1.0}, {1.0}}, NormKind::Linf);
  CHECK(pullback_selection(constant, tree).selection.seminorm == 0.0);

  const auto k2 = make_map(complete(2), {{{0, 0}}, {{1, 3}, {2, 2}}}, NormKind::L1, 1);
  const auto f2 = optimal_selection(k2).selection;
  const auto pulled2 = pullback_selection(f2, build_cover(graph_of(complete(2)), 0, 4));
  CHECK(pulled2.nodes == std::vector<std::size_t>{0, 1});
  CHECK(pulled2.selection.points == f2.points);
  CHECK(pulled2.selection.seminorm == f2.seminorm);

  const auto sub = pullback_selection(make_selection(validate_pseudometric({{0, 1}, {1, 0}}), {{0.0}, {2.0}}, NormKind::Linf),
                                      {0, 2}, tree);
  for (std::size_t node : sub.nodes) CHECK(tree.projection(node) != 1);
}

TEST_CASE("pullback keeps the seminorm") {
  oracle::Rng rng(53);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 2 + rng.index(4);
    const auto map = fixtures::random_map(rng, n, 1 + rng.index(2), NormKind::Linf);
    const auto f = optimal_selection(map).selection;
    const auto tree = build_cover(graph_of(map.space().matrix()), 0, 3);
    const auto pulled = pullback_selection(f, tree);
    CHECK(pulled.selection.seminorm <= f.seminorm);
    CHECK(verify_selection(pulled.selection, pullback_map(map, tree), f.seminorm).ok());
  }
}

TEST_CASE("core examples") {
  SUBCASE("K_2 cores are the selection itself") {
    const auto map = make_map(complete(2, 1.5), {{{0, 0}, {1, 0}}, {{3, 0}, {3, 1}}}, NormKind::Linf, 1);
    CorePipelineOptions opts;
    opts.depth = 2;
    opts.hull_depth = 1;
    opts.tol = 0.0;
    const auto r = run_core_pipeline(map, opts);
    CHECK(r.tree.size() == 2);
    for (std::size_t x = 0; x < 2; ++x) {
      REQUIRE(r.core.sets[x].size() == 1);
      CHECK(r.core.sets[x].vertex(0) == r.tree_selection.selection.points[x]);
    }
    CHECK(r.report.ok());
    CHECK(r.report.pairs[0].hausdorff ==
          norm_distance(r.core.sets[0].vertex(0), r.core.sets[1].vertex(0), NormKind::Linf));
    CHECK(r.report.pairs[0].hausdorff_slack >= 0.0);
    CHECK(r.report.min_one_sided_slack >= 0.0);
  }

  SUBCASE("constant selections give singleton cores") {
    const auto map = make_map(complete(3), {{{1, 1}}, {{0, 0}, {2, 2}}, {{1, 0}, {1, 2}}}, NormKind::L2, 1);
    const auto r = run_core_pipeline(map, {.depth = 3, .hull_depth = 2});
    CHECK(r.tree_selection.lambda_star == 0.0);
    for (const auto& g : r.core.sets) CHECK(prune_generators(g).size() == 1);
    for (const auto& pc : r.report.pairs) CHECK(pc.hausdorff == 0.0);
    CHECK(r.ok());
  }

  SUBCASE("K_3 unit triangle") {
    const auto map = triangle_map();
    const auto r = run_core_pipeline(map, {.depth = 3, .hull_depth = 2, .tol = 1e-9});
    CHECK(r.tree.size() == 7);
    // G(b) is generated by f at the walks (a,b) and (a,c,b).
    const auto& gb = r.core.sets[1];
    REQUIRE(gb.size() == 2);
    const auto& f = r.tree_selection.selection.points;
    CHECK(gb.vertex(0) == f[*r.tree.find({0, 1})]);
    CHECK(gb.vertex(1) == f[*r.tree.find({0, 2, 1})]);
    CHECK(r.report.ok());
    // Recheck every generator distance directly.
    const double c = r.core.c;
    for (std::size_t x = 0; x < 3; ++x) {
      for (const auto& v : r.core.sets[x].vertices()) CHECK(point_distance(v, map.value(x), NormKind::Linf) <= 1e-9);
      for (std::size_t y = 0; y < 3; ++y) {
        if (x == y) continue;
        for (const auto& v : r.core.sets[y].vertices()) {
          CHECK(point_distance(v, r.core.witness_sets[x], NormKind::Linf) <= c * 1.0 + 1e-9);
        }
      }
    }
  }
}

TEST_CASE("core errors") {
  const auto map = triangle_map();
  const auto tree = build_cover(graph_of(complete(3)), 0, 2);
  const auto f = optimal_selection(pullback_map(map, tree)).selection;
  CHECK_THROWS_AS(build_core(tree, f, 2), DepthOutOfRange);
  CHECK_THROWS_AS(build_core(tree, f, 0), EmptyFiber);
  CHECK_NOTHROW(build_core(tree, f, 1));
  CHECK_THROWS_AS(run_core_pipeline(map, {.depth = 3, .hull_depth = 3}), DepthOutOfRange);

  const auto conflict = make_map({{0, 0, 1}, {0, 0, 1}, {1, 1, 0}}, {{{0.0}}, {{1.0}}, {{0.0}}}, NormKind::Linf, 0);
  CHECK_THROWS_AS(run_core_pipeline(conflict, {.depth = 2, .hull_depth = 1}), ZeroDistanceConflict);
}

TEST_CASE("zero-distance points with equal values share a cover vertex") {
  const auto map = make_map({{0, 0, 1}, {0, 0, 1}, {1, 1, 0}}, {{{0.0}, {1.0}}, {{0.0}, {1.0}}, {{3.0}}}, NormKind::Linf, 1);
  const auto r = run_core_pipeline(map, {.depth = 2, .hull_depth = 1});
  CHECK(r.quotient.space.size() == 2);
  CHECK(r.core.sets.size() == 2);
  CHECK(r.base_selection.lambda_star == doctest::Approx(2.0));
  CHECK(r.ok());
}

TEST_CASE("core hulls grow with depth and respect the one-sided bound") {
  oracle::Rng rng(54);
  for (int trial = 0; trial < 15; ++trial) {
    const std::size_t n = 2 + rng.index(3);
    for (NormKind k : {NormKind::Linf, NormKind::L1, NormKind::L2}) {
      const auto map = fixtures::random_map(rng, n, 2, k);
      const auto r = run_core_pipeline(map, {.depth = 3, .hull_depth = 2});
      CHECK(r.ok());
      for (std::size_t x = 0; x < n; ++x) {
        for (const auto& v : r.core.sets[x].vertices()) {
          CHECK(point_distance(v, r.core.witness_sets[x], k) <= 1e-9);
        }
      }
      // Shallower hulls sit inside deeper ones.
      const auto shallow = build_core(r.tree, r.tree_selection.selection, 1);
      for (std::size_t x = 0; x < n; ++x) {
        for (const auto& v : shallow.sets[x].vertices()) {
          CHECK(point_distance(v, r.core.sets[x], k) <= 1e-9);
        }
      }
    }
  }
}

TEST_CASE("basepoint-independent quantities agree") {
  oracle::Rng rng(55);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t n = 3 + rng.index(2);
    const auto map = fixtures::random_map(rng, n, 2, NormKind::Linf);
    const auto r0 = run_core_pipeline(map, {.depth = 3, .hull_depth = 2, .basepoint = 0});
    const auto r1 = run_core_pipeline(map, {.depth = 3, .hull_depth = 2, .basepoint = n - 1});
    CHECK(r0.tree.size() == r1.tree.size());
    CHECK(r0.base_selection.lambda_star == r1.base_selection.lambda_star);
    CHECK(r0.pulled.selection.seminorm == r1.pulled.selection.seminorm);
    CHECK(r0.pullback_report.ok());
    CHECK(r1.pullback_report.ok());
    CHECK(r0.report.ok());
    CHECK(r1.report.ok());
    for (const auto* r : {&r0, &r1}) {
      for (std::size_t i = 0; i < r->tree.size(); ++i) {
        if (r->tree.node(i).depth() + 1 > 3) continue;
        for (std::size_t y = 0; y < n; ++y) {
          CHECK(fiber_min_distance(r->tree, i, y).value == map.space()(r->tree.projection(i), y));
        }
      }
    }
  }
}

TEST_CASE("cover metric and weighted tree views") {
  const auto tree = build_cover(graph_of(complete(3, 2.0)), 1, 2);
  const auto metric = tree.metric();
  CHECK(metric.labels().front() == "1");
  CHECK(metric.labels()[1] == "1-0");
  const auto wt = tree.as_weighted_tree();
  CHECK(tree_metric(wt).dist == tree.distance_matrix());
}
