#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "dygraph/es_tree.hpp"
#include "dygraph/oracles.hpp"
#include "test_util.hpp"

using namespace dygraph;

namespace {

void check_exact(const DynamicDigraph& g, const EsTree& t, VertexId r, Weight depth,
                 Direction dir) {
  oracles::Snapshot snap(g);
  auto dist = dir == Direction::Out ? oracles::dijkstra(snap, r)
                                    : oracles::dijkstra(snap.reversed(), r);
  for (int v = 0; v < g.vertex_count(); ++v) {
    Weight want =
        dist[v] == oracles::kUnreachable || dist[v] > depth ? EsTree::kInf : dist[v];
    CHECK(t.estimate(v) == want);
  }
}

}  // namespace

TEST_CASE("path distances and the depth cap") {
  auto g = testutil::path_graph(3);
  EsTree t(g, 0, 5, Direction::Out);
  CHECK(t.estimate(0) == 0);
  CHECK(t.estimate(1) == 1);
  CHECK(t.estimate(2) == 2);

  EsTree capped(g, 0, 1, Direction::Out);
  CHECK(capped.estimate(1) == 1);
  CHECK(capped.estimate(2) == EsTree::kInf);
}

TEST_CASE("deleting the only path edge disconnects") {
  auto g = testutil::path_graph(3);
  EsTree t(g, 0, 5, Direction::Out);
  EdgeId e = g.find_alive_edge(1, 2);
  g.delete_edge_by_id(e);
  t.notify_delete(e);
  CHECK(t.estimate(2) == EsTree::kInf);
  CHECK(t.estimate(1) == 1);
}

TEST_CASE("deleting a parallel non-tree edge changes nothing") {
  DynamicDigraph g(3, UpdateMode::Decremental);
  g.add_initial_edge(0, 1, 1);
  EdgeId dup = g.add_initial_edge(0, 1, 1);
  g.add_initial_edge(1, 2, 1);
  EsTree t(g, 0, 5, Direction::Out);
  // The certificate is the first (0,1) edge; the duplicate is not in the tree.
  std::int64_t scans_before = t.total_scans();
  g.delete_edge_by_id(dup);
  t.notify_delete(dup);
  CHECK(t.estimate(1) == 1);
  CHECK(t.estimate(2) == 2);
  CHECK(t.total_scans() == scans_before);
}

TEST_CASE("full random deletion run stays exact in both directions") {
  Rng rng(21);
  for (int trial = 0; trial < 6; ++trial) {
    int n = 50;
    auto g = testutil::random_graph(n, 150, rng, UpdateMode::Decremental);
    Weight depth = n;
    EsTree out_tree(g, 0, depth, Direction::Out);
    EsTree in_tree(g, 0, depth, Direction::In);
    for (EdgeId e : testutil::shuffled_alive_edges(g, rng)) {
      g.delete_edge_by_id(e);
      out_tree.notify_delete(e);
      in_tree.notify_delete(e);
      check_exact(g, out_tree, 0, depth, Direction::Out);
      check_exact(g, in_tree, 0, depth, Direction::In);
    }
  }
}

TEST_CASE("scan counter bounded by (depth + 1) * indegree") {
  Rng rng(23);
  int n = 40;
  auto g = testutil::random_graph(n, 120, rng, UpdateMode::Decremental);
  std::vector<std::int64_t> indeg(n, 0);
  for (int v = 0; v < n; ++v) indeg[v] = static_cast<std::int64_t>(g.in_edges(v).size());
  Weight depth = 12;
  EsTree t(g, 0, depth, Direction::Out);
  for (EdgeId e : testutil::shuffled_alive_edges(g, rng)) {
    g.delete_edge_by_id(e);
    t.notify_delete(e);
  }
  for (int v = 0; v < n; ++v) {
    CHECK(t.scans_of(v) <= (depth + 1) * indeg[v]);
  }
}

TEST_CASE("weighted decremental tree with weight increases") {
  Rng rng(29);
  for (int trial = 0; trial < 4; ++trial) {
    int n = 25;
    auto g = testutil::random_graph(n, 80, rng, UpdateMode::Decremental, 8);
    Weight depth = 60;
    EsTree t(g, 0, depth, Direction::Out);
    for (int step = 0; step < 60; ++step) {
      auto alive = testutil::alive_edges(g);
      if (alive.empty()) break;
      EdgeId e = alive[rng.below(alive.size())];
      if (rng.below(3) == 0 && g.edge(e).weight < 8) {
        g.increase_weight(g.edge(e).tail, g.edge(e).head, g.edge(e).weight + 1);
        t.notify_weight_increase(e);
      } else {
        g.delete_edge_by_id(e);
        t.notify_delete(e);
      }
      check_exact(g, t, 0, depth, Direction::Out);
    }
  }
}

TEST_CASE("incremental tree relaxes on insert") {
  DynamicDigraph g(3, UpdateMode::Incremental);
  g.add_initial_edge(0, 1, 1);
  g.add_initial_edge(1, 2, 1);
  EsTree t(g, 0, 10, Direction::Out);
  CHECK(t.estimate(2) == 2);
  EdgeId e = g.insert_edge(0, 2, 1);
  t.notify_insert(e);
  CHECK(t.estimate(2) == 1);
}

TEST_CASE("insert beyond the cap changes nothing") {
  DynamicDigraph g(4, UpdateMode::Incremental);
  g.add_initial_edge(0, 1, 1);
  EsTree t(g, 0, 1, Direction::Out);
  EdgeId e = g.insert_edge(2, 3, 1);  // unreachable component
  t.notify_insert(e);
  CHECK(t.estimate(3) == EsTree::kInf);
  EdgeId e2 = g.insert_edge(1, 2, 1);  // would land at depth 2 > cap
  t.notify_insert(e2);
  CHECK(t.estimate(2) == EsTree::kInf);
}

TEST_CASE("random insertion run stays exact") {
  Rng rng(31);
  for (int trial = 0; trial < 5; ++trial) {
    int n = 50;
    DynamicDigraph g(n, UpdateMode::Incremental);
    EsTree t(g, 0, n, Direction::Out);
    for (int step = 0; step < 160; ++step) {
      int u = rng.below_int(n), v = rng.below_int(n);
      if (u == v) continue;
      EdgeId e = g.insert_edge(u, v, 1);
      t.notify_insert(e);
      check_exact(g, t, 0, n, Direction::Out);
    }
  }
}

TEST_CASE("tree path has the estimate's weight, proportional cost") {
  Rng rng(37);
  auto g = testutil::random_graph(30, 120, rng, UpdateMode::Decremental, 4);
  EsTree t(g, 0, 100, Direction::Out);
  oracles::Snapshot snap(g);
  auto dist = oracles::dijkstra(snap, 0);
  for (int v = 0; v < 30; ++v) {
    if (t.estimate(v) == EsTree::kInf) {
      CHECK_THROWS_AS(t.path(v), Error);
      continue;
    }
    auto path = t.path(v);
    if (v == 0) CHECK(path.empty());
    Weight total = 0;
    VertexId at = 0;
    for (EdgeId e : path) {
      CHECK(g.edge(e).alive);
      CHECK(g.edge(e).tail == at);
      at = g.edge(e).head;
      total += g.edge(e).weight;
    }
    CHECK(at == v);
    CHECK(total == dist[v]);
  }
}

TEST_CASE("scaled levels: unweighted inputs stay exact") {
  Rng rng(41);
  for (int trial = 0; trial < 4; ++trial) {
    int n = 24;
    auto g = testutil::random_graph(n, 70, rng, UpdateMode::Decremental);
    ScaledSssp s(g, 0, 0.25);
    auto order = testutil::shuffled_alive_edges(g, rng);
    for (std::size_t i = 0; i < order.size(); ++i) {
      g.delete_edge_by_id(order[i]);
      s.notify_delete(order[i]);
      if (i % 5 != 0) continue;
      oracles::Snapshot snap(g);
      auto dist = oracles::bfs(snap, 0);
      for (int v = 0; v < n; ++v) {
        if (dist[v] == oracles::kUnreachable) {
          CHECK(std::isinf(s.distance(v)));
        } else {
          CHECK(s.distance(v) == doctest::Approx(static_cast<double>(dist[v])).epsilon(1e-12));
        }
      }
    }
  }
}

TEST_CASE("scaled wrapper covers a single huge weight within (1 + 6 eps)") {
  DynamicDigraph g(4, UpdateMode::Decremental, 1000000);
  g.add_initial_edge(0, 1, 1000000);
  ScaledSssp s(g, 0, 0.1);
  CHECK(s.distance(1) >= 1000000.0);
  CHECK(s.distance(1) <= 1.6 * 1000000.0);
  CHECK(std::isinf(s.distance(2)));
}

TEST_CASE("scaled wrapper keeps the band guarantee under weighted deletions") {
  Rng rng(43);
  int n = 20;
  auto g = testutil::random_graph(n, 60, rng, UpdateMode::Decremental, 50);
  ScaledSssp s(g, 0, 0.2);
  auto order = testutil::shuffled_alive_edges(g, rng);
  for (std::size_t i = 0; i < order.size(); ++i) {
    g.delete_edge_by_id(order[i]);
    s.notify_delete(order[i]);
    if (i % 7 != 0) continue;
    oracles::Snapshot snap(g);
    auto dist = oracles::dijkstra(snap, 0);
    for (int v = 0; v < n; ++v) {
      if (dist[v] == oracles::kUnreachable) {
        CHECK(std::isinf(s.distance(v)));
      } else {
        CHECK(s.distance(v) >= static_cast<double>(dist[v]) - 1e-9);
        CHECK(s.distance(v) <= (1.0 + 6.0 * 0.2) * static_cast<double>(dist[v]) + 1e-9);
      }
    }
  }
}
