#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <set>
#include <sstream>

#include "doctest.h"
#include "dygraph/graph.hpp"
#include "dygraph/partition.hpp"
#include "test_util.hpp"

using namespace dygraph;

namespace {

// Multiset of alive (tail, head, weight) triples.
std::multiset<std::tuple<int, int, Weight>> edge_multiset(const DynamicDigraph& g) {
  std::multiset<std::tuple<int, int, Weight>> out;
  for (EdgeId e = 0; e < g.edge_slot_count(); ++e) {
    if (g.edge(e).alive) out.insert({g.edge(e).tail, g.edge(e).head, g.edge(e).weight});
  }
  return out;
}

void check_adjacency_mirror(const DynamicDigraph& g) {
  for (int v = 0; v < g.vertex_count(); ++v) {
    for (EdgeId e : g.out_edges(v)) {
      REQUIRE(g.edge(e).alive);
      REQUIRE(g.edge(e).tail == v);
      const auto& in = g.in_edges(g.edge(e).head);
      REQUIRE(std::count(in.begin(), in.end(), e) == 1);
    }
    for (EdgeId e : g.in_edges(v)) {
      REQUIRE(g.edge(e).alive);
      REQUIRE(g.edge(e).head == v);
      const auto& out = g.out_edges(g.edge(e).tail);
      REQUIRE(std::count(out.begin(), out.end(), e) == 1);
    }
  }
}

}  // namespace

TEST_CASE("delete removes the only out-edge") {
  auto g = testutil::path_graph(3);
  g.delete_edge(1, 2);
  CHECK(g.out_edges(1).empty());
  CHECK(g.in_edges(2).empty());
  CHECK(g.stage() == 1);
}

TEST_CASE("double delete raises NoSuchEdge") {
  auto g = testutil::path_graph(2);
  g.delete_edge(0, 1);
  CHECK_THROWS_AS(g.delete_edge(0, 1), Error);
  try {
    g.delete_edge(0, 1);
  } catch (const Error& e) {
    CHECK(e.code() == Err::NoSuchEdge);
  }
}

TEST_CASE("insert into empty two-vertex graph") {
  DynamicDigraph g(2, UpdateMode::Incremental);
  g.insert_edge(0, 1, 1);
  CHECK(g.out_edges(0).size() == 1);
  CHECK(g.edge(g.out_edges(0)[0]).head == 1);
}

TEST_CASE("parallel edges are distinct") {
  DynamicDigraph g(2, UpdateMode::Incremental);
  g.insert_edge(0, 1, 1);
  g.insert_edge(0, 1, 1);
  CHECK(g.out_edges(0).size() == 2);
  CHECK(g.alive_edge_count() == 2);
}

TEST_CASE("mode violations") {
  DynamicDigraph dec(2, UpdateMode::Decremental);
  dec.add_initial_edge(0, 1, 1);
  CHECK_THROWS_AS(dec.insert_edge(0, 1, 1), Error);
  DynamicDigraph inc(2, UpdateMode::Incremental);
  inc.insert_edge(0, 1, 1);
  CHECK_THROWS_AS(inc.delete_edge(0, 1), Error);
}

TEST_CASE("weight cap enforced") {
  DynamicDigraph g(2, UpdateMode::Incremental, 10);
  CHECK_THROWS_AS(g.insert_edge(0, 1, 11), Error);
  CHECK_THROWS_AS(g.insert_edge(0, 1, 0), Error);
}

TEST_CASE("inserting a path matches the directly built graph") {
  int n = 12;
  DynamicDigraph inc(n, UpdateMode::Incremental);
  for (int v = 0; v + 1 < n; ++v) inc.insert_edge(v, v + 1, 1);
  auto direct = testutil::path_graph(n);
  CHECK(edge_multiset(inc) == edge_multiset(direct));
}

TEST_CASE("delete all edges in random order, replay the log") {
  Rng rng(42);
  for (int trial = 0; trial < 20; ++trial) {
    int n = 4 + rng.below_int(12);
    int m = rng.below_int(3 * n);
    auto g = testutil::random_graph(n, m, rng, UpdateMode::Decremental);
    DynamicDigraph initial = g;  // value copy of the starting state

    auto order = testutil::shuffled_alive_edges(g, rng);
    std::uint64_t expected_stage = 0;
    for (EdgeId e : order) {
      g.delete_edge_by_id(e);
      ++expected_stage;
      check_adjacency_mirror(g);
    }
    CHECK(g.stage() == expected_stage);
    CHECK(g.alive_edge_count() == 0);

    // Replay from the initial graph reproduces the live graph.
    DynamicDigraph replay = initial;
    for (const UpdateRecord& r : g.log()) {
      switch (r.kind) {
        case UpdateRecord::Kind::DeleteEdge:
          replay.delete_edge(r.u, r.v);
          break;
        case UpdateRecord::Kind::InsertEdge:
          replay.insert_edge(r.u, r.v, r.w);
          break;
        case UpdateRecord::Kind::IncreaseWeight:
          replay.increase_weight(r.u, r.v, r.w);
          break;
      }
    }
    CHECK(edge_multiset(replay) == edge_multiset(g));
  }
}

TEST_CASE("weight increase logs natively and keeps the edge id") {
  DynamicDigraph g(3, UpdateMode::Decremental, 100);
  EdgeId e = g.add_initial_edge(0, 1, 5);
  g.increase_weight(0, 1, 9);
  CHECK(g.edge(e).weight == 9);
  REQUIRE(g.log().size() == 1);
  CHECK(g.log()[0].kind == UpdateRecord::Kind::IncreaseWeight);
  CHECK_THROWS_AS(g.increase_weight(0, 1, 3), Error);
}

TEST_CASE("flatten") {
  CHECK(flatten({{0}, {1, 2}}) == std::vector<VertexId>{0, 1, 2});
  CHECK(flatten({}) == std::vector<VertexId>{});
  CHECK(flatten({{3}, {1}, {2}, {0}}) == std::vector<VertexId>{0, 1, 2, 3});
}

TEST_CASE("split keeps the old id on the largest part") {
  Partition p(3, {{0, 1, 2}});
  NodeId node = p.node_of(0);
  auto ids = p.split_node(node, {{0, 1}, {2}});
  CHECK(ids[0] == node);
  CHECK(p.node_of(2) != node);
  CHECK(p.generation() == 1);
}

TEST_CASE("three-way singleton split breaks ties by smallest vertex") {
  Partition p(3, {{0, 1, 2}});
  NodeId node = p.node_of(0);
  auto ids = p.split_node(node, {{2}, {0}, {1}});
  CHECK(ids[1] == node);  // {0} inherits
  CHECK(p.node_of(0) == node);
}

TEST_CASE("bad splits rejected") {
  Partition p(4, {{0, 1, 2, 3}});
  NodeId node = p.node_of(0);
  CHECK_THROWS_AS(p.split_node(node, {{0, 1}}), Error);            // one part
  CHECK_THROWS_AS(p.split_node(node, {{0, 1}, {2}}), Error);       // not covering
  CHECK_THROWS_AS(p.split_node(node, {{0, 1}, {1, 2, 3}}), Error); // not contained/disjoint
}

TEST_CASE("random nested splits keep every vertex in exactly one node") {
  Rng rng(7);
  int n = 40;
  CHECK_THROWS_AS(Partition(n, {std::vector<VertexId>{}}), Error);

  Partition part(n, {[&] {
    std::vector<VertexId> all(n);
    for (int v = 0; v < n; ++v) all[v] = v;
    return all;
  }()});
  std::vector<std::vector<NodeId>> history;
  for (int step = 0; step < 100; ++step) {
    // Pick a splittable node.
    std::vector<NodeId> big;
    std::set<NodeId> seen;
    for (int v = 0; v < n; ++v) {
      NodeId x = part.node_of(v);
      if (!seen.count(x) && part.size_of(x) >= 2) {
        big.push_back(x);
        seen.insert(x);
      }
    }
    if (big.empty()) break;
    NodeId x = big[rng.below(big.size())];
    auto mem = part.members(x);
    std::size_t cut = 1 + rng.below(mem.size() - 1);
    std::vector<VertexId> a(mem.begin(), mem.begin() + cut), b(mem.begin() + cut, mem.end());
    std::vector<NodeId> before(n);
    for (int v = 0; v < n; ++v) before[v] = part.node_of(v);
    history.push_back(before);
    part.split_node(x, {a, b});

    // Exactly-one-node membership.
    for (int v = 0; v < n; ++v) {
      NodeId node = part.node_of(v);
      const auto& ms = part.members(node);
      CHECK(std::count(ms.begin(), ms.end(), v) == 1);
    }
    // Refinement against every earlier generation.
    for (int v = 0; v < n; ++v) {
      for (int w = 0; w < n; ++w) {
        if (part.node_of(v) == part.node_of(w)) CHECK(before[v] == before[w]);
      }
    }
  }
}

TEST_CASE("induced views") {
  Rng rng(9);
  auto g = testutil::random_graph(20, 60, rng, UpdateMode::Decremental);
  std::vector<VertexId> all(20);
  for (int v = 0; v < 20; ++v) all[v] = v;
  InducedView whole(g, all);
  CHECK(whole.edges().size() == static_cast<std::size_t>(g.alive_edge_count()));

  // Random subset against a brute filter.
  std::vector<VertexId> sub;
  for (int v = 0; v < 20; ++v) {
    if (rng.below(2)) sub.push_back(v);
  }
  InducedView view(g, sub);
  std::set<EdgeId> brute;
  std::set<VertexId> in_sub(sub.begin(), sub.end());
  for (EdgeId e = 0; e < g.edge_slot_count(); ++e) {
    if (g.edge(e).alive && in_sub.count(g.edge(e).tail) && in_sub.count(g.edge(e).head)) {
      brute.insert(e);
    }
  }
  auto ve = view.edges();
  CHECK(std::set<EdgeId>(ve.begin(), ve.end()) == brute);

  // Deletions on the parent propagate.
  if (!ve.empty()) {
    g.delete_edge_by_id(ve.front());
    CHECK_FALSE(view.edge_visible(ve.front()));
  }
}

TEST_CASE("single-vertex view sees only self-loops") {
  DynamicDigraph g(3, UpdateMode::Mixed);
  g.add_initial_edge(0, 1, 1);
  g.add_initial_edge(1, 1, 1);
  g.add_initial_edge(1, 2, 1);
  InducedView view(g, {1});
  auto edges = view.edges();
  REQUIRE(edges.size() == 1);
  CHECK(g.edge(edges[0]).tail == 1);
  CHECK(g.edge(edges[0]).head == 1);
}

TEST_CASE("graph and update files round trip byte-for-byte") {
  GraphFile gf;
  gf.n = 4;
  gf.edges = {{0, 1, 1, true}, {1, 2, 3, true}, {2, 0, 2, true}};
  std::ostringstream out;
  write_graph_file(out, gf);
  std::istringstream in(out.str());
  GraphFile back = read_graph_file(in);
  std::ostringstream out2;
  write_graph_file(out2, back);
  CHECK(out.str() == out2.str());

  std::vector<UpdateRecord> ups = {{UpdateRecord::Kind::DeleteEdge, 0, 1, 0},
                                   {UpdateRecord::Kind::InsertEdge, 1, 2, 5},
                                   {UpdateRecord::Kind::IncreaseWeight, 2, 0, 7}};
  std::ostringstream uo;
  write_update_file(uo, ups);
  std::istringstream ui(uo.str());
  auto back_ups = read_update_file(ui);
  std::ostringstream uo2;
  write_update_file(uo2, back_ups);
  CHECK(uo.str() == uo2.str());
}
