#pragma once

#include <optional>
#include <vector>

#include "dygraph/graph.hpp"

namespace dygraph {
namespace oracles {

// Deliberately naive reference implementations. They rebuild their own
// adjacency from the edge list on every call and share no code with the
// dynamic structures they are used to check.

constexpr Weight kUnreachable = -1;

struct Snapshot {
  int n = 0;
  // (tail, head, weight) of alive edges only.
  std::vector<Edge> edges;

  Snapshot() = default;
  explicit Snapshot(const DynamicDigraph& g);
  Snapshot(const DynamicDigraph& g, const std::vector<VertexId>& subset);
  Snapshot reversed() const;
};

// SCC ids, 0..k-1, in reverse topological discovery order (Tarjan).
std::vector<int> scc_tarjan(const Snapshot& s);
// Independent second implementation (Kosaraju) for cross-checks.
std::vector<int> scc_kosaraju(const Snapshot& s);
// Groups vertices by SCC id; classes sorted by smallest member.
std::vector<std::vector<VertexId>> scc_classes(const std::vector<int>& ids);

// Hop distances (BFS).
std::vector<Weight> bfs(const Snapshot& s, VertexId r);
// Weighted distances.
std::vector<Weight> dijkstra(const Snapshot& s, VertexId r);
std::vector<Weight> bellman_ford(const Snapshot& s, VertexId r);

// S-distances: edges leaving S-vertices weigh 1, everything else 0.
std::vector<Weight> s_distance(const Snapshot& s, VertexId r, const std::vector<char>& in_s);
// dist(v, r, S) for every v: the S-vertices counted are those on the path
// excluding the target r, so the weight still sits on the original tail.
std::vector<Weight> s_distance_to(const Snapshot& s, VertexId r, const std::vector<char>& in_s);
// All-pairs S-distance by Floyd-Warshall on the 0/1 weighting (small n only).
std::vector<std::vector<Weight>> s_distance_all_pairs(const Snapshot& s,
                                                      const std::vector<char>& in_s);

// Weak diameter of X measured in the whole snapshot; kUnreachable if some
// pair is disconnected.
Weight weak_diameter(const Snapshot& s, const std::vector<VertexId>& x);

// Vertices reachable from r.
std::vector<char> reachable_set(const Snapshot& s, VertexId r);

// One shortest path r -> t as an edge index list into s.edges, or nullopt.
std::optional<std::vector<int>> shortest_path(const Snapshot& s, VertexId r, VertexId t);

// Topological order of a DAG; nullopt when the snapshot has a cycle.
std::optional<std::vector<VertexId>> topological_order(const Snapshot& s);

}  // namespace oracles
}  // namespace dygraph
