#pragma once

#include <optional>
#include <vector>

#include "dygraph/ges_tree.hpp"
#include "dygraph/graph.hpp"
#include "dygraph/partition.hpp"
#include "dygraph/rng.hpp"

namespace dygraph {
namespace separators {

/// Node-level context: separator procedures run either on plain vertex
/// graphs (singleton partition) or on contracted level graphs.
struct NodeContext {
  const DynamicDigraph* g = nullptr;
  const Partition* part = nullptr;
  LevelFilter filter;
};

struct SeparatorResult {
  std::vector<NodeId> s_sep;
  std::vector<NodeId> v_sep;
  std::int64_t explored_edges = 0;
  bool no_cut = false;   // whole reachable set explored within d layers
  bool flagged = false;  // no admissible layer within the d-layer cap
};

// Layered S-distance separator from node r: grows layers, stops at the first
// layer small against both sides. `reversed` gives the in-direction variant.
SeparatorResult node_sep(const NodeContext& ctx, const std::vector<char>& active,
                         const std::vector<char>& s_node, NodeId r, int d, bool reversed);

struct SplitResult {
  std::vector<NodeId> s_split;
  std::vector<std::vector<NodeId>> parts;
};

// Decomposes the working node set so every part has internal pairwise
// S-distance <= d once E(s_split) is removed, and parts are exactly the
// strongly connected pieces left behind.
SplitResult split(const NodeContext& ctx, const std::vector<NodeId>& working,
                  const std::vector<char>& s_node, int d);

// ---- vertex-level wrappers (singleton partition) ----

struct VertexSeparatorResult {
  std::vector<VertexId> s_sep;
  std::vector<VertexId> v_sep;
  std::int64_t explored_edges = 0;
  bool no_cut = false;
  bool flagged = false;
};

VertexSeparatorResult out_sep(VertexId r, const DynamicDigraph& g, const std::vector<VertexId>& s,
                              int d);
VertexSeparatorResult in_sep(VertexId r, const DynamicDigraph& g, const std::vector<VertexId>& s,
                             int d);

struct VertexSplitResult {
  std::vector<VertexId> s_split;
  std::vector<std::vector<VertexId>> parts;
};

VertexSplitResult split(const DynamicDigraph& g, const std::vector<VertexId>& s, int d);

// ---- randomized exponential-ball edge separator ----

struct EdgeSeparatorResult {
  std::vector<EdgeId> e_sep;
  std::vector<VertexId> v_sep;
  bool failed = false;
  double radius = 0.0;
};

// Scope limits the vertex set (empty = all); edge_enabled (nullable) limits
// the edge set on top of aliveness.
EdgeSeparatorResult out_separator(const DynamicDigraph& g, const std::vector<VertexId>& scope,
                                  const std::vector<char>* edge_enabled, VertexId r, double d,
                                  double zeta, Rng& rng, bool reversed = false);
// Deterministic core with an explicit ball radius (the sampled exponential).
EdgeSeparatorResult out_separator_with_radius(const DynamicDigraph& g,
                                              const std::vector<VertexId>& scope,
                                              const std::vector<char>* edge_enabled, VertexId r,
                                              double radius, bool reversed = false);

// Cuts edges until every strongly connected component of the remaining graph
// has pairwise distances <= d. nullopt = Fail (an inner ball sample failed
// twice). A failed inner sample is retried once before propagating.
std::optional<std::vector<EdgeId>> partition_low_diameter(const DynamicDigraph& g,
                                                          const std::vector<VertexId>& scope,
                                                          const std::vector<char>* edge_enabled,
                                                          double d, double zeta, Rng& rng);

}  // namespace separators
}  // namespace dygraph
