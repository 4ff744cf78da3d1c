#pragma once

#include <cstdint>
#include <vector>

#include "dygraph/errors.hpp"
#include "dygraph/graph.hpp"

namespace dygraph {

using NodeId = int;

/// Refinement-only partition of [0, n). Every mutation is a split; the
/// largest part inherits the old node id (ties broken by smallest contained
/// vertex), so node ids never die and downstream handles stay valid.
class Partition {
 public:
  explicit Partition(int n) : node_of_(n), members_(n) {
    for (int v = 0; v < n; ++v) {
      node_of_[v] = v;
      members_[v] = {v};
    }
  }

  // Starts from the given groups; ungrouped vertices become singletons.
  Partition(int n, const std::vector<std::vector<VertexId>>& groups);

  int universe_size() const { return static_cast<int>(node_of_.size()); }
  int node_count() const { return static_cast<int>(members_.size()); }
  std::uint64_t generation() const { return generation_; }

  NodeId node_of(VertexId v) const { return node_of_[v]; }
  const std::vector<VertexId>& members(NodeId x) const { return members_[x]; }
  int size_of(NodeId x) const { return static_cast<int>(members_[x].size()); }

  // Splits `node` into `parts` (>= 2 disjoint sets covering the node).
  // Returns node ids aligned with `parts`.
  std::vector<NodeId> split_node(NodeId node, const std::vector<std::vector<VertexId>>& parts);

 private:
  std::vector<NodeId> node_of_;
  std::vector<std::vector<VertexId>> members_;
  std::uint64_t generation_ = 0;
};

// FLATTEN: union of the vertex sets in a family of node-sets (sorted).
std::vector<VertexId> flatten(const std::vector<std::vector<VertexId>>& xs);

}  // namespace dygraph
