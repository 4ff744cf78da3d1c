#include "dygraph/partition.hpp"

#include <algorithm>

namespace dygraph {

Partition::Partition(int n, const std::vector<std::vector<VertexId>>& groups) : node_of_(n, -1) {
  for (const auto& g : groups) {
    if (g.empty()) fail(Err::BadSplit, "empty group");
    NodeId id = static_cast<NodeId>(members_.size());
    for (VertexId v : g) {
      if (v < 0 || v >= n || node_of_[v] != -1) fail(Err::BadSplit, "groups must be disjoint subsets");
      node_of_[v] = id;
    }
    members_.push_back(g);
    std::sort(members_.back().begin(), members_.back().end());
  }
  for (int v = 0; v < n; ++v) {
    if (node_of_[v] == -1) {
      node_of_[v] = static_cast<NodeId>(members_.size());
      members_.push_back({v});
    }
  }
}

std::vector<NodeId> Partition::split_node(NodeId node,
                                          const std::vector<std::vector<VertexId>>& parts) {
  if (node < 0 || node >= node_count()) fail(Err::BadSplit, "no such node");
  if (parts.size() < 2) fail(Err::BadSplit, "need at least two parts");
  std::size_t total = 0;
  for (const auto& p : parts) {
    if (p.empty()) fail(Err::BadSplit, "empty part");
    total += p.size();
    for (VertexId v : p) {
      if (v < 0 || v >= universe_size() || node_of_[v] != node) {
        fail(Err::BadSplit, "part not contained in node");
      }
    }
  }
  if (total != members_[node].size()) fail(Err::BadSplit, "parts do not cover the node");
  // Disjointness follows from the cover + containment checks above.

  // Largest part inherits the old id; ties go to the smallest vertex.
  std::size_t inherit = 0;
  for (std::size_t i = 1; i < parts.size(); ++i) {
    std::size_t a = parts[i].size(), b = parts[inherit].size();
    VertexId va = *std::min_element(parts[i].begin(), parts[i].end());
    VertexId vb = *std::min_element(parts[inherit].begin(), parts[inherit].end());
    if (a > b || (a == b && va < vb)) inherit = i;
  }

  std::vector<NodeId> ids(parts.size());
  for (std::size_t i = 0; i < parts.size(); ++i) {
    NodeId id;
    if (i == inherit) {
      id = node;
    } else {
      id = static_cast<NodeId>(members_.size());
      members_.emplace_back();
    }
    ids[i] = id;
    members_[id] = parts[i];
    std::sort(members_[id].begin(), members_[id].end());
    for (VertexId v : parts[i]) node_of_[v] = id;
  }
  ++generation_;
  return ids;
}

std::vector<VertexId> flatten(const std::vector<std::vector<VertexId>>& xs) {
  std::vector<VertexId> out;
  for (const auto& x : xs) out.insert(out.end(), x.begin(), x.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace dygraph
