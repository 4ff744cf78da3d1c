#pragma once

#include <map>
#include <memory>
#include <optional>
#include <vector>

#include "dygraph/ges_tree.hpp"
#include "dygraph/graph.hpp"
#include "dygraph/partition.hpp"
#include "dygraph/rng.hpp"
#include "dygraph/separators.hpp"

namespace dygraph {

int default_hierarchy_depth(int n);

/// Level structure for one initially strongly connected component: separator
/// sets S_i grow monotonically, level graphs lose the edges incident to
/// S_{i+1}, and every SCC of every level graph carries a GES-tree around a
/// uniformly random center. The top partition answers SCC queries in O(1).
class Hierarchy {
 public:
  struct Stats {
    std::int64_t full_split_events = 0;
    std::int64_t full_split_all_small = 0;  // all parts <= 2/3 of the tree's initial size
    std::int64_t prune_events = 0;
    std::int64_t extra_levels = 0;
  };

  Hierarchy(DynamicDigraph& g, const std::vector<VertexId>& component, int delta, Rng rng);

  void on_edge_deleted(EdgeId e);

  NodeId top_node(VertexId v) const { return levels_.back().part->node_of(v); }
  bool same_scc(VertexId u, VertexId v) const { return top_node(u) == top_node(v); }

  int delta() const { return delta_; }
  int base_level_count() const { return base_levels_; }
  int level_count() const { return static_cast<int>(levels_.size()) - 1; }
  const Partition& partition_at(int i) const { return *levels_[i].part; }
  // |S_i| as a vertex count.
  int s_size(int i) const;
  // Highest i with v in S_i (0 for plain members).
  int separator_level(VertexId v) const { return lvl_[v]; }
  const std::vector<VertexId>& component() const { return comp_; }
  const Stats& stats() const { return stats_; }
  // True when no GES reports a violating vertex (used by tests).
  bool at_rest();
  std::int64_t ges_scan_total() const;
  std::int64_t ges_indegree_total() const;
  std::int64_t ges_split_work_total() const;

 private:
  struct Level {
    std::unique_ptr<Partition> part;
    // GES per SCC group, keyed by the owning node id one level up.
    std::map<NodeId, std::unique_ptr<GesTree>> groups;
  };

  separators::NodeContext context(int i) const;
  std::vector<char> s_flags(int i, const std::vector<NodeId>& nodes) const;
  bool build_next_level(int i);
  void build_group(int i, const std::vector<NodeId>& nodes, NodeId key);
  void process_level(int i, EdgeId deleted);
  void handle_violation(int i, NodeId gid, VertexId witness);
  void ensure_level(int i);
  void propagate_split(int i, NodeId gid, const std::vector<std::vector<NodeId>>& new_parts,
                       const std::vector<NodeId>& moved_to_s, GesTree* surviving);

  DynamicDigraph* g_;
  std::vector<VertexId> comp_;
  int delta_;
  int base_levels_;  // floor(lg n_c) + 1
  Rng rng_;
  std::vector<int> lvl_;  // per vertex: max i with v in S_i; non-members: INT_MAX
  std::vector<Level> levels_;
  Stats stats_;
  std::int64_t retired_scans_ = 0;
  std::int64_t retired_indeg_ = 0;
  std::int64_t retired_split_work_ = 0;
};

/// Decremental SCC over an arbitrary initial graph: one Hierarchy per initial
/// SCC; cross-component edges can never join components under deletions.
class DecrementalScc {
 public:
  DecrementalScc(DynamicDigraph& g, std::optional<int> delta, std::uint64_t seed);

  void delete_edge(VertexId u, VertexId v);
  void delete_edge_by_id(EdgeId e);
  bool same_scc(VertexId u, VertexId v) const;

  int component_count() const { return static_cast<int>(hiers_.size()); }
  const Hierarchy& hierarchy(int c) const { return *hiers_[c]; }
  Hierarchy::Stats merged_stats() const;

 private:
  DynamicDigraph* g_;
  std::vector<int> comp_of_;
  std::vector<std::unique_ptr<Hierarchy>> hiers_;
};

/// Single-source reachability through the SCC structure on the graph with an
/// extra edge from every vertex back to the root.
class SsrReachability {
 public:
  SsrReachability(const DynamicDigraph& g, VertexId root, std::optional<int> delta,
                  std::uint64_t seed);

  // Deletes an original edge (u, v); the augmentation edges are not
  // deletable.
  void delete_edge(VertexId u, VertexId v);
  bool reachable(VertexId v) const { return scc_->same_scc(root_, v); }
  const DecrementalScc& scc() const { return *scc_; }

 private:
  VertexId root_;
  int original_slots_;
  std::unique_ptr<DynamicDigraph> aug_;
  std::unique_ptr<DecrementalScc> scc_;
};

}  // namespace dygraph
