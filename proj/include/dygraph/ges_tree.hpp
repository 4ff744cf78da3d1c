#pragma once

#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <vector>

#include "dygraph/bucket_queue.hpp"
#include "dygraph/graph.hpp"
#include "dygraph/partition.hpp"

namespace dygraph {

/// How a level graph filters edges: an edge is visible when it is alive and
/// both endpoints have separator level <= level. A null lvl vector means no
/// filtering (standalone use).
struct LevelFilter {
  const std::vector<int>* vertex_level = nullptr;
  int level = 0;

  bool visible(const Edge& e) const {
    if (!e.alive) return false;
    if (!vertex_level) return true;
    return (*vertex_level)[e.tail] <= level && (*vertex_level)[e.head] <= level;
  }
};

/// Generalized ES-tree over a node partition: maintains S-distances from and
/// to a root node up to a depth cap, where S is a feedback set of
/// single-vertex nodes and edges leaving S-nodes weigh 1, all others 0.
/// Supports edge deletion, node removal, node splits and feedback-set
/// augmentation.
class GesTree {
 public:
  static constexpr Weight kInf = std::numeric_limits<Weight>::max() / 4;

  // `nodes`: the node ids of the induced subgraph this tree spans.
  // `s_nodes`: subset of `nodes` forming the feedback set (must be
  // single-vertex nodes).
  GesTree(const DynamicDigraph& g, const Partition& part, LevelFilter filter,
          const std::vector<NodeId>& nodes, const std::vector<NodeId>& s_nodes, VertexId root,
          Weight depth);

  VertexId root_vertex() const { return root_vertex_; }
  NodeId root_node() const { return part_->node_of(root_vertex_); }
  Weight depth() const { return depth_; }

  bool node_active(NodeId x) const {
    return x < static_cast<NodeId>(active_.size()) && active_[x];
  }
  bool node_in_s(NodeId x) const { return x < static_cast<NodeId>(s_node_.size()) && s_node_[x]; }

  // S-distance estimates; kInf above the depth cap or for removed nodes.
  Weight distance_from_root(NodeId x) const { return est(kOut, x); }
  Weight distance_to_root(NodeId x) const { return est(kIn, x); }

  // Some vertex whose in- or out-S-distance exceeds the cap, if any (O(1)
  // amortized). Removed nodes are never reported.
  std::optional<VertexId> get_unreachable_vertex();

  void notify_edge_deleted(EdgeId e);
  // Removes the given nodes and their incident edges from this tree.
  void delete_nodes(const std::vector<NodeId>& nodes);

  // Standalone split of `part_x` out of node `y` (partition updated here).
  // Precondition: 0-weight edges between the two sides go one way only.
  void split_node(NodeId y, const std::vector<VertexId>& part_x);

  // Adds singleton nodes to the feedback set; their out-edges now weigh 1.
  void augment(const std::vector<NodeId>& new_s);

  // Hierarchy entry point: the owning partition has just split `old_node`
  // into `new_ids`; afterwards `augmented` join S. Settling is deferred to
  // the end of the batch so transient 0-weight cycles are never observed.
  void apply_split_batch(NodeId old_node, const std::vector<NodeId>& new_ids,
                         const std::vector<NodeId>& augmented);

  const std::vector<NodeId>& active_nodes() const { return node_list_; }
  int active_count() const { return active_count_; }
  // Number of underlying vertices this tree was initialized on.
  int init_flatten_size() const { return init_flatten_size_; }

  std::int64_t total_scans() const { return total_scans_; }
  std::int64_t split_edge_work() const { return split_edge_work_; }
  std::int64_t indegree_sum() const { return indeg_sum_; }

  // Debug: true when the 0-weight subgraph among active nodes is acyclic.
  bool feedback_property_holds() const;

  static bool audit_mode;

 private:
  static constexpr int kOut = 0;
  static constexpr int kIn = 1;

  struct DirState {
    std::vector<Weight> est;
    std::vector<EdgeId> cert;
    std::vector<std::size_t> cursor;
    std::vector<char> cursor_fresh;
    std::vector<char> pending;
    BucketQueue queue;
  };

  Weight est(int dir, NodeId x) const {
    if (!node_active(x)) return kInf;
    return dirs_[dir].est[x];
  }
  Weight edge_weight(int dir, NodeId from) const {
    // Out direction: weight keyed by the tail node; In direction we walk
    // reversed edges, and the weight is keyed by the node the path leaves,
    // which is again the original tail.
    (void)dir;
    return s_node_[from] ? 1 : 0;
  }
  bool visible(EdgeId e) const { return filter_.visible(g_->edge(e)); }

  void ensure_size(NodeId x);
  void pend(int dir, NodeId x);
  void mark_unreachable_candidate(NodeId x);
  void raise_to(int dir, NodeId x, Weight value);
  bool cert_valid(int dir, NodeId x) const;
  void repair(int dir, NodeId x);
  void settle();
  void init_direction(int dir);
  void detach_incident(NodeId x);
  void seed_parts(NodeId old_node, const std::vector<NodeId>& new_ids);
  void apply_augment(const std::vector<NodeId>& new_s);

  const DynamicDigraph* g_;
  const Partition* part_;
  std::unique_ptr<Partition> owned_part_;
  LevelFilter filter_;
  VertexId root_vertex_;
  Weight depth_;

  // Stable per-vertex adjacency copies (edge ids never move, dead edges are
  // skipped at scan time), so repair cursors survive deletions.
  std::vector<std::vector<EdgeId>> vin_, vout_;

  std::vector<char> active_;
  std::vector<char> s_node_;
  std::vector<NodeId> node_list_;
  int active_count_ = 0;
  int init_flatten_size_ = 0;

  DirState dirs_[2];
  std::vector<NodeId> unreachable_;
  std::vector<char> unreachable_seen_;
  std::size_t unreachable_head_ = 0;

  std::int64_t total_scans_ = 0;
  std::int64_t split_edge_work_ = 0;
  std::int64_t indeg_sum_ = 0;

 public:
  // Standalone construction that owns its partition (module-level API).
  static std::unique_ptr<GesTree> standalone(const DynamicDigraph& g,
                                             const std::vector<std::vector<VertexId>>& node_sets,
                                             VertexId root,
                                             const std::vector<std::vector<VertexId>>& s_sets,
                                             Weight depth);
  Partition* owned_partition() { return owned_part_.get(); }
};

}  // namespace dygraph
