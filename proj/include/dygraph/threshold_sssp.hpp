#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <vector>

#include "dygraph/ato.hpp"
#include "dygraph/bucket_queue.hpp"
#include "dygraph/graph.hpp"

namespace dygraph {

/// Lazy bucketed shortest-path structure for one distance band [delta/2,
/// delta). In-neighbors are grouped by order difference into exponentially
/// sized buckets; bucket j is rescanned only when the estimate hits a
/// multiple of its step, trading a bounded overshoot for fewer scans.
///
/// Dag mode runs directly on the vertices of an acyclic graph with a static
/// topological order. Ato mode runs on the contracted node graph of an
/// approximate topological order and follows its node splits.
class BucketedTree {
 public:
  static constexpr Weight kInf = std::numeric_limits<Weight>::max() / 4;

  // Acyclic graph with a static topological order (throws NotADag).
  BucketedTree(const DynamicDigraph& g, const std::vector<std::int64_t>& topo_order, VertexId root,
               Weight delta, double eps);
  // Over an approximate topological order; `quality` is the assumed path
  // quality bound q.
  BucketedTree(Ato& ato, VertexId root, Weight delta, double eps, double quality);

  Weight delta_max() const { return delta_max_; }
  Weight band_low() const { return delta_ / 2; }
  Weight band_high() const { return delta_; }

  // Dag mode: the deleted edge (graph already updated).
  void on_edge_deleted(EdgeId e);
  // Ato mode: consume pending partition changes, then process the deletion.
  void on_ato_deleted(EdgeId e);
  // Record-driven entry for tests; records must continue the consumed
  // generation sequence (throws InconsistentChangeRecord).
  void apply_changes(const std::vector<AtoChangeRecord>& records);

  Weight node_estimate(NodeId x) const;
  // Dag mode: the node estimate itself; Ato mode: node estimate plus the
  // order's diameter allowance.
  Weight vertex_estimate(VertexId v) const;

  int bucket_count() const { return bucket_count_; }
  std::int64_t bucket_scans(NodeId x, int j) const;
  std::int64_t total_scan_events() const { return total_scan_events_; }
  Weight scan_step(int j) const { return steps_[j]; }

  // Audit: no bucket entry may overstate its gap class.
  bool buckets_consistent() const;

 private:
  struct Selector {
    std::multiset<std::pair<Weight, EdgeId>> edges;
  };

  bool ato_mode() const { return ato_ != nullptr; }
  NodeId node_of(VertexId v) const;
  NodeId root_node() const { return node_of(root_); }
  std::int64_t order_of(NodeId x) const;
  std::int64_t gap(NodeId a, NodeId b) const;
  int bucket_of_gap(std::int64_t gap) const;
  Weight min_weight(NodeId x, NodeId y) const;

  void ensure_node(NodeId x);
  void register_edge(EdgeId e);
  void unregister_edge(EdgeId e);
  void set_bucket_entry(NodeId owner, NodeId member, int j);
  void drop_bucket_entry(NodeId owner, NodeId member);
  void refresh_bucket_entry(NodeId owner, NodeId member);

  void init_estimates();
  void pend(NodeId x);
  void raise_and_invalidate(NodeId x, Weight value);
  bool cert_valid(NodeId x) const;
  void settle();
  void process_record(const AtoChangeRecord& rec);

  const DynamicDigraph* g_;
  Ato* ato_ = nullptr;
  std::vector<std::int64_t> topo_;  // dag mode: per vertex
  VertexId root_;
  Weight delta_;
  double eps_;
  double quality_ = 1.0;
  Weight delta_max_;
  int bucket_count_;
  std::vector<Weight> steps_;

  std::vector<Weight> est_;
  std::vector<EdgeId> cert_;
  std::vector<char> pending_;
  BucketQueue queue_;

  // Buckets: per node, per class, the registered in-neighbor nodes.
  std::vector<std::vector<std::vector<NodeId>>> buckets_;
  std::map<std::pair<NodeId, NodeId>, int> bucket_index_;
  // Selectors for the contracted simple graph (ato mode only).
  std::map<std::pair<NodeId, NodeId>, Selector> selectors_;
  std::vector<std::pair<NodeId, NodeId>> edge_key_;
  // Dag mode: per (head, tail) the parallel edge ids.
  std::map<std::pair<VertexId, VertexId>, std::vector<EdgeId>> dag_pair_edges_;

  std::size_t change_offset_ = 0;
  std::uint64_t last_generation_ = 0;

  std::vector<std::vector<std::int64_t>> scan_counts_;
  std::vector<std::vector<Weight>> last_scan_value_;
  std::int64_t total_scan_events_ = 0;
};

/// Bank of Dag-mode instances with delta = 2^i; the minimum finite estimate
/// across instances covers every distance band.
class MultiScaleDag {
 public:
  MultiScaleDag(const DynamicDigraph& g, const std::vector<std::int64_t>& topo_order, VertexId root,
                double eps);
  void on_edge_deleted(EdgeId e) {
    for (auto& t : trees_) t->on_edge_deleted(e);
  }
  Weight distance(VertexId v) const {
    Weight best = BucketedTree::kInf;
    for (const auto& t : trees_) best = std::min(best, t->vertex_estimate(v));
    return best;
  }
  std::int64_t total_scan_events() const {
    std::int64_t total = 0;
    for (const auto& t : trees_) total += t->total_scan_events();
    return total;
  }
  int size() const { return static_cast<int>(trees_.size()); }
  BucketedTree& level(int i) { return *trees_[i]; }

 private:
  std::vector<std::unique_ptr<BucketedTree>> trees_;
};

}  // namespace dygraph
