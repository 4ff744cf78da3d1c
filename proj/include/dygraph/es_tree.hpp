#pragma once

#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <vector>

#include "dygraph/bucket_queue.hpp"
#include "dygraph/graph.hpp"

namespace dygraph {

enum class Direction { Out, In };

/// Shortest-path tree from (Direction::Out) or to (Direction::In) a root,
/// maintained to a depth cap under one kind of update. Estimates above the
/// cap snap directly to kInf. Weights may be overridden per edge by an
/// external table (0 marks an edge as absent), which the multi-scale wrapper
/// uses for its rounded level graphs.
class EsTree {
 public:
  static constexpr Weight kInf = std::numeric_limits<Weight>::max() / 4;

  EsTree(const DynamicDigraph& g, VertexId root, Weight depth, Direction dir,
         const std::vector<VertexId>* scope = nullptr,
         const std::vector<Weight>* weight_table = nullptr);

  VertexId root() const { return root_; }
  Weight depth() const { return depth_; }
  bool in_scope(VertexId v) const { return scope_[v]; }

  Weight estimate(VertexId v) const { return scope_[v] ? est_[v] : kInf; }

  void notify_delete(EdgeId e);
  void notify_insert(EdgeId e);
  void notify_weight_increase(EdgeId e);

  // Edges of the root-to-v (Out) or v-to-root (In) tree path, in path order.
  std::vector<EdgeId> path(VertexId v) const;

  // Any in-scope vertex currently at kInf, if one exists.
  std::optional<VertexId> first_capped() const;

  std::int64_t total_scans() const { return total_scans_; }
  std::int64_t scans_of(VertexId v) const { return scans_[v]; }

 private:
  Weight wt(EdgeId e) const {
    if (weight_table_) return e < static_cast<EdgeId>(weight_table_->size()) ? (*weight_table_)[e] : 0;
    return g_->edge(e).weight;
  }
  VertexId pred_of(EdgeId e) const {
    const Edge& ed = g_->edge(e);
    return dir_ == Direction::Out ? ed.tail : ed.head;
  }
  VertexId self_of(EdgeId e) const {
    const Edge& ed = g_->edge(e);
    return dir_ == Direction::Out ? ed.head : ed.tail;
  }
  bool edge_usable(EdgeId e, VertexId self) const {
    const Edge& ed = g_->edge(e);
    if (!ed.alive) return false;
    VertexId other = ed.tail == self ? ed.head : ed.tail;
    return scope_[other] && other != self && wt(e) > 0;
  }

  void init_exact();
  void pend(VertexId v);
  void mark_capped(VertexId v);
  void raise_to(VertexId v, Weight value);
  bool cert_valid(VertexId v) const;
  void settle_decremental();
  void relax_incremental(VertexId from);

  const DynamicDigraph* g_;
  VertexId root_;
  Weight depth_;
  Direction dir_;
  bool incremental_;
  const std::vector<Weight>* weight_table_;

  std::vector<char> scope_;
  // Own copies of the adjacency (edge ids are stable; dead edges are skipped
  // at scan time so scan cursors survive deletions).
  std::vector<std::vector<EdgeId>> preds_, succs_;

  std::vector<Weight> est_;
  std::vector<EdgeId> cert_;
  std::vector<std::size_t> cursor_;
  std::vector<char> cursor_fresh_;
  std::vector<char> pending_;
  BucketQueue queue_;

  std::vector<VertexId> capped_;
  std::vector<char> capped_seen_;

  std::vector<std::int64_t> scans_;
  std::int64_t total_scans_ = 0;
};

/// (1 + 6*eps)-approximate single-source distances for weighted partially
/// dynamic graphs: one exact tree per weight scale over a rounded
/// level graph, answering with the minimum estimate across levels.
class ScaledSssp {
 public:
  ScaledSssp(const DynamicDigraph& g, VertexId root, double eps);

  void notify_delete(EdgeId e);
  void notify_insert(EdgeId e);
  void notify_weight_increase(EdgeId e);

  // Returns the estimate, or +infinity when unreachable in every level.
  double distance(VertexId v) const;
  int level_count() const { return static_cast<int>(levels_.size()); }

 private:
  struct Level {
    Weight scale = 1;  // 2^i
    // Per edge id; 0 = absent from this level. Heap-allocated so the tree's
    // weight-table pointer stays valid when the level vector grows.
    std::unique_ptr<std::vector<Weight>> units;
    std::unique_ptr<EsTree> tree;
  };
  Weight unit_weight(Weight w, Weight scale) const;
  void refresh_edge(Level& lv, EdgeId e, bool inserted);

  const DynamicDigraph* g_;
  VertexId root_;
  double eps_;
  std::vector<Level> levels_;
};

}  // namespace dygraph
