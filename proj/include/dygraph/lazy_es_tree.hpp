#pragma once

#include <cstdint>
#include <deque>
#include <memory>
#include <string>
#include <vector>

#include "dygraph/es_tree.hpp"
#include "dygraph/graph.hpp"

namespace dygraph {

/// Incremental lazy shortest-path tree for one distance band [tau, 2*tau).
/// Every out-neighborhood is cached at (possibly stale) estimate positions;
/// a vertex of heaviness h rescans its forward neighborhood only when its
/// estimate crosses a multiple of 2^h, and the Cache/Expire bookkeeping
/// keeps the staleness within the invariant bounds.
///
/// The structure owns its edge list so callers can feed it rescaled weights;
/// estimates live in [0, cap], with cap + 1 standing for "infinite".
class LazyEsTree {
 public:
  LazyEsTree(int n, VertexId root, Weight tau, double eps, Weight cap, bool weighted);

  // Returns the internal edge id.
  int insert_edge(VertexId u, VertexId v, Weight w);

  Weight estimate(VertexId v) const { return dist_[v]; }
  Weight inf_value() const { return cap_ + 1; }
  Weight tau() const { return tau_; }
  int heaviness(VertexId v) const { return h_[v]; }

  // Certificate walk from the root; stale certificates are tightened through
  // the regular decrement machinery, so the returned weight equals the
  // estimate. Internal edge ids.
  std::vector<int> path_edges(VertexId v);
  VertexId edge_tail(int e) const { return edges_[e].u; }
  VertexId edge_head(int e) const { return edges_[e].v; }
  Weight edge_weight(int e) const { return edges_[e].w; }

  // Structure audit; returns false and a reason when an invariant is broken.
  bool audit(std::string* why) const;

  std::int64_t scan_count(VertexId v, int i) const { return iscans_[v][i]; }
  int level_count() const { return hmax_ + 1; }
  std::int64_t heaviness_changes() const { return heaviness_changes_; }
  std::int64_t scan_work() const { return scan_work_; }

 private:
  struct LEdge {
    VertexId u, v;
    Weight w;
  };

  Weight cache_index(VertexId u, int i) const {
    Weight p2 = Weight{1} << i;
    Weight d = dist_[u] - 1;
    if (d < 0) return 0;
    return (d / p2) * p2;
  }
  Weight cache_index(VertexId u) const { return cache_index(u, h_[u]); }
  int weight_class(Weight w) const;
  double thr(int i, bool high) const;

  // Cache list ops (descending position order per owner; positions only
  // decrease over time).
  void cache_insert(int e, Weight pos);
  void cache_move_down(int e, Weight pos);
  // Expire registration sync for one edge.
  void sync_expire(int e);
  void refresh_position(int e);

  // Window count of entries with position in [cache_index(u, 2^i), cap]
  // whose edge weight is < 2^i (weighted mode) or arbitrary (unweighted).
  std::int64_t window_count(VertexId u, int i) const;
  int arg_heaviness(VertexId u, bool high, int limit) const;

  void fen_add(VertexId u, int cls, Weight slot, int delta);
  std::int64_t fen_suffix(VertexId u, int cls, Weight slot) const;

  void push_h(int e);
  void drain();
  void decrement(int e);
  void increase_heaviness(VertexId u);
  void decrease_heaviness(VertexId u);
  void scan_fn(VertexId u, bool into_h, int count_as);

  int n_;
  VertexId root_;
  Weight tau_;
  double eps_;
  Weight cap_;
  bool weighted_;
  int hmax_;
  double logn_;

  std::vector<LEdge> edges_;
  std::vector<std::vector<int>> out_;
  std::vector<Weight> dist_;
  std::vector<int> h_;
  std::vector<int> cert_;

  // Cache entries, one per edge, linked in descending-position order.
  std::vector<Weight> cpos_;
  std::vector<int> cnext_, cprev_;
  std::vector<int> chead_;
  // Expire entries, one per edge, linked per (head vertex, slot).
  std::vector<Weight> xslot_;
  std::vector<int> xnext_, xprev_;
  std::vector<std::vector<int>> xhead_;
  // Per (vertex, weight class): Fenwick over slots 0..cap of entry counts.
  std::vector<std::vector<std::unique_ptr<std::vector<std::int32_t>>>> fen_;

  std::deque<int> hq_;
  std::vector<char> in_h_;

  std::vector<std::vector<std::int64_t>> iscans_;
  std::int64_t heaviness_changes_ = 0;
  std::int64_t scan_work_ = 0;
};

/// Bank of lazy trees, tau = 2^i, answering with the minimum estimate.
class LazyBank {
 public:
  LazyBank(int n, VertexId root, double eps);

  void insert_edge(VertexId u, VertexId v);
  Weight distance(VertexId v) const;
  std::vector<std::pair<VertexId, VertexId>> path(VertexId v);  // (tail, head) per edge
  int size() const { return static_cast<int>(trees_.size()); }
  LazyEsTree& level(int i) { return *trees_[i]; }
  std::int64_t scan_work() const {
    std::int64_t total = 0;
    for (const auto& t : trees_) total += t->scan_work();
    return total;
  }
  bool audit(std::string* why) const;

 private:
  int n_;
  VertexId root_;
  std::vector<std::unique_ptr<LazyEsTree>> trees_;
};

/// Two-state (light/heavy) lazy tree paired with a classic ES-tree for short
/// distances; an independent second implementation used for differential
/// testing against the banked structure.
class WarmupSssp {
 public:
  WarmupSssp(DynamicDigraph& g, VertexId root, double eps);

  void on_insert(EdgeId e);
  Weight distance(VertexId v) const;
  bool audit(std::string* why) const;
  Weight heavy_threshold() const { return gamma_; }

 private:
  Weight window_low(VertexId u) const { return dist_[u] + 2; }
  std::int64_t fn_count(VertexId u) const;
  void refresh_member(VertexId v);
  void relax_fn(VertexId u);
  void decrement_to(VertexId v, Weight value);
  void drain();

  DynamicDigraph* g_;
  VertexId root_;
  double eps_;
  Weight depth_;     // n
  Weight exact_cap_;  // n^(2/3)
  Weight step_;       // n^(1/3)
  Weight gamma_;
  std::unique_ptr<EsTree> exact_;

  std::vector<Weight> dist_;
  std::vector<char> heavy_;
  std::vector<Weight> last_scan_;
  std::vector<Weight> last_refresh_;
  // Cache entries per edge, per-slot lists.
  std::vector<Weight> cpos_;
  std::vector<int> cnext_, cprev_;
  std::vector<std::vector<int>> chead_;
  std::deque<EdgeId> work_;
  std::vector<char> in_work_;
};

/// Weighted incremental SSSP: per (tau_hop, tau_depth) pair, weights are
/// rounded up to multiples of alpha = eps' * tau_depth / tau_hop, scaled
/// down, and fed to a weighted lazy tree run to depth 8 * tau_hop / eps'.
class WeightedGrid {
 public:
  WeightedGrid(int n, VertexId root, double eps, Weight max_weight);

  void insert_edge(VertexId u, VertexId v, Weight w);
  // Estimate in original weight units, or +inf.
  double distance(VertexId v) const;

  static Weight alpha_for(double eps, Weight tau_depth, Weight tau_hop);
  static Weight round_weight(Weight w, Weight alpha) { return ((w + alpha - 1) / alpha) * alpha; }

  int instance_count() const { return static_cast<int>(cells_.size()); }
  std::int64_t scan_work() const {
    std::int64_t total = 0;
    for (const auto& cell : cells_) total += cell.tree->scan_work();
    return total;
  }

 private:
  struct Cell {
    Weight tau_hop, tau_depth, alpha;
    std::unique_ptr<LazyEsTree> tree;
  };
  int n_;
  VertexId root_;
  double eps_;        // exposed guarantee
  double eps_inner_;  // eps / 4
  std::vector<Cell> cells_;
};

}  // namespace dygraph
