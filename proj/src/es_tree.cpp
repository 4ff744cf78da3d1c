#include "dygraph/es_tree.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

namespace dygraph {

EsTree::EsTree(const DynamicDigraph& g, VertexId root, Weight depth, Direction dir,
               const std::vector<VertexId>* scope, const std::vector<Weight>* weight_table)
    : g_(&g),
      root_(root),
      depth_(depth),
      dir_(dir),
      incremental_(g.mode() == UpdateMode::Incremental),
      weight_table_(weight_table) {
  int n = g.vertex_count();
  scope_.assign(n, scope == nullptr);
  if (scope) {
    for (VertexId v : *scope) scope_[v] = 1;
  }
  if (!scope_[root_]) fail(Err::NoSuchVertex, "root outside scope");

  preds_.resize(n);
  succs_.resize(n);
  for (int v = 0; v < n; ++v) {
    if (!scope_[v]) continue;
    const auto& pin = dir_ == Direction::Out ? g.in_edges(v) : g.out_edges(v);
    const auto& pout = dir_ == Direction::Out ? g.out_edges(v) : g.in_edges(v);
    preds_[v].assign(pin.begin(), pin.end());
    succs_[v].assign(pout.begin(), pout.end());
  }

  est_.assign(n, kInf);
  cert_.assign(n, kNoEdge);
  cursor_.assign(n, 0);
  cursor_fresh_.assign(n, 1);
  pending_.assign(n, 0);
  scans_.assign(n, 0);
  capped_seen_.assign(n, 0);
  queue_.reset(depth_ + 1);
  init_exact();
}

void EsTree::init_exact() {
  // Dijkstra over the scoped graph, truncated at the depth cap.
  BucketQueue init_q(depth_ + 1);
  est_[root_] = 0;
  init_q.push(0, root_);
  std::vector<char> done(est_.size(), 0);
  while (!init_q.empty()) {
    auto [d, v] = init_q.pop();
    if (done[v] || d != est_[v]) continue;
    done[v] = 1;
    for (EdgeId e : succs_[v]) {
      if (!edge_usable(e, v)) continue;
      VertexId w = dir_ == Direction::Out ? g_->edge(e).head : g_->edge(e).tail;
      Weight nd = d + wt(e);
      if (nd <= depth_ && (est_[w] == kInf || nd < est_[w])) {
        est_[w] = nd;
        cert_[w] = e;
        init_q.push(nd, w);
      }
    }
  }
  for (std::size_t v = 0; v < est_.size(); ++v) {
    if (scope_[v] && est_[v] == kInf) mark_capped(static_cast<VertexId>(v));
  }
}

void EsTree::pend(VertexId v) {
  if (pending_[v] || est_[v] == kInf) return;
  pending_[v] = 1;
  queue_.push(est_[v], v);
}

void EsTree::mark_capped(VertexId v) {
  if (!capped_seen_[v]) {
    capped_seen_[v] = 1;
    capped_.push_back(v);
  }
}

bool EsTree::cert_valid(VertexId v) const {
  EdgeId e = cert_[v];
  if (e == kNoEdge || !edge_usable(e, v)) return false;
  VertexId x = pred_of(e);
  if (est_[x] == kInf) return false;
  return est_[x] + wt(e) <= est_[v];
}

void EsTree::raise_to(VertexId v, Weight value) {
  if (value > depth_) {
    est_[v] = kInf;
    mark_capped(v);
  } else {
    est_[v] = value;
  }
  cursor_[v] = 0;
  cursor_fresh_[v] = 1;
  for (EdgeId e : succs_[v]) {
    if (!edge_usable(e, v)) continue;
    VertexId y = dir_ == Direction::Out ? g_->edge(e).head : g_->edge(e).tail;
    if (cert_[y] == e) pend(y);
  }
  pend(v);
}

void EsTree::settle_decremental() {
  while (!queue_.empty()) {
    auto [key, v] = queue_.pop();
    if (!pending_[v]) continue;
    if (key != est_[v]) {
      // Estimate moved since the push; reschedule at its current value.
      pending_[v] = 0;
      pend(v);
      continue;
    }
    pending_[v] = 0;
    if (v == root_ || cert_valid(v)) continue;

    Weight t = est_[v];
    Weight min_cand = kInf;
    bool fresh = cursor_fresh_[v];
    bool settled = false;
    auto& lst = preds_[v];
    std::size_t i = cursor_[v];
    for (; i < lst.size(); ++i) {
      EdgeId e = lst[i];
      ++scans_[v];
      ++total_scans_;
      if (!edge_usable(e, v)) continue;
      VertexId x = pred_of(e);
      Weight cand = est_[x] == kInf ? kInf : est_[x] + wt(e);
      if (cand <= t) {
        cert_[v] = e;
        cursor_[v] = i + 1;
        cursor_fresh_[v] = 0;
        settled = true;
        break;
      }
      if (fresh && cand < min_cand) min_cand = cand;
    }
    if (settled) continue;
    Weight next = fresh ? std::max<Weight>(t + 1, min_cand) : t + 1;
    raise_to(v, next);
  }
}

void EsTree::notify_delete(EdgeId e) {
  if (incremental_) fail(Err::ModeViolation, "delete on incremental tree");
  VertexId head = dir_ == Direction::Out ? g_->edge(e).head : g_->edge(e).tail;
  if (!scope_[head]) return;
  if (cert_[head] == e) {
    pend(head);
    settle_decremental();
  }
}

void EsTree::notify_weight_increase(EdgeId e) {
  if (incremental_) fail(Err::ModeViolation, "weight increase on incremental tree");
  VertexId head = dir_ == Direction::Out ? g_->edge(e).head : g_->edge(e).tail;
  if (!scope_[head]) return;
  if (cert_[head] == e && !cert_valid(head)) {
    pend(head);
    settle_decremental();
  }
}

void EsTree::relax_incremental(VertexId from) {
  BucketQueue q(depth_ + 1);
  q.push(est_[from], from);
  while (!q.empty()) {
    auto [d, v] = q.pop();
    if (d != est_[v]) continue;
    for (EdgeId e : succs_[v]) {
      if (!edge_usable(e, v)) continue;
      VertexId w = dir_ == Direction::Out ? g_->edge(e).head : g_->edge(e).tail;
      Weight nd = d + wt(e);
      if (nd <= depth_ && (est_[w] == kInf || nd < est_[w])) {
        est_[w] = nd;
        cert_[w] = e;
        q.push(nd, w);
      }
    }
  }
}

void EsTree::notify_insert(EdgeId e) {
  if (!incremental_) fail(Err::ModeViolation, "insert on decremental tree");
  const Edge& ed = g_->edge(e);
  if (!scope_[ed.tail] || !scope_[ed.head]) return;
  VertexId tail = dir_ == Direction::Out ? ed.tail : ed.head;
  VertexId head = dir_ == Direction::Out ? ed.head : ed.tail;
  preds_[head].push_back(e);
  succs_[tail].push_back(e);
  if (wt(e) <= 0) return;
  if (est_[tail] == kInf) return;
  Weight nd = est_[tail] + wt(e);
  if (nd <= depth_ && (est_[head] == kInf || nd < est_[head])) {
    est_[head] = nd;
    cert_[head] = e;
    relax_incremental(head);
  }
}

std::vector<EdgeId> EsTree::path(VertexId v) const {
  if (!scope_[v] || est_[v] == kInf) fail(Err::Unreachable, "no tree path to vertex");
  std::vector<EdgeId> edges;
  VertexId cur = v;
  while (cur != root_) {
    EdgeId e = cert_[cur];
    edges.push_back(e);
    cur = pred_of(e);
  }
  if (dir_ == Direction::Out) std::reverse(edges.begin(), edges.end());
  return edges;
}

std::optional<VertexId> EsTree::first_capped() const {
  for (VertexId v : capped_) {
    if (scope_[v] && est_[v] == kInf) return v;
  }
  return std::nullopt;
}

ScaledSssp::ScaledSssp(const DynamicDigraph& g, VertexId root, double eps)
    : g_(&g), root_(root), eps_(eps) {
  if (eps <= 0) fail(Err::BadParams, "eps must be positive");
  Weight n = std::max<Weight>(2, g.vertex_count());
  int top = 1;
  while ((Weight{1} << top) < g.max_weight() * n) ++top;
  // Levels 0 .. top+1; level i keeps edges of weight <= 2^i, rounded up to
  // multiples of 2^i / n^2 (stored as integer units of 2^i / n^2).
  for (int i = 0; i <= top + 1; ++i) {
    Level lv;
    lv.scale = Weight{1} << i;
    lv.units = std::make_unique<std::vector<Weight>>(g.edge_slot_count(), 0);
    for (EdgeId e = 0; e < g.edge_slot_count(); ++e) {
      const Edge& ed = g.edge(e);
      if (ed.alive && ed.weight <= lv.scale) (*lv.units)[e] = unit_weight(ed.weight, lv.scale);
    }
    // Band depth (1 + 2/n) * 2^i in real terms; level 0 runs to full depth n
    // so unit-weight graphs stay exact at every distance.
    Weight cap = i == 0 ? n * n * n : n * n + 2 * n + 1;
    lv.tree = std::make_unique<EsTree>(g, root, cap, Direction::Out, nullptr, lv.units.get());
    levels_.push_back(std::move(lv));
  }
}

Weight ScaledSssp::unit_weight(Weight w, Weight scale) const {
  Weight n = std::max<Weight>(2, g_->vertex_count());
  // ceil(w * n^2 / scale)
  return (w * n * n + scale - 1) / scale;
}

void ScaledSssp::refresh_edge(Level& lv, EdgeId e, bool inserted) {
  if (static_cast<EdgeId>(lv.units->size()) <= e) lv.units->resize(e + 1, 0);
  const Edge& ed = g_->edge(e);
  Weight fresh = ed.alive && ed.weight <= lv.scale ? unit_weight(ed.weight, lv.scale) : 0;
  Weight old = (*lv.units)[e];
  (*lv.units)[e] = fresh;
  if (inserted) {
    lv.tree->notify_insert(e);
  } else if (fresh == 0 && old != 0) {
    lv.tree->notify_delete(e);
  } else if (fresh > old) {
    lv.tree->notify_weight_increase(e);
  }
}

void ScaledSssp::notify_delete(EdgeId e) {
  for (Level& lv : levels_) {
    if (static_cast<EdgeId>(lv.units->size()) > e && (*lv.units)[e] != 0) {
      (*lv.units)[e] = 0;
      lv.tree->notify_delete(e);
    }
  }
}

void ScaledSssp::notify_insert(EdgeId e) {
  for (Level& lv : levels_) refresh_edge(lv, e, true);
}

void ScaledSssp::notify_weight_increase(EdgeId e) {
  for (Level& lv : levels_) refresh_edge(lv, e, false);
}

double ScaledSssp::distance(VertexId v) const {
  double n = std::max<double>(2.0, g_->vertex_count());
  double best = std::numeric_limits<double>::infinity();
  for (const Level& lv : levels_) {
    Weight u = lv.tree->estimate(v);
    if (u == EsTree::kInf) continue;
    best = std::min(best, static_cast<double>(u) * static_cast<double>(lv.scale) / (n * n));
  }
  return best;
}

}  // namespace dygraph
