#include "dygraph/lazy_es_tree.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace dygraph {

namespace {
constexpr int kNil = -1;
}

LazyEsTree::LazyEsTree(int n, VertexId root, Weight tau, double eps, Weight cap, bool weighted)
    : n_(n), root_(root), tau_(tau), eps_(eps), cap_(cap), weighted_(weighted) {
  if (tau_ < 1 || cap_ < tau_) fail(Err::BadParams, "bad band parameters");
  logn_ = std::log2(std::max(2, n));
  hmax_ = static_cast<int>(std::floor(std::log2(std::max(2, n)))) + 1;
  out_.resize(n);
  dist_.assign(n, cap_ + 1);
  dist_[root_] = 0;
  h_.assign(n, 0);
  cert_.assign(n, kNil);
  chead_.assign(n, kNil);
  xhead_.assign(n, std::vector<int>(cap_ + 2, kNil));
  fen_.resize(n);
  for (auto& f : fen_) f.resize(weighted_ ? hmax_ + 1 : 1);
  iscans_.assign(n, std::vector<std::int64_t>(hmax_ + 1, 0));
}

int LazyEsTree::weight_class(Weight w) const {
  if (!weighted_) return 0;
  int c = 0;
  while ((Weight{2} << c) <= w && c < hmax_) ++c;
  return c;
}

double LazyEsTree::thr(int i, bool high) const {
  double p = std::exp2(i) - 1.0;
  return p * (high ? 12.0 : 6.0) * n_ * logn_ / (eps_ * static_cast<double>(tau_));
}

void LazyEsTree::fen_add(VertexId u, int cls, Weight slot, int delta) {
  if (slot > cap_) return;  // the infinite slot is not counted
  auto& f = fen_[u][cls];
  if (!f) f = std::make_unique<std::vector<std::int32_t>>(cap_ + 2, 0);
  for (Weight i = slot + 1; i <= cap_ + 1; i += i & (-i)) (*f)[i] += delta;
}

std::int64_t LazyEsTree::fen_suffix(VertexId u, int cls, Weight slot) const {
  const auto& f = fen_[u][cls];
  if (!f) return 0;
  auto prefix = [&](Weight k) {
    std::int64_t s = 0;
    for (Weight i = k; i > 0; i -= i & (-i)) s += (*f)[i];
    return s;
  };
  // Entries in [slot, cap_].
  return prefix(cap_ + 1) - prefix(slot);
}

std::int64_t LazyEsTree::window_count(VertexId u, int i) const {
  Weight lo = cache_index(u, i);
  if (!weighted_) return fen_suffix(u, 0, lo);
  std::int64_t total = 0;
  for (int c = 0; c < i && c <= hmax_; ++c) total += fen_suffix(u, c, lo);
  return total;
}

int LazyEsTree::arg_heaviness(VertexId u, bool high, int limit) const {
  int best = 0;
  for (int i = 1; i <= std::min(limit, hmax_); ++i) {
    if (static_cast<double>(window_count(u, i)) + 1e-9 >= thr(i, high)) best = i;
  }
  return best;
}

void LazyEsTree::cache_insert(int e, Weight pos) {
  VertexId u = edges_[e].u;
  cpos_[e] = pos;
  // Descending position order; fresh inserts are usually at the top.
  int prev = kNil, cur = chead_[u];
  while (cur != kNil && cpos_[cur] > pos) {
    prev = cur;
    cur = cnext_[cur];
  }
  cprev_[e] = prev;
  cnext_[e] = cur;
  if (prev == kNil) {
    chead_[u] = e;
  } else {
    cnext_[prev] = e;
  }
  if (cur != kNil) cprev_[cur] = e;
  fen_add(u, weight_class(edges_[e].w), pos, +1);
}

void LazyEsTree::cache_move_down(int e, Weight pos) {
  if (cpos_[e] == pos) return;
  VertexId u = edges_[e].u;
  fen_add(u, weight_class(edges_[e].w), cpos_[e], -1);
  // Unlink.
  if (cprev_[e] == kNil) {
    chead_[u] = cnext_[e];
  } else {
    cnext_[cprev_[e]] = cnext_[e];
  }
  if (cnext_[e] != kNil) cprev_[cnext_[e]] = cprev_[e];
  // Walk down from the old location.
  int prev = cprev_[e], cur = cnext_[e];
  if (prev == kNil) cur = chead_[u];
  while (cur != kNil && cpos_[cur] > pos) {
    prev = cur;
    cur = cnext_[cur];
  }
  cpos_[e] = pos;
  cprev_[e] = prev;
  cnext_[e] = cur;
  if (prev == kNil) {
    chead_[u] = e;
  } else {
    cnext_[prev] = e;
  }
  if (cur != kNil) cprev_[cur] = e;
  fen_add(u, weight_class(edges_[e].w), pos, +1);
}

void LazyEsTree::sync_expire(int e) {
  VertexId u = edges_[e].u, v = edges_[e].v;
  Weight want = cpos_[e] >= cache_index(u) ? cache_index(u) : kNil;
  if (xslot_[e] == want) return;
  if (xslot_[e] != kNil) {
    if (xprev_[e] == kNil) {
      xhead_[v][xslot_[e]] = xnext_[e];
    } else {
      xnext_[xprev_[e]] = xnext_[e];
    }
    if (xnext_[e] != kNil) xprev_[xnext_[e]] = xprev_[e];
    xslot_[e] = kNil;
  }
  if (want != kNil) {
    xslot_[e] = want;
    xprev_[e] = kNil;
    xnext_[e] = xhead_[v][want];
    if (xnext_[e] != kNil) xprev_[xnext_[e]] = e;
    xhead_[v][want] = e;
  }
}

void LazyEsTree::refresh_position(int e) {
  Weight pos = std::min<Weight>(dist_[edges_[e].v], cap_ + 1);
  cache_move_down(e, pos);
  sync_expire(e);
}

void LazyEsTree::push_h(int e) {
  if (!in_h_[e]) {
    in_h_[e] = 1;
    hq_.push_back(e);
  }
}

int LazyEsTree::insert_edge(VertexId u, VertexId v, Weight w) {
  if (w < 1) fail(Err::WeightOutOfRange, "weights must be >= 1");
  if (!weighted_ && w != 1) fail(Err::WeightOutOfRange, "unweighted band expects unit weights");
  int e = static_cast<int>(edges_.size());
  edges_.push_back({u, v, w});
  out_[u].push_back(e);
  cpos_.push_back(0);
  cnext_.push_back(kNil);
  cprev_.push_back(kNil);
  xslot_.push_back(kNil);
  xnext_.push_back(kNil);
  xprev_.push_back(kNil);
  in_h_.push_back(0);
  cache_insert(e, std::min<Weight>(dist_[v], cap_ + 1));
  sync_expire(e);
  increase_heaviness(u);
  if (dist_[v] > dist_[u] + w) {
    push_h(e);
    drain();
  }
  return e;
}

void LazyEsTree::drain() {
  while (!hq_.empty()) {
    int e = hq_.front();
    const LEdge& ed = edges_[e];
    if (dist_[ed.v] > dist_[ed.u] + ed.w) {
      decrement(e);
    } else {
      in_h_[e] = 0;
      hq_.pop_front();
    }
  }
}

void LazyEsTree::scan_fn(VertexId u, bool into_h, int count_as) {
  ++iscans_[u][count_as];
  Weight lo = cache_index(u);
  std::vector<int> window;
  for (int e = chead_[u]; e != kNil && cpos_[e] >= lo; e = cnext_[e]) {
    if (weighted_ && edges_[e].w >= (Weight{1} << h_[u])) continue;
    window.push_back(e);
  }
  scan_work_ += static_cast<std::int64_t>(window.size()) + 1;
  for (int e : window) {
    refresh_position(e);
    if (into_h) push_h(e);
  }
}

void LazyEsTree::decrement(int e) {
  VertexId v = edges_[e].v;
  dist_[v] -= 1;
  cert_[v] = e;

  if (weighted_) {
    // Edges outside the forward neighborhood run on their own schedule,
    // anchored at estimate 0.
    for (int f : out_[v]) {
      const LEdge& fe = edges_[f];
      bool in_fn = cpos_[f] >= cache_index(v) && fe.w < (Weight{1} << h_[v]);
      if (in_fn) continue;
      Weight period = std::max<Weight>(1, static_cast<Weight>(std::ceil(eps_ * fe.w)));
      if (dist_[v] % period == 0) push_h(f);
    }
  }

  if (dist_[v] % (Weight{1} << h_[v]) == 0) {
    increase_heaviness(v);
    scan_fn(v, true, h_[v]);
  }

  // Members expiring out of forward neighborhoods that cached v.
  Weight slot = dist_[v] + 1;
  std::vector<int> expiring;
  for (int f = xhead_[v][slot]; f != kNil; f = xnext_[f]) expiring.push_back(f);
  for (int f : expiring) {
    VertexId owner = edges_[f].u;
    refresh_position(f);
    decrease_heaviness(owner);
  }
}

void LazyEsTree::increase_heaviness(VertexId u) {
  int cand = arg_heaviness(u, true, hmax_);
  if (cand <= h_[u]) return;
  ++heaviness_changes_;
  ++iscans_[u][cand];
  Weight lo = cache_index(u, cand);
  std::vector<int> window;
  for (int e = chead_[u]; e != kNil && cpos_[e] >= lo; e = cnext_[e]) window.push_back(e);
  for (int e : window) refresh_position(e);
  h_[u] = arg_heaviness(u, false, cand);
  // Registrations for the final window.
  Weight lo2 = cache_index(u);
  for (int e = chead_[u]; e != kNil && cpos_[e] >= lo2; e = cnext_[e]) sync_expire(e);
}

void LazyEsTree::decrease_heaviness(VertexId u) {
  int cand = arg_heaviness(u, false, hmax_);
  if (cand >= h_[u]) return;
  ++heaviness_changes_;
  ++iscans_[u][h_[u]];
  Weight lo = cache_index(u);
  std::vector<int> window;
  for (int e = chead_[u]; e != kNil && cpos_[e] >= lo; e = cnext_[e]) window.push_back(e);
  for (int e : window) refresh_position(e);
  h_[u] = arg_heaviness(u, false, hmax_);
  Weight lo2 = cache_index(u);
  std::vector<int> fn;
  for (int e = chead_[u]; e != kNil && cpos_[e] >= lo2; e = cnext_[e]) {
    sync_expire(e);
    if (!weighted_ || edges_[e].w < (Weight{1} << h_[u])) fn.push_back(e);
  }
  for (int e : fn) push_h(e);
}

std::vector<int> LazyEsTree::path_edges(VertexId v) {
  if (dist_[v] > cap_) fail(Err::Unreachable, "vertex beyond the band");
  for (;;) {
    std::vector<int> path;
    VertexId cur = v;
    bool slack = false;
    while (cur != root_) {
      int e = cert_[cur];
      if (e == kNil) fail(Err::Unreachable, "broken certificate chain");
      if (dist_[cur] > dist_[edges_[e].u] + edges_[e].w) {
        push_h(e);
        drain();
        slack = true;
        break;
      }
      path.push_back(e);
      cur = edges_[e].u;
    }
    if (slack) continue;
    std::reverse(path.begin(), path.end());
    return path;
  }
}

bool LazyEsTree::audit(std::string* why) const {
  auto report = [&](const std::string& msg) {
    if (why) *why = msg;
    return false;
  };
  for (VertexId u = 0; u < n_; ++u) {
    Weight lo = cache_index(u);
    Weight gap_allow = (weighted_ ? 2 : 1) * (Weight{1} << h_[u]);
    for (int e = chead_[u]; e != kNil && cpos_[e] >= lo; e = cnext_[e]) {
      if (cpos_[e] > cap_) continue;  // the infinite slot is outside FN
      if (weighted_ && edges_[e].w >= (Weight{1} << h_[u])) continue;
      Weight dv = dist_[edges_[e].v];
      if (std::llabs(dv - dist_[u]) > gap_allow) {
        std::ostringstream os;
        os << "fn gap broken at owner " << u << " member " << edges_[e].v;
        return report(os.str());
      }
    }
    for (int i = h_[u] + 1; i <= hmax_; ++i) {
      if (static_cast<double>(window_count(u, i)) > thr(i, true) + 1e-9) {
        std::ostringstream os;
        os << "bucket bound broken at vertex " << u << " level " << i;
        return report(os.str());
      }
    }
    if (static_cast<double>(window_count(u, h_[u])) + 1e-9 < thr(h_[u], false)) {
      std::ostringstream os;
      os << "fn lower bound broken at vertex " << u;
      return report(os.str());
    }
  }
  return true;
}

LazyBank::LazyBank(int n, VertexId root, double eps) : n_(n), root_(root) {
  for (Weight tau = 1; tau < std::max(2, n); tau *= 2) {
    Weight cap = static_cast<Weight>(std::ceil(2.0 * tau * (1.0 + eps)));
    trees_.push_back(std::make_unique<LazyEsTree>(n, root, tau, eps, cap, false));
  }
}

void LazyBank::insert_edge(VertexId u, VertexId v) {
  for (auto& t : trees_) t->insert_edge(u, v, 1);
}

Weight LazyBank::distance(VertexId v) const {
  Weight best = EsTree::kInf;
  for (const auto& t : trees_) {
    if (t->estimate(v) <= t->inf_value() - 1) best = std::min(best, t->estimate(v));
  }
  return best;
}

std::vector<std::pair<VertexId, VertexId>> LazyBank::path(VertexId v) {
  // Use the band that realizes the minimum estimate.
  Weight best = EsTree::kInf;
  LazyEsTree* pick = nullptr;
  for (auto& t : trees_) {
    if (t->estimate(v) < t->inf_value() && t->estimate(v) < best) {
      best = t->estimate(v);
      pick = t.get();
    }
  }
  if (!pick) fail(Err::Unreachable, "vertex unreachable in every band");
  std::vector<std::pair<VertexId, VertexId>> out;
  for (int e : pick->path_edges(v)) out.push_back({pick->edge_tail(e), pick->edge_head(e)});
  return out;
}

bool LazyBank::audit(std::string* why) const {
  for (const auto& t : trees_) {
    if (!t->audit(why)) return false;
  }
  return true;
}

WarmupSssp::WarmupSssp(DynamicDigraph& g, VertexId root, double eps)
    : g_(&g), root_(root), eps_(eps) {
  int n = g.vertex_count();
  depth_ = n;
  double n13 = std::cbrt(static_cast<double>(std::max(2, n)));
  step_ = std::max<Weight>(1, static_cast<Weight>(std::llround(n13)));
  exact_cap_ = std::max<Weight>(1, static_cast<Weight>(std::llround(n13 * n13)));
  gamma_ = std::max<Weight>(2, static_cast<Weight>(std::ceil(6.0 * n13 * n13 / eps_)));
  exact_ = std::make_unique<EsTree>(g, root, exact_cap_, Direction::Out);

  dist_.assign(n, depth_ + 1);
  dist_[root_] = 0;
  heavy_.assign(n, 0);
  last_scan_.assign(n, depth_ + 1);
  last_refresh_.assign(n, depth_ + 1);
  chead_.assign(n, std::vector<int>(depth_ + 2, kNil));
  in_work_.assign(n, 0);
}

std::int64_t WarmupSssp::fn_count(VertexId u) const {
  std::int64_t c = 0;
  for (Weight s = window_low(u); s <= depth_; ++s) {
    for (int e = chead_[u][s]; e != kNil; e = cnext_[e]) ++c;
  }
  return c;
}

void WarmupSssp::refresh_member(VertexId v) {
  last_refresh_[v] = dist_[v];
  for (EdgeId e : g_->in_edges(v)) {
    if (static_cast<std::size_t>(e) >= cpos_.size() || cpos_[e] == kNil) continue;
    VertexId u = g_->edge(e).tail;
    Weight pos = std::min<Weight>(dist_[v], depth_ + 1);
    if (cpos_[e] != pos) {
      // Unlink and relink at the fresh slot.
      if (cprev_[e] == kNil) {
        chead_[u][cpos_[e]] = cnext_[e];
      } else {
        cnext_[cprev_[e]] = cnext_[e];
      }
      if (cnext_[e] != kNil) cprev_[cnext_[e]] = cprev_[e];
      cpos_[e] = pos;
      cprev_[e] = kNil;
      cnext_[e] = chead_[u][pos];
      if (cnext_[e] != kNil) cprev_[cnext_[e]] = e;
      chead_[u][pos] = e;
    }
    if (heavy_[u] && fn_count(u) * 2 <= gamma_) {
      heavy_[u] = 0;
      relax_fn(u);
      last_scan_[u] = dist_[u];
    }
  }
}

void WarmupSssp::relax_fn(VertexId u) {
  std::vector<int> window;
  for (Weight s = window_low(u); s <= depth_ + 1; ++s) {
    for (int e = chead_[u][s]; e != kNil; e = cnext_[e]) window.push_back(e);
  }
  for (int e : window) {
    VertexId v = g_->edge(e).head;
    // Scanning refreshes the cached position as well.
    Weight pos = std::min<Weight>(dist_[v], depth_ + 1);
    if (cpos_[e] != pos) {
      if (cprev_[e] == kNil) {
        chead_[u][cpos_[e]] = cnext_[e];
      } else {
        cnext_[cprev_[e]] = cnext_[e];
      }
      if (cnext_[e] != kNil) cprev_[cnext_[e]] = cprev_[e];
      cpos_[e] = pos;
      cprev_[e] = kNil;
      cnext_[e] = chead_[u][pos];
      if (cnext_[e] != kNil) cprev_[cnext_[e]] = e;
      chead_[u][pos] = e;
    }
    if (dist_[v] > dist_[u] + 1) decrement_to(v, dist_[u] + 1);
  }
}

void WarmupSssp::decrement_to(VertexId v, Weight value) {
  dist_[v] = value;
  if (!in_work_[v]) {
    in_work_[v] = 1;
    work_.push_back(v);
  }
}

void WarmupSssp::drain() {
  while (!work_.empty()) {
    VertexId v = work_.front();
    work_.pop_front();
    in_work_[v] = 0;
    if (last_refresh_[v] - dist_[v] >= step_) refresh_member(v);
    if (!heavy_[v] && fn_count(v) >= gamma_) heavy_[v] = 1;
    if (!heavy_[v]) {
      relax_fn(v);
      last_scan_[v] = dist_[v];
    } else if (last_scan_[v] - dist_[v] >= step_) {
      relax_fn(v);
      last_scan_[v] = dist_[v];
    }
  }
}

void WarmupSssp::on_insert(EdgeId e) {
  exact_->notify_insert(e);
  const Edge& ed = g_->edge(e);
  if (static_cast<std::size_t>(e) >= cpos_.size()) {
    cpos_.resize(e + 1, kNil);
    cnext_.resize(e + 1, kNil);
    cprev_.resize(e + 1, kNil);
  }
  VertexId u = ed.tail, v = ed.head;
  Weight pos = std::min<Weight>(dist_[v], depth_ + 1);
  cpos_[e] = pos;
  cprev_[e] = kNil;
  cnext_[e] = chead_[u][pos];
  if (cnext_[e] != kNil) cprev_[cnext_[e]] = e;
  chead_[u][pos] = e;
  if (!heavy_[u] && fn_count(u) >= gamma_) heavy_[u] = 1;
  if (dist_[v] > dist_[u] + 1) {
    decrement_to(v, dist_[u] + 1);
    drain();
  }
}

Weight WarmupSssp::distance(VertexId v) const {
  Weight best = EsTree::kInf;
  if (exact_->estimate(v) != EsTree::kInf) best = exact_->estimate(v);
  if (dist_[v] <= depth_) best = std::min(best, dist_[v]);
  return best;
}

bool WarmupSssp::audit(std::string* why) const {
  for (VertexId u = 0; u < g_->vertex_count(); ++u) {
    for (Weight s = window_low(u); s <= depth_; ++s) {
      for (int e = chead_[u][s]; e != kNil; e = cnext_[e]) {
        Weight dv = dist_[g_->edge(e).head];
        if (std::llabs(dv - dist_[u]) > step_) {
          if (why) {
            std::ostringstream os;
            os << "warmup fn gap broken at owner " << u;
            *why = os.str();
          }
          return false;
        }
      }
    }
  }
  return true;
}

WeightedGrid::WeightedGrid(int n, VertexId root, double eps, Weight max_weight)
    : n_(n), root_(root), eps_(eps), eps_inner_(eps / 4.0) {
  Weight horizon = static_cast<Weight>(n) * std::max<Weight>(1, max_weight);
  for (Weight th = 1; th < std::max(2, n); th *= 2) {
    for (Weight td = th; td <= 2 * horizon; td *= 2) {
      Cell cell;
      cell.tau_hop = th;
      cell.tau_depth = td;
      cell.alpha = alpha_for(eps_inner_, td, th);
      Weight cap = static_cast<Weight>(std::ceil(8.0 * th / eps_inner_));
      cell.tree = std::make_unique<LazyEsTree>(n, root, th, eps_inner_, cap, true);
      cells_.push_back(std::move(cell));
    }
  }
}

Weight WeightedGrid::alpha_for(double eps, Weight tau_depth, Weight tau_hop) {
  double raw = eps * static_cast<double>(tau_depth) / static_cast<double>(tau_hop);
  return std::max<Weight>(1, static_cast<Weight>(std::floor(raw + 1e-12)));
}

void WeightedGrid::insert_edge(VertexId u, VertexId v, Weight w) {
  for (Cell& cell : cells_) {
    Weight scaled = round_weight(w, cell.alpha) / cell.alpha;
    cell.tree->insert_edge(u, v, scaled);
  }
}

double WeightedGrid::distance(VertexId v) const {
  double best = std::numeric_limits<double>::infinity();
  for (const Cell& cell : cells_) {
    Weight est = cell.tree->estimate(v);
    if (est <= cell.tree->inf_value() - 1) {
      best = std::min(best, static_cast<double>(est) * static_cast<double>(cell.alpha));
    }
  }
  return best;
}

}  // namespace dygraph
