#include "dygraph/separators.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <queue>

namespace dygraph {
namespace separators {

namespace {

constexpr Weight kInf = std::numeric_limits<Weight>::max() / 4;

// Resumable layered 0/1 scan; one relaxed edge per step() so two scans can
// be interleaved and the loser aborted at matching cost.
class SepScan {
 public:
  SepScan(const NodeContext& ctx, const std::vector<char>& active,
          const std::vector<char>& s_node, NodeId root, int d, bool reversed, int working_size,
          int total_s)
      : ctx_(ctx),
        active_(active),
        s_node_(s_node),
        d_(d),
        reversed_(reversed),
        working_size_(working_size),
        total_s_(total_s) {
    dist_.assign(active.size(), kInf);
    done_.assign(active.size(), 0);
    dist_[root] = 0;
    deque_.push_back(root);
    x_factor_ = 2.0 * std::log2(std::max(2, working_size_)) / static_cast<double>(d);
  }

  bool finished() const { return finished_; }

  void step() {
    if (finished_) return;
    if (expand_ != -1) {
      relax_some();
      return;
    }
    // Settle the next node, finishing layers along the way.
    while (!deque_.empty()) {
      NodeId x = deque_.front();
      if (done_[x]) {
        deque_.pop_front();
        continue;
      }
      if (dist_[x] > layer_) {
        if (evaluate_layers(dist_[x] - 1)) return;
        if (dist_[x] > d_) {
          finish_flagged();
          return;
        }
      }
      deque_.pop_front();
      done_[x] = 1;
      ensure_layer(dist_[x]);
      layers_[dist_[x]].push_back(x);
      if (s_node_[x]) ++layer_s_[dist_[x]];
      expand_ = x;
      member_ = 0;
      offset_ = 0;
      return;
    }
    // Exhausted: evaluate remaining layers, else no cut is needed.
    if (evaluate_layers(static_cast<Weight>(layers_.size()) - 1)) return;
    finish_no_cut();
  }

  SeparatorResult take_result() { return std::move(result_); }

 private:
  void ensure_layer(Weight k) {
    while (static_cast<Weight>(layers_.size()) <= k) {
      layers_.emplace_back();
      layer_s_.push_back(0);
    }
  }

  // Relax the expanding node's edges one at a time.
  void relax_some() {
    const auto& mem = ctx_.part->members(expand_);
    while (member_ < mem.size()) {
      VertexId v = mem[member_];
      const auto& adj = reversed_ ? ctx_.g->in_edges(v) : ctx_.g->out_edges(v);
      if (offset_ >= adj.size()) {
        ++member_;
        offset_ = 0;
        continue;
      }
      EdgeId e = adj[offset_++];
      ++result_.explored_edges;
      const Edge& ed = ctx_.g->edge(e);
      if (!ctx_.filter.visible(ed)) return;
      NodeId from = ctx_.part->node_of(ed.tail);
      NodeId to = ctx_.part->node_of(ed.head);
      NodeId peer = reversed_ ? from : to;
      if (peer == expand_ || !active_[peer] || done_[peer]) return;
      Weight w = s_node_[expand_] ? 1 : 0;
      Weight nd = dist_[expand_] + w;
      if (nd < dist_[peer]) {
        dist_[peer] = nd;
        if (w == 0) {
          deque_.push_front(peer);
        } else {
          deque_.push_back(peer);
        }
      }
      return;
    }
    expand_ = -1;  // node fully expanded
  }

  // Evaluates completed layers up to `upto`; true if a separator was taken.
  bool evaluate_layers(Weight upto) {
    for (; layer_ <= upto; ++layer_) {
      if (layer_ >= static_cast<Weight>(layers_.size())) break;
      int s_l = layer_s_[layer_];
      cum_s_ += s_l;
      int near = cum_s_ - s_l;
      int far = total_s_ - cum_s_;
      bool ok = s_l == 0 || (static_cast<double>(s_l) <= x_factor_ * near &&
                             static_cast<double>(s_l) <= x_factor_ * far);
      if (ok) {
        finish_with_layer(layer_);
        return true;
      }
    }
    return false;
  }

  void finish_with_layer(Weight k) {
    for (Weight j = 0; j <= k; ++j) {
      for (NodeId x : layers_[j]) {
        if (j == k && s_node_[x]) {
          result_.s_sep.push_back(x);
        } else {
          result_.v_sep.push_back(x);
        }
      }
    }
    finished_ = true;
  }

  void finish_no_cut() {
    for (const auto& layer : layers_) {
      for (NodeId x : layer) result_.v_sep.push_back(x);
    }
    result_.no_cut = true;
    finished_ = true;
  }

  // Layer cap exceeded: fall back to the completed layer that is smallest
  // against the far side.
  void finish_flagged() {
    result_.flagged = true;
    Weight best = -1;
    int best_sl = std::numeric_limits<int>::max();
    int cum = 0;
    std::vector<int> cums(layers_.size());
    for (std::size_t j = 0; j < layers_.size(); ++j) {
      cum += layer_s_[j];
      cums[j] = cum;
    }
    for (Weight j = 1; j < static_cast<Weight>(layers_.size()); ++j) {
      int s_l = layer_s_[j];
      int far = total_s_ - cums[j];
      bool far_ok = static_cast<double>(s_l) <= x_factor_ * far;
      if (far_ok && s_l < best_sl) {
        best = j;
        best_sl = s_l;
      }
    }
    if (best < 0) {
      for (Weight j = 1; j < static_cast<Weight>(layers_.size()); ++j) {
        if (layer_s_[j] < best_sl) {
          best = j;
          best_sl = layer_s_[j];
        }
      }
    }
    if (best < 0) {
      finish_no_cut();
      result_.flagged = true;
      return;
    }
    finish_with_layer(best);
  }

  const NodeContext& ctx_;
  const std::vector<char>& active_;
  const std::vector<char>& s_node_;
  int d_;
  bool reversed_;
  int working_size_;
  int total_s_;
  double x_factor_;

  std::vector<Weight> dist_;
  std::vector<char> done_;
  std::deque<NodeId> deque_;
  std::vector<std::vector<NodeId>> layers_;
  std::vector<int> layer_s_;
  Weight layer_ = 0;
  int cum_s_ = 0;
  bool phase_two_ = false;
  NodeId expand_ = -1;
  std::size_t member_ = 0;
  std::size_t offset_ = 0;

  bool finished_ = false;
  SeparatorResult result_;
};

SepScan make_scan(const NodeContext& ctx, const std::vector<char>& active,
                  const std::vector<char>& s_node, NodeId r, int d, bool reversed) {
  int working = 0, total_s = 0;
  for (std::size_t x = 0; x < active.size(); ++x) {
    if (active[x]) {
      ++working;
      if (s_node[x]) ++total_s;
    }
  }
  return SepScan(ctx, active, s_node, r, d, reversed, working, total_s);
}

}  // namespace

SeparatorResult node_sep(const NodeContext& ctx, const std::vector<char>& active,
                         const std::vector<char>& s_node, NodeId r, int d, bool reversed) {
  if (d < 1) fail(Err::BadParams, "separator depth must be >= 1");
  SepScan scan = make_scan(ctx, active, s_node, r, d, reversed);
  while (!scan.finished()) scan.step();
  return scan.take_result();
}

namespace {

std::vector<char> make_mask(std::size_t size, const std::vector<NodeId>& nodes) {
  std::vector<char> mask(size, 0);
  for (NodeId x : nodes) mask[x] = 1;
  return mask;
}

// SCC-group pieces of the working set become GES trees in the else-branch;
// this implements the recursive decomposition.
void split_rec(const NodeContext& ctx, std::vector<NodeId> working,
               const std::vector<char>& s_node_in, int d, SplitResult& out) {
  std::size_t width = ctx.part->node_count();
  std::vector<char> s_node = s_node_in;
  s_node.resize(width, 0);

  std::sort(working.begin(), working.end());
  while (!working.empty()) {
    if (working.size() == 1) {
      out.parts.push_back({working[0]});
      return;
    }
    std::vector<char> active = make_mask(width, working);
    NodeId r = working.front();

    // Whole-set fast path: S-diameter already within d through r.
    {
      SepScan probe_f = make_scan(ctx, active, s_node, r, std::max(1, d / 2), false);
      while (!probe_f.finished()) probe_f.step();
      SeparatorResult pf = probe_f.take_result();
      if (pf.no_cut && pf.v_sep.size() == working.size()) {
        SepScan probe_r = make_scan(ctx, active, s_node, r, std::max(1, d / 2), true);
        while (!probe_r.finished()) probe_r.step();
        SeparatorResult pr = probe_r.take_result();
        if (pr.no_cut && pr.v_sep.size() == working.size()) {
          out.parts.push_back(working);
          return;
        }
      }
    }

    SepScan fwd = make_scan(ctx, active, s_node, r, std::max(1, d / 16), false);
    SepScan rev = make_scan(ctx, active, s_node, r, std::max(1, d / 16), true);
    // Strict interleaving; the first to finish wins.
    bool fwd_won;
    for (;;) {
      fwd.step();
      if (fwd.finished()) {
        fwd_won = true;
        break;
      }
      rev.step();
      if (rev.finished()) {
        fwd_won = false;
        break;
      }
    }
    SeparatorResult res = fwd_won ? fwd.take_result() : rev.take_result();
    if (3 * res.v_sep.size() > 2 * working.size()) {
      // Too large: finish the aborted side and use whatever it returns.
      SepScan& other = fwd_won ? rev : fwd;
      while (!other.finished()) other.step();
      res = other.take_result();
    }

    if (3 * res.v_sep.size() <= 2 * working.size()) {
      split_rec(ctx, res.v_sep, s_node, d, out);
      for (NodeId s : res.s_sep) {
        out.s_split.push_back(s);
        out.parts.push_back({s});
      }
      std::vector<char> gone = make_mask(width, res.v_sep);
      for (NodeId s : res.s_sep) gone[s] = 1;
      working.erase(std::remove_if(working.begin(), working.end(),
                                   [&](NodeId x) { return gone[x]; }),
                    working.end());
      continue;
    }

    // Both directions explored most of the graph: settle a GES around r and
    // prune everything that sits too deep.
    std::vector<NodeId> live = working;
    std::vector<NodeId> s_in;
    for (NodeId x : live) {
      if (s_node[x]) s_in.push_back(x);
    }
    GesTree ges(*ctx.g, *ctx.part, ctx.filter, live, s_in, ctx.part->members(r).front(),
                std::max<Weight>(1, d / 2));
    while (auto viol = ges.get_unreachable_vertex()) {
      NodeId x = ctx.part->node_of(*viol);
      bool use_in = ges.distance_from_root(x) == GesTree::kInf;
      std::vector<char> cur_mask(width, 0);
      for (NodeId y : ges.active_nodes()) cur_mask[y] = 1;
      SepScan scan = make_scan(ctx, cur_mask, s_node, x, std::max(1, d / 4), use_in);
      while (!scan.finished()) scan.step();
      SeparatorResult res2 = scan.take_result();
      std::vector<NodeId> drop = res2.v_sep;
      drop.insert(drop.end(), res2.s_sep.begin(), res2.s_sep.end());
      ges.delete_nodes(drop);
      split_rec(ctx, res2.v_sep, s_node, d, out);
      for (NodeId s : res2.s_sep) {
        out.s_split.push_back(s);
        out.parts.push_back({s});
      }
    }
    out.parts.push_back(ges.active_nodes());
    return;
  }
}

}  // namespace

SplitResult split(const NodeContext& ctx, const std::vector<NodeId>& working,
                  const std::vector<char>& s_node, int d) {
  if (d < 16) fail(Err::BadParams, "split depth must be >= 16");
  SplitResult out;
  if (!working.empty()) split_rec(ctx, working, s_node, d, out);
  return out;
}

namespace {

NodeContext singleton_context(const DynamicDigraph& g, Partition& part) {
  NodeContext ctx;
  ctx.g = &g;
  ctx.part = &part;
  return ctx;
}

}  // namespace

VertexSeparatorResult out_sep(VertexId r, const DynamicDigraph& g, const std::vector<VertexId>& s,
                              int d) {
  Partition singletons(g.vertex_count());
  NodeContext ctx = singleton_context(g, singletons);
  std::vector<char> active(g.vertex_count(), 1);
  std::vector<char> s_mask(g.vertex_count(), 0);
  for (VertexId v : s) s_mask[v] = 1;
  SeparatorResult res = node_sep(ctx, active, s_mask, r, d, false);
  return {res.s_sep, res.v_sep, res.explored_edges, res.no_cut, res.flagged};
}

VertexSeparatorResult in_sep(VertexId r, const DynamicDigraph& g, const std::vector<VertexId>& s,
                             int d) {
  Partition singletons(g.vertex_count());
  NodeContext ctx = singleton_context(g, singletons);
  std::vector<char> active(g.vertex_count(), 1);
  std::vector<char> s_mask(g.vertex_count(), 0);
  for (VertexId v : s) s_mask[v] = 1;
  SeparatorResult res = node_sep(ctx, active, s_mask, r, d, true);
  return {res.s_sep, res.v_sep, res.explored_edges, res.no_cut, res.flagged};
}

VertexSplitResult split(const DynamicDigraph& g, const std::vector<VertexId>& s, int d) {
  Partition singletons(g.vertex_count());
  NodeContext ctx = singleton_context(g, singletons);
  std::vector<NodeId> working(g.vertex_count());
  for (int v = 0; v < g.vertex_count(); ++v) working[v] = v;
  std::vector<char> s_mask(g.vertex_count(), 0);
  for (VertexId v : s) s_mask[v] = 1;
  SplitResult res = split(ctx, working, s_mask, d);
  return {res.s_split, res.parts};
}

EdgeSeparatorResult out_separator_with_radius(const DynamicDigraph& g,
                                              const std::vector<VertexId>& scope,
                                              const std::vector<char>* edge_enabled, VertexId r,
                                              double radius, bool reversed) {
  std::vector<char> in_scope(g.vertex_count(), scope.empty());
  for (VertexId v : scope) in_scope[v] = 1;

  auto usable = [&](EdgeId e) {
    const Edge& ed = g.edge(e);
    if (!ed.alive || !in_scope[ed.tail] || !in_scope[ed.head]) return false;
    return !edge_enabled || (e < static_cast<EdgeId>(edge_enabled->size()) && (*edge_enabled)[e]);
  };

  // Truncated Dijkstra ball.
  std::vector<Weight> dist(g.vertex_count(), kInf);
  std::vector<char> in_ball(g.vertex_count(), 0);
  using Item = std::pair<Weight, VertexId>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  dist[r] = 0;
  pq.push({0, r});
  EdgeSeparatorResult out;
  out.radius = radius;
  while (!pq.empty()) {
    auto [d0, v] = pq.top();
    pq.pop();
    if (in_ball[v] || d0 != dist[v]) continue;
    if (static_cast<double>(d0) > radius) break;
    in_ball[v] = 1;
    out.v_sep.push_back(v);
    const auto& adj = reversed ? g.in_edges(v) : g.out_edges(v);
    for (EdgeId e : adj) {
      if (!usable(e)) continue;
      VertexId w = reversed ? g.edge(e).tail : g.edge(e).head;
      Weight nd = d0 + g.edge(e).weight;
      if (nd < dist[w]) {
        dist[w] = nd;
        pq.push({nd, w});
      }
    }
  }
  for (VertexId v : out.v_sep) {
    const auto& adj = reversed ? g.in_edges(v) : g.out_edges(v);
    for (EdgeId e : adj) {
      if (!usable(e)) continue;
      VertexId w = reversed ? g.edge(e).tail : g.edge(e).head;
      if (!in_ball[w]) out.e_sep.push_back(e);
    }
  }
  std::sort(out.e_sep.begin(), out.e_sep.end());
  out.e_sep.erase(std::unique(out.e_sep.begin(), out.e_sep.end()), out.e_sep.end());
  return out;
}

EdgeSeparatorResult out_separator(const DynamicDigraph& g, const std::vector<VertexId>& scope,
                                  const std::vector<char>* edge_enabled, VertexId r, double d,
                                  double zeta, Rng& rng, bool reversed) {
  if (d <= 0 || zeta <= 0) fail(Err::BadParams, "out_separator needs d, zeta > 0");
  double x = rng.exponential(zeta / d);
  if (x >= d) {
    EdgeSeparatorResult out;
    out.failed = true;
    out.radius = x;
    return out;
  }
  return out_separator_with_radius(g, scope, edge_enabled, r, x, reversed);
}

std::optional<std::vector<EdgeId>> partition_low_diameter(const DynamicDigraph& g,
                                                          const std::vector<VertexId>& scope,
                                                          const std::vector<char>* edge_enabled,
                                                          double d, double zeta, Rng& rng) {
  std::vector<VertexId> all = scope;
  if (all.empty()) {
    all.resize(g.vertex_count());
    for (int v = 0; v < g.vertex_count(); ++v) all[v] = v;
  }
  std::vector<char> enabled(g.edge_slot_count(), 1);
  if (edge_enabled) {
    for (EdgeId e = 0; e < g.edge_slot_count(); ++e) {
      enabled[e] = e < static_cast<EdgeId>(edge_enabled->size()) ? (*edge_enabled)[e] : 0;
    }
  }
  std::vector<EdgeId> cut;

  auto sccs_of = [&](const std::vector<VertexId>& verts) {
    std::vector<char> mask(g.vertex_count(), 0);
    for (VertexId v : verts) mask[v] = 1;
    std::vector<std::pair<VertexId, VertexId>> arcs;
    for (VertexId v : verts) {
      for (EdgeId e : g.out_edges(v)) {
        if (!enabled[e]) continue;
        const Edge& ed = g.edge(e);
        if (mask[ed.head]) arcs.push_back({ed.tail, ed.head});
      }
    }
    // Local SCC computation (iterative Kosaraju-free approach via Tarjan on
    // a temporary adjacency).
    std::vector<std::vector<VertexId>> classes;
    {
      std::vector<std::vector<int>> adj(g.vertex_count());
      for (auto& [a, b] : arcs) adj[a].push_back(b);
      std::vector<int> index(g.vertex_count(), -1), low(g.vertex_count(), 0);
      std::vector<char> on_stack(g.vertex_count(), 0);
      std::vector<int> stk;
      int next = 0;
      std::vector<std::pair<int, std::size_t>> frames;
      for (VertexId root : verts) {
        if (index[root] != -1) continue;
        frames.push_back({root, 0});
        while (!frames.empty()) {
          auto& [v, pos] = frames.back();
          if (pos == 0) {
            index[v] = low[v] = next++;
            stk.push_back(v);
            on_stack[v] = 1;
          }
          bool desc = false;
          while (pos < adj[v].size()) {
            int w = adj[v][pos++];
            if (index[w] == -1) {
              frames.push_back({w, 0});
              desc = true;
              break;
            }
            if (on_stack[w]) low[v] = std::min(low[v], index[w]);
          }
          if (desc) continue;
          if (low[v] == index[v]) {
            classes.emplace_back();
            for (;;) {
              int w = stk.back();
              stk.pop_back();
              on_stack[w] = 0;
              classes.back().push_back(w);
              if (w == v) break;
            }
            std::sort(classes.back().begin(), classes.back().end());
          }
          int fin = v;
          frames.pop_back();
          if (!frames.empty()) low[frames.back().first] = std::min(low[frames.back().first], low[fin]);
        }
      }
    }
    std::sort(classes.begin(), classes.end());
    return classes;
  };

  std::vector<std::vector<VertexId>> work = sccs_of(all);
  while (!work.empty()) {
    std::vector<VertexId> x = std::move(work.back());
    work.pop_back();
    if (x.size() <= 1) continue;

    // Truncated distances from/to the smallest vertex.
    VertexId x0 = x.front();
    std::vector<char> mask(g.vertex_count(), 0);
    for (VertexId v : x) mask[v] = 1;
    auto run_dijkstra = [&](bool rev) {
      std::vector<Weight> dist(g.vertex_count(), kInf);
      using Item = std::pair<Weight, VertexId>;
      std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
      dist[x0] = 0;
      pq.push({0, x0});
      while (!pq.empty()) {
        auto [d0, v] = pq.top();
        pq.pop();
        if (d0 != dist[v]) continue;
        const auto& adj = rev ? g.in_edges(v) : g.out_edges(v);
        for (EdgeId e : adj) {
          if (!enabled[e]) continue;
          const Edge& ed = g.edge(e);
          VertexId w = rev ? ed.tail : ed.head;
          if (!mask[w]) continue;
          Weight nd = d0 + ed.weight;
          if (nd < dist[w]) {
            dist[w] = nd;
            pq.push({nd, w});
          }
        }
      }
      return dist;
    };
    auto douts = run_dijkstra(false);
    auto dins = run_dijkstra(true);

    VertexId viol = -1;
    bool use_forward_ball = false;
    for (VertexId v : x) {
      if (static_cast<double>(dins[v]) > d / 2) {
        // v cannot reach x0 cheaply: cut its forward ball.
        viol = v;
        use_forward_ball = true;
        break;
      }
      if (static_cast<double>(douts[v]) > d / 2) {
        viol = v;
        use_forward_ball = false;
        break;
      }
    }
    if (viol == -1) continue;  // diameter fine via x0

    EdgeSeparatorResult ball =
        out_separator(g, x, &enabled, viol, std::max(d / 4, 1e-9), zeta, rng, !use_forward_ball);
    if (ball.failed) {
      ball = out_separator(g, x, &enabled, viol, std::max(d / 4, 1e-9), zeta, rng, !use_forward_ball);
      if (ball.failed) return std::nullopt;
    }
    for (EdgeId e : ball.e_sep) {
      enabled[e] = 0;
      cut.push_back(e);
    }
    for (auto& piece : sccs_of(x)) work.push_back(std::move(piece));
  }
  std::sort(cut.begin(), cut.end());
  return cut;
}

}  // namespace separators
}  // namespace dygraph
