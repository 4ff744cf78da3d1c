#include "dygraph/ges_tree.hpp"

#include <algorithm>

namespace dygraph {

bool GesTree::audit_mode = false;

namespace {
// Flat scan cursor: (member index, adjacency offset) packed in one value.
struct CursorPos {
  std::size_t member = 0;
  std::size_t offset = 0;
};
}  // namespace

GesTree::GesTree(const DynamicDigraph& g, const Partition& part, LevelFilter filter,
                 const std::vector<NodeId>& nodes, const std::vector<NodeId>& s_nodes,
                 VertexId root, Weight depth)
    : g_(&g), part_(&part), filter_(filter), root_vertex_(root), depth_(depth) {
  if (depth_ < 1) fail(Err::BadParams, "depth must be positive");
  NodeId max_id = 0;
  for (NodeId x : nodes) max_id = std::max(max_id, x);
  active_.assign(max_id + 1, 0);
  s_node_.assign(max_id + 1, 0);
  node_list_ = nodes;
  std::sort(node_list_.begin(), node_list_.end());
  for (NodeId x : node_list_) {
    active_[x] = 1;
    ++active_count_;
    init_flatten_size_ += part_->size_of(x);
  }
  for (NodeId s : s_nodes) {
    if (!node_active(s)) fail(Err::BadParams, "s-node outside tree");
    if (part_->size_of(s) != 1) fail(Err::NotSingleton, "feedback nodes must be singletons");
    s_node_[s] = 1;
  }
  if (!node_active(part_->node_of(root_vertex_))) fail(Err::NoSuchVertex, "root outside tree");

  vin_.resize(g.vertex_count());
  vout_.resize(g.vertex_count());
  for (NodeId x : node_list_) {
    for (VertexId v : part_->members(x)) {
      vin_[v].assign(g_->in_edges(v).begin(), g_->in_edges(v).end());
      vout_[v].assign(g_->out_edges(v).begin(), g_->out_edges(v).end());
      indeg_sum_ += static_cast<std::int64_t>(vin_[v].size());
    }
  }

  for (int dir : {kOut, kIn}) {
    auto& d = dirs_[dir];
    d.est.assign(max_id + 1, kInf);
    d.cert.assign(max_id + 1, kNoEdge);
    d.cursor.assign(max_id + 1, 0);
    d.cursor_fresh.assign(max_id + 1, 1);
    d.pending.assign(max_id + 1, 0);
    d.queue.reset(depth_ + 1);
  }
  unreachable_seen_.assign(max_id + 1, 0);

  if (audit_mode && !feedback_property_holds()) {
    fail(Err::NotFeedbackSet, "0-weight cycle in initial graph");
  }
  init_direction(kOut);
  init_direction(kIn);
  for (NodeId x : node_list_) {
    if (dirs_[kOut].est[x] == kInf || dirs_[kIn].est[x] == kInf) mark_unreachable_candidate(x);
  }
}

void GesTree::ensure_size(NodeId x) {
  if (x < static_cast<NodeId>(active_.size())) return;
  std::size_t sz = x + 1;
  active_.resize(sz, 0);
  s_node_.resize(sz, 0);
  unreachable_seen_.resize(sz, 0);
  for (int dir : {kOut, kIn}) {
    auto& d = dirs_[dir];
    d.est.resize(sz, kInf);
    d.cert.resize(sz, kNoEdge);
    d.cursor.resize(sz, 0);
    d.cursor_fresh.resize(sz, 1);
    d.pending.resize(sz, 0);
  }
}

void GesTree::init_direction(int dir) {
  auto& d = dirs_[dir];
  BucketQueue q(depth_ + 1);
  NodeId r = part_->node_of(root_vertex_);
  d.est[r] = 0;
  q.push(0, r);
  std::vector<char> done(active_.size(), 0);
  while (!q.empty()) {
    auto [dist, x] = q.pop();
    if (done[x] || dist != d.est[x]) continue;
    done[x] = 1;
    for (VertexId v : part_->members(x)) {
      const auto& adj = dir == kOut ? g_->out_edges(v) : g_->in_edges(v);
      for (EdgeId e : adj) {
        const Edge& ed = g_->edge(e);
        if (!filter_.visible(ed)) continue;
        NodeId from = part_->node_of(ed.tail);
        NodeId to = part_->node_of(ed.head);
        NodeId peer = dir == kOut ? to : from;
        if (peer == x || !node_active(peer)) continue;
        Weight w = s_node_[from] ? 1 : 0;
        Weight nd = dist + w;
        if (nd <= depth_ && nd < d.est[peer]) {
          d.est[peer] = nd;
          d.cert[peer] = e;
          q.push(nd, peer);
        }
      }
    }
  }
}

void GesTree::pend(int dir, NodeId x) {
  auto& d = dirs_[dir];
  if (d.pending[x] || d.est[x] == kInf || !node_active(x)) return;
  d.pending[x] = 1;
  d.queue.push(d.est[x], x);
}

void GesTree::mark_unreachable_candidate(NodeId x) {
  if (!unreachable_seen_[x]) {
    unreachable_seen_[x] = 1;
    unreachable_.push_back(x);
  }
}

bool GesTree::cert_valid(int dir, NodeId x) const {
  const auto& d = dirs_[dir];
  EdgeId e = d.cert[x];
  if (e == kNoEdge) return false;
  const Edge& ed = g_->edge(e);
  if (!filter_.visible(ed)) return false;
  NodeId from = part_->node_of(ed.tail);
  NodeId to = part_->node_of(ed.head);
  NodeId pred = dir == kOut ? from : to;
  NodeId self = dir == kOut ? to : from;
  if (self != x || pred == x || !node_active(pred)) return false;
  if (d.est[pred] == kInf) return false;
  Weight w = s_node_[from] ? 1 : 0;
  return d.est[pred] + w <= d.est[x];
}

void GesTree::raise_to(int dir, NodeId x, Weight value) {
  auto& d = dirs_[dir];
  if (value > depth_) {
    d.est[x] = kInf;
    mark_unreachable_candidate(x);
  } else {
    d.est[x] = value;
  }
  d.cursor[x] = 0;
  d.cursor_fresh[x] = 1;
  // Nodes certified through x must re-validate.
  for (VertexId v : part_->members(x)) {
    const auto& adj = dir == kOut ? g_->out_edges(v) : g_->in_edges(v);
    for (EdgeId e : adj) {
      const Edge& ed = g_->edge(e);
      if (!filter_.visible(ed)) continue;
      NodeId peer = dir == kOut ? part_->node_of(ed.head) : part_->node_of(ed.tail);
      if (peer != x && node_active(peer) && d.cert[peer] == e) pend(dir, peer);
    }
  }
  pend(dir, x);
}

void GesTree::repair(int dir, NodeId x) {
  auto& d = dirs_[dir];
  Weight t = d.est[x];
  const auto& mem = part_->members(x);
  bool fresh = d.cursor_fresh[x];
  Weight min_cand = kInf;

  // Cursor encodes (member index, offset) over the concatenated pred lists.
  std::size_t mi = 0, off = 0;
  {
    std::size_t flat = d.cursor[x];
    std::size_t acc = 0;
    for (mi = 0; mi < mem.size(); ++mi) {
      const auto& adj = dir == kOut ? vin_[mem[mi]] : vout_[mem[mi]];
      if (flat - acc < adj.size()) {
        off = flat - acc;
        break;
      }
      acc += adj.size();
    }
    if (mi >= mem.size()) {
      mi = mem.size();
      off = 0;
    }
  }

  std::size_t flat_pos = d.cursor[x];
  for (; mi < mem.size(); ++mi, off = 0) {
    const auto& adj = dir == kOut ? vin_[mem[mi]] : vout_[mem[mi]];
    for (; off < adj.size(); ++off, ++flat_pos) {
      EdgeId e = adj[off];
      ++total_scans_;
      const Edge& ed = g_->edge(e);
      if (!filter_.visible(ed)) continue;
      NodeId from = part_->node_of(ed.tail);
      NodeId to = part_->node_of(ed.head);
      NodeId pred = dir == kOut ? from : to;
      if (pred == x || !node_active(pred)) continue;
      Weight w = s_node_[from] ? 1 : 0;
      Weight cand = dirs_[dir].est[pred] == kInf ? kInf : dirs_[dir].est[pred] + w;
      if (cand <= t) {
        d.cert[x] = e;
        d.cursor[x] = flat_pos + 1;
        d.cursor_fresh[x] = 0;
        return;
      }
      if (fresh && cand < min_cand) min_cand = cand;
    }
  }
  Weight next = fresh ? std::max<Weight>(t + 1, min_cand) : t + 1;
  raise_to(dir, x, next);
}

void GesTree::settle() {
  for (int dir : {kOut, kIn}) {
    auto& d = dirs_[dir];
    NodeId r = part_->node_of(root_vertex_);
    while (!d.queue.empty()) {
      auto [key, x] = d.queue.pop();
      if (!d.pending[x]) continue;
      if (!node_active(x) || d.est[x] == kInf) {
        d.pending[x] = 0;
        continue;
      }
      if (key != d.est[x]) {
        d.pending[x] = 0;
        pend(dir, x);
        continue;
      }
      d.pending[x] = 0;
      if (x == r || cert_valid(dir, x)) continue;
      repair(dir, x);
    }
  }
}

void GesTree::notify_edge_deleted(EdgeId e) {
  const Edge& ed = g_->edge(e);
  NodeId from = part_->node_of(ed.tail);
  NodeId to = part_->node_of(ed.head);
  if (from == to) return;  // contracted self-loop
  if (node_active(to) && dirs_[kOut].cert[to] == e) pend(kOut, to);
  if (node_active(from) && dirs_[kIn].cert[from] == e) pend(kIn, from);
  settle();
}

void GesTree::detach_incident(NodeId x) {
  for (VertexId v : part_->members(x)) {
    for (EdgeId e : g_->out_edges(v)) {
      const Edge& ed = g_->edge(e);
      if (!filter_.visible(ed)) continue;
      NodeId peer = part_->node_of(ed.head);
      if (peer == x || !node_active(peer)) continue;
      if (dirs_[kOut].cert[peer] == e) pend(kOut, peer);
    }
    for (EdgeId e : g_->in_edges(v)) {
      const Edge& ed = g_->edge(e);
      if (!filter_.visible(ed)) continue;
      NodeId peer = part_->node_of(ed.tail);
      if (peer == x || !node_active(peer)) continue;
      if (dirs_[kIn].cert[peer] == e) pend(kIn, peer);
    }
  }
}

void GesTree::delete_nodes(const std::vector<NodeId>& nodes) {
  NodeId r = part_->node_of(root_vertex_);
  for (NodeId x : nodes) {
    if (!node_active(x)) fail(Err::NoSuchVertex, "node not in tree");
    if (x == r) fail(Err::BadParams, "refusing to remove the root node");
  }
  for (NodeId x : nodes) {
    active_[x] = 0;
    --active_count_;
    dirs_[kOut].est[x] = kInf;
    dirs_[kIn].est[x] = kInf;
  }
  for (NodeId x : nodes) detach_incident(x);
  node_list_.erase(std::remove_if(node_list_.begin(), node_list_.end(),
                                  [&](NodeId x) { return !active_[x]; }),
                   node_list_.end());
  settle();
}

void GesTree::seed_parts(NodeId old_node, const std::vector<NodeId>& new_ids) {
  Weight seed_out = dirs_[kOut].est[old_node];
  Weight seed_in = dirs_[kIn].est[old_node];
  for (NodeId id : new_ids) {
    ensure_size(id);
    if (!active_[id]) {
      active_[id] = 1;
      ++active_count_;
      node_list_.push_back(id);
    }
    for (int dir : {kOut, kIn}) {
      auto& d = dirs_[dir];
      d.est[id] = dir == kOut ? seed_out : seed_in;
      d.cert[id] = kNoEdge;
      d.cursor[id] = 0;
      d.cursor_fresh[id] = 1;
      if (d.est[id] == kInf) mark_unreachable_candidate(id);
    }
    split_edge_work_ += part_->size_of(id);
    for (VertexId v : part_->members(id)) {
      split_edge_work_ +=
          static_cast<std::int64_t>(g_->out_edges(v).size() + g_->in_edges(v).size());
    }
  }
  std::sort(node_list_.begin(), node_list_.end());
  NodeId r = part_->node_of(root_vertex_);
  for (NodeId id : new_ids) {
    if (id != r) {
      pend(kOut, id);
      pend(kIn, id);
    }
  }
}

void GesTree::apply_augment(const std::vector<NodeId>& new_s) {
  for (NodeId s : new_s) {
    if (!node_active(s)) fail(Err::BadParams, "augment of node outside tree");
    if (part_->size_of(s) != 1) fail(Err::NotSingleton, "augment requires singleton nodes");
    if (s_node_[s]) continue;  // already in the feedback set
    s_node_[s] = 1;
    // Out-direction certificates through s now cost 1.
    for (VertexId v : part_->members(s)) {
      for (EdgeId e : g_->out_edges(v)) {
        const Edge& ed = g_->edge(e);
        if (!filter_.visible(ed)) continue;
        NodeId peer = part_->node_of(ed.head);
        if (peer != s && node_active(peer) && dirs_[kOut].cert[peer] == e) pend(kOut, peer);
      }
    }
    // The in-direction certificate of s itself got heavier.
    pend(kIn, s);
  }
}

void GesTree::apply_split_batch(NodeId old_node, const std::vector<NodeId>& new_ids,
                                const std::vector<NodeId>& augmented) {
  seed_parts(old_node, new_ids);
  apply_augment(augmented);
  settle();
  if (audit_mode && !feedback_property_holds()) {
    fail(Err::NotFeedbackSet, "split batch left a 0-weight cycle");
  }
}

void GesTree::split_node(NodeId y, const std::vector<VertexId>& part_x) {
  if (!owned_part_) fail(Err::BadParams, "standalone split requires an owned partition");
  if (!node_active(y)) fail(Err::NoSuchVertex, "no such node");
  std::vector<char> in_x(g_->vertex_count(), 0);
  for (VertexId v : part_x) in_x[v] = 1;
  std::vector<VertexId> rest;
  for (VertexId v : owned_part_->members(y)) {
    if (!in_x[v]) rest.push_back(v);
  }
  if (rest.empty() || part_x.empty()) fail(Err::BadSplit, "split parts must be proper");

  // 0-weight edges between the sides must go one way only; edges out of
  // feedback singletons weigh 1 and cannot close a 0-weight cycle.
  bool x_to_rest = false, rest_to_x = false;
  for (VertexId v : owned_part_->members(y)) {
    for (EdgeId e : g_->out_edges(v)) {
      const Edge& ed = g_->edge(e);
      if (!filter_.visible(ed)) continue;
      if (owned_part_->node_of(ed.head) != y) continue;
      if (in_x[ed.tail] && !in_x[ed.head]) x_to_rest = true;
      if (!in_x[ed.tail] && in_x[ed.head]) rest_to_x = true;
    }
  }
  if (x_to_rest && rest_to_x) {
    fail(Err::SplitPreconditionViolated, "edges cross the split in both directions");
  }
  auto ids = owned_part_->split_node(y, {part_x, rest});
  apply_split_batch(y, ids, {});
}

void GesTree::augment(const std::vector<NodeId>& new_s) {
  apply_augment(new_s);
  settle();
  if (audit_mode && !feedback_property_holds()) {
    fail(Err::NotFeedbackSet, "augment left a 0-weight cycle");
  }
}

std::optional<VertexId> GesTree::get_unreachable_vertex() {
  while (unreachable_head_ < unreachable_.size()) {
    NodeId x = unreachable_[unreachable_head_];
    if (node_active(x) && (dirs_[kOut].est[x] == kInf || dirs_[kIn].est[x] == kInf)) {
      return part_->members(x).front();
    }
    ++unreachable_head_;
  }
  return std::nullopt;
}

bool GesTree::feedback_property_holds() const {
  // DFS cycle check on the 0-weight subgraph among active nodes.
  std::vector<int> color(active_.size(), 0);
  std::vector<std::pair<NodeId, std::size_t>> frames;
  std::vector<std::vector<NodeId>> adj(active_.size());
  for (NodeId x : node_list_) {
    if (s_node_[x]) continue;  // out-edges weigh 1
    for (VertexId v : part_->members(x)) {
      for (EdgeId e : g_->out_edges(v)) {
        const Edge& ed = g_->edge(e);
        if (!filter_.visible(ed)) continue;
        NodeId peer = part_->node_of(ed.head);
        if (peer != x && node_active(peer)) adj[x].push_back(peer);
      }
    }
  }
  for (NodeId root : node_list_) {
    if (color[root] != 0) continue;
    frames.push_back({root, 0});
    color[root] = 1;
    while (!frames.empty()) {
      auto& [x, pos] = frames.back();
      if (pos < adj[x].size()) {
        NodeId y = adj[x][pos++];
        if (color[y] == 1) return false;
        if (color[y] == 0) {
          color[y] = 1;
          frames.push_back({y, 0});
        }
      } else {
        color[x] = 2;
        frames.pop_back();
      }
    }
  }
  return true;
}

std::unique_ptr<GesTree> GesTree::standalone(const DynamicDigraph& g,
                                             const std::vector<std::vector<VertexId>>& node_sets,
                                             VertexId root,
                                             const std::vector<std::vector<VertexId>>& s_sets,
                                             Weight depth) {
  auto part = std::make_unique<Partition>(g.vertex_count(), node_sets);
  std::vector<NodeId> nodes;
  for (const auto& ns : node_sets) nodes.push_back(part->node_of(ns.front()));
  std::vector<NodeId> s_nodes;
  for (const auto& ss : s_sets) {
    if (ss.size() != 1) fail(Err::NotSingleton, "feedback sets must be singleton node sets");
    s_nodes.push_back(part->node_of(ss.front()));
  }
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
  auto tree = std::unique_ptr<GesTree>(
      new GesTree(g, *part, LevelFilter{}, nodes, s_nodes, root, depth));
  tree->owned_part_ = std::move(part);
  tree->part_ = tree->owned_part_.get();
  return tree;
}

}  // namespace dygraph
