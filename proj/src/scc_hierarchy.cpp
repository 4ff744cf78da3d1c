#include "dygraph/scc_hierarchy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dygraph/oracles.hpp"

namespace dygraph {

int default_hierarchy_depth(int n) {
  double lg = std::log2(std::max(2, n));
  return std::max(32, static_cast<int>(std::ceil(64.0 * lg * lg)));
}

Hierarchy::Hierarchy(DynamicDigraph& g, const std::vector<VertexId>& component, int delta, Rng rng)
    : g_(&g), comp_(component), delta_(delta), rng_(rng) {
  if (delta_ < 32) fail(Err::BadParams, "hierarchy depth must be >= 32");
  std::sort(comp_.begin(), comp_.end());
  int nc = static_cast<int>(comp_.size());
  base_levels_ = static_cast<int>(std::floor(std::log2(std::max(1, nc)))) + 1;

  lvl_.assign(g.vertex_count(), std::numeric_limits<int>::max());
  for (VertexId v : comp_) lvl_[v] = 0;

  levels_.emplace_back();
  levels_[0].part = std::make_unique<Partition>(g.vertex_count());
  // At the default depth the separator sets halve per level and die out
  // within the base levels; smaller depths may need extra levels until no
  // separators remain, so the top partition really is the condensation.
  for (int i = 0;; ++i) {
    bool had_separators = build_next_level(i);
    if (i + 1 >= base_levels_ && !had_separators) break;
    if (i > base_levels_ + 48) fail(Err::BadParams, "hierarchy level cap exceeded");
    if (i + 1 >= base_levels_) ++stats_.extra_levels;
  }
}

bool Hierarchy::build_next_level(int i) {
  std::vector<NodeId> working;
  working.reserve(comp_.size());
  {
    std::vector<char> seen(levels_[i].part->node_count(), 0);
    for (VertexId v : comp_) {
      NodeId x = levels_[i].part->node_of(v);
      if (!seen[x]) {
        seen[x] = 1;
        working.push_back(x);
      }
    }
  }
  std::sort(working.begin(), working.end());
  auto ctx = context(i);
  auto res = separators::split(ctx, working, s_flags(i, working), delta_ / 2);
  for (NodeId s : res.s_split) lvl_[levels_[i].part->members(s).front()] = i + 1;

  std::vector<std::vector<VertexId>> groups_v;
  groups_v.reserve(res.parts.size());
  for (const auto& part : res.parts) {
    std::vector<std::vector<VertexId>> sets;
    for (NodeId x : part) sets.push_back(levels_[i].part->members(x));
    groups_v.push_back(flatten(sets));
  }
  levels_.emplace_back();
  levels_[i + 1].part = std::make_unique<Partition>(g_->vertex_count(), groups_v);
  for (std::size_t k = 0; k < res.parts.size(); ++k) {
    NodeId key = levels_[i + 1].part->node_of(groups_v[k].front());
    build_group(i, res.parts[k], key);
  }
  return !res.s_split.empty();
}

separators::NodeContext Hierarchy::context(int i) const {
  separators::NodeContext ctx;
  ctx.g = g_;
  ctx.part = levels_[i].part.get();
  ctx.filter = LevelFilter{&lvl_, i};
  return ctx;
}

std::vector<char> Hierarchy::s_flags(int i, const std::vector<NodeId>& nodes) const {
  std::vector<char> flags(levels_[i].part->node_count(), 0);
  for (NodeId x : nodes) {
    const auto& mem = levels_[i].part->members(x);
    if (mem.size() == 1 && lvl_[mem.front()] >= i) flags[x] = 1;
  }
  return flags;
}

void Hierarchy::build_group(int i, const std::vector<NodeId>& nodes, NodeId key) {
  const Partition& part = *levels_[i].part;
  std::vector<std::vector<VertexId>> sets;
  for (NodeId x : nodes) sets.push_back(part.members(x));
  std::vector<VertexId> flat = flatten(sets);
  VertexId center = flat[rng_.below(flat.size())];
  std::vector<NodeId> s_in;
  for (NodeId x : nodes) {
    const auto& mem = part.members(x);
    if (mem.size() == 1 && lvl_[mem.front()] >= i) s_in.push_back(x);
  }
  levels_[i].groups[key] = std::make_unique<GesTree>(*g_, part, LevelFilter{&lvl_, i}, nodes, s_in,
                                                     center, delta_);
}

void Hierarchy::ensure_level(int i) {
  // Extends the hierarchy when a separator would land beyond the current top
  // (cannot happen at the default depth; kept for small depths).
  while (i >= level_count()) {
    if (level_count() >= base_levels_ + 48) fail(Err::BadParams, "hierarchy level cap exceeded");
    ++stats_.extra_levels;
    build_next_level(level_count());
  }
}

void Hierarchy::on_edge_deleted(EdgeId e) {
  const Edge& ed = g_->edge(e);
  if (lvl_[ed.tail] == std::numeric_limits<int>::max() ||
      lvl_[ed.head] == std::numeric_limits<int>::max()) {
    fail(Err::NoSuchVertex, "edge outside this component");
  }
  for (int i = 0; i < level_count(); ++i) {
    NodeId gu = levels_[i + 1].part->node_of(ed.tail);
    NodeId gv = levels_[i + 1].part->node_of(ed.head);
    if (gu == gv) {
      auto it = levels_[i].groups.find(gu);
      if (it != levels_[i].groups.end()) it->second->notify_edge_deleted(e);
    }
    process_level(i, e);
  }
}

void Hierarchy::process_level(int i, EdgeId) {
  for (;;) {
    NodeId gid = -1;
    VertexId witness = -1;
    for (auto& [key, ges] : levels_[i].groups) {
      if (auto v = ges->get_unreachable_vertex()) {
        gid = key;
        witness = *v;
        break;
      }
    }
    if (gid == -1) return;
    handle_violation(i, gid, witness);
  }
}

void Hierarchy::handle_violation(int i, NodeId gid, VertexId witness) {
  Partition& part = *levels_[i].part;
  GesTree* ges = levels_[i].groups.at(gid).get();
  NodeId xp = part.node_of(witness);
  bool reversed = ges->distance_from_root(xp) == GesTree::kInf;

  auto ctx = context(i);
  std::vector<char> active(part.node_count(), 0);
  std::int64_t group_flat = 0;
  for (NodeId x : ges->active_nodes()) {
    active[x] = 1;
    group_flat += part.size_of(x);
  }
  std::vector<char> sf = s_flags(i, ges->active_nodes());
  auto sep = separators::node_sep(ctx, active, sf, xp, delta_ / 2, reversed);

  std::int64_t sep_flat = 0;
  for (NodeId x : sep.v_sep) sep_flat += part.size_of(x);

  std::vector<NodeId> moved_to_s = sep.s_sep;
  std::vector<std::vector<NodeId>> new_parts;
  GesTree* surviving = nullptr;

  if (3 * sep_flat <= 2 * group_flat) {
    ++stats_.prune_events;
    std::vector<NodeId> drop = sep.v_sep;
    drop.insert(drop.end(), sep.s_sep.begin(), sep.s_sep.end());
    ges->delete_nodes(drop);
    auto sub = separators::split(ctx, sep.v_sep, sf, delta_ / 2);
    for (NodeId s : sub.s_split) moved_to_s.push_back(s);
    new_parts = std::move(sub.parts);
    for (NodeId s : sep.s_sep) new_parts.push_back({s});
    surviving = ges;
  } else {
    ++stats_.full_split_events;
    std::int64_t init_flat = ges->init_flatten_size();
    std::vector<NodeId> all = ges->active_nodes();
    retired_scans_ += ges->total_scans();
    retired_indeg_ += ges->indegree_sum();
    retired_split_work_ += ges->split_edge_work();
    auto sub = separators::split(ctx, all, sf, delta_ / 2);
    moved_to_s = std::move(sub.s_split);
    new_parts = std::move(sub.parts);
    bool all_small = true;
    for (const auto& p : new_parts) {
      std::int64_t flat = 0;
      for (NodeId x : p) flat += part.size_of(x);
      if (3 * flat > 2 * init_flat) all_small = false;
    }
    if (all_small) ++stats_.full_split_all_small;
  }
  propagate_split(i, gid, new_parts, moved_to_s, surviving);
}

void Hierarchy::propagate_split(int i, NodeId gid, const std::vector<std::vector<NodeId>>& new_parts,
                                const std::vector<NodeId>& moved_to_s, GesTree* surviving) {
  Partition& part = *levels_[i].part;
  if (!moved_to_s.empty()) ensure_level(i + 1);

  // Separator levels move first so the fresh level-i trees exclude E(S_{i+1}).
  for (NodeId s : moved_to_s) lvl_[part.members(s).front()] = i + 1;

  // Fresh GES trees for the new level-i groups.
  std::vector<std::vector<VertexId>> parts_v;
  for (const auto& p : new_parts) {
    std::vector<std::vector<VertexId>> sets;
    for (NodeId x : p) sets.push_back(part.members(x));
    parts_v.push_back(flatten(sets));
  }
  if (surviving) {
    std::vector<std::vector<VertexId>> sets;
    for (NodeId x : surviving->active_nodes()) sets.push_back(part.members(x));
    parts_v.push_back(flatten(sets));
  }

  Partition& up = *levels_[i + 1].part;
  // Capture the owner one level further up before ids change.
  VertexId probe = parts_v.front().front();

  std::vector<NodeId> ids;
  if (parts_v.size() >= 2) {
    ids = up.split_node(gid, parts_v);
  } else {
    ids = {gid};
  }

  // Rebuild the level-i group map entries.
  auto old_entry = std::move(levels_[i].groups.at(gid));
  levels_[i].groups.erase(gid);
  for (std::size_t k = 0; k < new_parts.size(); ++k) {
    build_group(i, new_parts[k], ids[k]);
  }
  if (surviving) {
    levels_[i].groups[ids.back()] = std::move(old_entry);
  }

  // Propagate the node split and augmentation into the owning GES above.
  if (i + 1 < level_count()) {
    NodeId owner_key = levels_[i + 2].part->node_of(probe);
    auto it = levels_[i + 1].groups.find(owner_key);
    if (it != levels_[i + 1].groups.end()) {
      std::vector<NodeId> augmented;
      for (NodeId s : moved_to_s) augmented.push_back(up.node_of(part.members(s).front()));
      it->second->apply_split_batch(gid, ids, augmented);
    }
  }
}

int Hierarchy::s_size(int i) const {
  int count = 0;
  for (VertexId v : comp_) {
    if (lvl_[v] != std::numeric_limits<int>::max() && lvl_[v] >= i) ++count;
  }
  return count;
}

bool Hierarchy::at_rest() {
  for (int i = 0; i < level_count(); ++i) {
    for (auto& [key, ges] : levels_[i].groups) {
      if (ges->get_unreachable_vertex()) return false;
    }
  }
  return true;
}

std::int64_t Hierarchy::ges_scan_total() const {
  std::int64_t total = retired_scans_;
  for (const auto& level : levels_) {
    for (const auto& [key, ges] : level.groups) total += ges->total_scans();
  }
  return total;
}

std::int64_t Hierarchy::ges_indegree_total() const {
  std::int64_t total = retired_indeg_;
  for (const auto& level : levels_) {
    for (const auto& [key, ges] : level.groups) total += ges->indegree_sum();
  }
  return total;
}

std::int64_t Hierarchy::ges_split_work_total() const {
  std::int64_t total = retired_split_work_;
  for (const auto& level : levels_) {
    for (const auto& [key, ges] : level.groups) total += ges->split_edge_work();
  }
  return total;
}

DecrementalScc::DecrementalScc(DynamicDigraph& g, std::optional<int> delta, std::uint64_t seed)
    : g_(&g) {
  if (g.mode() == UpdateMode::Incremental) fail(Err::IncompatibleMode, "needs a decremental graph");
  oracles::Snapshot snap(g);
  comp_of_ = oracles::scc_tarjan(snap);
  auto classes = oracles::scc_classes(comp_of_);
  // Renumber components by their class order so ids are deterministic.
  for (std::size_t c = 0; c < classes.size(); ++c) {
    for (VertexId v : classes[c]) comp_of_[v] = static_cast<int>(c);
  }
  Rng master(seed);
  for (const auto& cls : classes) {
    int d = delta ? *delta : default_hierarchy_depth(static_cast<int>(cls.size()));
    hiers_.push_back(std::make_unique<Hierarchy>(g, cls, d, master.fork()));
  }
}

void DecrementalScc::delete_edge(VertexId u, VertexId v) {
  EdgeId e = g_->find_alive_edge(u, v);
  if (e == kNoEdge) fail(Err::NoSuchEdge, "no alive edge to delete");
  delete_edge_by_id(e);
}

void DecrementalScc::delete_edge_by_id(EdgeId e) {
  VertexId u = g_->edge(e).tail, v = g_->edge(e).head;
  g_->delete_edge_by_id(e);
  if (comp_of_[u] == comp_of_[v]) hiers_[comp_of_[u]]->on_edge_deleted(e);
}

bool DecrementalScc::same_scc(VertexId u, VertexId v) const {
  if (comp_of_[u] != comp_of_[v]) return false;
  return hiers_[comp_of_[u]]->same_scc(u, v);
}

Hierarchy::Stats DecrementalScc::merged_stats() const {
  Hierarchy::Stats out;
  for (const auto& h : hiers_) {
    out.full_split_events += h->stats().full_split_events;
    out.full_split_all_small += h->stats().full_split_all_small;
    out.prune_events += h->stats().prune_events;
    out.extra_levels += h->stats().extra_levels;
  }
  return out;
}

SsrReachability::SsrReachability(const DynamicDigraph& g, VertexId root, std::optional<int> delta,
                                 std::uint64_t seed)
    : root_(root) {
  aug_ = std::make_unique<DynamicDigraph>(g.vertex_count(), UpdateMode::Decremental,
                                          g.max_weight());
  for (EdgeId e = 0; e < g.edge_slot_count(); ++e) {
    const Edge& ed = g.edge(e);
    if (ed.alive) aug_->add_initial_edge(ed.tail, ed.head, ed.weight);
  }
  original_slots_ = aug_->edge_slot_count();
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    if (v != root_) aug_->add_initial_edge(v, root_, 1);
  }
  scc_ = std::make_unique<DecrementalScc>(*aug_, delta, seed);
}

void SsrReachability::delete_edge(VertexId u, VertexId v) {
  EdgeId e = aug_->find_alive_edge(u, v);
  if (e == kNoEdge || e >= original_slots_) fail(Err::NoSuchEdge, "no such original edge");
  scc_->delete_edge_by_id(e);
}

}  // namespace dygraph
