#include "dygraph/ato.hpp"

#include <algorithm>
#include <cmath>

#include "dygraph/oracles.hpp"
#include "dygraph/separators.hpp"

namespace dygraph {

Ato::Ato(DynamicDigraph& g, const AtoConfig& cfg, Rng rng)
    : g_(&g), cfg_(cfg), rng_(rng), part_(g.vertex_count()) {
  if (cfg_.delta < 16) fail(Err::BadParams, "ato depth scale must be >= 16");
  int n = g.vertex_count();
  zeta_ = (cfg_.c + 2.0) * std::log2(std::max(2, n));
  gprime_.assign(g.edge_slot_count(), 0);
  for (EdgeId e = 0; e < g.edge_slot_count(); ++e) gprime_[e] = g.edge(e).alive;

  // Iterative partitioning over size classes: small components get split at
  // proportionally small depth, measured in the full graph.
  int rounds = static_cast<int>(std::ceil(std::log2(std::max(2, cfg_.delta))));
  for (int i = 0; i <= rounds; ++i) {
    double bound = static_cast<double>(n) / std::exp2(i);
    double depth = static_cast<double>(cfg_.delta) / std::exp2(i);
    std::vector<VertexId> all(n);
    for (int v = 0; v < n; ++v) all[v] = v;
    for (const auto& x : gprime_sccs_topo(all)) {
      if (static_cast<double>(x.size()) > bound || x.size() <= 1) continue;
      auto cut = separators::partition_low_diameter(*g_, x, nullptr, depth, zeta_, rng_);
      if (!cut) fail(Err::BadParams, "partitioning failed twice");
      for (EdgeId e : *cut) gprime_[e] = 0;
    }
  }

  // Assemble the partition and the interval labels from a static topological
  // order of the pruned graph's condensation.
  std::vector<VertexId> all(n);
  for (int v = 0; v < n; ++v) all[v] = v;
  auto classes = gprime_sccs_topo(all);
  part_ = Partition(n, classes);
  tau_.assign(part_.node_count(), 0);
  std::int64_t next = 0;
  for (const auto& cls : classes) {
    tau_[part_.node_of(cls.front())] = next;
    next += static_cast<std::int64_t>(cls.size());
  }
  for (const auto& cls : classes) {
    if (cls.size() > 1) build_instance(part_.node_of(cls.front()));
  }
  resolve_violations();
}

// SCC classes of the G'-subgraph induced by `scope`, in topological order.
std::vector<std::vector<VertexId>> Ato::gprime_sccs_topo(const std::vector<VertexId>& scope) const {
  oracles::Snapshot snap;
  snap.n = g_->vertex_count();
  std::vector<char> mask(g_->vertex_count(), 0);
  for (VertexId v : scope) mask[v] = 1;
  for (VertexId v : scope) {
    for (EdgeId e : g_->out_edges(v)) {
      if (gprime_[e] && mask[g_->edge(e).head]) snap.edges.push_back(g_->edge(e));
    }
  }
  auto ids = oracles::scc_tarjan(snap);
  int k = 0;
  for (VertexId v : scope) k = std::max(k, ids[v] + 1);
  std::vector<std::vector<VertexId>> classes(k);
  for (VertexId v : scope) classes[ids[v]].push_back(v);
  // Tarjan emits components sinks-first; reverse for topological order.
  std::vector<std::vector<VertexId>> out;
  for (int c = k - 1; c >= 0; --c) {
    if (!classes[c].empty()) out.push_back(std::move(classes[c]));
  }
  return out;
}

double Ato::node_threshold(NodeId x) const {
  return static_cast<double>(cfg_.delta) * part_.size_of(x) / g_->vertex_count();
}

void Ato::build_instance(NodeId x) {
  const auto& mem = part_.members(x);
  Inst inst;
  inst.center = mem[rng_.below(mem.size())];
  inst.threshold = node_threshold(x);
  Weight cap = std::max<Weight>(0, static_cast<Weight>(std::floor(inst.threshold)));
  inst.out = std::make_unique<EsTree>(*g_, inst.center, cap, Direction::Out, &mem);
  inst.in = std::make_unique<EsTree>(*g_, inst.center, cap, Direction::In, &mem);
  insts_[x] = std::move(inst);
}

void Ato::refresh_node(NodeId x) {
  auto classes = gprime_sccs_topo(part_.members(x));
  if (classes.size() <= 1) return;
  std::int64_t base = tau_[x];
  auto ids = part_.split_node(x, classes);
  tau_.resize(part_.node_count(), 0);
  AtoChangeRecord rec;
  rec.old_node = x;
  rec.parts = ids;
  rec.generation = part_.generation();
  changes_.push_back(rec);
  insts_.erase(x);
  for (std::size_t k = 0; k < classes.size(); ++k) {
    tau_[ids[k]] = base;
    base += static_cast<std::int64_t>(classes[k].size());
    if (classes[k].size() > 1) build_instance(ids[k]);
  }
}

std::optional<std::pair<NodeId, VertexId>> Ato::find_violation() {
  for (auto& [x, inst] : insts_) {
    if (auto v = inst.out->first_capped()) return std::make_pair(x, *v);
    if (auto v = inst.in->first_capped()) return std::make_pair(x, *v);
  }
  return std::nullopt;
}

void Ato::resolve_violations() {
  while (auto viol = find_violation()) {
    auto [x, t] = *viol;
    ++separator_rounds_;
    const auto& mem = part_.members(x);
    double ball_depth = node_threshold(x) / 2.0;
    double part_depth = node_threshold(x) / 4.0;
    // t could not certify a small distance to or from the center; cut its
    // ball on the side that is broken.
    bool forward = insts_.at(x).in->estimate(t) == EsTree::kInf;
    auto ball = separators::out_separator(*g_, mem, &gprime_, t, std::max(ball_depth, 1e-9), zeta_,
                                          rng_, !forward);
    if (ball.failed) {
      ball = separators::out_separator(*g_, mem, &gprime_, t, std::max(ball_depth, 1e-9), zeta_,
                                       rng_, !forward);
      if (ball.failed) fail(Err::BadParams, "ball sampling failed twice");
    }
    auto cut = separators::partition_low_diameter(*g_, ball.v_sep, &gprime_,
                                                  std::max(part_depth, 1e-9), zeta_, rng_);
    if (!cut) fail(Err::BadParams, "partitioning failed twice");
    for (EdgeId e : ball.e_sep) gprime_[e] = 0;
    for (EdgeId e : *cut) gprime_[e] = 0;
    refresh_node(x);
  }
}

void Ato::delete_edge(VertexId u, VertexId v) {
  EdgeId e = g_->find_alive_edge(u, v);
  if (e == kNoEdge) fail(Err::NoSuchEdge, "no alive edge");
  g_->delete_edge_by_id(e);
  on_edge_deleted(e);
}

void Ato::on_edge_deleted(EdgeId e) {
  const Edge& ed = g_->edge(e);
  bool was_gprime = gprime_[e];
  gprime_[e] = 0;
  NodeId xu = part_.node_of(ed.tail), xv = part_.node_of(ed.head);
  if (xu == xv) {
    auto it = insts_.find(xu);
    if (it != insts_.end()) {
      it->second.out->notify_delete(e);
      it->second.in->notify_delete(e);
    }
    if (was_gprime) refresh_node(xu);
  }
  resolve_violations();
}

std::int64_t Ato::topological_cost(const std::vector<EdgeId>& path) const {
  std::int64_t total = 0;
  for (std::size_t i = 0; i < path.size(); ++i) {
    const Edge& ed = g_->edge(path[i]);
    if (!ed.alive) fail(Err::NotAPath, "dead edge on path");
    if (i > 0 && g_->edge(path[i - 1]).head != ed.tail) fail(Err::NotAPath, "edges do not chain");
    total += std::llabs(tau_[part_.node_of(ed.tail)] - tau_[part_.node_of(ed.head)]);
  }
  return total;
}

std::int64_t Ato::backward_cost(const std::vector<EdgeId>& path) const {
  std::int64_t total = 0;
  for (std::size_t i = 0; i < path.size(); ++i) {
    const Edge& ed = g_->edge(path[i]);
    if (!ed.alive) fail(Err::NotAPath, "dead edge on path");
    if (i > 0 && g_->edge(path[i - 1]).head != ed.tail) fail(Err::NotAPath, "edges do not chain");
    total += std::max<std::int64_t>(0, tau_[part_.node_of(ed.tail)] - tau_[part_.node_of(ed.head)]);
  }
  return total;
}

Ato::QualityReport Ato::quality_report(
    const std::vector<std::pair<VertexId, VertexId>>& pairs) const {
  QualityReport rep;
  rep.pairs_sampled = static_cast<int>(pairs.size());
  oracles::Snapshot snap(*g_);
  double sum = 0.0;
  for (auto [s, t] : pairs) {
    auto path = oracles::shortest_path(snap, s, t);
    if (!path) continue;
    ++rep.pairs_connected;
    std::int64_t cost = 0;
    for (int ei : *path) {
      const Edge& ed = snap.edges[ei];
      cost += std::llabs(tau_[part_.node_of(ed.tail)] - tau_[part_.node_of(ed.head)]);
    }
    sum += static_cast<double>(cost);
    rep.max_cost = std::max(rep.max_cost, cost);
  }
  if (rep.pairs_connected > 0) rep.mean_cost = sum / rep.pairs_connected;
  return rep;
}

}  // namespace dygraph
