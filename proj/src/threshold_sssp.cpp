#include "dygraph/threshold_sssp.hpp"

#include <algorithm>
#include <cmath>

#include "dygraph/oracles.hpp"

namespace dygraph {

namespace {

int log2_floor(std::int64_t x) {
  int j = 0;
  while ((std::int64_t{2} << j) <= x) ++j;
  return j;
}

}  // namespace

BucketedTree::BucketedTree(const DynamicDigraph& g, const std::vector<std::int64_t>& topo_order,
                           VertexId root, Weight delta, double eps)
    : g_(&g), topo_(topo_order), root_(root), delta_(delta), eps_(eps) {
  // Validate acyclicity: every alive edge must go forward in the order.
  for (EdgeId e = 0; e < g.edge_slot_count(); ++e) {
    const Edge& ed = g.edge(e);
    if (ed.alive && topo_[ed.tail] >= topo_[ed.head]) {
      fail(Err::NotADag, "order is not topological for the given graph");
    }
  }
  int n = g.vertex_count();
  delta_max_ = static_cast<Weight>(std::ceil((1.0 + 4.0 * eps_) * static_cast<double>(delta_)));
  bucket_count_ = log2_floor(std::max<std::int64_t>(1, n)) + 2;
  steps_.resize(bucket_count_);
  for (int j = 0; j < bucket_count_; ++j) {
    double raw = std::exp2(j) * eps_ * static_cast<double>(delta_) / n;
    steps_[j] = std::max<Weight>(1, static_cast<Weight>(std::ceil(raw)));
  }

  est_.assign(n, kInf);
  cert_.assign(n, kNoEdge);
  pending_.assign(n, 0);
  buckets_.assign(n, std::vector<std::vector<NodeId>>(bucket_count_));
  scan_counts_.assign(n, std::vector<std::int64_t>(bucket_count_, 0));
  last_scan_value_.assign(n, std::vector<Weight>(bucket_count_, -1));
  queue_.reset(delta_max_ + 1);

  for (EdgeId e = 0; e < g.edge_slot_count(); ++e) {
    const Edge& ed = g.edge(e);
    if (!ed.alive) continue;
    auto key = std::make_pair(ed.head, ed.tail);
    auto [it, fresh] = dag_pair_edges_.try_emplace(key);
    it->second.push_back(e);
    if (fresh) {
      int j = bucket_of_gap(topo_[ed.head] - topo_[ed.tail]);
      set_bucket_entry(ed.head, ed.tail, j);
    }
  }
  init_estimates();
}

BucketedTree::BucketedTree(Ato& ato, VertexId root, Weight delta, double eps, double quality)
    : g_(&ato.graph()), ato_(&ato), root_(root), delta_(delta), eps_(eps), quality_(quality) {
  int n = g_->vertex_count();
  delta_max_ = static_cast<Weight>(
      std::ceil((1.0 + eps_) * static_cast<double>(delta_) + eps_ * n / quality_));
  bucket_count_ = log2_floor(std::max<std::int64_t>(1, n)) + 2;
  steps_.resize(bucket_count_);
  for (int j = 0; j < bucket_count_; ++j) {
    // Half the budget goes to the eps*delta term, half to eps*n/q.
    double raw = std::exp2(j) * (eps_ / 2.0) / quality_;
    steps_[j] = std::max<Weight>(1, static_cast<Weight>(std::ceil(raw)));
  }
  queue_.reset(delta_max_ + 1);
  edge_key_.assign(g_->edge_slot_count(), {kNoEdge, kNoEdge});

  int width = ato.partition().node_count();
  est_.assign(width, kInf);
  cert_.assign(width, kNoEdge);
  pending_.assign(width, 0);
  buckets_.assign(width, std::vector<std::vector<NodeId>>(bucket_count_));
  scan_counts_.assign(width, std::vector<std::int64_t>(bucket_count_, 0));
  last_scan_value_.assign(width, std::vector<Weight>(bucket_count_, -1));

  for (EdgeId e = 0; e < g_->edge_slot_count(); ++e) {
    if (g_->edge(e).alive) register_edge(e);
  }
  change_offset_ = ato.change_log().size();
  last_generation_ = ato.partition().generation();
  init_estimates();
}

NodeId BucketedTree::node_of(VertexId v) const { return ato_ ? ato_->node_of(v) : v; }

std::int64_t BucketedTree::order_of(NodeId x) const { return ato_ ? ato_->tau(x) : topo_[x]; }

std::int64_t BucketedTree::gap(NodeId a, NodeId b) const {
  if (!ato_) return std::llabs(topo_[a] - topo_[b]);
  std::int64_t ta = ato_->tau(a), tb = ato_->tau(b);
  if (ta < tb) return tb - (ta + ato_->partition().size_of(a) - 1);
  return ta - (tb + ato_->partition().size_of(b) - 1);
}

int BucketedTree::bucket_of_gap(std::int64_t g) const {
  return std::min(bucket_count_ - 1, log2_floor(std::max<std::int64_t>(1, g)));
}

Weight BucketedTree::min_weight(NodeId x, NodeId y) const {
  if (ato_) {
    auto it = selectors_.find({x, y});
    if (it == selectors_.end() || it->second.edges.empty()) return kInf;
    return it->second.edges.begin()->first;
  }
  auto it = dag_pair_edges_.find({y, x});  // keyed (head, tail)
  if (it == dag_pair_edges_.end()) return kInf;
  Weight best = kInf;
  for (EdgeId e : it->second) {
    if (g_->edge(e).alive) best = std::min(best, g_->edge(e).weight);
  }
  return best;
}

void BucketedTree::ensure_node(NodeId x) {
  if (x < static_cast<NodeId>(est_.size())) return;
  std::size_t sz = x + 1;
  est_.resize(sz, kInf);
  cert_.resize(sz, kNoEdge);
  pending_.resize(sz, 0);
  buckets_.resize(sz, std::vector<std::vector<NodeId>>(bucket_count_));
  scan_counts_.resize(sz, std::vector<std::int64_t>(bucket_count_, 0));
  last_scan_value_.resize(sz, std::vector<Weight>(bucket_count_, -1));
}

void BucketedTree::set_bucket_entry(NodeId owner, NodeId member, int j) {
  auto key = std::make_pair(owner, member);
  auto it = bucket_index_.find(key);
  if (it != bucket_index_.end()) {
    if (it->second == j) return;
    drop_bucket_entry(owner, member);
  }
  buckets_[owner][j].push_back(member);
  bucket_index_[key] = j;
}

void BucketedTree::drop_bucket_entry(NodeId owner, NodeId member) {
  auto key = std::make_pair(owner, member);
  auto it = bucket_index_.find(key);
  if (it == bucket_index_.end()) return;
  auto& vec = buckets_[owner][it->second];
  auto pos = std::find(vec.begin(), vec.end(), member);
  if (pos != vec.end()) {
    *pos = vec.back();
    vec.pop_back();
  }
  bucket_index_.erase(it);
}

void BucketedTree::refresh_bucket_entry(NodeId owner, NodeId member) {
  if (bucket_index_.count({owner, member}) == 0) return;
  set_bucket_entry(owner, member, bucket_of_gap(gap(owner, member)));
}

void BucketedTree::register_edge(EdgeId e) {
  const Edge& ed = g_->edge(e);
  NodeId a = node_of(ed.tail), b = node_of(ed.head);
  if (static_cast<std::size_t>(e) >= edge_key_.size()) edge_key_.resize(e + 1, {kNoEdge, kNoEdge});
  edge_key_[e] = {a, b};
  if (a == b) return;  // contracted self-loop: tracked but inert
  ensure_node(a);
  ensure_node(b);
  selectors_[{a, b}].edges.insert({ed.weight, e});
  if (bucket_index_.count({b, a}) == 0) set_bucket_entry(b, a, bucket_of_gap(gap(b, a)));
}

void BucketedTree::unregister_edge(EdgeId e) {
  auto [a, b] = edge_key_[e];
  if (a == kNoEdge || a == b) return;
  auto it = selectors_.find({a, b});
  if (it != selectors_.end()) {
    it->second.edges.erase({g_->edge(e).weight, e});
    if (it->second.edges.empty()) {
      // Keep the bucket entry; scans skip pairs with empty selectors.
      selectors_.erase(it);
    }
  }
  edge_key_[e] = {kNoEdge, kNoEdge};
}

void BucketedTree::init_estimates() {
  // Fresh Dijkstra over the node graph.
  BucketQueue q(delta_max_ + 1);
  NodeId r = root_node();
  est_[r] = 0;
  q.push(0, r);
  std::vector<char> done(est_.size(), 0);
  while (!q.empty()) {
    auto [d, x] = q.pop();
    if (done[x] || d != est_[x]) continue;
    done[x] = 1;
    if (ato_) {
      for (VertexId v : ato_->partition().members(x)) {
        for (EdgeId e : g_->out_edges(v)) {
          NodeId y = node_of(g_->edge(e).head);
          if (y == x) continue;
          Weight nd = d + g_->edge(e).weight;
          if (nd <= delta_max_ && nd < est_[y]) {
            est_[y] = nd;
            cert_[y] = e;
            q.push(nd, y);
          }
        }
      }
    } else {
      for (EdgeId e : g_->out_edges(x)) {
        NodeId y = g_->edge(e).head;
        Weight nd = d + g_->edge(e).weight;
        if (nd <= delta_max_ && nd < est_[y]) {
          est_[y] = nd;
          cert_[y] = e;
          q.push(nd, y);
        }
      }
    }
  }
}

void BucketedTree::pend(NodeId x) {
  if (pending_[x] || est_[x] == kInf) return;
  pending_[x] = 1;
  queue_.push(est_[x], x);
}

bool BucketedTree::cert_valid(NodeId x) const {
  EdgeId e = cert_[x];
  if (e == kNoEdge || !g_->edge(e).alive) return false;
  NodeId a = node_of(g_->edge(e).tail), b = node_of(g_->edge(e).head);
  if (b != x || a == x) return false;
  if (est_[a] == kInf) return false;
  return est_[a] + g_->edge(e).weight <= est_[x];
}

void BucketedTree::raise_and_invalidate(NodeId x, Weight value) {
  est_[x] = value > delta_max_ ? kInf : value;
  cert_[x] = kNoEdge;
  if (ato_) {
    for (VertexId v : ato_->partition().members(x)) {
      for (EdgeId e : g_->out_edges(v)) {
        NodeId y = node_of(g_->edge(e).head);
        if (y != x && cert_[y] == e) pend(y);
      }
    }
  } else {
    for (EdgeId e : g_->out_edges(x)) {
      NodeId y = g_->edge(e).head;
      if (cert_[y] == e) pend(y);
    }
  }
  pend(x);
}

void BucketedTree::settle() {
  NodeId r = root_node();
  while (!queue_.empty()) {
    auto [key, x] = queue_.pop();
    if (!pending_[x]) continue;
    if (key != est_[x]) {
      pending_[x] = 0;
      pend(x);
      continue;
    }
    pending_[x] = 0;
    if (x == r || est_[x] == kInf || cert_valid(x)) continue;

    Weight t = est_[x];
    // Scan the buckets whose step divides t; in ato mode all classes up to
    // the largest eligible one are scanned.
    EdgeId found = kNoEdge;
    // Estimates are monotone, so a bucket is scanned at most once per value;
    // a certificate that breaks at an unchanged value waits for the next
    // eligible multiple.
    auto scan_bucket = [&](int j) {
      if (last_scan_value_[x][j] == t) return false;
      last_scan_value_[x][j] = t;
      ++scan_counts_[x][j];
      total_scan_events_ += 1 + static_cast<std::int64_t>(buckets_[x][j].size());
      for (NodeId y : buckets_[x][j]) {
        Weight w = min_weight(y, x);
        if (w == kInf || est_[y] == kInf) continue;
        if (est_[y] + w <= t) {
          auto it = ato_ ? selectors_.find({y, x}) : selectors_.end();
          if (ato_) {
            found = it->second.edges.begin()->second;
          } else {
            for (EdgeId e : dag_pair_edges_.at({x, y})) {
              if (g_->edge(e).alive && g_->edge(e).weight == w) {
                found = e;
                break;
              }
            }
          }
          return true;
        }
      }
      return false;
    };

    if (ato_) {
      int jmax = 0;
      for (int j = 0; j < bucket_count_; ++j) {
        if (t % steps_[j] == 0) jmax = j;
      }
      for (int j = 0; j <= jmax && found == kNoEdge; ++j) scan_bucket(j);
    } else {
      for (int j = 0; j < bucket_count_ && found == kNoEdge; ++j) {
        if (t % steps_[j] == 0) scan_bucket(j);
      }
    }
    if (found != kNoEdge) {
      cert_[x] = found;
      continue;
    }
    // Jump straight to the next scan-eligible value.
    Weight next = kInf;
    for (int j = 0; j < bucket_count_; ++j) {
      Weight step = steps_[j];
      Weight cand = (t / step + 1) * step;
      next = std::min(next, cand);
    }
    raise_and_invalidate(x, next);
  }
}

void BucketedTree::on_edge_deleted(EdgeId e) {
  if (ato_) fail(Err::BadParams, "use on_ato_deleted in ato mode");
  NodeId y = g_->edge(e).head;
  if (cert_[y] == e) pend(y);
  settle();
}

void BucketedTree::apply_changes(const std::vector<AtoChangeRecord>& records) {
  if (!ato_) fail(Err::BadParams, "change records only apply in ato mode");
  for (const auto& rec : records) {
    if (rec.generation != last_generation_ + 1) {
      fail(Err::InconsistentChangeRecord, "change records out of sequence");
    }
    process_record(rec);
    last_generation_ = rec.generation;
  }
  settle();
}

void BucketedTree::on_ato_deleted(EdgeId e) {
  if (!ato_) fail(Err::BadParams, "not an ato-mode tree");
  // Unregister the dead edge first: selectors must never expose dead edges
  // to a settle pass.
  if (edge_key_[e].first != kNoEdge) {
    NodeId head_node = edge_key_[e].second;
    bool was_cert = head_node != kNoEdge && head_node < static_cast<NodeId>(cert_.size()) &&
                    cert_[head_node] == e;
    unregister_edge(e);
    if (was_cert) pend(head_node);
  }
  const auto& log = ato_->change_log();
  std::vector<AtoChangeRecord> fresh(log.begin() + change_offset_, log.end());
  change_offset_ = log.size();
  apply_changes(fresh);
  settle();
}

void BucketedTree::process_record(const AtoChangeRecord& rec) {
  const Partition& part = ato_->partition();
  NodeId old_node = rec.old_node;
  Weight seed = est_[old_node];
  EdgeId old_cert = cert_[old_node];

  std::int64_t old_size = 0;
  for (NodeId p : rec.parts) {
    ensure_node(p);
    old_size += part.size_of(p);
  }

  for (NodeId p : rec.parts) {
    est_[p] = seed;
    cert_[p] = kNoEdge;
  }
  // The part holding the old certificate head keeps the certificate; the
  // others re-enter the queue.
  NodeId cert_holder = -1;
  if (old_cert != kNoEdge && g_->edge(old_cert).alive) {
    cert_holder = node_of(g_->edge(old_cert).head);
    bool holder_is_part = false;
    for (NodeId p : rec.parts) holder_is_part |= p == cert_holder;
    if (holder_is_part) {
      cert_[cert_holder] = old_cert;
    } else {
      cert_holder = -1;
    }
  }
  for (NodeId p : rec.parts) {
    if (p != cert_holder && est_[p] != kInf) pend(p);
  }

  // Re-key selectors for the edges incident to non-inheriting parts; edges
  // internal to the inheritor stay self-loops.
  for (NodeId p : rec.parts) {
    if (p == old_node) continue;
    for (VertexId v : part.members(p)) {
      for (EdgeId e : g_->out_edges(v)) {
        auto key = std::make_pair(node_of(g_->edge(e).tail), node_of(g_->edge(e).head));
        if (edge_key_[e] != key) {
          unregister_edge(e);
          register_edge(e);
        }
      }
      for (EdgeId e : g_->in_edges(v)) {
        auto key = std::make_pair(node_of(g_->edge(e).tail), node_of(g_->edge(e).head));
        if (edge_key_[e] != key) {
          unregister_edge(e);
          register_edge(e);
        }
      }
    }
  }

  // Bucket refresh: classes that may have gone stale are recomputed; the
  // inheritor's farther classes may stay one class low, which only causes
  // extra scans.
  for (NodeId p : rec.parts) {
    std::int64_t lo = part.size_of(p), hi = old_size - 1;
    int jrule = 0;
    for (int j = 0; j < bucket_count_; ++j) {
      std::int64_t step = std::int64_t{1} << j;
      if ((hi / step) * step >= lo) jrule = j;
    }
    int limit = std::min(bucket_count_ - 1, jrule + 1);
    for (int j = 0; j <= limit; ++j) {
      std::vector<NodeId> entries = buckets_[p][j];
      for (NodeId y : entries) refresh_bucket_entry(p, y);
    }
    // Reassign p inside other nodes' low buckets.
    std::vector<std::pair<NodeId, NodeId>> moves;
    for (auto& [key, j] : bucket_index_) {
      if (key.second == p && j <= jrule) moves.push_back(key);
    }
    for (auto& key : moves) refresh_bucket_entry(key.first, key.second);
  }
}

Weight BucketedTree::node_estimate(NodeId x) const {
  if (x >= static_cast<NodeId>(est_.size())) return kInf;
  return est_[x];
}

Weight BucketedTree::vertex_estimate(VertexId v) const {
  Weight base = node_estimate(node_of(v));
  if (base == kInf) return kInf;
  if (!ato_) return base;
  return base + static_cast<Weight>(std::llround(ato_->eta_diam()));
}

std::int64_t BucketedTree::bucket_scans(NodeId x, int j) const {
  if (x >= static_cast<NodeId>(scan_counts_.size())) return 0;
  return scan_counts_[x][j];
}

bool BucketedTree::buckets_consistent() const {
  for (const auto& [key, j] : bucket_index_) {
    std::int64_t gp = gap(key.first, key.second);
    if (gp < (std::int64_t{1} << j) && j > 0) return false;
  }
  return true;
}

MultiScaleDag::MultiScaleDag(const DynamicDigraph& g, const std::vector<std::int64_t>& topo_order,
                             VertexId root, double eps) {
  Weight horizon = static_cast<Weight>(g.vertex_count()) * std::max<Weight>(1, g.max_weight());
  for (Weight d = 1; d <= 2 * horizon; d *= 2) {
    trees_.push_back(std::make_unique<BucketedTree>(g, topo_order, root, d, eps));
  }
}

}  // namespace dygraph
