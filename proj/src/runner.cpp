#include "dygraph/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <memory>
#include <sstream>

#include "dygraph/ato.hpp"
#include "dygraph/es_tree.hpp"
#include "dygraph/ges_tree.hpp"
#include "dygraph/lazy_es_tree.hpp"
#include "dygraph/oracles.hpp"
#include "dygraph/scc_hierarchy.hpp"
#include "dygraph/threshold_sssp.hpp"

namespace dygraph {
namespace bench {

Algo parse_algo(const std::string& s) {
  if (s == "es") return Algo::Es;
  if (s == "ges") return Algo::Ges;
  if (s == "scc") return Algo::Scc;
  if (s == "ssr") return Algo::Ssr;
  if (s == "ato") return Algo::Ato;
  if (s == "dag-sssp") return Algo::DagSssp;
  if (s == "ato-sssp") return Algo::AtoSssp;
  if (s == "inc-sssp") return Algo::IncSssp;
  if (s == "inc-sssp-weighted") return Algo::IncSsspWeighted;
  fail(Err::BadParams, "unknown algo: " + s);
}

std::string algo_name(Algo a) {
  switch (a) {
    case Algo::Es: return "es";
    case Algo::Ges: return "ges";
    case Algo::Scc: return "scc";
    case Algo::Ssr: return "ssr";
    case Algo::Ato: return "ato";
    case Algo::DagSssp: return "dag-sssp";
    case Algo::AtoSssp: return "ato-sssp";
    case Algo::IncSssp: return "inc-sssp";
    case Algo::IncSsspWeighted: return "inc-sssp-weighted";
  }
  return "?";
}

bool algo_compatible(Algo a, WorkloadMode mode) {
  switch (a) {
    case Algo::Es:
      return true;
    case Algo::IncSssp:
    case Algo::IncSsspWeighted:
      return mode == WorkloadMode::Incremental;
    default:
      return mode == WorkloadMode::Decremental;
  }
}

namespace {

using Clock = std::chrono::steady_clock;

std::int64_t micros_since(Clock::time_point t0) {
  return std::chrono::duration_cast<std::chrono::microseconds>(Clock::now() - t0).count();
}

struct VerifyResult {
  bool ok = true;
  bool checked_error = false;
  double max_rel_error = 0.0;
  std::string witness;
};

// One driver per algorithm: applies updates and cross-checks on demand.
class Driver {
 public:
  virtual ~Driver() = default;
  virtual void apply(DynamicDigraph& g, const UpdateRecord& u) = 0;
  virtual VerifyResult verify(const DynamicDigraph& g) = 0;
  virtual void run_baseline(const DynamicDigraph& g) = 0;
  virtual std::int64_t events(const DynamicDigraph& g) const = 0;
};

EdgeId apply_to_graph(DynamicDigraph& g, const UpdateRecord& u) {
  switch (u.kind) {
    case UpdateRecord::Kind::DeleteEdge:
      return g.delete_edge(u.u, u.v);
    case UpdateRecord::Kind::InsertEdge:
      return g.insert_edge(u.u, u.v, u.w);
    case UpdateRecord::Kind::IncreaseWeight:
      return g.increase_weight(u.u, u.v, u.w);
  }
  fail(Err::BadParams, "bad update");
}

class EsDriver : public Driver {
 public:
  EsDriver(const DynamicDigraph& g, const RunOptions& opt)
      : depth_(opt.delta.value_or(g.vertex_count())),
        tree_(g, 0, depth_, Direction::Out) {}

  void apply(DynamicDigraph&, const UpdateRecord&) override {}
  VerifyResult verify(const DynamicDigraph& g) override {
    VerifyResult res;
    res.checked_error = true;
    oracles::Snapshot snap(g);
    auto dist = oracles::dijkstra(snap, 0);
    for (int v = 0; v < g.vertex_count(); ++v) {
      Weight want = dist[v] == oracles::kUnreachable || dist[v] > depth_ ? EsTree::kInf : dist[v];
      if (tree_.estimate(v) != want) {
        res.ok = false;
        std::ostringstream os;
        os << "es mismatch at vertex " << v;
        res.witness = os.str();
        return res;
      }
    }
    return res;
  }
  void run_baseline(const DynamicDigraph& g) override {
    oracles::Snapshot snap(g);
    volatile auto sink = oracles::dijkstra(snap, 0).size();
    (void)sink;
  }
  std::int64_t events(const DynamicDigraph&) const override { return tree_.total_scans(); }

  // The runner forwards the concrete edge id after the graph mutation.
  void on_update(EdgeId e, const UpdateRecord& u) {
    switch (u.kind) {
      case UpdateRecord::Kind::DeleteEdge:
        tree_.notify_delete(e);
        break;
      case UpdateRecord::Kind::InsertEdge:
        tree_.notify_insert(e);
        break;
      case UpdateRecord::Kind::IncreaseWeight:
        tree_.notify_weight_increase(e);
        break;
    }
  }

 private:
  Weight depth_;
  EsTree tree_;
};

class GesDriver : public Driver {
 public:
  GesDriver(const DynamicDigraph& g, const RunOptions& opt)
      : depth_(opt.delta.value_or(g.vertex_count())) {
    std::vector<std::vector<VertexId>> nodes;
    std::vector<std::vector<VertexId>> s_sets;
    for (int v = 0; v < g.vertex_count(); ++v) {
      nodes.push_back({v});
      s_sets.push_back({v});
    }
    tree_ = GesTree::standalone(g, nodes, 0, s_sets, depth_);
  }
  void apply(DynamicDigraph&, const UpdateRecord&) override {}
  void on_update(EdgeId e, const UpdateRecord& u) {
    if (u.kind == UpdateRecord::Kind::DeleteEdge) tree_->notify_edge_deleted(e);
  }
  VerifyResult verify(const DynamicDigraph& g) override {
    VerifyResult res;
    res.checked_error = true;
    oracles::Snapshot snap(g);
    std::vector<char> in_s(g.vertex_count(), 1);
    auto dout = oracles::s_distance(snap, 0, in_s);
    auto din = oracles::s_distance_to(snap, 0, in_s);
    for (int v = 0; v < g.vertex_count(); ++v) {
      Weight want_out =
          dout[v] == oracles::kUnreachable || dout[v] > depth_ ? GesTree::kInf : dout[v];
      Weight want_in = din[v] == oracles::kUnreachable || din[v] > depth_ ? GesTree::kInf : din[v];
      NodeId x = tree_->owned_partition()->node_of(v);
      if (tree_->distance_from_root(x) != want_out || tree_->distance_to_root(x) != want_in) {
        res.ok = false;
        res.witness = "ges mismatch at vertex " + std::to_string(v);
        return res;
      }
    }
    return res;
  }
  void run_baseline(const DynamicDigraph& g) override {
    oracles::Snapshot snap(g);
    std::vector<char> in_s(g.vertex_count(), 1);
    volatile auto sink = oracles::s_distance(snap, 0, in_s).size();
    (void)sink;
  }
  std::int64_t events(const DynamicDigraph&) const override { return tree_->total_scans(); }

 private:
  Weight depth_;
  std::unique_ptr<GesTree> tree_;
};

class SccDriver : public Driver {
 public:
  SccDriver(DynamicDigraph& g, const RunOptions& opt)
      : scc_(g, opt.delta, opt.seed), rng_(opt.seed ^ 0x5cc5cc5cc5ULL) {}
  void apply(DynamicDigraph&, const UpdateRecord&) override {}
  void on_update(DynamicDigraph&, EdgeId e) { scc_.delete_edge_by_id(e); }
  VerifyResult verify(const DynamicDigraph& g) override {
    VerifyResult res;
    oracles::Snapshot snap(g);
    auto ids = oracles::scc_tarjan(snap);
    int n = g.vertex_count();
    for (int k = 0; k < 50; ++k) {
      int u = rng_.below_int(n), v = rng_.below_int(n);
      if (scc_.same_scc(u, v) != (ids[u] == ids[v])) {
        res.ok = false;
        res.witness = "scc mismatch at pair " + std::to_string(u) + "," + std::to_string(v);
        return res;
      }
    }
    return res;
  }
  void run_baseline(const DynamicDigraph& g) override {
    oracles::Snapshot snap(g);
    volatile auto sink = oracles::scc_tarjan(snap).size();
    (void)sink;
  }
  std::int64_t events(const DynamicDigraph&) const override {
    std::int64_t total = 0;
    for (int c = 0; c < scc_.component_count(); ++c) total += scc_.hierarchy(c).ges_scan_total();
    return total;
  }

 private:
  DecrementalScc scc_;
  Rng rng_;
};

class SsrDriver : public Driver {
 public:
  SsrDriver(const DynamicDigraph& g, const RunOptions& opt) : ssr_(g, 0, opt.delta, opt.seed) {}
  void apply(DynamicDigraph&, const UpdateRecord& u) override { ssr_.delete_edge(u.u, u.v); }
  VerifyResult verify(const DynamicDigraph& g) override {
    VerifyResult res;
    oracles::Snapshot snap(g);
    auto reach = oracles::reachable_set(snap, 0);
    for (int v = 0; v < g.vertex_count(); ++v) {
      if (ssr_.reachable(v) != static_cast<bool>(reach[v])) {
        res.ok = false;
        res.witness = "ssr mismatch at vertex " + std::to_string(v);
        return res;
      }
    }
    return res;
  }
  void run_baseline(const DynamicDigraph& g) override {
    oracles::Snapshot snap(g);
    volatile auto sink = oracles::reachable_set(snap, 0).size();
    (void)sink;
  }
  std::int64_t events(const DynamicDigraph&) const override {
    std::int64_t total = 0;
    const auto& scc = ssr_.scc();
    for (int c = 0; c < scc.component_count(); ++c) total += scc.hierarchy(c).ges_scan_total();
    return total;
  }

 private:
  SsrReachability ssr_;
};

class AtoDriver : public Driver {
 public:
  AtoDriver(DynamicDigraph& g, const RunOptions& opt)
      : ato_(g, AtoConfig{std::max(16, opt.delta.value_or(default_scale(g))), 1.0, 1.0, 1},
             Rng(opt.seed)) {
    remember(g);
  }
  static int default_scale(const DynamicDigraph& g) {
    return std::max(16, g.vertex_count() / 4);
  }
  void apply(DynamicDigraph&, const UpdateRecord&) override {}
  void on_update(DynamicDigraph&, EdgeId e) {
    ato_.on_edge_deleted(e);
    remember(ato_.graph());
  }
  VerifyResult verify(const DynamicDigraph& g) override {
    VerifyResult res;
    const Partition& part = ato_.partition();
    int n = g.vertex_count();
    // Refinement against the previous stage.
    for (int v = 0; v < n; ++v) {
      for (int w = v + 1; w < n; ++w) {
        if (part.node_of(v) == part.node_of(w) && prev_node_[v] != prev_node_[w]) {
          res.ok = false;
          res.witness = "ato refinement broken";
          return res;
        }
      }
    }
    // Disjoint interval labels and a topological order of G'.
    std::vector<std::pair<std::int64_t, std::int64_t>> iv;
    std::vector<char> seen(part.node_count(), 0);
    for (int v = 0; v < n; ++v) {
      NodeId x = part.node_of(v);
      if (!seen[x]) {
        seen[x] = 1;
        iv.push_back({ato_.tau(x), ato_.tau(x) + part.size_of(x)});
      }
    }
    std::sort(iv.begin(), iv.end());
    for (std::size_t i = 1; i < iv.size(); ++i) {
      if (iv[i].first < iv[i - 1].second) {
        res.ok = false;
        res.witness = "ato intervals overlap";
        return res;
      }
    }
    for (EdgeId e = 0; e < g.edge_slot_count(); ++e) {
      if (!g.edge(e).alive || !ato_.edge_in_gprime(e)) continue;
      NodeId a = part.node_of(g.edge(e).tail), b = part.node_of(g.edge(e).head);
      if (a != b && ato_.tau(a) >= ato_.tau(b)) {
        res.ok = false;
        res.witness = "ato order violated by a pruned-graph edge";
        return res;
      }
    }
    // Weak diameter in the full graph.
    oracles::Snapshot snap(g);
    for (int v = 0; v < n; ++v) {
      NodeId x = part.node_of(v);
      if (part.members(x).front() != v || part.size_of(x) <= 1) continue;
      Weight diam = oracles::weak_diameter(snap, part.members(x));
      double bound = ato_.eta_diam() * part.size_of(x) / n;
      if (diam == oracles::kUnreachable || static_cast<double>(diam) > bound + 1e-9) {
        res.ok = false;
        res.witness = "ato diameter bound broken at node of vertex " + std::to_string(v);
        return res;
      }
    }
    return res;
  }
  void run_baseline(const DynamicDigraph& g) override {
    oracles::Snapshot snap(g);
    volatile auto sink = oracles::scc_tarjan(snap).size();
    (void)sink;
  }
  std::int64_t events(const DynamicDigraph&) const override { return ato_.separator_rounds(); }

 private:
  void remember(const DynamicDigraph& g) {
    prev_node_.resize(g.vertex_count());
    for (int v = 0; v < g.vertex_count(); ++v) prev_node_[v] = ato_.partition().node_of(v);
  }
  Ato ato_;
  std::vector<NodeId> prev_node_;
};

class DagDriver : public Driver {
 public:
  DagDriver(const DynamicDigraph& g, const RunOptions& opt) : eps_(opt.eps) {
    oracles::Snapshot snap(g);
    auto order = oracles::topological_order(snap);
    if (!order) fail(Err::NotADag, "dag-sssp needs an acyclic workload");
    topo_.resize(g.vertex_count());
    for (std::size_t i = 0; i < order->size(); ++i) topo_[(*order)[i]] = static_cast<int>(i);
    bank_ = std::make_unique<MultiScaleDag>(g, topo_, 0, eps_);
  }
  void apply(DynamicDigraph&, const UpdateRecord&) override {}
  void on_update(EdgeId e) { bank_->on_edge_deleted(e); }
  VerifyResult verify(const DynamicDigraph& g) override {
    VerifyResult res;
    res.checked_error = true;
    oracles::Snapshot snap(g);
    auto dist = oracles::dijkstra(snap, 0);
    for (int v = 0; v < g.vertex_count(); ++v) {
      Weight est = bank_->distance(v);
      if (dist[v] == oracles::kUnreachable) {
        if (est != BucketedTree::kInf) {
          res.ok = false;
          res.witness = "dag-sssp finite estimate for unreachable vertex " + std::to_string(v);
          return res;
        }
        continue;
      }
      if (est < dist[v] ||
          static_cast<double>(est) > (1.0 + 4.0 * eps_) * static_cast<double>(dist[v]) + 1e-9) {
        res.ok = false;
        res.witness = "dag-sssp band broken at vertex " + std::to_string(v);
        return res;
      }
      if (dist[v] > 0) {
        res.max_rel_error = std::max(
            res.max_rel_error, static_cast<double>(est) / static_cast<double>(dist[v]) - 1.0);
      }
    }
    return res;
  }
  void run_baseline(const DynamicDigraph& g) override {
    oracles::Snapshot snap(g);
    volatile auto sink = oracles::dijkstra(snap, 0).size();
    (void)sink;
  }
  std::int64_t events(const DynamicDigraph&) const override { return bank_->total_scan_events(); }

 private:
  double eps_;
  std::vector<std::int64_t> topo_;
  std::unique_ptr<MultiScaleDag> bank_;
};

class AtoSsspDriver : public Driver {
 public:
  AtoSsspDriver(DynamicDigraph& g, const RunOptions& opt) : eps_(opt.eps) {
    band_ = opt.delta.value_or(std::max(4, g.vertex_count() / 2));
    int scale = std::max<int>(16, static_cast<int>(std::ceil(eps_ * band_ / 2.0)));
    ato_ = std::make_unique<Ato>(g, AtoConfig{scale, 1.0, 1.0, 1}, Rng(opt.seed));
    quality_ = std::max(2.0, 4.0 * g.vertex_count() / static_cast<double>(band_));
    tree_ = std::make_unique<BucketedTree>(*ato_, 0, band_, eps_, quality_);
  }
  void apply(DynamicDigraph&, const UpdateRecord&) override {}
  void on_update(DynamicDigraph&, EdgeId e) {
    ato_->on_edge_deleted(e);
    tree_->on_ato_deleted(e);
  }
  VerifyResult verify(const DynamicDigraph& g) override {
    VerifyResult res;
    res.checked_error = true;
    oracles::Snapshot snap(g);
    auto dist = oracles::dijkstra(snap, 0);
    double slack = ato_->eta_diam() + eps_ * static_cast<double>(band_);
    for (int v = 0; v < g.vertex_count(); ++v) {
      Weight est = tree_->vertex_estimate(v);
      if (dist[v] != oracles::kUnreachable && est != BucketedTree::kInf && est < dist[v]) {
        res.ok = false;
        res.witness = "ato-sssp underestimate at vertex " + std::to_string(v);
        return res;
      }
      if (dist[v] == oracles::kUnreachable || dist[v] > band_) continue;
      auto path = oracles::shortest_path(snap, 0, v);
      std::int64_t cost = 0;
      for (int ei : *path) {
        const Edge& ed = snap.edges[ei];
        cost += std::llabs(ato_->tau(ato_->node_of(ed.tail)) - ato_->tau(ato_->node_of(ed.head)));
      }
      if (static_cast<double>(cost) > quality_ * band_ + g.vertex_count()) continue;
      if (est == BucketedTree::kInf ||
          static_cast<double>(est) > static_cast<double>(dist[v]) + slack + 1e-9) {
        res.ok = false;
        res.witness = "ato-sssp band broken at vertex " + std::to_string(v);
        return res;
      }
      if (dist[v] > 0) {
        res.max_rel_error = std::max(
            res.max_rel_error, static_cast<double>(est) / static_cast<double>(dist[v]) - 1.0);
      }
    }
    return res;
  }
  void run_baseline(const DynamicDigraph& g) override {
    oracles::Snapshot snap(g);
    volatile auto sink = oracles::dijkstra(snap, 0).size();
    (void)sink;
  }
  std::int64_t events(const DynamicDigraph&) const override { return ato_->separator_rounds(); }

 private:
  double eps_;
  Weight band_;
  double quality_;
  std::unique_ptr<Ato> ato_;
  std::unique_ptr<BucketedTree> tree_;
};

class IncDriver : public Driver {
 public:
  IncDriver(const DynamicDigraph& g, const RunOptions& opt)
      : eps_(opt.eps), bank_(g.vertex_count(), 0, opt.eps) {}
  void apply(DynamicDigraph&, const UpdateRecord& u) override { bank_.insert_edge(u.u, u.v); }
  VerifyResult verify(const DynamicDigraph& g) override {
    VerifyResult res;
    res.checked_error = true;
    oracles::Snapshot snap(g);
    auto dist = oracles::bfs(snap, 0);
    for (int v = 0; v < g.vertex_count(); ++v) {
      Weight est = bank_.distance(v);
      if (dist[v] == oracles::kUnreachable) {
        if (est != EsTree::kInf) {
          res.ok = false;
          res.witness = "inc-sssp finite estimate for unreachable vertex " + std::to_string(v);
          return res;
        }
        continue;
      }
      if (est < dist[v] ||
          static_cast<double>(est) > (1.0 + eps_) * static_cast<double>(dist[v]) + 1e-9) {
        res.ok = false;
        res.witness = "inc-sssp band broken at vertex " + std::to_string(v);
        return res;
      }
      if (dist[v] > 0) {
        res.max_rel_error = std::max(
            res.max_rel_error, static_cast<double>(est) / static_cast<double>(dist[v]) - 1.0);
      }
    }
    return res;
  }
  void run_baseline(const DynamicDigraph& g) override {
    oracles::Snapshot snap(g);
    volatile auto sink = oracles::bfs(snap, 0).size();
    (void)sink;
  }
  std::int64_t events(const DynamicDigraph&) const override { return bank_.scan_work(); }

 private:
  double eps_;
  LazyBank bank_;
};

class IncWeightedDriver : public Driver {
 public:
  IncWeightedDriver(const DynamicDigraph& g, const RunOptions& opt)
      : eps_(opt.eps), grid_(g.vertex_count(), 0, opt.eps, g.max_weight()) {}
  void apply(DynamicDigraph&, const UpdateRecord& u) override { grid_.insert_edge(u.u, u.v, u.w); }
  VerifyResult verify(const DynamicDigraph& g) override {
    VerifyResult res;
    res.checked_error = true;
    oracles::Snapshot snap(g);
    auto dist = oracles::dijkstra(snap, 0);
    for (int v = 0; v < g.vertex_count(); ++v) {
      if (dist[v] == oracles::kUnreachable) {
        if (!std::isinf(grid_.distance(v))) {
          res.ok = false;
          res.witness = "weighted finite estimate for unreachable vertex " + std::to_string(v);
          return res;
        }
        continue;
      }
      if (dist[v] == 0) continue;
      double est = grid_.distance(v);
      if (est < static_cast<double>(dist[v]) - 1e-9 ||
          est > (1.0 + eps_) * static_cast<double>(dist[v]) + 1e-9) {
        res.ok = false;
        res.witness = "weighted band broken at vertex " + std::to_string(v);
        return res;
      }
      res.max_rel_error =
          std::max(res.max_rel_error, est / static_cast<double>(dist[v]) - 1.0);
    }
    return res;
  }
  void run_baseline(const DynamicDigraph& g) override {
    oracles::Snapshot snap(g);
    volatile auto sink = oracles::dijkstra(snap, 0).size();
    (void)sink;
  }
  std::int64_t events(const DynamicDigraph&) const override { return grid_.scan_work(); }

 private:
  double eps_;
  WeightedGrid grid_;
};

}  // namespace

RunReport run_workload(const Workload& w, const RunOptions& opt) {
  if (!algo_compatible(opt.algo, w.mode)) {
    fail(Err::IncompatibleMode, "algo incompatible with workload mode");
  }
  DynamicDigraph g = materialize(w);
  RunReport rep;
  rep.algo = algo_name(opt.algo);

  std::unique_ptr<EsDriver> es;
  std::unique_ptr<GesDriver> ges;
  std::unique_ptr<SccDriver> scc;
  std::unique_ptr<SsrDriver> ssr;
  std::unique_ptr<AtoDriver> ato;
  std::unique_ptr<DagDriver> dag;
  std::unique_ptr<AtoSsspDriver> atos;
  std::unique_ptr<IncDriver> inc;
  std::unique_ptr<IncWeightedDriver> incw;
  Driver* driver = nullptr;

  auto t0 = Clock::now();
  switch (opt.algo) {
    case Algo::Es: es = std::make_unique<EsDriver>(g, opt); driver = es.get(); break;
    case Algo::Ges: ges = std::make_unique<GesDriver>(g, opt); driver = ges.get(); break;
    case Algo::Scc: scc = std::make_unique<SccDriver>(g, opt); driver = scc.get(); break;
    case Algo::Ssr: ssr = std::make_unique<SsrDriver>(g, opt); driver = ssr.get(); break;
    case Algo::Ato: ato = std::make_unique<AtoDriver>(g, opt); driver = ato.get(); break;
    case Algo::DagSssp: dag = std::make_unique<DagDriver>(g, opt); driver = dag.get(); break;
    case Algo::AtoSssp: atos = std::make_unique<AtoSsspDriver>(g, opt); driver = atos.get(); break;
    case Algo::IncSssp: inc = std::make_unique<IncDriver>(g, opt); driver = inc.get(); break;
    case Algo::IncSsspWeighted:
      incw = std::make_unique<IncWeightedDriver>(g, opt);
      driver = incw.get();
      break;
  }

  std::int64_t structure_micros = micros_since(t0);
  std::int64_t baseline_micros = 0;

  for (std::size_t i = 0; i < w.updates.size(); ++i) {
    const UpdateRecord& u = w.updates[i];
    auto ts = Clock::now();
    // Structures that need the concrete edge id take the update here; the
    // rest see it through their own apply path.
    switch (opt.algo) {
      case Algo::Es: {
        EdgeId e = apply_to_graph(g, u);
        es->on_update(e, u);
        break;
      }
      case Algo::Ges: {
        EdgeId e = apply_to_graph(g, u);
        ges->on_update(e, u);
        break;
      }
      case Algo::Scc: {
        if (u.kind != UpdateRecord::Kind::DeleteEdge) {
          fail(Err::IncompatibleMode, "scc accepts deletions only");
        }
        EdgeId e = g.find_alive_edge(u.u, u.v);
        if (e == kNoEdge) fail(Err::NoSuchEdge, "workload deletes a missing edge");
        scc->on_update(g, e);
        break;
      }
      case Algo::Ssr:
        if (u.kind != UpdateRecord::Kind::DeleteEdge) {
          fail(Err::IncompatibleMode, "ssr accepts deletions only");
        }
        ssr->apply(g, u);
        apply_to_graph(g, u);
        break;
      case Algo::Ato: {
        if (u.kind != UpdateRecord::Kind::DeleteEdge) {
          fail(Err::IncompatibleMode, "ato accepts deletions only");
        }
        EdgeId e = apply_to_graph(g, u);
        ato->on_update(g, e);
        break;
      }
      case Algo::DagSssp: {
        if (u.kind != UpdateRecord::Kind::DeleteEdge) {
          fail(Err::IncompatibleMode, "dag-sssp accepts deletions only");
        }
        EdgeId e = apply_to_graph(g, u);
        dag->on_update(e);
        break;
      }
      case Algo::AtoSssp: {
        if (u.kind != UpdateRecord::Kind::DeleteEdge) {
          fail(Err::IncompatibleMode, "ato-sssp accepts deletions only");
        }
        EdgeId e = apply_to_graph(g, u);
        atos->on_update(g, e);
        break;
      }
      default:
        apply_to_graph(g, u);
        driver->apply(g, u);
        break;
    }
    structure_micros += micros_since(ts);

    StageRow row;
    row.stage = g.stage();
    row.op = u.kind == UpdateRecord::Kind::DeleteEdge
                 ? 'D'
                 : (u.kind == UpdateRecord::Kind::InsertEdge ? 'I' : 'W');
    row.cumulative_micros = structure_micros;

    if (opt.verify_every > 0 && (i + 1) % opt.verify_every == 0) {
      VerifyResult vr = driver->verify(g);
      if (opt.inject_fault && i + 1 >= w.updates.size() / 2) {
        vr.ok = false;
        vr.witness = "injected fault";
      }
      row.verified = 1;
      row.has_error = vr.checked_error;
      row.max_rel_error = vr.max_rel_error;
      if (!vr.ok) {
        rep.verification_failed = true;
        rep.witness = "stage " + std::to_string(g.stage()) + ": " + vr.witness;
        rep.rows.push_back(row);
        break;
      }
    }
    if (opt.oracle_baseline) {
      auto tb = Clock::now();
      driver->run_baseline(g);
      baseline_micros += micros_since(tb);
    }
    rep.rows.push_back(row);
  }

  rep.total_micros = structure_micros;
  rep.baseline_micros = baseline_micros;
  rep.events = driver->events(g);
  rep.peak_memory_estimate =
      static_cast<std::int64_t>(g.edge_slot_count()) * static_cast<std::int64_t>(sizeof(Edge)) +
      static_cast<std::int64_t>(g.vertex_count()) * 64;
  return rep;
}

void write_csv(std::ostream& out, const RunReport& rep) {
  out << "stage,op,cumulative_micros,verified,max_rel_error\n";
  for (const StageRow& r : rep.rows) {
    out << r.stage << ',' << r.op << ',' << r.cumulative_micros << ',' << r.verified << ',';
    if (r.verified && r.has_error) out << r.max_rel_error;
    out << '\n';
  }
}

void write_summary(std::ostream& out, const RunReport& rep) {
  out << "algo=" << rep.algo << '\n';
  out << "total_micros=" << rep.total_micros << '\n';
  out << "baseline_micros=" << rep.baseline_micros << '\n';
  out << "events=" << rep.events << '\n';
  out << "updates=" << rep.rows.size() << '\n';
  out << "peak_memory_estimate=" << rep.peak_memory_estimate << '\n';
  out << "verification_failed=" << (rep.verification_failed ? 1 : 0) << '\n';
  if (rep.verification_failed) out << "witness=" << rep.witness << '\n';
}

RunReport read_csv_with_summary(const std::string& csv_path) {
  RunReport rep;
  std::ifstream in(csv_path);
  if (!in) fail(Err::BadParams, "cannot read " + csv_path);
  std::string line;
  std::getline(in, line);  // header
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    StageRow r;
    std::istringstream ls(line);
    std::string field;
    std::getline(ls, field, ',');
    r.stage = std::stoull(field);
    std::getline(ls, field, ',');
    r.op = field.empty() ? '?' : field[0];
    std::getline(ls, field, ',');
    r.cumulative_micros = std::stoll(field);
    std::getline(ls, field, ',');
    r.verified = std::stoi(field);
    if (std::getline(ls, field, ',') && !field.empty()) {
      r.has_error = true;
      r.max_rel_error = std::stod(field);
    }
    rep.rows.push_back(r);
  }
  std::ifstream sf(csv_path + ".summary");
  if (sf) {
    while (std::getline(sf, line)) {
      auto eq = line.find('=');
      if (eq == std::string::npos) continue;
      std::string key = line.substr(0, eq), val = line.substr(eq + 1);
      if (key == "algo") rep.algo = val;
      if (key == "total_micros") rep.total_micros = std::stoll(val);
      if (key == "baseline_micros") rep.baseline_micros = std::stoll(val);
      if (key == "events") rep.events = std::stoll(val);
      if (key == "verification_failed") rep.verification_failed = val == "1";
    }
  }
  return rep;
}

void write_merged_report(std::ostream& out, std::vector<RunReport> reports) {
  std::stable_sort(reports.begin(), reports.end(),
                   [](const RunReport& a, const RunReport& b) { return a.algo < b.algo; });
  out << "stage,op,cumulative_micros,verified,max_rel_error\n";
  for (const RunReport& rep : reports) {
    std::vector<StageRow> rows = rep.rows;
    std::stable_sort(rows.begin(), rows.end(),
                     [](const StageRow& a, const StageRow& b) { return a.stage < b.stage; });
    for (const StageRow& r : rows) {
      out << r.stage << ',' << r.op << ',' << r.cumulative_micros << ',' << r.verified << ',';
      if (r.verified && r.has_error) out << r.max_rel_error;
      out << '\n';
    }
  }
  for (const RunReport& rep : reports) {
    double ratio = rep.baseline_micros > 0
                       ? static_cast<double>(rep.total_micros) / rep.baseline_micros
                       : 0.0;
    out << "summary algo=" << rep.algo << " total_micros=" << rep.total_micros
        << " baseline_micros=" << rep.baseline_micros << " ratio=" << ratio
        << " events=" << rep.events << '\n';
  }
}

}  // namespace bench
}  // namespace dygraph
