#include "dygraph/workload.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

namespace dygraph {

WorkloadModel parse_model(const std::string& s) {
  if (s == "erdos") return WorkloadModel::Erdos;
  if (s == "path") return WorkloadModel::Path;
  if (s == "grid") return WorkloadModel::Grid;
  if (s == "layered-dag") return WorkloadModel::LayeredDag;
  fail(Err::BadParams, "unknown model: " + s);
}

WorkloadMode parse_mode(const std::string& s) {
  if (s == "decremental") return WorkloadMode::Decremental;
  if (s == "incremental") return WorkloadMode::Incremental;
  fail(Err::BadParams, "unknown mode: " + s);
}

namespace {

std::vector<Edge> gen_edges(int n, int m, WorkloadModel model, Rng& rng, Weight max_weight) {
  std::vector<Edge> edges;
  auto weight = [&]() -> Weight {
    return max_weight <= 1 ? 1 : 1 + static_cast<Weight>(rng.below(max_weight));
  };
  switch (model) {
    case WorkloadModel::Path: {
      for (int v = 0; v + 1 < n; ++v) edges.push_back({v, v + 1, weight(), true});
      break;
    }
    case WorkloadModel::Grid: {
      // Bidirected lattice over a near-square layout.
      int side = std::max(1, static_cast<int>(std::ceil(std::sqrt(static_cast<double>(n)))));
      auto id = [&](int r, int c) { return r * side + c; };
      for (int r = 0; r < side; ++r) {
        for (int c = 0; c < side; ++c) {
          int v = id(r, c);
          if (v >= n) continue;
          if (c + 1 < side && id(r, c + 1) < n) {
            edges.push_back({v, id(r, c + 1), weight(), true});
            edges.push_back({id(r, c + 1), v, weight(), true});
          }
          if (r + 1 < side && id(r + 1, c) < n) {
            edges.push_back({v, id(r + 1, c), weight(), true});
            edges.push_back({id(r + 1, c), v, weight(), true});
          }
        }
      }
      break;
    }
    case WorkloadModel::Erdos: {
      std::int64_t cap = static_cast<std::int64_t>(n) * (n - 1);
      if (m > cap) fail(Err::BadParams, "m exceeds the simple-graph bound");
      std::set<std::pair<int, int>> used;
      while (static_cast<int>(edges.size()) < m) {
        int u = rng.below_int(n), v = rng.below_int(n);
        if (u == v || used.count({u, v})) continue;
        used.insert({u, v});
        edges.push_back({u, v, weight(), true});
      }
      break;
    }
    case WorkloadModel::LayeredDag: {
      // Random layer sizes; edges go strictly forward, mostly one layer.
      int layers = std::max(2, static_cast<int>(rng.below(std::max(2, n / 3))) + 2);
      std::vector<int> layer_of(n);
      for (int v = 0; v < n; ++v) layer_of[v] = v * layers / n;
      std::int64_t cap = 0;
      std::vector<std::pair<int, int>> candidates;
      for (int u = 0; u < n; ++u) {
        for (int v = 0; v < n; ++v) {
          if (layer_of[u] < layer_of[v]) candidates.push_back({u, v});
        }
      }
      cap = static_cast<std::int64_t>(candidates.size());
      if (m > cap) m = static_cast<int>(cap);
      std::set<std::pair<int, int>> used;
      // Bias toward adjacent layers; occasional longer jumps keep higher
      // buckets populated.
      while (static_cast<int>(edges.size()) < m) {
        int u = rng.below_int(n);
        int span = rng.below(8) == 0 ? 1 + rng.below_int(layers) : 1;
        int target_layer = layer_of[u] + span;
        std::vector<int> pool;
        for (int v = 0; v < n; ++v) {
          if (layer_of[v] >= target_layer && layer_of[v] > layer_of[u]) pool.push_back(v);
        }
        if (pool.empty()) continue;
        int v = pool[rng.below(pool.size())];
        if (used.count({u, v})) continue;
        used.insert({u, v});
        edges.push_back({u, v, weight(), true});
      }
      break;
    }
  }
  return edges;
}

}  // namespace

Workload generate_workload(int n, int m, WorkloadModel model, WorkloadMode mode,
                           std::uint64_t seed, Weight max_weight) {
  if (n <= 0) fail(Err::BadParams, "n must be positive");
  Rng rng(seed);
  Workload w;
  w.n = n;
  w.mode = mode;
  std::vector<Edge> edges = gen_edges(n, m, model, rng, max_weight);
  // Random update order over all edges.
  std::vector<int> order(edges.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  for (std::size_t i = order.size(); i > 1; --i) {
    std::swap(order[i - 1], order[rng.below(i)]);
  }
  if (mode == WorkloadMode::Decremental) {
    w.initial.n = n;
    w.initial.edges = edges;
    for (int i : order) {
      w.updates.push_back({UpdateRecord::Kind::DeleteEdge, edges[i].tail, edges[i].head, 0});
    }
  } else {
    w.initial.n = n;
    for (int i : order) {
      w.updates.push_back(
          {UpdateRecord::Kind::InsertEdge, edges[i].tail, edges[i].head, edges[i].weight});
    }
  }
  return w;
}

DynamicDigraph materialize(const Workload& w, Weight max_weight) {
  Weight cap = max_weight;
  if (cap == 0) {
    cap = 1;
    for (const Edge& e : w.initial.edges) cap = std::max(cap, e.weight);
    for (const UpdateRecord& u : w.updates) cap = std::max(cap, u.w);
  }
  DynamicDigraph g(w.n,
                   w.mode == WorkloadMode::Decremental ? UpdateMode::Decremental
                                                       : UpdateMode::Incremental,
                   cap);
  for (const Edge& e : w.initial.edges) g.add_initial_edge(e.tail, e.head, e.weight);
  return g;
}

void write_workload(const Workload& w, const std::string& prefix) {
  std::ofstream gf(prefix + ".graph");
  if (!gf) fail(Err::BadParams, "cannot write " + prefix + ".graph");
  write_graph_file(gf, w.initial);
  std::ofstream uf(prefix + ".up");
  if (!uf) fail(Err::BadParams, "cannot write " + prefix + ".up");
  write_update_file(uf, w.updates);
}

Workload read_workload(const std::string& prefix) {
  std::ifstream gf(prefix + ".graph");
  if (!gf) fail(Err::BadParams, "cannot read " + prefix + ".graph");
  Workload w;
  w.initial = read_graph_file(gf);
  w.n = w.initial.n;
  std::ifstream uf(prefix + ".up");
  if (!uf) fail(Err::BadParams, "cannot read " + prefix + ".up");
  w.updates = read_update_file(uf);
  bool has_insert = false, has_delete = false;
  for (const auto& u : w.updates) {
    has_insert |= u.kind == UpdateRecord::Kind::InsertEdge;
    has_delete |= u.kind != UpdateRecord::Kind::InsertEdge;
  }
  if (has_insert && has_delete) fail(Err::BadParams, "mixed update files are not supported");
  w.mode = has_insert ? WorkloadMode::Incremental : WorkloadMode::Decremental;
  return w;
}

}  // namespace dygraph
