#include "dygraph/oracles.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <queue>

namespace dygraph {
namespace oracles {

namespace {

std::vector<std::vector<int>> out_adjacency(const Snapshot& s) {
  std::vector<std::vector<int>> adj(s.n);
  for (std::size_t i = 0; i < s.edges.size(); ++i) adj[s.edges[i].tail].push_back(static_cast<int>(i));
  return adj;
}

}  // namespace

Snapshot::Snapshot(const DynamicDigraph& g) : n(g.vertex_count()) {
  for (EdgeId e = 0; e < g.edge_slot_count(); ++e) {
    if (g.edge(e).alive) edges.push_back(g.edge(e));
  }
}

Snapshot::Snapshot(const DynamicDigraph& g, const std::vector<VertexId>& subset) : n(g.vertex_count()) {
  std::vector<char> mask(g.vertex_count(), 0);
  for (VertexId v : subset) mask[v] = 1;
  for (EdgeId e = 0; e < g.edge_slot_count(); ++e) {
    const Edge& ed = g.edge(e);
    if (ed.alive && mask[ed.tail] && mask[ed.head]) edges.push_back(ed);
  }
}

Snapshot Snapshot::reversed() const {
  Snapshot r;
  r.n = n;
  r.edges = edges;
  for (Edge& e : r.edges) std::swap(e.tail, e.head);
  return r;
}

std::vector<int> scc_tarjan(const Snapshot& s) {
  auto adj = out_adjacency(s);
  std::vector<int> index(s.n, -1), low(s.n, 0), comp(s.n, -1);
  std::vector<char> on_stack(s.n, 0);
  std::vector<int> stack;
  int next_index = 0, next_comp = 0;

  // Iterative DFS; frame = (vertex, next child position).
  std::vector<std::pair<int, std::size_t>> frames;
  for (int root = 0; root < s.n; ++root) {
    if (index[root] != -1) continue;
    frames.push_back({root, 0});
    while (!frames.empty()) {
      auto& [v, pos] = frames.back();
      if (pos == 0) {
        index[v] = low[v] = next_index++;
        stack.push_back(v);
        on_stack[v] = 1;
      }
      bool descended = false;
      while (pos < adj[v].size()) {
        int w = s.edges[adj[v][pos++]].head;
        if (index[w] == -1) {
          frames.push_back({w, 0});
          descended = true;
          break;
        }
        if (on_stack[w]) low[v] = std::min(low[v], index[w]);
      }
      if (descended) continue;
      if (low[v] == index[v]) {
        for (;;) {
          int w = stack.back();
          stack.pop_back();
          on_stack[w] = 0;
          comp[w] = next_comp;
          if (w == v) break;
        }
        ++next_comp;
      }
      int finished = v;
      frames.pop_back();
      if (!frames.empty()) low[frames.back().first] = std::min(low[frames.back().first], low[finished]);
    }
  }
  return comp;
}

std::vector<int> scc_kosaraju(const Snapshot& s) {
  auto adj = out_adjacency(s);
  Snapshot rs = s.reversed();
  auto radj = out_adjacency(rs);

  std::vector<char> seen(s.n, 0);
  std::vector<int> order;
  std::vector<std::pair<int, std::size_t>> frames;
  for (int root = 0; root < s.n; ++root) {
    if (seen[root]) continue;
    frames.push_back({root, 0});
    seen[root] = 1;
    while (!frames.empty()) {
      auto& [v, pos] = frames.back();
      bool descended = false;
      while (pos < adj[v].size()) {
        int w = s.edges[adj[v][pos++]].head;
        if (!seen[w]) {
          seen[w] = 1;
          frames.push_back({w, 0});
          descended = true;
          break;
        }
      }
      if (!descended) {
        order.push_back(v);
        frames.pop_back();
      }
    }
  }

  std::vector<int> comp(s.n, -1);
  int next_comp = 0;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    if (comp[*it] != -1) continue;
    std::vector<int> work{*it};
    comp[*it] = next_comp;
    while (!work.empty()) {
      int v = work.back();
      work.pop_back();
      for (int ei : radj[v]) {
        int w = rs.edges[ei].head;
        if (comp[w] == -1) {
          comp[w] = next_comp;
          work.push_back(w);
        }
      }
    }
    ++next_comp;
  }
  return comp;
}

std::vector<std::vector<VertexId>> scc_classes(const std::vector<int>& ids) {
  int k = ids.empty() ? 0 : *std::max_element(ids.begin(), ids.end()) + 1;
  std::vector<std::vector<VertexId>> classes(k);
  for (std::size_t v = 0; v < ids.size(); ++v) classes[ids[v]].push_back(static_cast<int>(v));
  std::sort(classes.begin(), classes.end());
  return classes;
}

std::vector<Weight> bfs(const Snapshot& s, VertexId r) {
  auto adj = out_adjacency(s);
  std::vector<Weight> dist(s.n, kUnreachable);
  std::deque<int> q{r};
  dist[r] = 0;
  while (!q.empty()) {
    int v = q.front();
    q.pop_front();
    for (int ei : adj[v]) {
      int w = s.edges[ei].head;
      if (dist[w] == kUnreachable) {
        dist[w] = dist[v] + 1;
        q.push_back(w);
      }
    }
  }
  return dist;
}

std::vector<Weight> dijkstra(const Snapshot& s, VertexId r) {
  auto adj = out_adjacency(s);
  std::vector<Weight> dist(s.n, kUnreachable);
  using Item = std::pair<Weight, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  pq.push({0, r});
  while (!pq.empty()) {
    auto [d, v] = pq.top();
    pq.pop();
    if (dist[v] != kUnreachable) continue;
    dist[v] = d;
    for (int ei : adj[v]) {
      int w = s.edges[ei].head;
      if (dist[w] == kUnreachable) pq.push({d + s.edges[ei].weight, w});
    }
  }
  return dist;
}

std::vector<Weight> bellman_ford(const Snapshot& s, VertexId r) {
  constexpr Weight inf = std::numeric_limits<Weight>::max() / 4;
  std::vector<Weight> dist(s.n, inf);
  dist[r] = 0;
  for (int round = 0; round < s.n; ++round) {
    bool changed = false;
    for (const Edge& e : s.edges) {
      if (dist[e.tail] < inf && dist[e.tail] + e.weight < dist[e.head]) {
        dist[e.head] = dist[e.tail] + e.weight;
        changed = true;
      }
    }
    if (!changed) break;
  }
  for (Weight& d : dist) {
    if (d >= inf) d = kUnreachable;
  }
  return dist;
}

std::vector<Weight> s_distance(const Snapshot& s, VertexId r, const std::vector<char>& in_s) {
  auto adj = out_adjacency(s);
  std::vector<Weight> dist(s.n, kUnreachable);
  std::vector<char> done(s.n, 0);
  std::deque<int> q{r};
  dist[r] = 0;
  while (!q.empty()) {
    int v = q.front();
    q.pop_front();
    if (done[v]) continue;
    done[v] = 1;
    Weight w = in_s[v] ? 1 : 0;
    for (int ei : adj[v]) {
      int h = s.edges[ei].head;
      if (dist[h] == kUnreachable || dist[v] + w < dist[h]) {
        dist[h] = dist[v] + w;
        if (w == 0) {
          q.push_front(h);
        } else {
          q.push_back(h);
        }
      }
    }
  }
  return dist;
}

std::vector<Weight> s_distance_to(const Snapshot& s, VertexId r, const std::vector<char>& in_s) {
  // Reverse the edges but keep the weight on the original tail, which is the
  // head after reversal.
  Snapshot rev = s.reversed();
  auto adj = [&] {
    std::vector<std::vector<int>> a(rev.n);
    for (std::size_t i = 0; i < rev.edges.size(); ++i) a[rev.edges[i].tail].push_back(static_cast<int>(i));
    return a;
  }();
  std::vector<Weight> dist(rev.n, kUnreachable);
  std::vector<char> done(rev.n, 0);
  std::deque<int> q{r};
  dist[r] = 0;
  while (!q.empty()) {
    int v = q.front();
    q.pop_front();
    if (done[v]) continue;
    done[v] = 1;
    for (int ei : adj[v]) {
      int h = rev.edges[ei].head;
      Weight w = in_s[h] ? 1 : 0;
      if (dist[h] == kUnreachable || dist[v] + w < dist[h]) {
        dist[h] = dist[v] + w;
        if (w == 0) {
          q.push_front(h);
        } else {
          q.push_back(h);
        }
      }
    }
  }
  return dist;
}

std::vector<std::vector<Weight>> s_distance_all_pairs(const Snapshot& s,
                                                      const std::vector<char>& in_s) {
  constexpr Weight inf = std::numeric_limits<Weight>::max() / 4;
  std::vector<std::vector<Weight>> d(s.n, std::vector<Weight>(s.n, inf));
  for (int v = 0; v < s.n; ++v) d[v][v] = 0;
  for (const Edge& e : s.edges) {
    Weight w = in_s[e.tail] ? 1 : 0;
    d[e.tail][e.head] = std::min(d[e.tail][e.head], w);
  }
  for (int k = 0; k < s.n; ++k) {
    for (int i = 0; i < s.n; ++i) {
      if (d[i][k] >= inf) continue;
      for (int j = 0; j < s.n; ++j) {
        if (d[k][j] < inf && d[i][k] + d[k][j] < d[i][j]) d[i][j] = d[i][k] + d[k][j];
      }
    }
  }
  for (auto& row : d) {
    for (Weight& x : row) {
      if (x >= inf) x = kUnreachable;
    }
  }
  return d;
}

Weight weak_diameter(const Snapshot& s, const std::vector<VertexId>& x) {
  Weight best = 0;
  for (VertexId v : x) {
    auto dist = dijkstra(s, v);
    for (VertexId u : x) {
      if (dist[u] == kUnreachable) return kUnreachable;
      best = std::max(best, dist[u]);
    }
  }
  return best;
}

std::vector<char> reachable_set(const Snapshot& s, VertexId r) {
  auto dist = bfs(s, r);
  std::vector<char> out(s.n, 0);
  for (int v = 0; v < s.n; ++v) out[v] = dist[v] != kUnreachable;
  return out;
}

std::optional<std::vector<int>> shortest_path(const Snapshot& s, VertexId r, VertexId t) {
  auto adj = out_adjacency(s);
  std::vector<Weight> dist(s.n, kUnreachable);
  std::vector<int> via(s.n, -1);
  using Item = std::pair<Weight, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  pq.push({0, r});
  std::vector<char> done(s.n, 0);
  dist[r] = 0;
  while (!pq.empty()) {
    auto [d, v] = pq.top();
    pq.pop();
    if (done[v]) continue;
    done[v] = 1;
    for (int ei : adj[v]) {
      int w = s.edges[ei].head;
      Weight nd = d + s.edges[ei].weight;
      if (!done[w] && (dist[w] == kUnreachable || nd < dist[w])) {
        dist[w] = nd;
        via[w] = ei;
        pq.push({nd, w});
      }
    }
  }
  if (dist[t] == kUnreachable) return std::nullopt;
  std::vector<int> path;
  for (int v = t; v != r;) {
    path.push_back(via[v]);
    v = s.edges[via[v]].tail;
  }
  std::reverse(path.begin(), path.end());
  return path;
}

std::optional<std::vector<VertexId>> topological_order(const Snapshot& s) {
  std::vector<int> indeg(s.n, 0);
  auto adj = out_adjacency(s);
  for (const Edge& e : s.edges) ++indeg[e.head];
  std::vector<VertexId> order;
  std::vector<int> ready;
  for (int v = 0; v < s.n; ++v) {
    if (indeg[v] == 0) ready.push_back(v);
  }
  while (!ready.empty()) {
    int v = ready.back();
    ready.pop_back();
    order.push_back(v);
    for (int ei : adj[v]) {
      if (--indeg[s.edges[ei].head] == 0) ready.push_back(s.edges[ei].head);
    }
  }
  if (static_cast<int>(order.size()) != s.n) return std::nullopt;
  return order;
}

}  // namespace oracles
}  // namespace dygraph
