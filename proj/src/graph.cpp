#include "dygraph/graph.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>

namespace dygraph {

EdgeId DynamicDigraph::add_initial_edge(VertexId u, VertexId v, Weight w) {
  check_vertex(u);
  check_vertex(v);
  if (w < 1 || w > max_weight_) fail(Err::WeightOutOfRange, "initial edge weight out of range");
  EdgeId e = static_cast<EdgeId>(edges_.size());
  edges_.push_back(Edge{u, v, w, true});
  out_[u].push_back(e);
  in_[v].push_back(e);
  ++alive_count_;
  return e;
}

EdgeId DynamicDigraph::insert_edge(VertexId u, VertexId v, Weight w) {
  if (mode_ == UpdateMode::Decremental) fail(Err::ModeViolation, "insert in decremental mode");
  check_vertex(u);
  check_vertex(v);
  if (w < 1 || w > max_weight_) fail(Err::WeightOutOfRange, "edge weight out of range");
  EdgeId e = static_cast<EdgeId>(edges_.size());
  edges_.push_back(Edge{u, v, w, true});
  out_[u].push_back(e);
  in_[v].push_back(e);
  ++alive_count_;
  ++stage_;
  log_.push_back({UpdateRecord::Kind::InsertEdge, u, v, w});
  return e;
}

EdgeId DynamicDigraph::find_alive_edge(VertexId u, VertexId v) const {
  EdgeId best = kNoEdge;
  for (EdgeId e : out_[u]) {
    if (edges_[e].head == v && (best == kNoEdge || e < best)) best = e;
  }
  return best;
}

void DynamicDigraph::detach(EdgeId e) {
  const Edge& ed = edges_[e];
  auto& ou = out_[ed.tail];
  ou.erase(std::find(ou.begin(), ou.end(), e));
  auto& iv = in_[ed.head];
  iv.erase(std::find(iv.begin(), iv.end(), e));
}

EdgeId DynamicDigraph::delete_edge(VertexId u, VertexId v) {
  check_vertex(u);
  check_vertex(v);
  EdgeId e = find_alive_edge(u, v);
  if (e == kNoEdge) fail(Err::NoSuchEdge, "no alive edge to delete");
  delete_edge_by_id(e);
  return e;
}

void DynamicDigraph::delete_edge_by_id(EdgeId e) {
  if (mode_ == UpdateMode::Incremental) fail(Err::ModeViolation, "delete in incremental mode");
  if (e < 0 || e >= edge_slot_count() || !edges_[e].alive) fail(Err::NoSuchEdge, "edge not alive");
  detach(e);
  edges_[e].alive = false;
  --alive_count_;
  ++stage_;
  log_.push_back({UpdateRecord::Kind::DeleteEdge, edges_[e].tail, edges_[e].head, edges_[e].weight});
}

EdgeId DynamicDigraph::increase_weight(VertexId u, VertexId v, Weight w) {
  if (mode_ == UpdateMode::Incremental) fail(Err::ModeViolation, "weight increase in incremental mode");
  check_vertex(u);
  check_vertex(v);
  EdgeId e = find_alive_edge(u, v);
  if (e == kNoEdge) fail(Err::NoSuchEdge, "no alive edge for weight increase");
  if (w < edges_[e].weight || w > max_weight_) fail(Err::WeightOutOfRange, "weight must not decrease");
  edges_[e].weight = w;
  ++stage_;
  log_.push_back({UpdateRecord::Kind::IncreaseWeight, u, v, w});
  return e;
}

InducedView::InducedView(const DynamicDigraph& g, const std::vector<VertexId>& vertices)
    : g_(&g), mask_(g.vertex_count(), 0), vertices_(vertices) {
  for (VertexId v : vertices_) {
    if (v < 0 || v >= g.vertex_count()) fail(Err::NoSuchVertex, "view vertex out of range");
    mask_[v] = 1;
  }
}

std::vector<EdgeId> InducedView::edges() const {
  std::vector<EdgeId> out;
  for (VertexId v : vertices_) {
    for (EdgeId e : g_->out_edges(v)) {
      if (mask_[g_->edge(e).head]) out.push_back(e);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

GraphFile read_graph_file(std::istream& in) {
  GraphFile g;
  std::size_t m = 0;
  if (!(in >> g.n >> m)) fail(Err::BadParams, "bad graph header");
  if (g.n < 0) fail(Err::BadParams, "negative vertex count");
  g.edges.reserve(m);
  for (std::size_t i = 0; i < m; ++i) {
    Edge e;
    e.alive = true;
    if (!(in >> e.tail >> e.head >> e.weight)) fail(Err::BadParams, "bad edge line");
    g.edges.push_back(e);
  }
  return g;
}

void write_graph_file(std::ostream& out, const GraphFile& g) {
  out << g.n << ' ' << g.edges.size() << '\n';
  for (const Edge& e : g.edges) out << e.tail << ' ' << e.head << ' ' << e.weight << '\n';
}

std::vector<UpdateRecord> read_update_file(std::istream& in) {
  std::vector<UpdateRecord> ups;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    char kind;
    UpdateRecord r{};
    ls >> kind;
    if (kind == 'D') {
      r.kind = UpdateRecord::Kind::DeleteEdge;
      if (!(ls >> r.u >> r.v)) fail(Err::BadParams, "bad D record");
    } else if (kind == 'I') {
      r.kind = UpdateRecord::Kind::InsertEdge;
      if (!(ls >> r.u >> r.v >> r.w)) fail(Err::BadParams, "bad I record");
    } else if (kind == 'W') {
      r.kind = UpdateRecord::Kind::IncreaseWeight;
      if (!(ls >> r.u >> r.v >> r.w)) fail(Err::BadParams, "bad W record");
    } else {
      fail(Err::BadParams, "unknown update kind");
    }
    ups.push_back(r);
  }
  return ups;
}

void write_update_file(std::ostream& out, const std::vector<UpdateRecord>& ups) {
  for (const UpdateRecord& r : ups) {
    switch (r.kind) {
      case UpdateRecord::Kind::DeleteEdge:
        out << "D " << r.u << ' ' << r.v << '\n';
        break;
      case UpdateRecord::Kind::InsertEdge:
        out << "I " << r.u << ' ' << r.v << ' ' << r.w << '\n';
        break;
      case UpdateRecord::Kind::IncreaseWeight:
        out << "W " << r.u << ' ' << r.v << ' ' << r.w << '\n';
        break;
    }
  }
}

}  // namespace dygraph
