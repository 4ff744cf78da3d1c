#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "dygraph/errors.hpp"

namespace dygraph {

using VertexId = int;
using EdgeId = int;
using Weight = std::int64_t;

constexpr EdgeId kNoEdge = -1;

enum class UpdateMode { Decremental, Incremental, Mixed };

struct Edge {
  VertexId tail = 0;
  VertexId head = 0;
  Weight weight = 1;
  bool alive = false;
};

struct UpdateRecord {
  enum class Kind { DeleteEdge, InsertEdge, IncreaseWeight } kind;
  VertexId u = 0;
  VertexId v = 0;
  Weight w = 0;
};

/// Mutable weighted directed multigraph under a partially dynamic update
/// sequence. Deleted edges are tombstoned so edge ids held by shortest-path
/// structures stay stable; adjacency lists hold only alive edges.
class DynamicDigraph {
 public:
  DynamicDigraph(int n, UpdateMode mode, Weight max_weight = 1)
      : n_(n), mode_(mode), max_weight_(max_weight) {
    out_.resize(n);
    in_.resize(n);
  }

  int vertex_count() const { return n_; }
  UpdateMode mode() const { return mode_; }
  Weight max_weight() const { return max_weight_; }
  std::uint64_t stage() const { return stage_; }

  int edge_slot_count() const { return static_cast<int>(edges_.size()); }
  const Edge& edge(EdgeId e) const { return edges_[e]; }
  const std::vector<EdgeId>& out_edges(VertexId v) const { return out_[v]; }
  const std::vector<EdgeId>& in_edges(VertexId v) const { return in_[v]; }
  const std::vector<UpdateRecord>& log() const { return log_; }

  int alive_edge_count() const { return alive_count_; }

  // Loads the initial edge set without counting as updates.
  EdgeId add_initial_edge(VertexId u, VertexId v, Weight w);

  EdgeId insert_edge(VertexId u, VertexId v, Weight w);
  // Deletes the lowest-id alive (u, v) edge.
  EdgeId delete_edge(VertexId u, VertexId v);
  void delete_edge_by_id(EdgeId e);
  // Raises the weight of the lowest-id alive (u, v) edge to w.
  EdgeId increase_weight(VertexId u, VertexId v, Weight w);

  EdgeId find_alive_edge(VertexId u, VertexId v) const;

 private:
  void check_vertex(VertexId v) const {
    if (v < 0 || v >= n_) fail(Err::NoSuchVertex, "vertex out of range");
  }
  void detach(EdgeId e);

  int n_;
  UpdateMode mode_;
  Weight max_weight_;
  std::uint64_t stage_ = 0;
  int alive_count_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::vector<EdgeId>> out_, in_;
  std::vector<UpdateRecord> log_;
};

/// Read-only induced-subgraph view; deletions on the parent are visible
/// through it because edges are filtered at iteration time.
class InducedView {
 public:
  InducedView(const DynamicDigraph& g, const std::vector<VertexId>& vertices);

  const DynamicDigraph& graph() const { return *g_; }
  bool contains(VertexId v) const { return mask_[v]; }
  bool edge_visible(EdgeId e) const {
    const Edge& ed = g_->edge(e);
    return ed.alive && mask_[ed.tail] && mask_[ed.head];
  }
  const std::vector<VertexId>& vertices() const { return vertices_; }
  std::vector<EdgeId> edges() const;

 private:
  const DynamicDigraph* g_;
  std::vector<char> mask_;
  std::vector<VertexId> vertices_;
};

// Flat-file formats shared with the bench CLI:
//   graph file:  "n m" then m lines "u v w"
//   update file: lines "D u v" | "I u v w" | "W u v w"
struct GraphFile {
  int n = 0;
  std::vector<Edge> edges;
};

GraphFile read_graph_file(std::istream& in);
void write_graph_file(std::ostream& out, const GraphFile& g);
std::vector<UpdateRecord> read_update_file(std::istream& in);
void write_update_file(std::ostream& out, const std::vector<UpdateRecord>& ups);

}  // namespace dygraph
