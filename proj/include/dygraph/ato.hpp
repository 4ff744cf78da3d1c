#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <vector>

#include "dygraph/es_tree.hpp"
#include "dygraph/graph.hpp"
#include "dygraph/partition.hpp"
#include "dygraph/rng.hpp"

namespace dygraph {

struct AtoConfig {
  int delta = 64;     // depth scale; >= 16
  double alpha = 1.0;  // approximation factor of the restricted SSSP plug-in
  double c = 1.0;      // failure parameter; zeta = (c + 2) * log2 n
  int bundle = 1;      // independent copies (for bundles)
};

struct AtoChangeRecord {
  NodeId old_node = -1;
  std::vector<NodeId> parts;  // ids after the split, largest part inherits
  std::uint64_t generation = 0;
};

/// Approximate topological order of a decremental digraph: a refining node
/// partition with nesting interval labels, kept so every node has weak
/// diameter at most 2*alpha*delta*|X|/n in the current graph. A pruned graph
/// G' accumulates separator-edge removals; (partition, tau) is always a
/// generalized topological order of G'. The restricted SSSP plug-in is an
/// exact ES-tree pair from a random center per node (alpha = 1).
class Ato {
 public:
  Ato(DynamicDigraph& g, const AtoConfig& cfg, Rng rng);

  void delete_edge(VertexId u, VertexId v);
  // Graph deletion already applied by the caller.
  void on_edge_deleted(EdgeId e);

  const DynamicDigraph& graph() const { return *g_; }
  const AtoConfig& config() const { return cfg_; }
  const Partition& partition() const { return part_; }
  NodeId node_of(VertexId v) const { return part_.node_of(v); }
  std::int64_t tau(NodeId x) const { return tau_[x]; }
  bool edge_in_gprime(EdgeId e) const { return gprime_[e]; }
  double eta_diam() const { return 2.0 * cfg_.alpha * cfg_.delta; }

  // All split records since construction; consumers remember their offset.
  const std::vector<AtoChangeRecord>& change_log() const { return changes_; }

  // Sum of |tau(X^u) - tau(X^v)| over a path given as edge ids.
  std::int64_t topological_cost(const std::vector<EdgeId>& path) const;
  // Backward-only variant: sum of max(0, tau(X^u) - tau(X^v)).
  std::int64_t backward_cost(const std::vector<EdgeId>& path) const;

  struct QualityReport {
    int pairs_sampled = 0;
    int pairs_connected = 0;
    double mean_cost = 0.0;
    std::int64_t max_cost = 0;
  };
  QualityReport quality_report(const std::vector<std::pair<VertexId, VertexId>>& pairs) const;

  std::int64_t separator_rounds() const { return separator_rounds_; }

 private:
  struct Inst {
    VertexId center = -1;
    double threshold = 0.0;
    std::unique_ptr<EsTree> out, in;
  };

  double node_threshold(NodeId x) const;
  void build_instance(NodeId x);
  void refresh_node(NodeId x);
  std::optional<std::pair<NodeId, VertexId>> find_violation();
  void resolve_violations();
  std::vector<std::vector<VertexId>> gprime_sccs_topo(const std::vector<VertexId>& scope) const;

  DynamicDigraph* g_;
  AtoConfig cfg_;
  Rng rng_;
  double zeta_;
  std::vector<char> gprime_;
  Partition part_;
  std::vector<std::int64_t> tau_;
  std::map<NodeId, Inst> insts_;
  std::vector<AtoChangeRecord> changes_;
  std::int64_t separator_rounds_ = 0;
};

/// Independent copies driven by the same update stream.
class AtoBundle {
 public:
  AtoBundle(DynamicDigraph& g, const AtoConfig& cfg, Rng rng) {
    for (int i = 0; i < std::max(1, cfg.bundle); ++i) {
      members_.push_back(std::make_unique<Ato>(g, cfg, rng.fork()));
    }
  }
  void delete_edge(DynamicDigraph& g, VertexId u, VertexId v) {
    EdgeId e = g.find_alive_edge(u, v);
    if (e == kNoEdge) fail(Err::NoSuchEdge, "no alive edge");
    g.delete_edge_by_id(e);
    for (auto& m : members_) m->on_edge_deleted(e);
  }
  int size() const { return static_cast<int>(members_.size()); }
  Ato& member(int i) { return *members_[i]; }

 private:
  std::vector<std::unique_ptr<Ato>> members_;
};

}  // namespace dygraph
