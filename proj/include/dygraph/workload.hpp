#pragma once

#include <string>
#include <vector>

#include "dygraph/graph.hpp"
#include "dygraph/rng.hpp"

namespace dygraph {

enum class WorkloadModel { Erdos, Path, Grid, LayeredDag };
enum class WorkloadMode { Decremental, Incremental };

struct Workload {
  int n = 0;
  WorkloadMode mode = WorkloadMode::Decremental;
  GraphFile initial;                  // empty for incremental workloads
  std::vector<UpdateRecord> updates;  // all deletions or all insertions
};

WorkloadModel parse_model(const std::string& s);
WorkloadMode parse_mode(const std::string& s);

// Deterministic workload generation. For path/grid models m is implied by
// the shape; for erdos/layered-dag it caps at the simple-graph bound.
Workload generate_workload(int n, int m, WorkloadModel model, WorkloadMode mode,
                           std::uint64_t seed, Weight max_weight = 1);

// Builds the starting graph (initial edges loaded, mode set).
DynamicDigraph materialize(const Workload& w, Weight max_weight = 0);

void write_workload(const Workload& w, const std::string& prefix);
Workload read_workload(const std::string& prefix);

}  // namespace dygraph
