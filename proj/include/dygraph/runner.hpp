#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "dygraph/workload.hpp"

namespace dygraph {
namespace bench {

enum class Algo { Es, Ges, Scc, Ssr, Ato, DagSssp, AtoSssp, IncSssp, IncSsspWeighted };

Algo parse_algo(const std::string& s);
std::string algo_name(Algo a);
bool algo_compatible(Algo a, WorkloadMode mode);

struct RunOptions {
  Algo algo = Algo::Scc;
  double eps = 0.5;
  std::optional<int> delta;
  int verify_every = 0;  // 0 = no verification
  bool oracle_baseline = false;
  std::uint64_t seed = 1;
  // Negative-test hook: report a deliberately wrong answer once.
  bool inject_fault = false;
};

struct StageRow {
  std::uint64_t stage = 0;
  char op = 'D';
  std::int64_t cumulative_micros = 0;
  int verified = 0;
  bool has_error = false;
  double max_rel_error = 0.0;
};

struct RunReport {
  std::string algo;
  std::vector<StageRow> rows;
  std::int64_t total_micros = 0;
  std::int64_t baseline_micros = 0;
  std::int64_t events = 0;
  std::int64_t peak_memory_estimate = 0;
  bool verification_failed = false;
  std::string witness;
};

RunReport run_workload(const Workload& w, const RunOptions& opt);

void write_csv(std::ostream& out, const RunReport& rep);
void write_summary(std::ostream& out, const RunReport& rep);
// Reads a CSV produced by write_csv plus its sidecar summary, if present.
RunReport read_csv_with_summary(const std::string& csv_path);
// Merged report: rows sorted by (algo, stage), then a summary block with the
// total-time ratio against the naive baseline per run.
void write_merged_report(std::ostream& out, std::vector<RunReport> reports);

}  // namespace bench
}  // namespace dygraph
