// Bench harness: workload generation, structure execution with optional
// per-stage verification, CSV reporting.
//
//   dygraph gen --n 100 --m 300 --model erdos --mode decremental --seed 7 --out w
//   dygraph run --in w --algo scc --verify-every 1 --oracle --out run.csv
//   dygraph report --out merged.csv run1.csv run2.csv
//
// Exit codes: 0 ok, 2 verification failure, 3 bad input.

#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "dygraph/runner.hpp"
#include "dygraph/workload.hpp"

namespace {

int cmd_gen(int n, int m, const std::string& model, const std::string& mode, std::uint64_t seed,
            std::int64_t max_weight, const std::string& out) {
  using namespace dygraph;
  Workload w = generate_workload(n, m, parse_model(model), parse_mode(mode), seed, max_weight);
  write_workload(w, out);
  std::cout << "wrote " << out << ".graph and " << out << ".up (" << w.updates.size()
            << " updates)\n";
  return 0;
}

int cmd_run(const std::string& in, const std::string& algos_csv, double eps, int delta,
            int verify_every, bool oracle, std::uint64_t seed, const std::string& out, int jobs,
            bool inject_fault) {
  using namespace dygraph;
  Workload w = read_workload(in);

  std::vector<bench::RunOptions> opts;
  std::stringstream ss(algos_csv);
  std::string name;
  while (std::getline(ss, name, ',')) {
    if (name.empty()) continue;
    bench::RunOptions o;
    o.algo = bench::parse_algo(name);
    o.eps = eps;
    if (delta > 0) o.delta = delta;
    o.verify_every = verify_every;
    o.oracle_baseline = oracle;
    o.seed = seed;
    o.inject_fault = inject_fault;
    opts.push_back(o);
  }
  if (opts.empty()) {
    std::cerr << "no algo given\n";
    return 3;
  }

  std::vector<bench::RunReport> reports(opts.size());
  std::vector<std::string> errors(opts.size());
  std::mutex mu;
  std::size_t next = 0;
  auto worker = [&]() {
    for (;;) {
      std::size_t i;
      {
        std::lock_guard<std::mutex> lock(mu);
        if (next >= opts.size()) return;
        i = next++;
      }
      try {
        reports[i] = bench::run_workload(w, opts[i]);
      } catch (const Error& e) {
        errors[i] = e.what();
      }
    }
  };
  int nthreads = std::max(1, std::min<int>(jobs, static_cast<int>(opts.size())));
  std::vector<std::thread> pool;
  for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  int rc = 0;
  for (std::size_t i = 0; i < opts.size(); ++i) {
    if (!errors[i].empty()) {
      std::cerr << "error (" << bench::algo_name(opts[i].algo) << "): " << errors[i] << "\n";
      rc = std::max(rc, 3);
      continue;
    }
    const auto& rep = reports[i];
    std::string path = out;
    if (opts.size() > 1) path += "." + rep.algo + ".csv";
    std::ofstream cf(path);
    bench::write_csv(cf, rep);
    std::ofstream sf(path + ".summary");
    bench::write_summary(sf, rep);
    bench::write_summary(std::cout, rep);
    if (rep.verification_failed) {
      std::cerr << "verification failed (" << rep.algo << "): " << rep.witness << "\n";
      rc = std::max(rc, 2);
    }
  }
  return rc;
}

int cmd_report(const std::vector<std::string>& inputs, const std::string& out) {
  using namespace dygraph;
  std::vector<bench::RunReport> reports;
  for (const std::string& path : inputs) reports.push_back(bench::read_csv_with_summary(path));
  if (out.empty()) {
    bench::write_merged_report(std::cout, std::move(reports));
  } else {
    std::ofstream f(out);
    bench::write_merged_report(f, std::move(reports));
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"partially dynamic digraph bench harness"};
  app.require_subcommand(1);

  int n = 10, m = 20, delta = 0, verify_every = 0, jobs = 1;
  double eps = 0.5;
  std::uint64_t seed = 1;
  std::int64_t max_weight = 1;
  bool oracle = false;
  std::string model = "erdos", mode = "decremental", out = "workload", in, algo = "scc",
              report_out;
  std::vector<std::string> report_inputs;

  auto* gen = app.add_subcommand("gen", "generate a workload");
  gen->add_option("--n", n, "vertex count");
  gen->add_option("--m", m, "edge count (shape models override)");
  gen->add_option("--model", model, "erdos|path|grid|layered-dag");
  gen->add_option("--mode", mode, "decremental|incremental");
  gen->add_option("--seed", seed, "rng seed");
  gen->add_option("--max-weight", max_weight, "edge weight cap (default 1)");
  gen->add_option("--out", out, "output file prefix");

  auto* run = app.add_subcommand("run", "run a structure over a workload");
  run->add_option("--in", in, "workload file prefix")->required();
  run->add_option("--algo", algo,
                  "es|ges|scc|ssr|ato|dag-sssp|ato-sssp|inc-sssp|inc-sssp-weighted (comma list)");
  run->add_option("--eps", eps, "approximation parameter");
  run->add_option("--delta", delta, "depth parameter (0 = default)");
  run->add_option("--verify-every", verify_every, "cross-check every k-th stage (0 = off)");
  run->add_flag("--oracle", oracle, "time the naive per-update oracle baseline");
  run->add_option("--seed", seed, "rng seed");
  run->add_option("--out", out, "csv output path");
  run->add_option("--jobs", jobs, "worker threads for multi-algo runs");
  bool inject_fault = false;
  run->add_flag("--inject-fault", inject_fault, "negative-test hook: fail verification once")
      ->group("");

  auto* report = app.add_subcommand("report", "merge run CSVs");
  report->add_option("--out", report_out, "merged output path (default stdout)");
  report->add_option("inputs", report_inputs, "csv files")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) return cmd_gen(n, m, model, mode, seed, max_weight, out);
    if (run->parsed())
      return cmd_run(in, algo, eps, delta, verify_every, oracle, seed,
                     out == "workload" ? "run.csv" : out, jobs, inject_fault);
    if (report->parsed()) return cmd_report(report_inputs, report_out);
  } catch (const dygraph::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
