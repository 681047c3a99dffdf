// SPDX-License-Identifier: Apache-2.0
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <set>
#include <thread>

#include <CLI11.hpp>

#include "quadrelax/analysis.hpp"
#include "quadrelax/io.hpp"
#include "quadrelax/mip.hpp"
#include "quadrelax/recovery.hpp"
#include "quadrelax/relaxer.hpp"

namespace fs = std::filesystem;
using namespace quadrelax;

namespace {

uint64_t default_seed() {
  if (const char* env = std::getenv("QUADRELAX_SEED")) {
    return std::strtoull(env, nullptr, 10);
  }
  return 42;
}

int tightening_depth(int L) { return std::max(2, static_cast<int>(std::ceil(1.5 * L))); }

MiqcqpInstance load_instance(const std::string& path, bool maximize) {
  const std::string ext = fs::path(path).extension().string();
  if (ext == ".boxqp" || ext == ".bqp") {
    const BoxQpParseResult res = parse_boxqp(path, maximize);
    if (res.symmetrized)
      std::cerr << "warning: asymmetric boxQP matrix symmetrized by averaging\n";
    return res.instance;
  }
  if (maximize) {
    MiqcqpInstance inst = parse_native(path);
    for (auto& t : inst.objective.q) t.coeff = -t.coeff;
    for (auto& c : inst.objective.c) c = -c;
    for (auto& d : inst.objective.d) d = -d;
    inst.objective.b = -inst.objective.b;
    return inst;
  }
  return parse_native(path);
}

RelaxConfig make_config(const std::string& method, int L, int L1, double lambda) {
  RelaxConfig cfg;
  cfg.method = method_from_string(method);
  cfg.L = L;
  cfg.L1 = L1 > 0 ? L1 : (method_is_tightened(cfg.method) ? tightening_depth(L) : L);
  cfg.lambda = lambda;
  cfg.validate();
  return cfg;
}

struct BenchJob {
  std::string path;
  std::string name;
  Method method;
  int L;
  int L1;
};

BenchRow run_bench_job(const BenchJob& job, const SolveLimits& limits, double lambda,
                       bool maximize) {
  BenchRow row;
  row.instance = job.name;
  row.method = job.method;
  row.L = job.L;
  row.L1 = job.L1;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    const MiqcqpInstance inst = load_instance(job.path, maximize);
    RelaxConfig cfg;
    cfg.method = job.method;
    cfg.L = job.L;
    cfg.L1 = job.L1;
    cfg.lambda = lambda;
    const RelaxationResult r = build_relaxation(inst, cfg);
    const MipResult res = solve_mip(r.model, limits);
    row.status = to_string(res.status);
    row.dual_bound = res.dual_bound;
    row.nodes = res.node_count;
    if (res.incumbent) {
      const std::vector<double> x = r.original_x(res.incumbent->values);
      const std::vector<double> y = r.original_y(res.incumbent->values);
      const RecoveryResult rec = primal_recovery(inst, x, y);
      if (rec.feasible) {
        row.primal = rec.objective;
        row.gap = compute_gap(rec.objective, res.dual_bound);
      }
    }
  } catch (const std::exception& e) {
    row.status = "error";
    std::cerr << "error: " << job.name << ": " << e.what() << "\n";
  }
  row.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return row;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"MIP relaxations of box-bounded MIQCQPs (McCormick, sawtooth, NMDT, D-NMDT)"};
  app.require_subcommand(1);

  // ---- relax ----
  auto* relax = app.add_subcommand("relax", "Build a relaxation and export it as an LP file");
  std::string relax_instance, relax_method = "dnmdt", relax_out;
  int relax_L = 1, relax_L1 = 0;
  double relax_lambda = 0.5;
  bool relax_maximize = false;
  relax->add_option("instance", relax_instance, "instance file (.miqcqp or .boxqp)")->required();
  relax->add_option("--method", relax_method, "mc|nmdt|tnmdt|dnmdt|tdnmdt");
  relax->add_option("--L", relax_L, "discretization depth");
  relax->add_option("--L1", relax_L1, "tightening depth (default max{2, ceil(1.5L)})");
  relax->add_option("--lambda", relax_lambda, "D-NMDT blend parameter");
  relax->add_option("--out", relax_out, "output LP path (default: instance stem + .lp)");
  relax->add_flag("--maximize", relax_maximize, "negate the objective while reading");

  // ---- solve ----
  auto* solve = app.add_subcommand("solve", "Solve an exported model or relax-and-solve an instance");
  std::string solve_target, solve_method = "dnmdt";
  int solve_L = 1, solve_L1 = 0;
  double solve_lambda = 0.5;
  bool solve_maximize = false;
  SolveLimits solve_limits;
  solve->add_option("target", solve_target, "model.lp or instance file")->required();
  solve->add_option("--method", solve_method, "relaxation method for instance inputs");
  solve->add_option("--L", solve_L, "discretization depth");
  solve->add_option("--L1", solve_L1, "tightening depth");
  solve->add_option("--lambda", solve_lambda, "D-NMDT blend parameter");
  solve->add_option("--nodes", solve_limits.max_nodes, "branch-and-bound node limit");
  solve->add_option("--time-limit", solve_limits.max_seconds, "wall-clock limit in seconds");
  solve->add_option("--gap", solve_limits.rel_gap, "relative optimality gap");
  solve->add_flag("--maximize", solve_maximize, "negate the objective while reading");

  // ---- analyze ----
  auto* analyze = app.add_subcommand("analyze", "Emit error/width statistics for a method");
  std::string analyze_method_name = "dnmdt", analyze_out;
  int analyze_L = 1, analyze_L1 = 0;
  double analyze_lambda = 0.5;
  long analyze_samples = 1000000, analyze_resolution = 100000;
  uint64_t analyze_seed = default_seed();
  analyze->add_option("--method", analyze_method_name, "mc|nmdt|tnmdt|dnmdt|tdnmdt");
  analyze->add_option("--L", analyze_L, "depth")->required();
  analyze->add_option("--L1", analyze_L1, "tightening depth");
  analyze->add_option("--lambda", analyze_lambda, "blend parameter");
  analyze->add_option("--samples", analyze_samples, "Monte-Carlo samples");
  analyze->add_option("--resolution", analyze_resolution, "grid resolution");
  analyze->add_option("--seed", analyze_seed, "RNG seed (env QUADRELAX_SEED)");
  analyze->add_option("--out", analyze_out, "CSV output path (default stdout)");

  // ---- bench ----
  auto* bench = app.add_subcommand("bench", "Relax and solve a directory of instances");
  std::string bench_dir, bench_methods = "nmdt,dnmdt", bench_depths = "1,2,4,6",
              bench_out = "runs.csv";
  double bench_time = 60.0, bench_gap = 1e-4, bench_lambda = 0.5;
  int bench_jobs = 1;
  bool bench_maximize = false;
  bench->add_option("--instances", bench_dir, "directory of .miqcqp/.boxqp files")->required();
  bench->add_option("--methods", bench_methods, "comma list of methods");
  bench->add_option("--depths", bench_depths, "comma list of depths L");
  bench->add_option("--time-limit", bench_time, "per-solve wall clock seconds");
  bench->add_option("--gap", bench_gap, "relative optimality gap");
  bench->add_option("--lambda", bench_lambda, "blend parameter");
  bench->add_option("--jobs", bench_jobs, "parallel jobs");
  bench->add_option("--out", bench_out, "runs CSV path");
  bench->add_flag("--maximize", bench_maximize, "negate objectives while reading");

  // ---- report ----
  auto* report = app.add_subcommand("report", "Performance profiles and runtime aggregates");
  std::string report_runs, report_profile = "profile.csv", report_sgm = "sgm.csv";
  double report_shift = 10.0;
  report->add_option("--runs", report_runs, "runs CSV from bench")->required();
  report->add_option("--out-profile", report_profile, "profile step-data CSV");
  report->add_option("--out-sgm", report_sgm, "shifted-geomean CSV");
  report->add_option("--shift", report_shift, "geometric-mean shift");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*relax) {
      const MiqcqpInstance inst = load_instance(relax_instance, relax_maximize);
      const RelaxConfig cfg = make_config(relax_method, relax_L, relax_L1, relax_lambda);
      const RelaxationResult r = build_relaxation(inst, cfg);
      const std::string out =
          relax_out.empty() ? fs::path(relax_instance).stem().string() + ".lp" : relax_out;
      export_lp_file(r.model, out);
      write_term_map_json(r, out + ".json");
      std::cout << "method " << to_string(cfg.method) << " L " << cfg.L << " L1 " << cfg.L1
                << "\n";
      std::cout << "variables " << r.model.num_vars() << " rows " << r.model.num_rows()
                << " digit_binaries " << r.actual_counts.binaries << "\n";
      std::cout << "predicted_dense rows " << r.predicted_counts.rows << " digit_binaries "
                << r.predicted_counts.binaries << "\n";
      std::cout << "wrote " << out << " and " << out << ".json\n";
      return 0;
    }

    if (*solve) {
      solve_limits.validate();
      const std::string ext = fs::path(solve_target).extension().string();
      if (ext == ".lp") {
        const MipModel model = parse_lp_file(solve_target);
        const MipResult res = solve_mip(model, solve_limits);
        std::cout << "status " << to_string(res.status) << "\n";
        std::cout << "dual_bound " << res.dual_bound << "\n";
        if (res.incumbent)
          std::cout << "incumbent " << res.incumbent->objective_value << " gap "
                    << compute_gap(res.incumbent->objective_value, res.dual_bound) << "\n";
        std::cout << "nodes " << res.node_count << "\n";
        return res.status == SolveStatus::Infeasible ? 2 : 0;
      }
      const MiqcqpInstance inst = load_instance(solve_target, solve_maximize);
      const RelaxConfig cfg = make_config(solve_method, solve_L, solve_L1, solve_lambda);
      const RelaxationResult r = build_relaxation(inst, cfg);
      const MipResult res = solve_mip(r.model, solve_limits);
      std::cout << "status " << to_string(res.status) << "\n";
      std::cout << "dual_bound " << res.dual_bound << "\n";
      std::cout << "nodes " << res.node_count << "\n";
      if (res.incumbent) {
        std::cout << "relaxation_incumbent " << res.incumbent->objective_value << "\n";
        const std::vector<double> x = r.original_x(res.incumbent->values);
        const std::vector<double> y = r.original_y(res.incumbent->values);
        const RecoveryResult rec = primal_recovery(inst, x, y);
        std::cout << "recovered_objective " << rec.objective << "\n";
        std::cout << "recovered_violation " << rec.max_violation << "\n";
        std::cout << "miqcqp_feasible " << (rec.feasible ? "yes" : "no") << "\n";
        if (rec.feasible)
          std::cout << "gap " << compute_gap(rec.objective, res.dual_bound) << "\n";
      }
      return 0;
    }

    if (*analyze) {
      const RelaxConfig cfg = make_config(analyze_method_name, analyze_L, analyze_L1,
                                          analyze_lambda);
      const auto rows = analyze_method(cfg.method, cfg.L, cfg.L1, cfg.lambda, analyze_samples,
                                       analyze_resolution, analyze_seed);
      std::ofstream file;
      std::ostream* out = &std::cout;
      if (!analyze_out.empty()) {
        file.open(analyze_out);
        if (!file) throw IoError("cannot open " + analyze_out);
        out = &file;
      }
      write_error_report_header(*out);
      for (const auto& row : rows) write_error_report_row(*out, row);
      return 0;
    }

    if (*bench) {
      std::vector<std::string> methods;
      std::stringstream ms(bench_methods);
      std::string item;
      while (std::getline(ms, item, ',')) methods.push_back(item);
      std::vector<int> depths;
      std::stringstream ds(bench_depths);
      while (std::getline(ds, item, ',')) depths.push_back(std::stoi(item));

      std::vector<BenchJob> jobs;
      std::vector<fs::path> files;
      for (const auto& entry : fs::directory_iterator(bench_dir)) {
        const std::string ext = entry.path().extension().string();
        if (ext == ".miqcqp" || ext == ".boxqp" || ext == ".bqp") files.push_back(entry.path());
      }
      std::sort(files.begin(), files.end());
      for (const auto& path : files) {
        for (const auto& mname : methods) {
          const Method method = method_from_string(mname);
          for (int L : depths) {
            jobs.push_back(BenchJob{path.string(), path.stem().string(), method, L,
                                    method_is_tightened(method) ? tightening_depth(L) : L});
          }
        }
      }

      SolveLimits limits;
      limits.max_seconds = bench_time;
      limits.rel_gap = bench_gap;

      std::ofstream out(bench_out);
      if (!out) throw IoError("cannot open " + bench_out);
      write_bench_header(out);

      // Results flush incrementally in job order regardless of which worker
      // finishes first.
      std::vector<std::unique_ptr<BenchRow>> results(jobs.size());
      std::mutex mu;
      size_t cursor = 0;
      std::atomic<size_t> next{0};
      auto worker = [&] {
        while (true) {
          const size_t idx = next.fetch_add(1);
          if (idx >= jobs.size()) return;
          BenchRow row = run_bench_job(jobs[idx], limits, bench_lambda, bench_maximize);
          std::lock_guard<std::mutex> lock(mu);
          results[idx] = std::make_unique<BenchRow>(std::move(row));
          while (cursor < results.size() && results[cursor]) {
            write_bench_row(out, *results[cursor]);
            out.flush();
            ++cursor;
          }
        }
      };
      std::vector<std::thread> pool;
      const int nthreads = std::max(1, bench_jobs);
      for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);
      for (auto& th : pool) th.join();
      std::cout << "wrote " << bench_out << " (" << jobs.size() << " runs)\n";
      return 0;
    }

    if (*report) {
      const std::vector<BenchRow> rows = read_bench_csv(report_runs);
      if (rows.empty()) throw ParseError("runs CSV has no data rows");

      std::set<std::string> solver_set, instance_set;
      for (const auto& r : rows) {
        solver_set.insert(std::string(to_string(r.method)) + "@L" + std::to_string(r.L));
        instance_set.insert(r.instance);
      }
      ProfileInput input;
      input.solver_names.assign(solver_set.begin(), solver_set.end());
      input.instance_names.assign(instance_set.begin(), instance_set.end());
      std::map<std::string, size_t> sidx, pidx;
      for (size_t s = 0; s < input.solver_names.size(); ++s) sidx[input.solver_names[s]] = s;
      for (size_t p = 0; p < input.instance_names.size(); ++p) pidx[input.instance_names[p]] = p;
      input.bounds.assign(input.instance_names.size(),
                          std::vector<double>(input.solver_names.size(),
                                              std::numeric_limits<double>::quiet_NaN()));
      std::map<std::string, std::vector<double>> times;   // solver -> seconds
      std::set<std::string> instances_with_optimal;
      for (const auto& r : rows) {
        const std::string solver = std::string(to_string(r.method)) + "@L" + std::to_string(r.L);
        input.bounds[pidx[r.instance]][sidx[solver]] = r.dual_bound;
        if (r.status == "optimal") instances_with_optimal.insert(r.instance);
      }
      for (const auto& r : rows) {
        if (instances_with_optimal.count(r.instance)) {
          const std::string solver = std::string(to_string(r.method)) + "@L" + std::to_string(r.L);
          times[solver].push_back(r.wall_seconds);
        }
      }

      const ProfileTable table = performance_profile(input);
      std::ofstream pf(report_profile);
      if (!pf) throw IoError("cannot open " + report_profile);
      write_profile_csv(table, pf);

      std::vector<SgmRow> sgm;
      for (const auto& [solver, ts] : times) {
        sgm.push_back(SgmRow{solver, shifted_geomean(ts, report_shift),
                             static_cast<int>(ts.size())});
      }
      std::ofstream sf(report_sgm);
      if (!sf) throw IoError("cannot open " + report_sgm);
      write_sgm_csv(sgm, report_shift, sf);
      std::cout << "wrote " << report_profile << " and " << report_sgm << "\n";
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
