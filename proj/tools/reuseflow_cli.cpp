// reuseflow: plan, run and simulate iterative workflows with result reuse.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "reuseflow/engine.hpp"
#include "reuseflow/oracle.hpp"
#include "reuseflow/report.hpp"
#include "reuseflow/session.hpp"

namespace fs = std::filesystem;
using namespace reuseflow;

namespace {

struct CommonFlags {
  std::string store = ".reuseflow";
  std::int64_t budget = kDefaultBudgetBytes;
  std::string policy = "opt";
  std::string executor = "sim";
};

void add_run_flags(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--store", f.store, "Store directory")->capture_default_str();
  cmd->add_option("--budget", f.budget, "Storage budget in bytes")->capture_default_str()->check(CLI::NonNegativeNumber);
  cmd->add_option("--policy", f.policy, "Materialization policy")
      ->capture_default_str()
      ->check(CLI::IsMember({"opt", "am", "nm"}));
  cmd->add_option("--executor", f.executor, "Executor")->capture_default_str()->check(CLI::IsMember({"sim", "process"}));
}

RunOptions run_options(const CommonFlags& f) {
  RunOptions opts;
  opts.policy = mat_policy_from_string(f.policy);
  opts.budget_bytes = f.budget;
  opts.executor = executor_kind_from_string(f.executor);
  return opts;
}

void print_warnings(const std::vector<std::string>& warnings) {
  for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

int cmd_plan(const std::string& workflow, const std::string& store, const std::string& psp_file) {
  Workflow wf = load_workflow(workflow);
  auto report = validate(wf.dag);
  if (!report.ok()) {
    for (const auto& f : report.findings) std::cerr << "invalid workflow: " << f << "\n";
    return 1;
  }
  PlanPreview p = preview_plan(wf, store);
  print_warnings(p.warnings);
  std::printf("iteration %d: %zu nodes", p.iteration, p.workflow.dag.size());
  if (!p.sliced_away.empty()) std::printf(" (%zu sliced away)", p.sliced_away.size());
  std::printf("\n%-24s %-8s %10s %10s %s\n", "node", "state", "c_ms", "l_ms", "original");
  for (const auto& [id, st] : p.plan.states) {
    const auto& m = p.metrics.at(id);
    std::printf("%-24s %-8s %10lld %10s %s\n", id.c_str(), to_string(st).c_str(),
                static_cast<long long>(m.compute_ms), to_string(m.load_ms).c_str(),
                p.changes.is_original(id) ? "yes" : "no");
  }
  auto flow = max_flow(to_flow_network(p.psp));
  std::printf("T* = %lld ms\n", static_cast<long long>(p.plan.cost_ms));
  std::printf("psp: %zu projects, %zu prerequisites, %zu required, max flow %lld\n", p.psp.projects.size(),
              p.psp.prerequisites.size(), p.psp.required.size(), static_cast<long long>(flow.flow_value));
  if (!psp_file.empty()) write_text(psp_file, emit_psp(p.psp));
  return 0;
}

int cmd_run(const std::string& workflow, const CommonFlags& f) {
  auto rec = run_iteration(fs::path(workflow), f.store, run_options(f));
  print_warnings(rec.warnings);
  std::size_t counts[3] = {0, 0, 0};
  for (const auto& [_, st] : rec.states) ++counts[static_cast<int>(st)];
  std::printf("iteration %d: load %zu, compute %zu, prune %zu\n", rec.iteration, counts[0], counts[1], counts[2]);
  std::printf("run %lld ms, materialization %lld ms, cumulative %lld ms, storage %lld bytes\n",
              static_cast<long long>(rec.run_ms), static_cast<long long>(rec.mat_ms),
              static_cast<long long>(rec.cumulative_run_ms), static_cast<long long>(rec.storage_bytes));
  return 0;
}

int cmd_simulate(const std::string& workflow, CommonFlags f, bool store_given, const std::string& out_dir,
                 int iters, const std::string& weights, std::uint64_t seed) {
  Scenario scenario = with_weights(Scenario{}, weights);
  scenario.iterations = iters;
  scenario.seed = seed;
  fs::create_directories(out_dir);
  if (!store_given) f.store = (fs::path(out_dir) / "store").string();
  auto records = simulate_session(load_workflow(workflow), scenario, run_options(f), f.store);
  for (const auto& rec : records) print_warnings(rec.warnings);
  auto rows = build_report(records);
  write_text(fs::path(out_dir) / "report.csv", report_csv(rows));
  write_text(fs::path(out_dir) / "report.json", report_json(rows));
  std::printf("%zu iterations, final cumulative %lld ms, storage %lld bytes\n", rows.size(),
              static_cast<long long>(rows.back().cumulative_ms), static_cast<long long>(rows.back().storage_bytes));
  return 0;
}

int cmd_diff(const std::string& prev_file, const std::string& next_file) {
  Workflow prev = load_workflow(prev_file);
  Workflow next = load_workflow(next_file);
  auto report = describe_changes(prev.dag, next.dag);
  if (report.changed.empty() && report.removed.empty()) {
    std::printf("no changes\n");
    return 0;
  }
  for (const auto& c : report.changed) std::printf("original %s (%s)\n", c.id.c_str(), to_string(c.cause).c_str());
  for (const auto& id : report.removed) std::printf("removed %s\n", id.c_str());
  return 0;
}

int cmd_verify(const std::string& workflow, const std::string& store, const std::vector<std::string>& originals) {
  Workflow wf = load_workflow(workflow);
  WorkflowDag dag;
  MetricsMap metrics;
  ChangeSet changes;
  if (!store.empty()) {
    PlanPreview p = preview_plan(wf, store);
    dag = p.workflow.dag;
    metrics = p.metrics;
    changes = p.changes;
  } else {
    Workflow sliced = wf.restricted_to(slice_to_outputs(wf.dag));
    dag = sliced.dag;
    metrics = sliced.materialized_metrics();
    for (const auto& id : originals) {
      if (!dag.contains(id)) throw std::invalid_argument("unknown node '" + id + "'");
      changes.original.insert(id);
      for (const auto& d : dag.descendants(id)) changes.original.insert(d);
    }
    for (const auto& id : changes.original) metrics[id].load_ms = LoadTime::infinite();
  }
  if (dag.size() > oracle::kMaxOepNodes) {
    std::fprintf(stderr, "refusing to verify: %zu nodes exceeds the enumeration bound of %zu\n", dag.size(),
                 oracle::kMaxOepNodes);
    return 1;
  }
  auto plan = optimal_plan(dag, metrics, changes);
  auto brute = oracle::brute_force_oep(dag, metrics, changes);
  auto violations = check_plan(dag, changes, plan.states);
  std::printf("solver T* = %lld ms, exhaustive minimum = %lld ms, violations = %zu\n",
              static_cast<long long>(plan.cost_ms), static_cast<long long>(brute.min_cost), violations.size());
  if (plan.cost_ms != brute.min_cost || !violations.empty()) {
    std::printf("MISMATCH\n");
    return 1;
  }
  std::printf("agree\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"reuseflow: reuse-aware planning and execution of iterative workflows"};
  app.require_subcommand(1);

  std::string workflow, prev_file, next_file, psp_file, out_dir = "reuseflow-out", weights = "1,1,1";
  std::string plan_store = ".reuseflow", verify_store;
  std::vector<std::string> originals;
  int iters = 10;
  std::uint64_t seed = 0;
  CommonFlags run_flags, sim_flags;

  auto* plan = app.add_subcommand("plan", "Print the optimal execution plan for the next iteration");
  plan->add_option("workflow", workflow, "Workflow JSON file")->required()->check(CLI::ExistingFile);
  plan->add_option("--store", plan_store, "Store directory")->capture_default_str();
  plan->add_option("--emit-psp", psp_file, "Write the project-selection instance and flow network to FILE");

  auto* run = app.add_subcommand("run", "Run one iteration against the store");
  run->add_option("workflow", workflow, "Workflow JSON file")->required()->check(CLI::ExistingFile);
  add_run_flags(run, run_flags);

  auto* simulate = app.add_subcommand("simulate", "Run a seeded multi-iteration session and write reports");
  simulate->add_option("workflow", workflow, "Workflow JSON file")->required()->check(CLI::ExistingFile);
  add_run_flags(simulate, sim_flags);
  simulate->add_option("--out", out_dir, "Output directory for report.csv/report.json")->capture_default_str();
  simulate->add_option("--iters", iters, "Number of iterations")->capture_default_str()->check(CLI::PositiveNumber);
  simulate->add_option("--weights", weights, "Iteration type weights d,l,p")->capture_default_str();
  simulate->add_option("--seed", seed, "PRNG seed")->capture_default_str();

  auto* diff_cmd = app.add_subcommand("diff", "List original nodes between two workflow versions");
  diff_cmd->add_option("prev", prev_file, "Previous workflow")->required()->check(CLI::ExistingFile);
  diff_cmd->add_option("next", next_file, "Next workflow")->required()->check(CLI::ExistingFile);

  auto* verify = app.add_subcommand("verify", "Cross-check the max-flow plan against exhaustive search");
  verify->add_option("workflow", workflow, "Workflow JSON file")->required()->check(CLI::ExistingFile);
  verify->add_option("--store", verify_store, "Plan against this store instead of assuming everything is materialized");
  verify->add_option("--original", originals, "Treat these nodes (and descendants) as modified")->delimiter(',');

  CLI11_PARSE(app, argc, argv);

  try {
    if (*plan) return cmd_plan(workflow, plan_store, psp_file);
    if (*run) return cmd_run(workflow, run_flags);
    if (*simulate)
      return cmd_simulate(workflow, sim_flags, simulate->count("--store") > 0, out_dir, iters, weights, seed);
    if (*diff_cmd) return cmd_diff(prev_file, next_file);
    if (*verify) return cmd_verify(workflow, verify_store, originals);
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 1;
  }
  return 0;
}
