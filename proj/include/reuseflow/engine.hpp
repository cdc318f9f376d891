#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "reuseflow/catalog.hpp"
#include "reuseflow/change_tracker.hpp"
#include "reuseflow/executor.hpp"
#include "reuseflow/oep_solver.hpp"
#include "reuseflow/omp_planner.hpp"
#include "reuseflow/plan.hpp"
#include "reuseflow/workflow_io.hpp"

namespace reuseflow {

inline constexpr std::int64_t kDefaultBudgetBytes = std::int64_t{10} << 30;

enum class ExecutorKind { Simulated, Process };

ExecutorKind executor_kind_from_string(const std::string& text);

/// Fired for every catalog read, before the artifact is touched.
struct LoadEvent {
  int iteration = 0;
  NodeId node;
  Signature signature;
  bool node_original = false;
};

struct RunOptions {
  MatPolicy policy = MatPolicy::StreamingHeuristic;
  std::int64_t budget_bytes = kDefaultBudgetBytes;
  ExecutorKind executor = ExecutorKind::Simulated;
  std::string iteration_type = "run";
  std::function<void(const LoadEvent&)> on_load;
  /// Copied into the record's warnings.
  std::vector<std::string> notes;
};

struct DecisionRecord {
  NodeId node;
  Millis cumulative_ms = 0;
  Millis load_ms = 0;
  /// "materialize", "discard" or "already_materialized".
  std::string decision;
  std::int64_t used_bytes = 0;
  Millis write_ms = 0;
};

struct ExecEvent {
  /// "load", "compute" or "decide".
  std::string kind;
  NodeId node;
};

struct IterationRecord {
  int iteration = 0;
  std::string iteration_type;
  std::string policy;
  std::vector<NodeId> original;
  std::map<NodeId, std::string> signatures;
  StateMap states;
  Millis predicted_cost_ms = 0;
  std::map<NodeId, Millis> realized_ms;
  std::vector<DecisionRecord> decisions;
  std::vector<ExecEvent> events;
  std::int64_t budget_bytes = 0;
  std::int64_t storage_bytes = 0;
  std::size_t catalog_entries = 0;
  /// Always-materialize skipped a node because the budget was full.
  bool budget_capped = false;
  Millis run_ms = 0;
  Millis mat_ms = 0;
  Millis iteration_ms = 0;
  Millis cumulative_run_ms = 0;
  std::vector<std::string> warnings;
};

std::string serialize_record(const IterationRecord& rec);
IterationRecord parse_record(const std::string& text);

/// Records under <store>/history, ordered by iteration.
std::vector<IterationRecord> read_history(const std::filesystem::path& store);

/// Reads a materialized node back. Throws IntegrityError when the
/// signature is absent or the artifact is missing or the wrong size.
StepResult load_node(const MaterializationCatalog& catalog, const Signature& sig, Executor& executor);

/// Everything the optimizer decides before execution.
struct PlanPreview {
  int iteration = 0;
  Workflow workflow;  // sliced
  std::vector<NodeId> sliced_away;
  ChangeSet changes;
  std::map<NodeId, Signature> signatures;
  MetricsMap metrics;
  PspInstance psp;
  ExecutionPlan plan;
  std::vector<std::string> warnings;
};

/// Plans the next iteration of `wf` against the store without modifying it.
PlanPreview preview_plan(const Workflow& wf, const std::filesystem::path& store);

/// One iteration: slice, diff against the previous iteration, purge stale
/// materializations, plan, execute in topological order with one
/// materialization decision per computed node as it goes out of scope,
/// then append the record to <store>/history/<t>.json.
IterationRecord run_iteration(const Workflow& wf, const std::filesystem::path& store, const RunOptions& options);
IterationRecord run_iteration(const std::filesystem::path& workflow_file, const std::filesystem::path& store,
                              const RunOptions& options);

}  // namespace reuseflow
