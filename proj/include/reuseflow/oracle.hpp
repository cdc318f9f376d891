#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <vector>

#include "reuseflow/change_tracker.hpp"
#include "reuseflow/dag.hpp"
#include "reuseflow/plan.hpp"

namespace reuseflow::oracle {

/// Enumeration bounds; exceeding them throws std::length_error.
inline constexpr std::size_t kMaxOepNodes = 16;
inline constexpr std::size_t kMaxOmpNodes = 16;
inline constexpr std::size_t kMaxKnapsackItems = 20;

/// 0/1 variables of the integer-program view of a plan: keep[n] = not
/// pruned, compute[n] = computed.
struct IlpAssignment {
  std::map<NodeId, int> keep;
  std::map<NodeId, int> compute;
};

IlpAssignment to_ilp(const StateMap& states);
StateMap from_ilp(const IlpAssignment& x);

/// compute <= keep for every node, and compute[child] <= keep[parent] for
/// every edge (which implies the summed parent constraint).
bool ilp_feasible(const WorkflowDag& dag, const IlpAssignment& x);

/// sum keep*l + compute*(c - l), with `infinite_load` standing in for an
/// Infinite load time.
std::int64_t ilp_objective(const WorkflowDag& dag, const MetricsMap& metrics, const IlpAssignment& x,
                           std::int64_t infinite_load);

struct OepResult {
  Millis min_cost = 0;
  StateMap states;
};

/// Exhaustive search over all 3^|N| assignments honoring: original nodes
/// computed, no Compute node with a pruned parent, outputs not pruned, no
/// Load of an Infinite-load node. Witness is the first minimum in
/// lexicographic order (nodes by id, states Load < Compute < Prune).
OepResult brute_force_oep(const WorkflowDag& dag, const MetricsMap& metrics, const ChangeSet& changes);

/// Optimal next-iteration cost for a metrics map (no originals).
using OptimalCostFn = std::function<Millis(const WorkflowDag&, const MetricsMap&)>;

/// T* from the max-flow solver.
Millis solver_optimal_cost(const WorkflowDag& dag, const MetricsMap& metrics);
/// T* from brute_force_oep.
Millis brute_force_optimal_cost(const WorkflowDag& dag, const MetricsMap& metrics);

struct OmpResult {
  Millis min_t_m = 0;
  std::set<NodeId> materialized;
};

/// Exact minimum of write time plus next-iteration optimum over every
/// subset of nodes whose total size fits `budget_bytes`, assuming the
/// next iteration is identical. `metrics` load_ms is the materialized load
/// time and must be finite.
OmpResult brute_force_omp(const WorkflowDag& dag, const MetricsMap& metrics, std::int64_t budget_bytes,
                          const OptimalCostFn& optimal_cost = solver_optimal_cost);

struct KnapsackItem {
  std::int64_t size = 0;
  std::int64_t profit = 0;
};

struct KnapsackInstance {
  std::int64_t capacity = 0;
  std::vector<KnapsackItem> items;
};

struct KnapsackResult {
  std::int64_t max_profit = 0;
  std::vector<std::size_t> items;  // ascending indices
};

KnapsackResult brute_force_knapsack(const KnapsackInstance& inst);

struct OmpInstance {
  WorkflowDag dag;
  MetricsMap metrics;
  std::int64_t budget_bytes = 0;
};

/// Flat DAG: a Source root with load = compute = 1 ms and one output node
/// per item depending on it, with load = size and compute = profit + 2 size
/// (all scaled by `scale`, with one byte per millisecond).
OmpInstance knapsack_to_omp(const KnapsackInstance& inst, std::int64_t scale = 1000);

/// Node id used for item i in knapsack_to_omp.
NodeId knapsack_item_node(std::size_t i);
inline const NodeId kKnapsackRoot = "root";

}  // namespace reuseflow::oracle
