#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "reuseflow/change_tracker.hpp"
#include "reuseflow/dag.hpp"
#include "reuseflow/max_flow.hpp"
#include "reuseflow/plan.hpp"

namespace reuseflow {

/// A project of the project-selection instance. Each node n has a
/// "keep" project a(n) (not pruned) and a "compute" project b(n).
struct ProjectId {
  enum class Kind { A, B };
  Kind kind = Kind::A;
  NodeId node;

  static ProjectId a(NodeId n) { return {Kind::A, std::move(n)}; }
  static ProjectId b(NodeId n) { return {Kind::B, std::move(n)}; }

  std::string str() const;
  friend auto operator<=>(const ProjectId&, const ProjectId&) = default;
};

struct PspInstance {
  std::vector<ProjectId> projects;  // ascending
  std::map<ProjectId, std::int64_t> profit;
  /// (dependent, prerequisite) pairs.
  std::set<std::pair<ProjectId, ProjectId>> prerequisites;
  /// Projects that must be selected: both projects of original nodes, and
  /// a(n) of output nodes.
  std::set<ProjectId> required;
  /// Stand-in for an infinite load time: profit(a) = -big, profit(b) = big - c.
  std::int64_t big = 0;
};

/// a(n): profit -l; b(n): profit l - c; b(n) requires a(n); b(child)
/// requires a(parent) for every edge.
PspInstance reduce_to_psp(const WorkflowDag& dag, const MetricsMap& metrics, const ChangeSet& changes);

/// Closure network: vertex 0 is the source, 1 the sink, project i is
/// vertex i + 2. Positive profits become source arcs, negative profits sink
/// arcs, prerequisites and required projects unbounded arcs.
FlowNetwork to_flow_network(const PspInstance& psp);

/// Maximum-profit prerequisite-closed selection containing every required
/// project. Among optimal selections returns the smallest one.
std::set<ProjectId> solve_psp(const PspInstance& psp);

std::int64_t total_profit(const PspInstance& psp, const std::set<ProjectId>& selection);

/// a and b selected -> Compute, only a -> Load, neither -> Prune. Throws
/// std::logic_error if b(n) is selected without a(n).
StateMap plan_from_projects(const WorkflowDag& dag, const std::set<ProjectId>& selection);

/// Minimum-cost state assignment with original nodes computed and output
/// nodes never pruned.
ExecutionPlan optimal_plan(const WorkflowDag& dag, const MetricsMap& metrics, const ChangeSet& changes);

/// Deterministic text dump of the instance and its flow network.
std::string emit_psp(const PspInstance& psp);

}  // namespace reuseflow
