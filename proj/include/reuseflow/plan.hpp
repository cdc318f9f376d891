#pragma once

#include <map>
#include <string>
#include <vector>

#include "reuseflow/change_tracker.hpp"
#include "reuseflow/dag.hpp"

namespace reuseflow {

enum class NodeState { Load, Compute, Prune };

std::string to_string(NodeState state);

using StateMap = std::map<NodeId, NodeState>;

struct ExecutionPlan {
  StateMap states;
  Millis cost_ms = 0;
};

/// Total run time of a state assignment: compute time for Compute nodes,
/// load time for Load nodes, nothing for Prune nodes. Throws
/// std::invalid_argument for a Load of a node with Infinite load time or a
/// non-total assignment.
Millis plan_cost(const WorkflowDag& dag, const MetricsMap& metrics, const StateMap& states);

struct PlanViolation {
  NodeId node;
  std::string message;
};

/// Original nodes must be Compute; a Compute node must not have a Prune parent.
std::vector<PlanViolation> check_plan(const WorkflowDag& dag, const ChangeSet& changes, const StateMap& states);

}  // namespace reuseflow
