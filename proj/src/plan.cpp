#include "reuseflow/plan.hpp"

#include <stdexcept>

namespace reuseflow {

std::string to_string(NodeState state) {
  switch (state) {
    case NodeState::Load: return "Load";
    case NodeState::Compute: return "Compute";
    case NodeState::Prune: return "Prune";
  }
  return "?";
}

Millis plan_cost(const WorkflowDag& dag, const MetricsMap& metrics, const StateMap& states) {
  Millis total = 0;
  for (const auto& [id, _] : dag.nodes()) {
    auto st = states.find(id);
    if (st == states.end()) throw std::invalid_argument("no state for node " + id);
    if (st->second == NodeState::Prune) continue;
    auto m = metrics.find(id);
    if (m == metrics.end()) throw std::invalid_argument("no metrics for node " + id);
    if (st->second == NodeState::Compute) {
      total += m->second.compute_ms;
    } else {
      if (!m->second.load_ms.is_finite())
        throw std::invalid_argument("load of unmaterialized node " + id);
      total += m->second.load_ms.ms();
    }
  }
  return total;
}

std::vector<PlanViolation> check_plan(const WorkflowDag& dag, const ChangeSet& changes, const StateMap& states) {
  std::vector<PlanViolation> out;
  auto state_of = [&](const NodeId& id) -> const NodeState* {
    auto it = states.find(id);
    return it == states.end() ? nullptr : &it->second;
  };
  for (const auto& [id, _] : dag.nodes()) {
    const NodeState* st = state_of(id);
    if (!st) {
      out.push_back({id, "no state assigned"});
      continue;
    }
    if (changes.is_original(id) && *st != NodeState::Compute)
      out.push_back({id, "original node must be computed"});
    if (*st == NodeState::Compute) {
      for (const auto& p : dag.parents(id)) {
        const NodeState* ps = state_of(p);
        if (ps && *ps == NodeState::Prune) out.push_back({id, "computed node has pruned parent " + p});
      }
    }
  }
  return out;
}

}  // namespace reuseflow
