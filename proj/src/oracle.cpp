#include "reuseflow/oracle.hpp"

#include <cstdio>
#include <limits>
#include <stdexcept>

#include "reuseflow/oep_solver.hpp"
#include "reuseflow/omp_planner.hpp"

namespace reuseflow::oracle {

IlpAssignment to_ilp(const StateMap& states) {
  IlpAssignment x;
  for (const auto& [id, st] : states) {
    x.keep[id] = st != NodeState::Prune;
    x.compute[id] = st == NodeState::Compute;
  }
  return x;
}

StateMap from_ilp(const IlpAssignment& x) {
  StateMap states;
  for (const auto& [id, keep] : x.keep) {
    int compute = x.compute.at(id);
    if (compute && !keep) throw std::invalid_argument("compute without keep at " + id);
    states[id] = keep ? (compute ? NodeState::Compute : NodeState::Load) : NodeState::Prune;
  }
  return states;
}

bool ilp_feasible(const WorkflowDag& dag, const IlpAssignment& x) {
  for (const auto& [id, _] : dag.nodes()) {
    auto k = x.keep.find(id);
    auto c = x.compute.find(id);
    if (k == x.keep.end() || c == x.compute.end()) return false;
    if (k->second < 0 || k->second > 1 || c->second < 0 || c->second > 1) return false;
    if (k->second - c->second < 0) return false;
    for (const auto& p : dag.parents(id))
      if (x.keep.at(p) - c->second < 0) return false;
  }
  return true;
}

std::int64_t ilp_objective(const WorkflowDag& dag, const MetricsMap& metrics, const IlpAssignment& x,
                           std::int64_t infinite_load) {
  std::int64_t total = 0;
  for (const auto& [id, _] : dag.nodes()) {
    const auto& m = metrics.at(id);
    std::int64_t l = m.load_ms.is_finite() ? m.load_ms.ms() : infinite_load;
    total += x.keep.at(id) * l + x.compute.at(id) * (m.compute_ms - l);
  }
  return total;
}

OepResult brute_force_oep(const WorkflowDag& dag, const MetricsMap& metrics, const ChangeSet& changes) {
  if (dag.size() > kMaxOepNodes) throw std::length_error("brute_force_oep: DAG exceeds enumeration bound");
  std::vector<NodeId> ids;
  for (const auto& [id, _] : dag.nodes()) ids.push_back(id);
  std::map<NodeId, std::size_t> pos;
  for (std::size_t i = 0; i < ids.size(); ++i) pos[ids[i]] = i;

  std::vector<NodeState> current(ids.size());
  std::vector<NodeState> best;
  Millis best_cost = std::numeric_limits<Millis>::max();
  constexpr NodeState kStates[] = {NodeState::Load, NodeState::Compute, NodeState::Prune};

  // The parent rule is checked per edge once both endpoints are assigned.
  auto edges_ok = [&](std::size_t i) {
    const NodeId& id = ids[i];
    for (const auto& p : dag.parents(id)) {
      std::size_t j = pos[p];
      if (j < i && current[i] == NodeState::Compute && current[j] == NodeState::Prune) return false;
    }
    for (const auto& ch : dag.children(id)) {
      std::size_t j = pos[ch];
      if (j < i && current[j] == NodeState::Compute && current[i] == NodeState::Prune) return false;
    }
    return true;
  };

  auto recurse = [&](auto&& self, std::size_t i, Millis cost) -> void {
    if (i == ids.size()) {
      if (cost < best_cost) {
        best_cost = cost;
        best = current;
      }
      return;
    }
    const auto& decl = dag.node(ids[i]);
    const auto& m = metrics.at(ids[i]);
    for (NodeState st : kStates) {
      if (changes.is_original(ids[i]) && st != NodeState::Compute) continue;
      if (decl.is_output && st == NodeState::Prune) continue;
      if (st == NodeState::Load && !m.load_ms.is_finite()) continue;
      current[i] = st;
      if (!edges_ok(i)) continue;
      Millis add = st == NodeState::Compute ? m.compute_ms : st == NodeState::Load ? m.load_ms.ms() : 0;
      self(self, i + 1, cost + add);
    }
  };
  recurse(recurse, 0, 0);

  OepResult out;
  out.min_cost = best_cost;
  for (std::size_t i = 0; i < ids.size(); ++i) out.states[ids[i]] = best[i];
  return out;
}

Millis solver_optimal_cost(const WorkflowDag& dag, const MetricsMap& metrics) {
  return optimal_plan(dag, metrics, ChangeSet{}).cost_ms;
}

Millis brute_force_optimal_cost(const WorkflowDag& dag, const MetricsMap& metrics) {
  return brute_force_oep(dag, metrics, ChangeSet{}).min_cost;
}

OmpResult brute_force_omp(const WorkflowDag& dag, const MetricsMap& metrics, std::int64_t budget_bytes,
                          const OptimalCostFn& optimal_cost) {
  if (dag.size() > kMaxOmpNodes) throw std::length_error("brute_force_omp: DAG exceeds enumeration bound");
  std::vector<NodeId> ids;
  for (const auto& [id, _] : dag.nodes()) ids.push_back(id);
  const std::size_t n = ids.size();

  OmpResult best;
  best.min_t_m = std::numeric_limits<Millis>::max();
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    std::set<NodeId> chosen;
    std::int64_t bytes = 0;
    Millis write = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (!(mask >> i & 1)) continue;
      chosen.insert(ids[i]);
      const auto& m = metrics.at(ids[i]);
      bytes += m.size_bytes;
      write += m.load_ms.ms();
    }
    if (bytes > budget_bytes) continue;
    Millis t_m = write + optimal_cost(dag, next_iteration_metrics(dag, metrics, chosen));
    if (t_m < best.min_t_m) {
      best.min_t_m = t_m;
      best.materialized = std::move(chosen);
    }
  }
  return best;
}

KnapsackResult brute_force_knapsack(const KnapsackInstance& inst) {
  const std::size_t n = inst.items.size();
  if (n > kMaxKnapsackItems) throw std::length_error("brute_force_knapsack: too many items");
  KnapsackResult best;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    std::int64_t size = 0, profit = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (!(mask >> i & 1)) continue;
      size += inst.items[i].size;
      profit += inst.items[i].profit;
    }
    if (size > inst.capacity || profit <= best.max_profit) continue;
    best.max_profit = profit;
    best.items.clear();
    for (std::size_t i = 0; i < n; ++i)
      if (mask >> i & 1) best.items.push_back(i);
  }
  return best;
}

NodeId knapsack_item_node(std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "item%02zu", i);
  return buf;
}

OmpInstance knapsack_to_omp(const KnapsackInstance& inst, std::int64_t scale) {
  if (scale <= 0) throw std::invalid_argument("scale must be positive");
  std::vector<OperatorDecl> decls;
  MetricsMap metrics;
  decls.push_back({kKnapsackRoot, OperatorKind::Source, "load knapsack root", {}, false});
  metrics[kKnapsackRoot] = {1, LoadTime::finite(1), 1};
  for (std::size_t i = 0; i < inst.items.size(); ++i) {
    const auto& item = inst.items[i];
    NodeId id = knapsack_item_node(i);
    decls.push_back({id, OperatorKind::DPR, "item " + std::to_string(i), {kKnapsackRoot}, true});
    metrics[id] = {scale * (item.profit + 2 * item.size), LoadTime::finite(scale * item.size), scale * item.size};
  }
  return {WorkflowDag(std::move(decls)), std::move(metrics), scale * inst.capacity};
}

}  // namespace reuseflow::oracle
