#include "reuseflow/oep_solver.hpp"

#include <cstdlib>
#include <sstream>
#include <stdexcept>

namespace reuseflow {

std::string ProjectId::str() const {
  return (kind == Kind::A ? "a(" : "b(") + node + ")";
}

PspInstance reduce_to_psp(const WorkflowDag& dag, const MetricsMap& metrics, const ChangeSet& changes) {
  PspInstance psp;
  auto metric = [&](const NodeId& id) -> const OperatorMetrics& {
    auto it = metrics.find(id);
    if (it == metrics.end()) throw std::invalid_argument("no metrics for node " + id);
    return it->second;
  };

  psp.big = 1;
  for (const auto& [id, _] : dag.nodes()) {
    const auto& m = metric(id);
    psp.big += m.compute_ms;
    if (m.load_ms.is_finite()) psp.big += m.load_ms.ms() + std::llabs(m.load_ms.ms() - m.compute_ms);
  }

  for (const auto& [id, decl] : dag.nodes()) {
    const auto& m = metric(id);
    auto a = ProjectId::a(id);
    auto b = ProjectId::b(id);
    std::int64_t load = m.load_ms.is_finite() ? m.load_ms.ms() : psp.big;
    psp.profit[a] = -load;
    psp.profit[b] = load - m.compute_ms;
    psp.prerequisites.insert({b, a});
    for (const auto& child : dag.children(id)) psp.prerequisites.insert({ProjectId::b(child), a});
    if (changes.is_original(id)) {
      psp.required.insert(a);
      psp.required.insert(b);
    }
    if (decl.is_output) psp.required.insert(a);
  }
  for (const auto& [p, _] : psp.profit) psp.projects.push_back(p);
  return psp;
}

namespace {

std::map<ProjectId, std::size_t> vertex_index(const PspInstance& psp) {
  std::map<ProjectId, std::size_t> index;
  for (std::size_t i = 0; i < psp.projects.size(); ++i) index.emplace(psp.projects[i], i + 2);
  return index;
}

}  // namespace

FlowNetwork to_flow_network(const PspInstance& psp) {
  const auto index = vertex_index(psp);
  auto vertex = [&](const ProjectId& p) {
    auto it = index.find(p);
    if (it == index.end()) throw std::invalid_argument("unknown project " + p.str());
    return it->second;
  };
  FlowNetwork net(psp.projects.size() + 2, 0, 1);
  for (const auto& p : psp.projects) {
    std::int64_t profit = psp.profit.at(p);
    if (profit > 0) net.add_arc(0, vertex(p), Capacity::finite(profit));
    if (profit < 0) net.add_arc(vertex(p), 1, Capacity::finite(-profit));
  }
  for (const auto& p : psp.required) net.add_arc(0, vertex(p), Capacity::unbounded());
  for (const auto& [dependent, prereq] : psp.prerequisites)
    net.add_arc(vertex(dependent), vertex(prereq), Capacity::unbounded());
  return net;
}

std::set<ProjectId> solve_psp(const PspInstance& psp) {
  auto cut = max_flow(to_flow_network(psp));
  std::set<ProjectId> selected;
  for (std::size_t i = 0; i < psp.projects.size(); ++i)
    if (cut.source_side[i + 2]) selected.insert(psp.projects[i]);
  return selected;
}

std::int64_t total_profit(const PspInstance& psp, const std::set<ProjectId>& selection) {
  std::int64_t total = 0;
  for (const auto& p : selection) total += psp.profit.at(p);
  return total;
}

StateMap plan_from_projects(const WorkflowDag& dag, const std::set<ProjectId>& selection) {
  StateMap states;
  for (const auto& [id, _] : dag.nodes()) {
    bool a = selection.contains(ProjectId::a(id));
    bool b = selection.contains(ProjectId::b(id));
    if (b && !a) throw std::logic_error("selection not prerequisite-closed at node " + id);
    states[id] = a ? (b ? NodeState::Compute : NodeState::Load) : NodeState::Prune;
  }
  return states;
}

ExecutionPlan optimal_plan(const WorkflowDag& dag, const MetricsMap& metrics, const ChangeSet& changes) {
  auto psp = reduce_to_psp(dag, metrics, changes);
  ExecutionPlan plan;
  plan.states = plan_from_projects(dag, solve_psp(psp));
  plan.cost_ms = plan_cost(dag, metrics, plan.states);
  return plan;
}

std::string emit_psp(const PspInstance& psp) {
  std::ostringstream out;
  out << "# psp v1\n";
  out << "big " << psp.big << "\n";
  for (const auto& p : psp.projects) out << "project " << p.str() << " " << psp.profit.at(p) << "\n";
  for (const auto& [dependent, prereq] : psp.prerequisites)
    out << "prereq " << dependent.str() << " " << prereq.str() << "\n";
  for (const auto& p : psp.required) out << "required " << p.str() << "\n";
  auto net = to_flow_network(psp);
  out << "# flow network: vertex 0 source, 1 sink, project i at i+2\n";
  out << "vertices " << net.vertex_count() << "\n";
  for (const auto& arc : net.arcs()) {
    out << "arc " << arc.from << " " << arc.to << " ";
    if (arc.capacity.is_unbounded())
      out << "inf";
    else
      out << arc.capacity.value();
    out << "\n";
  }
  auto result = max_flow(net);
  out << "max_flow " << result.flow_value << "\n";
  return out.str();
}

}  // namespace reuseflow
