#include "reuseflow/omp_planner.hpp"

#include <stdexcept>

#include "reuseflow/oep_solver.hpp"

namespace reuseflow {

std::string to_string(MatPolicy policy) {
  switch (policy) {
    case MatPolicy::StreamingHeuristic: return "opt";
    case MatPolicy::AlwaysMaterialize: return "am";
    case MatPolicy::NeverMaterialize: return "nm";
  }
  return "?";
}

MatPolicy mat_policy_from_string(const std::string& text) {
  if (text == "opt") return MatPolicy::StreamingHeuristic;
  if (text == "am") return MatPolicy::AlwaysMaterialize;
  if (text == "nm") return MatPolicy::NeverMaterialize;
  throw std::invalid_argument("unknown policy '" + text + "' (expected opt, am or nm)");
}

std::string to_string(MatDecision decision) {
  return decision == MatDecision::Materialize ? "materialize" : "discard";
}

BudgetLedger::BudgetLedger(std::int64_t budget_bytes) : budget_(budget_bytes) {
  if (budget_bytes < 0) throw std::invalid_argument("negative storage budget");
}

BudgetLedger BudgetLedger::from_catalog(const MaterializationCatalog& catalog, std::int64_t budget_bytes) {
  BudgetLedger ledger(budget_bytes);
  for (const auto& [sig, e] : catalog.entries()) {
    if (!ledger.admits(e.size_bytes)) throw std::invalid_argument("catalog exceeds storage budget");
    ledger.add({e.node_id, sig, e.size_bytes});
  }
  return ledger;
}

void BudgetLedger::add(const LedgerEntry& entry) {
  if (entries_.contains(entry.signature)) return;
  if (!admits(entry.bytes)) throw std::length_error("materialization exceeds storage budget");
  entries_.emplace(entry.signature, entry);
  used_ += entry.bytes;
}

bool BudgetLedger::remove(const Signature& sig) {
  auto it = entries_.find(sig);
  if (it == entries_.end()) return false;
  used_ -= it->second.bytes;
  entries_.erase(it);
  return true;
}

Millis cumulative_runtime(const WorkflowDag& dag, const std::map<NodeId, Millis>& realized, const NodeId& node) {
  if (!dag.contains(node)) throw std::out_of_range("unknown node '" + node + "'");
  auto time_of = [&](const NodeId& id) {
    auto it = realized.find(id);
    return it == realized.end() ? Millis{0} : it->second;
  };
  Millis total = time_of(node);
  for (const auto& anc : dag.ancestors(node)) total += time_of(anc);
  return total;
}

MatDecision on_out_of_scope(const NodeId& node, const Signature& sig, Millis cumulative_ms, Millis load_ms,
                            std::int64_t size_bytes, BudgetLedger& ledger, MatPolicy policy) {
  bool take = false;
  switch (policy) {
    case MatPolicy::StreamingHeuristic:
      take = cumulative_ms > 2 * load_ms && ledger.admits(size_bytes);
      break;
    case MatPolicy::AlwaysMaterialize:
      take = ledger.admits(size_bytes);
      break;
    case MatPolicy::NeverMaterialize:
      break;
  }
  if (!take) return MatDecision::Discard;
  ledger.add({node, sig, size_bytes});
  return MatDecision::Materialize;
}

MetricsMap next_iteration_metrics(const WorkflowDag& dag, const MetricsMap& metrics,
                                  const std::set<NodeId>& materialized) {
  MetricsMap next;
  for (const auto& [id, decl] : dag.nodes()) {
    OperatorMetrics m = metrics.at(id);
    if (decl.kind == OperatorKind::Source)
      m.load_ms = LoadTime::finite(m.compute_ms);
    else if (!materialized.contains(id))
      m.load_ms = LoadTime::infinite();
    next.emplace(id, m);
  }
  return next;
}

Millis materialization_runtime(const WorkflowDag& dag, const MetricsMap& metrics,
                               const std::set<NodeId>& materialized) {
  Millis write = 0;
  for (const auto& id : materialized) write += metrics.at(id).load_ms.ms();
  return write + optimal_plan(dag, next_iteration_metrics(dag, metrics, materialized), ChangeSet{}).cost_ms;
}

std::vector<std::string> purge_stale(BudgetLedger& ledger, const ChangeSet& changes,
                                     MaterializationCatalog* catalog) {
  std::set<Signature> live;
  for (const auto& [_, sig] : changes.equivalent) live.insert(sig);
  std::vector<Signature> stale;
  for (const auto& [sig, _] : ledger.entries())
    if (!live.contains(sig)) stale.push_back(sig);
  if (catalog) {
    for (const auto& [sig, _] : catalog->entries())
      if (!live.contains(sig) && !ledger.entries().contains(sig)) stale.push_back(sig);
  }
  std::vector<std::string> warnings;
  for (const auto& sig : stale) {
    ledger.remove(sig);
    if (catalog && !catalog->erase(sig)) warnings.push_back("could not delete artifact " + sig.hex());
  }
  return warnings;
}

}  // namespace reuseflow
