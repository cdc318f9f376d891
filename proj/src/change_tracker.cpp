#include "reuseflow/change_tracker.hpp"

namespace reuseflow {

std::map<NodeId, Signature> compute_signatures(const WorkflowDag& dag) {
  std::map<NodeId, Signature> sigs;
  for (const auto& id : topological_order(dag)) {
    const auto& decl = dag.node(id);
    std::vector<Signature> parents;
    parents.reserve(decl.inputs.size());
    for (const auto& in : decl.inputs) {
      auto it = sigs.find(in);
      if (it == sigs.end()) throw std::invalid_argument("dangling input " + in + " of node " + id);
      parents.push_back(it->second);
    }
    sigs.emplace(id, signature(decl, parents));
  }
  return sigs;
}

ChangeSet diff(const std::set<Signature>& prior_signatures, const WorkflowDag& next) {
  ChangeSet out;
  for (const auto& [id, sig] : compute_signatures(next)) {
    if (prior_signatures.contains(sig))
      out.equivalent.emplace(id, sig);
    else
      out.original.insert(id);
  }
  return out;
}

ChangeSet diff(const WorkflowDag& prev, const WorkflowDag& next) {
  std::set<Signature> prior;
  for (const auto& [_, sig] : compute_signatures(prev)) prior.insert(sig);
  return diff(prior, next);
}

std::string to_string(ChangeCause cause) {
  switch (cause) {
    case ChangeCause::Added: return "added";
    case ChangeCause::Modified: return "modified";
    case ChangeCause::Propagated: return "propagated";
  }
  return "?";
}

ChangeReport describe_changes(const WorkflowDag& prev, const WorkflowDag& next) {
  ChangeReport report;
  ChangeSet changes = diff(prev, next);
  for (const auto& id : changes.original) {
    ChangeCause cause = ChangeCause::Modified;
    if (!prev.contains(id)) cause = ChangeCause::Added;
    for (const auto& p : next.parents(id))
      if (changes.is_original(p)) cause = ChangeCause::Propagated;
    report.changed.push_back({id, cause});
  }
  for (const auto& [id, _] : prev.nodes())
    if (!next.contains(id)) report.removed.push_back(id);
  return report;
}

ResolvedMetrics resolve_load_times(const WorkflowDag& dag, const std::map<NodeId, NodeCosts>& costs,
                                   const ChangeSet& changes, const MaterializationCatalog& catalog) {
  ResolvedMetrics out;
  for (const auto& [id, decl] : dag.nodes()) {
    auto cost = costs.find(id);
    if (cost == costs.end()) throw std::invalid_argument("no declared costs for node " + id);
    OperatorMetrics m;
    m.compute_ms = cost->second.compute_ms;
    m.size_bytes = cost->second.size_bytes;
    if (decl.kind == OperatorKind::Source) {
      m.load_ms = LoadTime::finite(m.compute_ms);
    } else if (auto eq = changes.equivalent.find(id); eq != changes.equivalent.end()) {
      if (const CatalogEntry* entry = catalog.find(eq->second)) {
        if (catalog.artifact_intact(*entry)) {
          m.load_ms = LoadTime::finite(entry->load_ms);
        } else {
          out.warnings.push_back("artifact for node " + id + " (" + eq->second.hex() +
                                 ") missing or truncated; treating as unmaterialized");
        }
      }
    }
    out.metrics.emplace(id, m);
  }
  return out;
}

}  // namespace reuseflow
