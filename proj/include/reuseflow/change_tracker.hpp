#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "reuseflow/catalog.hpp"
#include "reuseflow/dag.hpp"
#include "reuseflow/signature.hpp"

namespace reuseflow {

/// Partition of a DAG's nodes into original nodes (no equivalent in the
/// previous version) and nodes with an equivalent prior node.
struct ChangeSet {
  std::set<NodeId> original;
  std::map<NodeId, Signature> equivalent;

  bool is_original(const NodeId& id) const { return original.contains(id); }
};

/// Signatures for every node, computed in topological order.
std::map<NodeId, Signature> compute_signatures(const WorkflowDag& dag);

ChangeSet diff(const std::set<Signature>& prior_signatures, const WorkflowDag& next);
ChangeSet diff(const WorkflowDag& prev, const WorkflowDag& next);

enum class ChangeCause { Added, Modified, Propagated };

std::string to_string(ChangeCause cause);

struct ChangeDetail {
  NodeId id;
  ChangeCause cause;
};

struct ChangeReport {
  std::vector<ChangeDetail> changed;  // ascending id
  std::vector<NodeId> removed;        // ids present in prev only
};

/// Explains a diff: a node is Propagated when some parent is original,
/// Added when its id is new, Modified otherwise.
ChangeReport describe_changes(const WorkflowDag& prev, const WorkflowDag& next);

/// Declared per-node costs from the workflow file.
struct NodeCosts {
  Millis compute_ms = 0;
  std::int64_t size_bytes = 0;
};

struct ResolvedMetrics {
  MetricsMap metrics;
  std::vector<std::string> warnings;
};

/// Metrics for planning: Source nodes load at compute cost; non-original
/// nodes with an intact catalog entry load at the recorded load time;
/// everything else gets an Infinite load time.
ResolvedMetrics resolve_load_times(const WorkflowDag& dag, const std::map<NodeId, NodeCosts>& costs,
                                   const ChangeSet& changes, const MaterializationCatalog& catalog);

}  // namespace reuseflow
