#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>

#include "reuseflow/change_tracker.hpp"
#include "reuseflow/dag.hpp"

namespace reuseflow {

class WorkflowFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A parsed workflow file: the DAG plus declared costs and commands.
struct Workflow {
  WorkflowDag dag;
  std::map<NodeId, NodeCosts> costs;
  std::map<NodeId, std::string> commands;
  std::int64_t disk_read_bytes_per_ms = 1;

  /// Copy restricted to the nodes of `sliced`.
  Workflow restricted_to(const WorkflowDag& sliced) const;
  /// Declared metrics with load times derived from sizes (finite for all
  /// nodes; Source nodes load at compute cost).
  MetricsMap materialized_metrics() const;
};

/// Parses the JSON workflow format:
///   {"iteration": int, "disk_read_bytes_per_ms": int,
///    "nodes": [{"id", "kind", "code", "inputs": [...], "is_output",
///               "compute_ms", "size_bytes", "command"?}]}
/// "iteration" defaults to 0 and "disk_read_bytes_per_ms" to 1. Unknown
/// fields are rejected.
Workflow parse_workflow(const std::string& text);
Workflow load_workflow(const std::filesystem::path& path);
std::string serialize_workflow(const Workflow& wf);

}  // namespace reuseflow
