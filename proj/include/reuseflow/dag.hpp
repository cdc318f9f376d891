#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace reuseflow {

using NodeId = std::string;

/// Integer milliseconds. All planner arithmetic is exact.
using Millis = std::int64_t;

enum class OperatorKind { Source, DPR, LI, PPR };

std::string to_string(OperatorKind kind);
OperatorKind operator_kind_from_string(const std::string& text);

struct OperatorDecl {
  NodeId id;
  OperatorKind kind = OperatorKind::DPR;
  std::string code;
  std::vector<NodeId> inputs;
  bool is_output = false;
};

class CycleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Load time of a node: finite milliseconds, or Infinite when no
/// equivalent materialization exists.
class LoadTime {
 public:
  static LoadTime finite(Millis ms);
  static LoadTime infinite() { return LoadTime(); }

  bool is_finite() const { return finite_; }
  /// Throws std::logic_error when infinite.
  Millis ms() const;

  friend bool operator==(const LoadTime&, const LoadTime&) = default;
  /// Infinite compares greater than every finite value.
  friend std::strong_ordering operator<=>(const LoadTime& a, const LoadTime& b);

 private:
  LoadTime() = default;
  bool finite_ = false;
  Millis ms_ = 0;
};

std::string to_string(const LoadTime& t);

struct OperatorMetrics {
  Millis compute_ms = 0;
  LoadTime load_ms = LoadTime::infinite();
  std::int64_t size_bytes = 0;
};

using MetricsMap = std::map<NodeId, OperatorMetrics>;

/// ceil(size_bytes / disk_read_bytes_per_ms); write time is taken to be the same.
Millis load_ms_for_size(std::int64_t size_bytes, std::int64_t disk_read_bytes_per_ms);

/// Immutable workflow DAG for one iteration. Edges are implied by each
/// node's inputs. Construction only rejects empty or duplicate ids; use
/// validate() for structural checks.
class WorkflowDag {
 public:
  WorkflowDag() = default;
  explicit WorkflowDag(std::vector<OperatorDecl> nodes, int iteration = 0);

  const std::map<NodeId, OperatorDecl>& nodes() const { return nodes_; }
  const OperatorDecl& node(const NodeId& id) const;
  bool contains(const NodeId& id) const { return nodes_.contains(id); }
  std::size_t size() const { return nodes_.size(); }
  bool empty() const { return nodes_.empty(); }
  int iteration() const { return iteration_; }

  /// Distinct parents present in the DAG, ascending.
  const std::vector<NodeId>& parents(const NodeId& id) const;
  /// Distinct children, ascending.
  const std::vector<NodeId>& children(const NodeId& id) const;
  /// Number of distinct (parent, child) pairs between existing nodes.
  std::size_t edge_count() const;
  std::vector<NodeId> outputs() const;
  std::set<NodeId> ancestors(const NodeId& id) const;
  std::set<NodeId> descendants(const NodeId& id) const;

  WorkflowDag with_iteration(int iteration) const;
  /// Copy with one node's declaration replaced (same id).
  WorkflowDag with_node(OperatorDecl decl) const;
  std::vector<OperatorDecl> declarations() const;

 private:
  std::map<NodeId, OperatorDecl> nodes_;
  std::map<NodeId, std::vector<NodeId>> parents_;
  std::map<NodeId, std::vector<NodeId>> children_;
  int iteration_ = 0;
};

struct ValidationReport {
  std::vector<std::string> findings;
  bool ok() const { return findings.empty(); }
};

ValidationReport validate(const WorkflowDag& dag);

/// Kahn's algorithm, ties broken by ascending NodeId. Throws CycleError.
std::vector<NodeId> topological_order(const WorkflowDag& dag);

/// Keeps only nodes that reach an output node. Throws std::invalid_argument
/// when the DAG has no output.
WorkflowDag slice_to_outputs(const WorkflowDag& dag);

}  // namespace reuseflow
