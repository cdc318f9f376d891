#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "reuseflow/catalog.hpp"
#include "reuseflow/change_tracker.hpp"
#include "reuseflow/dag.hpp"

namespace reuseflow {

enum class MatPolicy { StreamingHeuristic, AlwaysMaterialize, NeverMaterialize };

std::string to_string(MatPolicy policy);
/// Accepts "opt", "am", "nm".
MatPolicy mat_policy_from_string(const std::string& text);

enum class MatDecision { Materialize, Discard };

std::string to_string(MatDecision decision);

struct LedgerEntry {
  NodeId node;
  Signature signature;
  std::int64_t bytes = 0;
};

/// Storage accounting for materialized results: used_bytes never exceeds
/// budget_bytes.
class BudgetLedger {
 public:
  explicit BudgetLedger(std::int64_t budget_bytes);
  /// Ledger mirroring the catalog's entries. Throws std::invalid_argument
  /// if the catalog already exceeds the budget.
  static BudgetLedger from_catalog(const MaterializationCatalog& catalog, std::int64_t budget_bytes);

  std::int64_t budget_bytes() const { return budget_; }
  std::int64_t used_bytes() const { return used_; }
  std::int64_t remaining_bytes() const { return budget_ - used_; }
  const std::map<Signature, LedgerEntry>& entries() const { return entries_; }

  bool admits(std::int64_t bytes) const { return bytes >= 0 && bytes <= remaining_bytes(); }
  /// Throws std::length_error if the entry does not fit.
  void add(const LedgerEntry& entry);
  bool remove(const Signature& sig);

 private:
  std::int64_t budget_;
  std::int64_t used_ = 0;
  std::map<Signature, LedgerEntry> entries_;
};

/// Realized time of `node` plus the realized times of all its ancestors.
/// Nodes missing from `realized` (pruned) contribute zero.
Millis cumulative_runtime(const WorkflowDag& dag, const std::map<NodeId, Millis>& realized, const NodeId& node);

/// One materialization decision for a node that has just gone out of
/// scope. The heuristic materializes iff cumulative_ms > 2 * load_ms and the
/// ledger has room; always-materialize only checks room. The ledger is
/// updated on Materialize.
MatDecision on_out_of_scope(const NodeId& node, const Signature& sig, Millis cumulative_ms, Millis load_ms,
                            std::int64_t size_bytes, BudgetLedger& ledger, MatPolicy policy);

/// Metrics of the next iteration under the identical-next-iteration
/// assumption: nodes in `materialized` load at their load_ms, Source nodes at
/// compute cost, every other node is unloadable. No node is original.
MetricsMap next_iteration_metrics(const WorkflowDag& dag, const MetricsMap& metrics,
                                  const std::set<NodeId>& materialized);

/// Write time of `materialized` plus the optimal next-iteration run time
/// with those nodes loadable. `metrics` load_ms is the time to write or
/// read each node once materialized and must be finite for members of
/// `materialized`.
Millis materialization_runtime(const WorkflowDag& dag, const MetricsMap& metrics, const std::set<NodeId>& materialized);

/// Drops ledger entries (and catalog entries, when given) whose signature
/// no longer belongs to a non-original node of `changes`. Returns warnings for
/// artifacts that could not be deleted.
std::vector<std::string> purge_stale(BudgetLedger& ledger, const ChangeSet& changes,
                                     MaterializationCatalog* catalog = nullptr);

}  // namespace reuseflow
