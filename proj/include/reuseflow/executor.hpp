#pragma once

#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>

#include "reuseflow/catalog.hpp"
#include "reuseflow/change_tracker.hpp"
#include "reuseflow/dag.hpp"

namespace reuseflow {

class ExecutionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// In-memory result of a node: its size and, for real executions, the file
/// holding it.
struct NodeOutput {
  std::int64_t size_bytes = 0;
  std::filesystem::path file;
};

struct StepResult {
  NodeOutput output;
  Millis elapsed_ms = 0;
};

struct NodeTask {
  const OperatorDecl& decl;
  NodeCosts declared;
  std::string command;
};

class Executor {
 public:
  virtual ~Executor() = default;

  /// Computes a node from its inputs (input order follows decl.inputs).
  virtual StepResult run(const NodeTask& task, std::span<const NodeOutput> inputs) = 0;
  /// Persists `output` at `dst` (synced); returns the write time.
  virtual Millis write_artifact(const NodeOutput& output, Millis projected_ms, const std::filesystem::path& dst) = 0;
  /// Reads a materialized artifact back.
  virtual StepResult read_artifact(const CatalogEntry& entry, const std::filesystem::path& src) = 0;
};

/// Declared costs are ground truth: run() takes compute_ms and yields an
/// output of size_bytes; artifacts are sparse files of the declared size.
class SimulatedExecutor final : public Executor {
 public:
  StepResult run(const NodeTask& task, std::span<const NodeOutput> inputs) override;
  Millis write_artifact(const NodeOutput& output, Millis projected_ms, const std::filesystem::path& dst) override;
  StepResult read_artifact(const CatalogEntry& entry, const std::filesystem::path& src) override;
};

/// Runs each node's command through /bin/sh with REUSEFLOW_NODE,
/// REUSEFLOW_OUTPUT and REUSEFLOW_INPUTS (colon-separated paths) set, and
/// measures wall time and output size.
class ProcessExecutor final : public Executor {
 public:
  explicit ProcessExecutor(std::filesystem::path scratch_dir);

  StepResult run(const NodeTask& task, std::span<const NodeOutput> inputs) override;
  Millis write_artifact(const NodeOutput& output, Millis projected_ms, const std::filesystem::path& dst) override;
  StepResult read_artifact(const CatalogEntry& entry, const std::filesystem::path& src) override;

 private:
  std::filesystem::path scratch_;
};

}  // namespace reuseflow
