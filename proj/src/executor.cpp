#include "reuseflow/executor.hpp"

#include <sys/wait.h>

#include <chrono>
#include <cstdlib>
#include <fstream>

namespace reuseflow {

namespace fs = std::filesystem;

namespace {

Millis elapsed_since(std::chrono::steady_clock::time_point start) {
  auto us = std::chrono::duration_cast<std::chrono::microseconds>(std::chrono::steady_clock::now() - start).count();
  return (us + 999) / 1000;
}

}  // namespace

StepResult SimulatedExecutor::run(const NodeTask& task, std::span<const NodeOutput>) {
  return {{task.declared.size_bytes, {}}, task.declared.compute_ms};
}

Millis SimulatedExecutor::write_artifact(const NodeOutput& output, Millis projected_ms, const fs::path& dst) {
  {
    std::ofstream out(dst, std::ios::binary | std::ios::trunc);
    if (!out) throw ExecutionError("cannot create artifact " + dst.string());
  }
  fs::resize_file(dst, static_cast<std::uintmax_t>(output.size_bytes));
  sync_path(dst);
  return projected_ms;
}

StepResult SimulatedExecutor::read_artifact(const CatalogEntry& entry, const fs::path&) {
  return {{entry.size_bytes, {}}, entry.load_ms};
}

ProcessExecutor::ProcessExecutor(fs::path scratch_dir) : scratch_(std::move(scratch_dir)) {
  fs::create_directories(scratch_);
}

StepResult ProcessExecutor::run(const NodeTask& task, std::span<const NodeOutput> inputs) {
  if (task.command.empty()) throw ExecutionError("node " + task.decl.id + " has no command");
  fs::path out = scratch_ / (task.decl.id + ".out");
  fs::remove(out);
  std::string joined;
  for (std::size_t i = 0; i < inputs.size(); ++i) joined += (i ? ":" : "") + inputs[i].file.string();
  ::setenv("REUSEFLOW_NODE", task.decl.id.c_str(), 1);
  ::setenv("REUSEFLOW_OUTPUT", out.c_str(), 1);
  ::setenv("REUSEFLOW_INPUTS", joined.c_str(), 1);
  auto start = std::chrono::steady_clock::now();
  int status = std::system(task.command.c_str());
  Millis elapsed = elapsed_since(start);
  if (status == -1 || !WIFEXITED(status) || WEXITSTATUS(status) != 0)
    throw ExecutionError("command for node " + task.decl.id + " failed");
  if (!fs::exists(out)) throw ExecutionError("command for node " + task.decl.id + " wrote no output");
  return {{static_cast<std::int64_t>(fs::file_size(out)), out}, elapsed};
}

Millis ProcessExecutor::write_artifact(const NodeOutput& output, Millis, const fs::path& dst) {
  auto start = std::chrono::steady_clock::now();
  fs::copy_file(output.file, dst, fs::copy_options::overwrite_existing);
  sync_path(dst);
  return elapsed_since(start);
}

StepResult ProcessExecutor::read_artifact(const CatalogEntry& entry, const fs::path& src) {
  fs::path out = scratch_ / (entry.node_id + ".out");
  auto start = std::chrono::steady_clock::now();
  fs::copy_file(src, out, fs::copy_options::overwrite_existing);
  return {{static_cast<std::int64_t>(fs::file_size(out)), out}, elapsed_since(start)};
}

}  // namespace reuseflow
