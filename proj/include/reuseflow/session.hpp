#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "reuseflow/engine.hpp"

namespace reuseflow {

/// Iteration-type mix for a simulated session. Weights need not be
/// normalized but must have a positive sum.
struct Scenario {
  int iterations = 10;
  double dpr_weight = 1.0;
  double li_weight = 1.0;
  double ppr_weight = 1.0;
  std::uint64_t seed = 0;
};

/// Parses "d,l,p".
Scenario with_weights(Scenario s, const std::string& weights);

/// Runs iteration 0 on the workflow as given, then for each later
/// iteration draws a type (DPR, LI or PPR) from the weights, picks a
/// uniformly random node of that kind that feeds an output, appends a
/// revision comment to its code and runs the iteration. The store must not
/// already hold history. Fully determined by the seed.
std::vector<IterationRecord> simulate_session(const Workflow& wf, const Scenario& scenario,
                                              const RunOptions& options, const std::filesystem::path& store);

}  // namespace reuseflow
