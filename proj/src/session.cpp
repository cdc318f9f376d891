#include "reuseflow/session.hpp"

#include <random>
#include <sstream>
#include <stdexcept>

namespace reuseflow {

Scenario with_weights(Scenario s, const std::string& weights) {
  std::stringstream in(weights);
  std::string part;
  std::vector<double> w;
  while (std::getline(in, part, ',')) {
    try {
      w.push_back(std::stod(part));
    } catch (const std::exception&) {
      throw std::invalid_argument("bad weight '" + part + "'");
    }
  }
  if (w.size() != 3) throw std::invalid_argument("weights must be three comma-separated numbers d,l,p");
  s.dpr_weight = w[0];
  s.li_weight = w[1];
  s.ppr_weight = w[2];
  return s;
}

namespace {

constexpr int kMaxRedraws = 64;

// Uniform in [0, 1) from the top 53 bits; independent of the standard
// library's distribution implementations.
double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

}  // namespace

std::vector<IterationRecord> simulate_session(const Workflow& wf, const Scenario& scenario,
                                              const RunOptions& options, const std::filesystem::path& store) {
  if (scenario.iterations < 1) throw std::invalid_argument("scenario needs at least one iteration");
  const double weights[3] = {scenario.dpr_weight, scenario.li_weight, scenario.ppr_weight};
  for (double w : weights)
    if (!(w >= 0)) throw std::invalid_argument("scenario weights must be non-negative");
  const double total = weights[0] + weights[1] + weights[2];
  if (!(total > 0)) throw std::invalid_argument("scenario weights must have a positive sum");
  if (!read_history(store).empty()) throw std::invalid_argument("session store already has history: " + store.string());

  constexpr OperatorKind kinds[3] = {OperatorKind::DPR, OperatorKind::LI, OperatorKind::PPR};
  std::mt19937_64 rng(scenario.seed);
  Workflow current = wf;
  std::vector<IterationRecord> records;

  RunOptions opts = options;
  opts.iteration_type = "initial";
  records.push_back(run_iteration(current, store, opts));

  for (int t = 1; t < scenario.iterations; ++t) {
    WorkflowDag live = slice_to_outputs(current.dag);
    bool modified = false;
    opts.notes.clear();
    for (int attempt = 0; attempt < kMaxRedraws && !modified; ++attempt) {
      double u = unit(rng) * total;
      int type = 0;
      while (type < 2 && (weights[type] == 0 || u >= weights[type])) {
        u -= weights[type];
        ++type;
      }
      std::vector<NodeId> candidates;
      for (const auto& [id, decl] : live.nodes())
        if (decl.kind == kinds[type]) candidates.push_back(id);
      if (weights[type] == 0) continue;
      if (candidates.empty()) {
        opts.notes.push_back("no " + to_string(kinds[type]) + " operator to modify; redrawing");
        continue;
      }
      const NodeId& pick = candidates[rng() % candidates.size()];
      OperatorDecl decl = current.dag.node(pick);
      decl.code += "\n// rev " + std::to_string(t);
      current.dag = current.dag.with_node(decl);
      opts.iteration_type = to_string(kinds[type]);
      modified = true;
    }
    if (!modified) throw std::invalid_argument("scenario weights select no operator kind present in the workflow");
    records.push_back(run_iteration(current, store, opts));
  }
  return records;
}

}  // namespace reuseflow
