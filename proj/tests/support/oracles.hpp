#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <set>
#include <vector>

#include "reuseflow/max_flow.hpp"
#include "reuseflow/oep_solver.hpp"
#include "reuseflow/oracle.hpp"

namespace reuseflow::testing {

/// Minimum s-t cut by enumerating every partition of the inner vertices.
/// nullopt when every cut crosses an unbounded arc.
inline std::optional<std::int64_t> brute_force_min_cut(const FlowNetwork& net) {
  std::vector<std::size_t> inner;
  for (std::size_t v = 0; v < net.vertex_count(); ++v)
    if (v != net.source() && v != net.sink()) inner.push_back(v);
  std::optional<std::int64_t> best;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << inner.size()); ++mask) {
    std::vector<bool> side(net.vertex_count(), false);
    side[net.source()] = true;
    for (std::size_t i = 0; i < inner.size(); ++i)
      if (mask >> i & 1) side[inner[i]] = true;
    std::int64_t cap = 0;
    bool unbounded = false;
    for (const auto& a : net.arcs()) {
      if (!side[a.from] || side[a.to]) continue;
      if (a.capacity.is_unbounded()) unbounded = true;
      else cap += a.capacity.value();
    }
    if (!unbounded && (!best || cap < *best)) best = cap;
  }
  return best;
}

/// Maximum profit over all prerequisite-closed selections containing the
/// required projects.
inline std::optional<std::int64_t> brute_force_psp(const PspInstance& psp) {
  const auto& p = psp.projects;
  std::optional<std::int64_t> best;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << p.size()); ++mask) {
    std::set<ProjectId> sel;
    for (std::size_t i = 0; i < p.size(); ++i)
      if (mask >> i & 1) sel.insert(p[i]);
    bool ok = std::all_of(psp.required.begin(), psp.required.end(), [&](const ProjectId& r) { return sel.contains(r); });
    for (const auto& [dep, pre] : psp.prerequisites)
      if (sel.contains(dep) && !sel.contains(pre)) ok = false;
    if (!ok) continue;
    std::int64_t profit = 0;
    for (const auto& s : sel) profit += psp.profit.at(s);
    if (!best || profit > *best) best = profit;
  }
  return best;
}

/// Classic 0/1 knapsack table over capacity.
inline std::int64_t knapsack_dp(const oracle::KnapsackInstance& inst) {
  std::vector<std::int64_t> best(static_cast<std::size_t>(inst.capacity) + 1, 0);
  for (const auto& item : inst.items)
    for (std::int64_t c = inst.capacity; c >= item.size; --c)
      best[c] = std::max(best[c], best[c - item.size] + item.profit);
  return best.back();
}

}  // namespace reuseflow::testing
