#include "reuseflow/max_flow.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <stdexcept>

namespace reuseflow {

Capacity Capacity::finite(std::int64_t value) {
  if (value < 0) throw std::invalid_argument("negative capacity");
  return Capacity(value, false);
}

std::int64_t Capacity::value() const {
  if (unbounded_) throw std::logic_error("capacity is unbounded");
  return value_;
}

FlowNetwork::FlowNetwork(std::size_t vertex_count, std::size_t source, std::size_t sink)
    : vertex_count_(vertex_count), source_(source), sink_(sink) {
  if (source >= vertex_count || sink >= vertex_count || source == sink)
    throw std::invalid_argument("bad source/sink");
}

void FlowNetwork::add_arc(std::size_t from, std::size_t to, Capacity capacity) {
  if (from >= vertex_count_ || to >= vertex_count_) throw std::invalid_argument("arc endpoint out of range");
  if (from == to) throw std::invalid_argument("self-loop arc");
  if (to == source_) throw std::invalid_argument("arc into source");
  if (from == sink_) throw std::invalid_argument("arc out of sink");
  arcs_.push_back({from, to, capacity});
}

namespace {

struct ResidualArc {
  std::size_t to;
  std::size_t reverse;  // index into adjacency of `to`
  std::int64_t residual;
  bool unbounded;
};

}  // namespace

MaxFlowResult max_flow(const FlowNetwork& net) {
  const std::size_t n = net.vertex_count();
  std::vector<std::vector<ResidualArc>> adj(n);
  for (const auto& arc : net.arcs()) {
    bool unb = arc.capacity.is_unbounded();
    std::int64_t cap = unb ? 0 : arc.capacity.value();
    adj[arc.from].push_back({arc.to, adj[arc.to].size(), cap, unb});
    adj[arc.to].push_back({arc.from, adj[arc.from].size() - 1, 0, false});
  }
  // Sort each adjacency list by target, then fix up reverse indices.
  std::vector<std::vector<std::size_t>> perm(n);
  for (std::size_t v = 0; v < n; ++v) {
    perm[v].resize(adj[v].size());
    std::vector<std::size_t> order(adj[v].size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return adj[v][a].to < adj[v][b].to; });
    for (std::size_t pos = 0; pos < order.size(); ++pos) perm[v][order[pos]] = pos;
    std::vector<ResidualArc> sorted;
    sorted.reserve(order.size());
    for (auto i : order) sorted.push_back(adj[v][i]);
    adj[v] = std::move(sorted);
  }
  for (std::size_t v = 0; v < n; ++v)
    for (auto& a : adj[v]) a.reverse = perm[a.to][a.reverse];

  auto has_residual = [](const ResidualArc& a) { return a.unbounded || a.residual > 0; };

  const std::size_t s = net.source();
  const std::size_t t = net.sink();
  constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
  MaxFlowResult result;
  std::vector<std::size_t> pred_vertex(n), pred_arc(n);
  while (true) {
    std::fill(pred_vertex.begin(), pred_vertex.end(), kNone);
    pred_vertex[s] = s;
    std::deque<std::size_t> queue{s};
    while (!queue.empty() && pred_vertex[t] == kNone) {
      std::size_t u = queue.front();
      queue.pop_front();
      for (std::size_t i = 0; i < adj[u].size(); ++i) {
        const auto& a = adj[u][i];
        if (pred_vertex[a.to] != kNone || !has_residual(a)) continue;
        pred_vertex[a.to] = u;
        pred_arc[a.to] = i;
        queue.push_back(a.to);
      }
    }
    if (pred_vertex[t] == kNone) break;

    std::int64_t delta = std::numeric_limits<std::int64_t>::max();
    bool bounded = false;
    for (std::size_t v = t; v != s; v = pred_vertex[v]) {
      const auto& a = adj[pred_vertex[v]][pred_arc[v]];
      if (!a.unbounded) {
        delta = std::min(delta, a.residual);
        bounded = true;
      }
    }
    if (!bounded) throw std::domain_error("unbounded path from source to sink");
    for (std::size_t v = t; v != s; v = pred_vertex[v]) {
      auto& a = adj[pred_vertex[v]][pred_arc[v]];
      if (!a.unbounded) a.residual -= delta;
      adj[v][a.reverse].residual += delta;
    }
    result.flow_value += delta;
  }

  result.source_side.assign(n, false);
  result.source_side[s] = true;
  std::deque<std::size_t> queue{s};
  while (!queue.empty()) {
    std::size_t u = queue.front();
    queue.pop_front();
    for (const auto& a : adj[u]) {
      if (result.source_side[a.to] || !has_residual(a)) continue;
      result.source_side[a.to] = true;
      queue.push_back(a.to);
    }
  }
  return result;
}

CutValue cut_value(const FlowNetwork& net, const std::vector<bool>& source_side) {
  CutValue out;
  for (const auto& arc : net.arcs()) {
    if (!source_side.at(arc.from) || source_side.at(arc.to)) continue;
    if (arc.capacity.is_unbounded())
      out.crosses_unbounded = true;
    else
      out.capacity += arc.capacity.value();
  }
  return out;
}

}  // namespace reuseflow
