#include "reuseflow/dag.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <queue>

namespace reuseflow {

std::string to_string(OperatorKind kind) {
  switch (kind) {
    case OperatorKind::Source: return "Source";
    case OperatorKind::DPR: return "DPR";
    case OperatorKind::LI: return "LI";
    case OperatorKind::PPR: return "PPR";
  }
  return "?";
}

OperatorKind operator_kind_from_string(const std::string& text) {
  if (text == "Source") return OperatorKind::Source;
  if (text == "DPR") return OperatorKind::DPR;
  if (text == "LI") return OperatorKind::LI;
  if (text == "PPR") return OperatorKind::PPR;
  throw std::invalid_argument("unknown operator kind '" + text + "'");
}

LoadTime LoadTime::finite(Millis ms) {
  if (ms < 0) throw std::invalid_argument("negative load time");
  LoadTime t;
  t.finite_ = true;
  t.ms_ = ms;
  return t;
}

Millis LoadTime::ms() const {
  if (!finite_) throw std::logic_error("load time is infinite");
  return ms_;
}

std::strong_ordering operator<=>(const LoadTime& a, const LoadTime& b) {
  if (a.finite_ != b.finite_) return a.finite_ ? std::strong_ordering::less : std::strong_ordering::greater;
  return a.ms_ <=> b.ms_;
}

std::string to_string(const LoadTime& t) {
  return t.is_finite() ? std::to_string(t.ms()) : std::string("inf");
}

Millis load_ms_for_size(std::int64_t size_bytes, std::int64_t disk_read_bytes_per_ms) {
  if (disk_read_bytes_per_ms <= 0) throw std::invalid_argument("disk_read_bytes_per_ms must be positive");
  if (size_bytes < 0) throw std::invalid_argument("negative size");
  return (size_bytes + disk_read_bytes_per_ms - 1) / disk_read_bytes_per_ms;
}

WorkflowDag::WorkflowDag(std::vector<OperatorDecl> nodes, int iteration) : iteration_(iteration) {
  for (auto& decl : nodes) {
    if (decl.id.empty()) throw std::invalid_argument("empty node id");
    NodeId id = decl.id;
    if (!nodes_.emplace(id, std::move(decl)).second)
      throw std::invalid_argument("duplicate node id '" + id + "'");
  }
  for (const auto& [id, decl] : nodes_) {
    parents_[id];
    children_[id];
  }
  for (const auto& [id, decl] : nodes_) {
    for (const auto& in : decl.inputs) {
      if (!nodes_.contains(in)) continue;
      parents_[id].push_back(in);
      children_[in].push_back(id);
    }
  }
  auto dedup = [](std::vector<NodeId>& v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
  };
  for (auto& [_, v] : parents_) dedup(v);
  for (auto& [_, v] : children_) dedup(v);
}

const OperatorDecl& WorkflowDag::node(const NodeId& id) const {
  auto it = nodes_.find(id);
  if (it == nodes_.end()) throw std::out_of_range("unknown node '" + id + "'");
  return it->second;
}

const std::vector<NodeId>& WorkflowDag::parents(const NodeId& id) const {
  auto it = parents_.find(id);
  if (it == parents_.end()) throw std::out_of_range("unknown node '" + id + "'");
  return it->second;
}

const std::vector<NodeId>& WorkflowDag::children(const NodeId& id) const {
  auto it = children_.find(id);
  if (it == children_.end()) throw std::out_of_range("unknown node '" + id + "'");
  return it->second;
}

std::size_t WorkflowDag::edge_count() const {
  std::size_t n = 0;
  for (const auto& [_, v] : parents_) n += v.size();
  return n;
}

std::vector<NodeId> WorkflowDag::outputs() const {
  std::vector<NodeId> out;
  for (const auto& [id, decl] : nodes_)
    if (decl.is_output) out.push_back(id);
  return out;
}

namespace {

std::set<NodeId> reach(const NodeId& start, const std::map<NodeId, std::vector<NodeId>>& adj) {
  std::set<NodeId> seen;
  std::deque<NodeId> work{start};
  while (!work.empty()) {
    NodeId cur = work.front();
    work.pop_front();
    for (const auto& next : adj.at(cur))
      if (seen.insert(next).second) work.push_back(next);
  }
  return seen;
}

// Finds one cycle among `candidates` (nodes Kahn could not order).
std::vector<NodeId> find_cycle(const WorkflowDag& dag, const std::set<NodeId>& candidates) {
  std::map<NodeId, int> color;  // 0 white, 1 on stack, 2 done
  std::vector<NodeId> stack;
  std::vector<NodeId> cycle;
  std::function<bool(const NodeId&)> dfs = [&](const NodeId& u) {
    color[u] = 1;
    stack.push_back(u);
    for (const auto& v : dag.children(u)) {
      if (!candidates.contains(v)) continue;
      if (color[v] == 1) {
        auto it = std::find(stack.begin(), stack.end(), v);
        cycle.assign(it, stack.end());
        return true;
      }
      if (color[v] == 0 && dfs(v)) return true;
    }
    stack.pop_back();
    color[u] = 2;
    return false;
  };
  for (const auto& id : candidates)
    if (color[id] == 0 && dfs(id)) break;
  std::sort(cycle.begin(), cycle.end());
  return cycle;
}

std::string describe_cycle(const std::vector<NodeId>& cycle) {
  std::string s = "cycle {";
  for (std::size_t i = 0; i < cycle.size(); ++i) s += (i ? "," : "") + cycle[i];
  return s + "}";
}

// Kahn's algorithm; returns the ordered prefix and leaves unordered nodes in `rest`.
std::vector<NodeId> kahn(const WorkflowDag& dag, std::set<NodeId>& rest) {
  std::map<NodeId, std::size_t> indegree;
  std::priority_queue<NodeId, std::vector<NodeId>, std::greater<>> ready;
  for (const auto& [id, _] : dag.nodes()) {
    indegree[id] = dag.parents(id).size();
    if (indegree[id] == 0) ready.push(id);
  }
  std::vector<NodeId> order;
  while (!ready.empty()) {
    NodeId u = ready.top();
    ready.pop();
    order.push_back(u);
    for (const auto& v : dag.children(u))
      if (--indegree[v] == 0) ready.push(v);
  }
  rest.clear();
  for (const auto& [id, deg] : indegree)
    if (deg > 0) rest.insert(id);
  return order;
}

}  // namespace

std::set<NodeId> WorkflowDag::ancestors(const NodeId& id) const {
  if (!contains(id)) throw std::out_of_range("unknown node '" + id + "'");
  return reach(id, parents_);
}

std::set<NodeId> WorkflowDag::descendants(const NodeId& id) const {
  if (!contains(id)) throw std::out_of_range("unknown node '" + id + "'");
  return reach(id, children_);
}

WorkflowDag WorkflowDag::with_iteration(int iteration) const {
  WorkflowDag copy = *this;
  copy.iteration_ = iteration;
  return copy;
}

WorkflowDag WorkflowDag::with_node(OperatorDecl decl) const {
  auto decls = declarations();
  bool found = false;
  for (auto& d : decls) {
    if (d.id == decl.id) {
      d = decl;
      found = true;
    }
  }
  if (!found) throw std::out_of_range("unknown node '" + decl.id + "'");
  return WorkflowDag(std::move(decls), iteration_);
}

std::vector<OperatorDecl> WorkflowDag::declarations() const {
  std::vector<OperatorDecl> out;
  out.reserve(nodes_.size());
  for (const auto& [_, decl] : nodes_) out.push_back(decl);
  return out;
}

ValidationReport validate(const WorkflowDag& dag) {
  ValidationReport report;
  if (dag.outputs().empty()) report.findings.push_back("no output node");
  for (const auto& [id, decl] : dag.nodes()) {
    if (decl.kind == OperatorKind::Source && !decl.inputs.empty())
      report.findings.push_back("source node " + id + " has inputs");
    for (const auto& in : decl.inputs)
      if (!dag.contains(in)) report.findings.push_back("dangling input " + in + " of node " + id);
  }
  std::set<NodeId> rest;
  kahn(dag, rest);
  if (!rest.empty()) report.findings.push_back(describe_cycle(find_cycle(dag, rest)));
  return report;
}

std::vector<NodeId> topological_order(const WorkflowDag& dag) {
  std::set<NodeId> rest;
  auto order = kahn(dag, rest);
  if (!rest.empty()) throw CycleError(describe_cycle(find_cycle(dag, rest)));
  return order;
}

WorkflowDag slice_to_outputs(const WorkflowDag& dag) {
  auto outputs = dag.outputs();
  if (outputs.empty()) throw std::invalid_argument("workflow has no output node");
  std::set<NodeId> keep(outputs.begin(), outputs.end());
  for (const auto& out : outputs) keep.merge(dag.ancestors(out));
  std::vector<OperatorDecl> kept;
  for (const auto& [id, decl] : dag.nodes())
    if (keep.contains(id)) kept.push_back(decl);
  return WorkflowDag(std::move(kept), dag.iteration());
}

}  // namespace reuseflow
