#include "reuseflow/workflow_io.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace reuseflow {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  if (!obj.is_object()) throw WorkflowFormatError(where + " must be an object");
  for (const auto& [key, _] : obj.items())
    if (!allowed.contains(key)) throw WorkflowFormatError("unknown field '" + key + "' in " + where);
}

template <typename T>
T field(const json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key)) throw WorkflowFormatError("missing field '" + std::string(key) + "' in " + where);
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw WorkflowFormatError("field '" + std::string(key) + "' in " + where + " has the wrong type");
  }
}

}  // namespace

Workflow parse_workflow(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& ex) {
    throw WorkflowFormatError(std::string("invalid JSON: ") + ex.what());
  }
  reject_unknown(doc, {"iteration", "disk_read_bytes_per_ms", "nodes"}, "workflow");
  Workflow wf;
  int iteration = doc.contains("iteration") ? field<int>(doc, "iteration", "workflow") : 0;
  wf.disk_read_bytes_per_ms =
      doc.contains("disk_read_bytes_per_ms") ? field<std::int64_t>(doc, "disk_read_bytes_per_ms", "workflow") : 1;
  if (iteration < 0) throw WorkflowFormatError("iteration must be >= 0");
  if (wf.disk_read_bytes_per_ms <= 0) throw WorkflowFormatError("disk_read_bytes_per_ms must be positive");
  if (!doc.contains("nodes") || !doc.at("nodes").is_array()) throw WorkflowFormatError("'nodes' must be an array");
  const json& nodes = doc.at("nodes");

  std::vector<OperatorDecl> decls;
  for (const auto& n : nodes) {
    reject_unknown(n, {"id", "kind", "code", "inputs", "is_output", "compute_ms", "size_bytes", "command"}, "node");
    OperatorDecl decl;
    decl.id = field<std::string>(n, "id", "node");
    const std::string where = "node '" + decl.id + "'";
    try {
      decl.kind = operator_kind_from_string(field<std::string>(n, "kind", where));
    } catch (const std::invalid_argument& ex) {
      throw WorkflowFormatError(ex.what());
    }
    decl.code = field<std::string>(n, "code", where);
    decl.inputs = field<std::vector<std::string>>(n, "inputs", where);
    decl.is_output = field<bool>(n, "is_output", where);
    NodeCosts costs{field<Millis>(n, "compute_ms", where), field<std::int64_t>(n, "size_bytes", where)};
    if (costs.compute_ms < 0 || costs.size_bytes < 0) throw WorkflowFormatError("negative cost in " + where);
    if (n.contains("command")) wf.commands[decl.id] = field<std::string>(n, "command", where);
    if (wf.costs.contains(decl.id)) throw WorkflowFormatError("duplicate node id '" + decl.id + "'");
    wf.costs[decl.id] = costs;
    decls.push_back(std::move(decl));
  }
  try {
    wf.dag = WorkflowDag(std::move(decls), iteration);
  } catch (const std::invalid_argument& ex) {
    throw WorkflowFormatError(ex.what());
  }
  return wf;
}

Workflow load_workflow(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw WorkflowFormatError("cannot read " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_workflow(buf.str());
}

std::string serialize_workflow(const Workflow& wf) {
  ordered_json doc;
  doc["iteration"] = wf.dag.iteration();
  doc["disk_read_bytes_per_ms"] = wf.disk_read_bytes_per_ms;
  ordered_json nodes = ordered_json::array();
  for (const auto& [id, decl] : wf.dag.nodes()) {
    ordered_json n;
    n["id"] = id;
    n["kind"] = to_string(decl.kind);
    n["code"] = decl.code;
    n["inputs"] = decl.inputs;
    n["is_output"] = decl.is_output;
    n["compute_ms"] = wf.costs.at(id).compute_ms;
    n["size_bytes"] = wf.costs.at(id).size_bytes;
    if (auto it = wf.commands.find(id); it != wf.commands.end()) n["command"] = it->second;
    nodes.push_back(std::move(n));
  }
  doc["nodes"] = std::move(nodes);
  return doc.dump(2) + "\n";
}

Workflow Workflow::restricted_to(const WorkflowDag& sliced) const {
  Workflow out;
  out.dag = sliced;
  out.disk_read_bytes_per_ms = disk_read_bytes_per_ms;
  for (const auto& [id, _] : sliced.nodes()) {
    out.costs[id] = costs.at(id);
    if (auto it = commands.find(id); it != commands.end()) out.commands[id] = it->second;
  }
  return out;
}

MetricsMap Workflow::materialized_metrics() const {
  MetricsMap metrics;
  for (const auto& [id, decl] : dag.nodes()) {
    const auto& c = costs.at(id);
    Millis load = decl.kind == OperatorKind::Source ? c.compute_ms : load_ms_for_size(c.size_bytes, disk_read_bytes_per_ms);
    metrics[id] = {c.compute_ms, LoadTime::finite(load), c.size_bytes};
  }
  return metrics;
}

}  // namespace reuseflow
