#include "reuseflow/report.hpp"

#include <cstdio>

#include <json.hpp>

namespace reuseflow {

namespace {

// Fractions are printed from exact counts; the three always share a denominator.
std::string fraction(std::size_t part, std::size_t whole) {
  if (whole == 0) return "0.000000";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", static_cast<double>(part) / static_cast<double>(whole));
  return buf;
}

}  // namespace

std::vector<ReportRow> build_report(const std::vector<IterationRecord>& records) {
  std::vector<ReportRow> rows;
  for (const auto& rec : records) {
    ReportRow row;
    row.iteration = rec.iteration;
    row.iteration_type = rec.iteration_type;
    row.plan_cost_ms = rec.run_ms;
    row.mat_time_ms = rec.mat_ms;
    row.cumulative_ms = rec.cumulative_run_ms;
    row.storage_bytes = rec.storage_bytes;
    for (const auto& [_, st] : rec.states) {
      if (st == NodeState::Prune) ++row.prune_nodes;
      if (st == NodeState::Load) ++row.load_nodes;
      if (st == NodeState::Compute) ++row.compute_nodes;
    }
    row.total_nodes = rec.states.size();
    rows.push_back(row);
  }
  return rows;
}

std::string report_csv(const std::vector<ReportRow>& rows) {
  std::string out = "# reuseflow report v1\n";
  out += "t,iteration_type,plan_cost_ms,mat_time_ms,cumulative_ms,storage_bytes,"
         "prune_nodes,load_nodes,compute_nodes,total_nodes,frac_prune,frac_load,frac_compute\n";
  for (const auto& r : rows) {
    out += std::to_string(r.iteration) + "," + r.iteration_type + "," + std::to_string(r.plan_cost_ms) + "," +
           std::to_string(r.mat_time_ms) + "," + std::to_string(r.cumulative_ms) + "," +
           std::to_string(r.storage_bytes) + "," + std::to_string(r.prune_nodes) + "," +
           std::to_string(r.load_nodes) + "," + std::to_string(r.compute_nodes) + "," +
           std::to_string(r.total_nodes) + "," + fraction(r.prune_nodes, r.total_nodes) + "," +
           fraction(r.load_nodes, r.total_nodes) + "," + fraction(r.compute_nodes, r.total_nodes) + "\n";
  }
  return out;
}

std::string report_json(const std::vector<ReportRow>& rows) {
  nlohmann::ordered_json doc;
  doc["version"] = 1;
  auto arr = nlohmann::ordered_json::array();
  for (const auto& r : rows) {
    nlohmann::ordered_json j;
    j["t"] = r.iteration;
    j["iteration_type"] = r.iteration_type;
    j["plan_cost_ms"] = r.plan_cost_ms;
    j["mat_time_ms"] = r.mat_time_ms;
    j["cumulative_ms"] = r.cumulative_ms;
    j["storage_bytes"] = r.storage_bytes;
    j["prune_nodes"] = r.prune_nodes;
    j["load_nodes"] = r.load_nodes;
    j["compute_nodes"] = r.compute_nodes;
    j["total_nodes"] = r.total_nodes;
    j["frac_prune"] = fraction(r.prune_nodes, r.total_nodes);
    j["frac_load"] = fraction(r.load_nodes, r.total_nodes);
    j["frac_compute"] = fraction(r.compute_nodes, r.total_nodes);
    arr.push_back(std::move(j));
  }
  doc["rows"] = std::move(arr);
  return doc.dump(2) + "\n";
}

}  // namespace reuseflow
