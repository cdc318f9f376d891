#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "reuseflow/engine.hpp"

namespace reuseflow {

struct ReportRow {
  int iteration = 0;
  std::string iteration_type;
  Millis plan_cost_ms = 0;
  Millis mat_time_ms = 0;
  Millis cumulative_ms = 0;
  std::int64_t storage_bytes = 0;
  std::size_t prune_nodes = 0;
  std::size_t load_nodes = 0;
  std::size_t compute_nodes = 0;
  std::size_t total_nodes = 0;
};

std::vector<ReportRow> build_report(const std::vector<IterationRecord>& records);

/// First line is a "# reuseflow report v1" schema comment.
std::string report_csv(const std::vector<ReportRow>& rows);
std::string report_json(const std::vector<ReportRow>& rows);

}  // namespace reuseflow
