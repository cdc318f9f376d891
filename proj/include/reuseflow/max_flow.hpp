#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace reuseflow {

/// Arc capacity: a non-negative integer, or Unbounded.
class Capacity {
 public:
  static Capacity finite(std::int64_t value);
  static Capacity unbounded() { return Capacity(0, true); }

  bool is_unbounded() const { return unbounded_; }
  /// Throws std::logic_error when unbounded.
  std::int64_t value() const;

  friend bool operator==(const Capacity&, const Capacity&) = default;

 private:
  Capacity(std::int64_t v, bool u) : value_(v), unbounded_(u) {}
  std::int64_t value_ = 0;
  bool unbounded_ = false;
};

struct Arc {
  std::size_t from = 0;
  std::size_t to = 0;
  Capacity capacity = Capacity::finite(0);
};

/// Directed network with a distinguished source and sink. Vertices are
/// 0..vertex_count-1.
class FlowNetwork {
 public:
  FlowNetwork(std::size_t vertex_count, std::size_t source, std::size_t sink);

  /// Throws std::invalid_argument for arcs into the source, out of the
  /// sink, self-loops or out-of-range endpoints.
  void add_arc(std::size_t from, std::size_t to, Capacity capacity);

  std::size_t vertex_count() const { return vertex_count_; }
  std::size_t source() const { return source_; }
  std::size_t sink() const { return sink_; }
  const std::vector<Arc>& arcs() const { return arcs_; }

 private:
  std::size_t vertex_count_;
  std::size_t source_;
  std::size_t sink_;
  std::vector<Arc> arcs_;
};

struct MaxFlowResult {
  std::int64_t flow_value = 0;
  /// source_side[v] is true for vertices reachable from the source in the
  /// final residual graph: the minimal source side of a minimum cut.
  std::vector<bool> source_side;
};

/// Edmonds-Karp: shortest augmenting paths by BFS, scanning neighbours in
/// ascending vertex id. Throws std::domain_error if a path of unbounded
/// arcs joins source and sink.
MaxFlowResult max_flow(const FlowNetwork& net);

/// Capacity of the arcs leaving `source_side`.
struct CutValue {
  std::int64_t capacity = 0;
  bool crosses_unbounded = false;
};
CutValue cut_value(const FlowNetwork& net, const std::vector<bool>& source_side);

}  // namespace reuseflow
