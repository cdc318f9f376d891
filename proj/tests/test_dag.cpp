#include <gtest/gtest.h>

#include "reuseflow/dag.hpp"
#include "reuseflow/plan.hpp"

using namespace reuseflow;

namespace {

OperatorDecl decl(NodeId id, std::vector<NodeId> inputs = {}, bool out = false,
                  OperatorKind kind = OperatorKind::DPR) {
  return {std::move(id), kind, "code", std::move(inputs), out};
}

bool has_finding(const ValidationReport& r, const std::string& text) {
  for (const auto& f : r.findings)
    if (f.find(text) != std::string::npos) return true;
  return false;
}

}  // namespace

TEST(Validate, EmptyDagHasNoOutput) {
  auto r = validate(WorkflowDag{});
  EXPECT_TRUE(has_finding(r, "no output node"));
}

TEST(Validate, MinimalValid) {
  WorkflowDag dag({decl("A", {}, false, OperatorKind::Source), decl("B", {"A"}, true)});
  EXPECT_TRUE(validate(dag).ok());
}

TEST(Validate, TwoCycle) {
  WorkflowDag dag({decl("A", {"B"}), decl("B", {"A"}, true)});
  auto r = validate(dag);
  EXPECT_TRUE(has_finding(r, "cycle {A,B}")) << ::testing::PrintToString(r.findings);
}

TEST(Validate, DanglingInputAndSourceWithInputs) {
  WorkflowDag dag({decl("S", {"X"}, false, OperatorKind::Source), decl("B", {"S", "ghost"}, true)});
  auto r = validate(dag);
  EXPECT_TRUE(has_finding(r, "source node S has inputs"));
  EXPECT_TRUE(has_finding(r, "dangling input ghost"));
}

TEST(Dag, RejectsDuplicateAndEmptyIds) {
  EXPECT_THROW(WorkflowDag({decl("A"), decl("A")}), std::invalid_argument);
  EXPECT_THROW(WorkflowDag({decl("")}), std::invalid_argument);
}

TEST(Dag, ParentsChildrenDeduplicated) {
  WorkflowDag dag({decl("A"), decl("B", {"A", "A"}, true)});
  EXPECT_EQ(dag.parents("B"), std::vector<NodeId>{"A"});
  EXPECT_EQ(dag.children("A"), std::vector<NodeId>{"B"});
  EXPECT_EQ(dag.edge_count(), 1u);
}

TEST(Topo, SingleNode) {
  WorkflowDag dag({decl("A", {}, true)});
  EXPECT_EQ(topological_order(dag), std::vector<NodeId>{"A"});
}

TEST(Topo, DiamondTieByIdOrder) {
  WorkflowDag dag({decl("D", {"B", "C"}, true), decl("C", {"A"}), decl("B", {"A"}), decl("A")});
  EXPECT_EQ(topological_order(dag), (std::vector<NodeId>{"A", "B", "C", "D"}));
}

TEST(Topo, FollowsEdgesNotIds) {
  WorkflowDag dag({decl("C"), decl("B", {"C"}), decl("A", {"B"}, true)});
  EXPECT_EQ(topological_order(dag), (std::vector<NodeId>{"C", "B", "A"}));
}

TEST(Topo, CycleThrows) {
  WorkflowDag dag({decl("A", {"B"}), decl("B", {"A"}, true)});
  EXPECT_THROW(topological_order(dag), CycleError);
}

TEST(Slice, RemovesUnusedExtractor) {
  WorkflowDag dag({decl("rows", {}, false, OperatorKind::Source), decl("ageExt", {"rows"}),
                   decl("raceExt", {"rows"}), decl("incPred", {"ageExt"}, true, OperatorKind::LI)});
  auto sliced = slice_to_outputs(dag);
  EXPECT_FALSE(sliced.contains("raceExt"));
  EXPECT_EQ(sliced.size(), 3u);
}

TEST(Slice, IdentityWhenEverythingFeedsOutput) {
  WorkflowDag dag({decl("A"), decl("B", {"A"}), decl("C", {"B"}, true)});
  EXPECT_EQ(slice_to_outputs(dag).declarations().size(), 3u);
}

TEST(Slice, DisconnectedChainRemoved) {
  WorkflowDag dag({decl("A"), decl("B", {"A"}, true), decl("X"), decl("Y", {"X"})});
  auto sliced = slice_to_outputs(dag);
  EXPECT_EQ(sliced.size(), 2u);
  EXPECT_FALSE(sliced.contains("X"));
  EXPECT_FALSE(sliced.contains("Y"));
}

TEST(Slice, NoOutputThrows) {
  EXPECT_THROW(slice_to_outputs(WorkflowDag({decl("A")})), std::invalid_argument);
}

TEST(LoadTime, InfiniteIsGreatest) {
  EXPECT_LT(LoadTime::finite(1'000'000'000), LoadTime::infinite());
  EXPECT_THROW(LoadTime::infinite().ms(), std::logic_error);
  EXPECT_EQ(to_string(LoadTime::infinite()), "inf");
  EXPECT_EQ(load_ms_for_size(1001, 1000), 2);
  EXPECT_EQ(load_ms_for_size(0, 1000), 0);
}

TEST(PlanCost, Examples) {
  WorkflowDag dag({decl("A"), decl("B", {"A"}), decl("C", {"B"}, true)});
  MetricsMap m{{"A", {9, LoadTime::finite(3), 1}}, {"B", {2, LoadTime::infinite(), 1}}, {"C", {5, LoadTime::infinite(), 1}}};
  EXPECT_EQ(plan_cost(dag, m, {{"A", NodeState::Prune}, {"B", NodeState::Prune}, {"C", NodeState::Prune}}), 0);
  EXPECT_EQ(plan_cost(dag, m, {{"A", NodeState::Load}, {"B", NodeState::Compute}, {"C", NodeState::Prune}}), 5);
  WorkflowDag one({decl("X", {}, true)});
  EXPECT_EQ(plan_cost(one, {{"X", {5, LoadTime::infinite(), 0}}}, {{"X", NodeState::Compute}}), 5);
}

TEST(PlanCost, LoadOfUnmaterializedThrows) {
  WorkflowDag dag({decl("A", {}, true)});
  MetricsMap m{{"A", {5, LoadTime::infinite(), 0}}};
  try {
    plan_cost(dag, m, {{"A", NodeState::Load}});
    FAIL();
  } catch (const std::invalid_argument& ex) {
    EXPECT_NE(std::string(ex.what()).find("load of unmaterialized node"), std::string::npos);
  }
  EXPECT_THROW(plan_cost(dag, m, {}), std::invalid_argument);
}

TEST(CheckPlan, Violations) {
  WorkflowDag dag({decl("A"), decl("B", {"A"}, true)});
  ChangeSet none;
  auto v = check_plan(dag, none, {{"A", NodeState::Prune}, {"B", NodeState::Compute}});
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].node, "B");

  ChangeSet orig;
  orig.original = {"B"};
  v = check_plan(dag, orig, {{"A", NodeState::Prune}, {"B", NodeState::Load}});
  ASSERT_FALSE(v.empty());
  EXPECT_EQ(v[0].node, "B");

  EXPECT_TRUE(check_plan(dag, orig, {{"A", NodeState::Load}, {"B", NodeState::Compute}}).empty());
}
