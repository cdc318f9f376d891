#include <gtest/gtest.h>

#include <limits>

#include "reuseflow/oep_solver.hpp"
#include "reuseflow/oracle.hpp"
#include "support/enumerate.hpp"
#include "support/eight_node.hpp"
#include "support/oracles.hpp"
#include "support/random_instances.hpp"

using namespace reuseflow;
using namespace reuseflow::testing;

namespace {

OperatorDecl decl(NodeId id, std::vector<NodeId> inputs = {}, bool out = false) {
  return {std::move(id), OperatorKind::DPR, "c", std::move(inputs), out};
}

}  // namespace

TEST(ReduceToPsp, SingleNode) {
  WorkflowDag dag({decl("x", {}, true)});
  auto psp = reduce_to_psp(dag, {{"x", {10, LoadTime::finite(4), 1}}}, {});
  EXPECT_EQ(psp.projects.size(), 2u);
  EXPECT_EQ(psp.profit.at(ProjectId::a("x")), -4);
  EXPECT_EQ(psp.profit.at(ProjectId::b("x")), -6);
  EXPECT_EQ(psp.prerequisites, (std::set<std::pair<ProjectId, ProjectId>>{{ProjectId::b("x"), ProjectId::a("x")}}));
  EXPECT_TRUE(psp.required.contains(ProjectId::a("x")));
}

TEST(ReduceToPsp, InfiniteLoadUsesBig) {
  WorkflowDag dag({decl("x", {}, true)});
  auto psp = reduce_to_psp(dag, {{"x", {10, LoadTime::infinite(), 1}}}, {});
  EXPECT_GT(psp.big, 10);
  EXPECT_EQ(psp.profit.at(ProjectId::a("x")), -psp.big);
  EXPECT_EQ(psp.profit.at(ProjectId::b("x")), psp.big - 10);
}

TEST(ReduceToPsp, EightNodeShape) {
  auto f = eight_node();
  auto psp = reduce_to_psp(f.dag, f.metrics, f.changes);
  EXPECT_EQ(psp.projects.size(), 16u);
  EXPECT_EQ(psp.prerequisites.size(), 16u);
  EXPECT_EQ(f.dag.edge_count(), 8u);
}

TEST(SolvePsp, PureLossNotTaken) {
  PspInstance psp;
  psp.projects = {ProjectId::a("x")};
  psp.profit[ProjectId::a("x")] = -3;
  EXPECT_TRUE(solve_psp(psp).empty());
}

TEST(SolvePsp, NetGainTakesBoth) {
  PspInstance psp;
  psp.projects = {ProjectId::a("x"), ProjectId::b("x")};
  psp.profit[ProjectId::a("x")] = -2;
  psp.profit[ProjectId::b("x")] = 5;
  psp.prerequisites.insert({ProjectId::b("x"), ProjectId::a("x")});
  EXPECT_EQ(solve_psp(psp), (std::set<ProjectId>{ProjectId::a("x"), ProjectId::b("x")}));
}

TEST(SolvePsp, ZeroProfitTieGivesSmallestSelection) {
  PspInstance psp;
  psp.projects = {ProjectId::a("x"), ProjectId::b("x")};
  psp.profit[ProjectId::a("x")] = -2;
  psp.profit[ProjectId::b("x")] = 2;
  psp.prerequisites.insert({ProjectId::b("x"), ProjectId::a("x")});
  EXPECT_TRUE(solve_psp(psp).empty());
}

TEST(SolvePsp, RandomAgainstClosureEnumeration) {
  Rng rng(7);
  for (int i = 0; i < 150; ++i) {
    auto inst = random_instance(rng, {.min_nodes = 1, .max_nodes = 6});
    auto psp = reduce_to_psp(inst.dag, inst.metrics, inst.changes);
    auto sel = solve_psp(psp);
    EXPECT_EQ(total_profit(psp, sel), *brute_force_psp(psp)) << "instance " << i;
  }
}

TEST(PlanFromProjects, EightNodeSelection) {
  auto f = eight_node();
  std::set<ProjectId> sel{ProjectId::a("n4"), ProjectId::a("n5"), ProjectId::a("n6"), ProjectId::b("n6"),
                          ProjectId::a("n7"), ProjectId::b("n7"), ProjectId::a("n8")};
  StateMap expected{{"n1", NodeState::Prune},   {"n2", NodeState::Prune},   {"n3", NodeState::Prune},
                    {"n4", NodeState::Load},    {"n5", NodeState::Load},    {"n6", NodeState::Compute},
                    {"n7", NodeState::Compute}, {"n8", NodeState::Load}};
  EXPECT_EQ(plan_from_projects(f.dag, sel), expected);
}

TEST(PlanFromProjects, EmptyAndSingle) {
  auto f = eight_node();
  for (const auto& [_, s] : plan_from_projects(f.dag, {})) EXPECT_EQ(s, NodeState::Prune);
  WorkflowDag one({decl("x", {}, true)});
  EXPECT_EQ(plan_from_projects(one, {ProjectId::a("x")}).at("x"), NodeState::Load);
  EXPECT_THROW(plan_from_projects(one, {ProjectId::b("x")}), std::logic_error);
}

TEST(OptimalPlan, SingleOriginal) {
  WorkflowDag dag({decl("x", {}, true)});
  ChangeSet cs;
  cs.original = {"x"};
  auto p = optimal_plan(dag, {{"x", {5, LoadTime::infinite(), 1}}}, cs);
  EXPECT_EQ(p.states.at("x"), NodeState::Compute);
  EXPECT_EQ(p.cost_ms, 5);
  auto b = oracle::brute_force_oep(dag, {{"x", {5, LoadTime::infinite(), 1}}}, cs);
  EXPECT_EQ(b.min_cost, 5);
  EXPECT_EQ(b.states.at("x"), NodeState::Compute);
}

TEST(OptimalPlan, LoadCheaperParent) {
  WorkflowDag dag({decl("A"), decl("B", {"A"}, true)});
  MetricsMap m{{"A", {10, LoadTime::finite(3), 1}}, {"B", {2, LoadTime::infinite(), 1}}};
  ChangeSet cs;
  cs.original = {"B"};
  auto p = optimal_plan(dag, m, cs);
  EXPECT_EQ(p.states, (StateMap{{"A", NodeState::Load}, {"B", NodeState::Compute}}));
  EXPECT_EQ(p.cost_ms, 5);
  auto b = oracle::brute_force_oep(dag, m, cs);
  EXPECT_EQ(b.min_cost, 5);
  EXPECT_EQ(b.states, p.states);
}

TEST(OptimalPlan, EightNodeUniqueOptimum) {
  auto f = eight_node();
  auto p = optimal_plan(f.dag, f.metrics, f.changes);
  EXPECT_EQ(p.states.at("n4"), NodeState::Load);
  EXPECT_EQ(p.states.at("n6"), NodeState::Compute);
  EXPECT_EQ(p.cost_ms, 2 + 1 + 2 + 3 + 1);

  int at_min = 0;
  Millis best = std::numeric_limits<Millis>::max();
  for_each_structural_plan(f.dag, f.metrics, [&](const StateMap& s) {
    if (s.at("n6") != NodeState::Compute || s.at("n7") != NodeState::Compute) return;
    Millis c = plan_cost(f.dag, f.metrics, s);
    if (c < best) best = c, at_min = 0;
    if (c == best) ++at_min;
  });
  EXPECT_EQ(best, p.cost_ms);
  EXPECT_EQ(at_min, 1);
}

TEST(OptimalPlan, RandomAgainstBruteForce) {
  Rng rng(2024);
  for (int i = 0; i < 150; ++i) {
    auto inst = random_instance(rng, {.max_nodes = 9});
    auto p = optimal_plan(inst.dag, inst.metrics, inst.changes);
    auto b = oracle::brute_force_oep(inst.dag, inst.metrics, inst.changes);
    EXPECT_EQ(p.cost_ms, b.min_cost) << "instance " << i;
    EXPECT_TRUE(check_plan(inst.dag, inst.changes, p.states).empty());
    EXPECT_EQ(plan_cost(inst.dag, inst.metrics, p.states), p.cost_ms);
  }
}

TEST(OptimalPlan, ProfitDuality) {
  Rng rng(5);
  for (int i = 0; i < 100; ++i) {
    auto inst = random_instance(rng, {.max_nodes = 10});
    auto psp = reduce_to_psp(inst.dag, inst.metrics, inst.changes);
    auto sel = solve_psp(psp);
    auto cost = plan_cost(inst.dag, inst.metrics, plan_from_projects(inst.dag, sel));
    EXPECT_EQ(-total_profit(psp, sel), cost) << "instance " << i;
  }
}

// Dropping the "originals computed" rule and instead giving originals a
// negative compute cost that dominates everything recovers the same optimum.
TEST(OptimalPlan, PerturbedObjectiveMatchesConstraint) {
  Rng rng(33);
  for (int i = 0; i < 60; ++i) {
    auto inst = random_instance(rng, {.max_nodes = 7, .original_seed_percent = 25});
    auto constrained = oracle::brute_force_oep(inst.dag, inst.metrics, inst.changes);
    std::pair<long, Millis> best{std::numeric_limits<long>::max(), 0};
    for_each_structural_plan(inst.dag, inst.metrics, [&](const StateMap& s) {
      long eps_terms = 0;
      Millis finite = 0;
      for (const auto& [id, st] : s) {
        const auto& m = inst.metrics.at(id);
        if (inst.changes.is_original(id)) {
          if (st == NodeState::Compute) --eps_terms;
        } else if (st == NodeState::Compute) {
          finite += m.compute_ms;
        } else if (st == NodeState::Load) {
          finite += m.load_ms.ms();
        }
      }
      best = std::min(best, std::pair<long, Millis>{eps_terms, finite});
    });
    Millis originals = 0;
    for (const auto& id : inst.changes.original) originals += inst.metrics.at(id).compute_ms;
    EXPECT_EQ(best.first, -static_cast<long>(inst.changes.original.size()));
    EXPECT_EQ(best.second + originals, constrained.min_cost) << "instance " << i;
  }
}

TEST(Ilp, RoundTripAndObjective) {
  Rng rng(12);
  for (int i = 0; i < 50; ++i) {
    auto inst = random_instance(rng, {.max_nodes = 8});
    auto p = optimal_plan(inst.dag, inst.metrics, inst.changes);
    auto x = oracle::to_ilp(p.states);
    EXPECT_EQ(oracle::from_ilp(x), p.states);
    EXPECT_TRUE(oracle::ilp_feasible(inst.dag, x));
    EXPECT_EQ(oracle::ilp_objective(inst.dag, inst.metrics, x, 1'000'000), p.cost_ms);
  }
}

TEST(Ilp, PerParentConstraint) {
  WorkflowDag dag({decl("A"), decl("B"), decl("C", {"A", "B"}, true)});
  StateMap s{{"A", NodeState::Load}, {"B", NodeState::Prune}, {"C", NodeState::Compute}};
  EXPECT_FALSE(oracle::ilp_feasible(dag, oracle::to_ilp(s)));
}

TEST(BruteForceOep, RefusesLargeDags) {
  std::vector<OperatorDecl> decls;
  for (std::size_t i = 0; i <= oracle::kMaxOepNodes; ++i) decls.push_back(decl(node_name(i), {}, true));
  WorkflowDag dag(decls);
  MetricsMap m;
  for (const auto& d : decls) m[d.id] = {1, LoadTime::finite(1), 1};
  EXPECT_THROW(oracle::brute_force_oep(dag, m, {}), std::length_error);
}

TEST(EmitPsp, Deterministic) {
  auto f = eight_node();
  auto psp = reduce_to_psp(f.dag, f.metrics, f.changes);
  auto text = emit_psp(psp);
  EXPECT_EQ(text, emit_psp(reduce_to_psp(f.dag, f.metrics, f.changes)));
  EXPECT_EQ(text.rfind("# psp v1", 0), 0u);
  EXPECT_NE(text.find("a(n4)"), std::string::npos);
}
