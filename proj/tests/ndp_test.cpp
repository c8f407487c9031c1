#include <gtest/gtest.h>

#include "cgbg/ndp.hpp"
#include "cgbg/random_game.hpp"
#include "cgbg/solvers.hpp"
#include "cgbg/state_model.hpp"
#include "oracles.hpp"

namespace cgbg {
namespace {

FactorGraph star_graph(std::size_t leaves, Rng& rng) {
  FactorGraph fg;
  fg.add_variable({2});
  for (std::size_t j = 0; j < leaves; ++j) {
    const std::size_t v = fg.add_variable({2});
    Factor f{{0, v}, {}, kNoTag, kNoTag};
    for (int c = 0; c < 4; ++c) f.table.push_back(rng.normal());
    fg.add_factor(std::move(f));
  }
  return fg;
}

TEST(Ndp, SingleUnaryFactor) {
  FactorGraph fg;
  fg.add_variable({3});
  fg.add_factor({{0}, {1.0, 7.0, 2.0}, kNoTag, kNoTag});
  const NdpResult r = ndp_solve(fg, OrderHeuristic::kSequential);
  EXPECT_EQ(r.assignment, (std::vector<std::size_t>{1}));
  EXPECT_EQ(r.value, 7.0);
  EXPECT_EQ(r.induced_width, 0u);
}

TEST(Ndp, ConstantFactorsFoldIntoValue) {
  FactorGraph fg;
  fg.add_variable({2});
  fg.add_factor({{}, {2.5}, kNoTag, kNoTag});
  fg.add_factor({{0}, {1.0, -1.0}, kNoTag, kNoTag});
  const NdpResult r = ndp_solve(fg, OrderHeuristic::kMinDegree);
  EXPECT_EQ(r.value, 3.5);
  EXPECT_EQ(r.assignment[0], 0u);
}

TEST(Ndp, ThreeAgentChainWidths) {
  const CGBG g = testing::chain_game_three_agents();
  // left to right over the type variables: eliminating agent 1's first type
  // joins its second type with both of agent 2's
  EXPECT_EQ(ndp_solve(build_factor_graph(g, FgVariant::kATI), OrderHeuristic::kSequential).induced_width, 3u);
  EXPECT_EQ(ndp_solve(build_factor_graph(g, FgVariant::kAI), OrderHeuristic::kSequential).induced_width, 1u);
}

TEST(Ndp, FixtureOptimum) {
  const CGBG g = build_two_agent_firefight();
  for (FgVariant v : {FgVariant::kAI, FgVariant::kTI, FgVariant::kATI}) {
    const SolveResult r = solve_ndp(g, v, OrderHeuristic::kMinDegree);
    EXPECT_NEAR(r.value, 3.1, 1e-12) << to_string(v);
    EXPECT_EQ(r.policy.assignments, (std::vector<std::vector<std::size_t>>{{1, 1}, {1, 0}}));
  }
}

TEST(Ndp, ExactOnRandomGraphs) {
  Rng rng(29);
  for (int trial = 0; trial < 60; ++trial) {
    FactorGraph fg;
    const std::size_t V = 2 + rng.below(5);
    for (std::size_t v = 0; v < V; ++v) fg.add_variable({1 + rng.below(3)});
    const std::size_t F = 1 + rng.below(6);
    for (std::size_t f = 0; f < F; ++f) {
      std::vector<std::size_t> vars;
      for (std::size_t v = 0; v < V; ++v) {
        if (rng.uniform() < 0.4) vars.push_back(v);
      }
      rng.shuffle(vars);
      std::size_t cells = 1;
      for (std::size_t v : vars) cells *= fg.variables()[v].domain;
      std::vector<double> table(cells);
      for (double& x : table) x = rng.normal();
      fg.add_factor({vars, table, kNoTag, kNoTag});
    }
    const double oracle = testing::exhaustive_graph_max(fg);
    for (OrderHeuristic h : {OrderHeuristic::kSequential, OrderHeuristic::kMinDegree, OrderHeuristic::kMinFill}) {
      const NdpResult r = ndp_solve(fg, h);
      EXPECT_NEAR(r.value, oracle, 1e-9);
      EXPECT_NEAR(fg.value(r.assignment), r.value, 1e-9);
    }
  }
}

TEST(Ndp, GameOptimumIndependentOfVariantAndOrder) {
  Rng rng(31);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 2 + rng.below(3);
    const CGBG g = generate_random_cgbg({n, 2, 2, 1 + rng.below(2), rng.next_u64()});
    const double oracle = testing::exhaustive_optimum(g);
    for (FgVariant v : {FgVariant::kAI, FgVariant::kTI, FgVariant::kATI}) {
      for (OrderHeuristic h : {OrderHeuristic::kSequential, OrderHeuristic::kMinDegree, OrderHeuristic::kMinFill}) {
        EXPECT_NEAR(solve_ndp(g, v, h).value, oracle, 1e-9);
      }
    }
  }
}

TEST(Ndp, GivenOrderIsHonoured) {
  Rng rng(37);
  const FactorGraph fg = star_graph(5, rng);
  EliminationOrder reversed{{5, 4, 3, 2, 1, 0}, OrderHeuristic::kGiven};
  EXPECT_EQ(ndp_solve(fg, reversed).induced_width, 1u);
  EliminationOrder bad{{0, 1, 2}, OrderHeuristic::kGiven};
  EXPECT_THROW(ndp_solve(fg, bad), InvalidArgument);
}

TEST(Ndp, StarGraphOrdering) {
  Rng rng(41);
  const FactorGraph fg = star_graph(5, rng);
  EXPECT_EQ(compute_order(fg, OrderHeuristic::kMinDegree).order, (std::vector<std::size_t>{1, 2, 3, 4, 0, 5}));
  EXPECT_EQ(ndp_solve(fg, OrderHeuristic::kMinDegree).induced_width, 1u);
  EXPECT_EQ(ndp_solve(fg, OrderHeuristic::kMinFill).induced_width, 1u);
  EXPECT_EQ(ndp_solve(fg, OrderHeuristic::kSequential).induced_width, 5u);
}

TEST(Ndp, WidthAtLeastLargestFactorMinusOne) {
  Rng rng(43);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 3 + rng.below(4);
    const CGBG g = generate_random_cgbg({n, 2 + rng.below(2), 2, 2, rng.next_u64()});
    for (FgVariant v : {FgVariant::kAI, FgVariant::kATI}) {
      const FactorGraph fg = build_factor_graph(g, v);
      const std::size_t k = predicted_width_lower_bound(fg);
      for (OrderHeuristic h : {OrderHeuristic::kSequential, OrderHeuristic::kMinDegree, OrderHeuristic::kMinFill}) {
        EXPECT_GE(ndp_solve(fg, h).induced_width + 1, k);
      }
    }
  }
}

TEST(Ndp, AtiPeakGrowsWithTypes) {
  std::size_t previous = 0;
  for (std::size_t T = 1; T <= 4; ++T) {
    const CGBG g = generate_random_cgbg({4, 2, 2, T, 77});
    const SolveResult r = solve_ndp(g, FgVariant::kATI, OrderHeuristic::kMinDegree);
    EXPECT_GT(r.peak_cells, previous);
    previous = r.peak_cells;
  }
}

TEST(Ndp, CellCapRaisesWithWidth) {
  const CGBG g = generate_random_cgbg({6, 3, 3, 3, 5});
  const FactorGraph fg = build_factor_graph(g, FgVariant::kATI);
  try {
    ndp_solve(fg, OrderHeuristic::kSequential, {10, {}});
    FAIL() << "expected ResourceLimitError";
  } catch (const ResourceLimitError& e) {
    EXPECT_NE(std::string(e.what()).find("width"), std::string::npos);
  }
}

TEST(Ndp, ExpiredDeadlineThrows) {
  const CGBG g = generate_random_cgbg({6, 2, 2, 2, 5});
  EXPECT_THROW(ndp_solve(build_factor_graph(g, FgVariant::kATI), OrderHeuristic::kMinDegree,
                         {kDefaultNdpCellCap, Deadline::at(Deadline::Clock::now())}),
               TimeoutError);
}

}  // namespace
}  // namespace cgbg
