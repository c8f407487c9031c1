#include <gtest/gtest.h>

#include <cmath>

#include "cgbg/max_plus.hpp"
#include "cgbg/random_game.hpp"
#include "cgbg/solvers.hpp"
#include "cgbg/state_model.hpp"
#include "oracles.hpp"

namespace cgbg {
namespace {

MaxPlusParams params(std::size_t restarts, std::size_t iterations, Schedule s, std::uint64_t seed = 1) {
  MaxPlusParams p;
  p.restarts = restarts;
  p.max_iterations = iterations;
  p.schedule = s;
  p.seed = seed;
  return p;
}

TEST(MaxPlus, ExactOnTrees) {
  Rng rng(47);
  for (Schedule s : {Schedule::kSequentialRandom, Schedule::kSequentialFixed, Schedule::kParallel}) {
    for (int trial = 0; trial < 30; ++trial) {
      const FactorGraph fg = testing::random_tree_graph(rng, 2 + rng.below(7), 4);
      const MaxPlusResult r = max_plus(fg, params(1, 100, s, rng.next_u64()));
      EXPECT_NEAR(r.exact_value, testing::exhaustive_graph_max(fg), 1e-9) << to_string(s);
    }
  }
}

TEST(MaxPlus, ConvergesOnATree) {
  Rng rng(53);
  const FactorGraph fg = testing::random_tree_graph(rng, 6, 3);
  const MaxPlusResult r = max_plus(fg, params(1, 500, Schedule::kParallel));
  EXPECT_TRUE(r.converged);
  EXPECT_LT(r.iterations_used[0], 500u);
}

TEST(MaxPlus, AiGraphOfTwoAgentGameIsExact) {
  // one factor: max-plus reads the maximum straight off the table
  const SolveResult r = solve_max_plus(build_two_agent_firefight(), FgVariant::kAI, params(1, 5, Schedule::kParallel));
  EXPECT_NEAR(r.value, 3.1, 1e-12);
  EXPECT_EQ(r.policy.assignments, (std::vector<std::vector<std::size_t>>{{1, 1}, {1, 0}}));
}

TEST(MaxPlus, ZeroTablesGiveZero) {
  CGBG g = testing::chain_game_three_agents();
  for (auto& c : g.components) std::fill(c.payoffs.begin(), c.payoffs.end(), 0.0);
  const SolveResult r = solve_max_plus(g, FgVariant::kATI, params(3, 10, Schedule::kSequentialRandom));
  EXPECT_EQ(r.value, 0.0);
}

TEST(MaxPlus, MessagesPerIterationAreTwicePerEdge) {
  const FactorGraph fg = build_factor_graph(testing::chain_game_three_agents(), FgVariant::kATI);
  MaxPlusState state(fg, Schedule::kSequentialRandom, 0.2, 3);
  EXPECT_EQ(state.num_edges(), 16u);
  EXPECT_EQ(state.run_iteration().messages, 32u);
  const MaxPlusResult r = max_plus(fg, params(2, 7, Schedule::kParallel));
  std::size_t used = 0;
  for (std::size_t u : r.iterations_used) used += u;
  EXPECT_EQ(r.messages_sent, 32 * used);
}

TEST(MaxPlus, ReproducibleForFixedSeed) {
  const CGBG g = generate_random_cgbg({6, 2, 3, 2, 9});
  const FactorGraph fg = build_factor_graph(g, FgVariant::kATI);
  const MaxPlusResult a = max_plus(fg, params(4, 20, Schedule::kSequentialRandom, 99));
  const MaxPlusResult b = max_plus(fg, params(4, 20, Schedule::kSequentialRandom, 99));
  EXPECT_EQ(a.assignment, b.assignment);
  EXPECT_EQ(a.exact_value, b.exact_value);
  EXPECT_EQ(a.anytime_trace, b.anytime_trace);
}

TEST(MaxPlus, AnytimeTraceNeverDecreasesAndMatchesResult) {
  Rng rng(59);
  for (int trial = 0; trial < 20; ++trial) {
    const CGBG g = generate_random_cgbg({5, 2, 2, 3, rng.next_u64()});
    const FactorGraph fg = build_factor_graph(g, FgVariant::kATI);
    const MaxPlusResult r = max_plus(fg, params(3, 15, Schedule::kSequentialRandom, rng.next_u64()));
    for (std::size_t i = 1; i < r.anytime_trace.size(); ++i) EXPECT_GE(r.anytime_trace[i], r.anytime_trace[i - 1]);
    EXPECT_EQ(r.anytime_trace.back(), r.exact_value);
    EXPECT_NEAR(fg.value(r.assignment), r.exact_value, 1e-12);
  }
}

TEST(MaxPlus, MoreRestartsNeverHurt) {
  Rng rng(61);
  for (int trial = 0; trial < 20; ++trial) {
    const CGBG g = generate_random_cgbg({6, 3, 2, 2, rng.next_u64()});
    const FactorGraph fg = build_factor_graph(g, FgVariant::kATI);
    const std::uint64_t seed = rng.next_u64();
    EXPECT_GE(max_plus(fg, params(10, 10, Schedule::kSequentialRandom, seed)).exact_value,
              max_plus(fg, params(1, 10, Schedule::kSequentialRandom, seed)).exact_value);
  }
}

TEST(MaxPlus, MessagesStayFiniteWithHugePayoffs) {
  CGBG g = generate_random_cgbg({8, 2, 3, 2, 13});
  for (auto& c : g.components) {
    for (auto& u : c.payoffs) u *= 1e6;
  }
  const FactorGraph fg = build_factor_graph(g, FgVariant::kATI);
  double range = 0;
  for (const Factor& f : fg.factors()) {
    for (double x : f.table) range = std::max(range, std::abs(x));
  }
  MaxPlusState state(fg, Schedule::kParallel, 0.2, 5);
  for (int it = 0; it < 200; ++it) state.run_iteration();
  EXPECT_TRUE(state.messages_finite());
  // normalized messages span at most a table range per incoming factor
  std::size_t max_deg = 0;
  for (std::size_t v = 0; v < fg.num_variables(); ++v) max_deg = std::max(max_deg, fg.factors_of(v).size());
  EXPECT_LE(state.max_abs_message(), 2 * range * static_cast<double>(max_deg * max_deg));
}

TEST(MaxPlus, SolverValueIsExactForDecodedPolicy) {
  Rng rng(67);
  for (int trial = 0; trial < 20; ++trial) {
    const CGBG g = generate_random_cgbg({4, 2, 2, 2, rng.next_u64()});
    for (FgVariant v : {FgVariant::kAI, FgVariant::kTI, FgVariant::kATI}) {
      const SolveResult r = solve_max_plus(g, v, params(2, 10, Schedule::kSequentialRandom, rng.next_u64()));
      EXPECT_NEAR(r.value, testing::naive_value(g, r.policy), 1e-9);
      EXPECT_LE(r.value, testing::exhaustive_optimum(g) + 1e-9);
    }
  }
}

// The per-iteration cost of a degree-2 graph is dominated by factor-to-variable
// messages that scan m^2 cells, so it should grow close to quadratically in m.
TEST(MaxPlus, IterationCostQuadraticInDomainForPairwiseFactors) {
  std::vector<double> xs, ys;
  for (std::size_t m : {2u, 4u, 8u, 16u}) {
    const CGBG g = generate_random_cgbg({6, 2, m, 2, 3});
    const FactorGraph fg = build_factor_graph(g, FgVariant::kATI);
    MaxPlusState state(fg, Schedule::kSequentialFixed, 0.2, 1);
    xs.push_back(std::log(static_cast<double>(m)));
    ys.push_back(std::log(static_cast<double>(state.run_iteration().operations)));
  }
  const double mx = (xs[0] + xs[1] + xs[2] + xs[3]) / 4, my = (ys[0] + ys[1] + ys[2] + ys[3]) / 4;
  double sxy = 0, sxx = 0;
  for (int i = 0; i < 4; ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  const double slope = sxy / sxx;
  EXPECT_GE(slope, 1.5);
  EXPECT_LE(slope, 2.5);
}

TEST(MaxPlus, ParameterValidation) {
  const FactorGraph fg = build_factor_graph(build_two_agent_firefight(), FgVariant::kATI);
  MaxPlusParams p;
  p.damping = 1.0;
  EXPECT_THROW(max_plus(fg, p), InvalidArgument);
  p = {};
  p.restarts = 0;
  EXPECT_THROW(max_plus(fg, p), InvalidArgument);
  EXPECT_EQ(parse_schedule("parallel"), Schedule::kParallel);
  EXPECT_THROW(parse_schedule("random"), InvalidArgument);
}

}  // namespace
}  // namespace cgbg
