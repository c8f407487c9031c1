#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "cgbg/deadline.hpp"
#include "cgbg/equilibrium.hpp"
#include "cgbg/game.hpp"
#include "cgbg/rng.hpp"
#include "cgbg/solve_result.hpp"

namespace cgbg {

struct AmParams {
  std::size_t restarts = 10;
  std::uint64_t seed = 0;
  Deadline deadline;
};

struct AmTrace {
  // value after each sweep, one vector per restart
  std::vector<std::vector<double>> sweep_values;
};

// Alternating maximization: from a uniformly random joint policy, sweep the
// agents in index order, setting every type of the current agent to its
// exact best response against the others. An action is replaced only by a
// strictly better one (margin 1e-12), so the sweeps climb monotonically and
// stop at the first sweep that changes nothing, which is a Bayesian Nash
// equilibrium. The best restart wins; equal values go to the
// lexicographically smaller policy.
inline SolveResult alternating_maximization(const CGBG& game, const AmParams& params = {},
                                            AmTrace* trace = nullptr) {
  game.validate();
  Stopwatch clock;
  Rng rng(params.seed);
  PolicyEvaluator eval(game);
  SolveResult best;
  bool have_best = false;
  if (trace) trace->sweep_values.clear();

  for (std::size_t r = 0; r < params.restarts; ++r) {
    JointPolicy policy;
    for (std::size_t i = 0; i < game.num_agents; ++i) {
      std::vector<std::size_t> row(game.type_counts[i]);
      for (auto& a : row) a = rng.below(game.action_counts[i]);
      policy.assignments.push_back(std::move(row));
    }
    std::vector<double> sweeps;
    bool changed = true;
    while (changed) {
      params.deadline.check("alternating maximization");
      changed = false;
      for (std::size_t i = 0; i < game.num_agents; ++i) {
        const auto q = type_action_values(game, policy, i);
        for (std::size_t t = 0; t < q.size(); ++t) {
          const std::size_t target = argmax_lowest(q[t]);
          std::size_t& current = policy.assignments[i][t];
          if (q[t][target] > q[t][current] + 1e-12) {
            current = target;
            changed = true;
          }
        }
      }
      sweeps.push_back(eval.value(policy));
      ++best.evaluations;
      ++best.iterations;
    }
    const double value = sweeps.back();
    if (!have_best || value > best.value || (value == best.value && policy < best.policy)) {
      best.value = value;
      best.policy = policy;
      have_best = true;
    }
    if (trace) trace->sweep_values.push_back(std::move(sweeps));
  }
  best.restarts = params.restarts;
  best.converged = true;
  best.runtime_ms = clock.elapsed_ms();
  return best;
}

}  // namespace cgbg
