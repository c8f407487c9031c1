#pragma once

#include <algorithm>
#include <cstddef>
#include <string>

#include "cgbg/deadline.hpp"
#include "cgbg/game.hpp"
#include "cgbg/solve_result.hpp"

namespace cgbg {

inline constexpr std::size_t kDefaultEnumerationCap = 100'000'000;

struct BruteForceOptions {
  std::size_t enumeration_cap = kDefaultEnumerationCap;
  Deadline deadline;
};

// Exhaustive evaluation of every deterministic joint policy. Policies are
// visited in lexicographic order and a later policy replaces the incumbent
// only if strictly better, so the lexicographically smallest maximizer wins.
inline SolveResult solve_brute_force(const CGBG& game, const BruteForceOptions& opts = {}) {
  Stopwatch clock;
  const std::size_t count = game.num_joint_policies();
  if (count > opts.enumeration_cap) {
    throw ResourceLimitError("brute force: " + std::to_string(count) +
                             " joint policies exceed the enumeration cap of " +
                             std::to_string(opts.enumeration_cap));
  }

  // One odometer digit per (agent, type), agent-major.
  std::vector<std::size_t> digit_sizes;
  for (std::size_t i = 0; i < game.num_agents; ++i) {
    for (std::size_t t = 0; t < game.type_counts[i]; ++t) digit_sizes.push_back(game.action_counts[i]);
  }
  std::vector<std::pair<std::size_t, std::size_t>> digit_owner;
  for (std::size_t i = 0; i < game.num_agents; ++i) {
    for (std::size_t t = 0; t < game.type_counts[i]; ++t) digit_owner.emplace_back(i, t);
  }

  PolicyEvaluator eval(game);
  JointPolicy current = JointPolicy::constant(game);
  SolveResult best;
  best.policy = current;
  best.value = eval.value(current);
  best.evaluations = 1;

  Odometer odo(digit_sizes);
  while (odo.next()) {
    for (std::size_t d = 0; d < digit_sizes.size(); ++d) {
      current.assignments[digit_owner[d].first][digit_owner[d].second] = odo[d];
    }
    const double v = eval.value(current);
    ++best.evaluations;
    if (v > best.value + 1e-12 * std::max(1.0, std::abs(best.value))) {
      best.value = v;
      best.policy = current;
    }
    if ((best.evaluations & 0xFFFF) == 0) opts.deadline.check("brute force");
  }
  best.iterations = best.evaluations;
  best.runtime_ms = clock.elapsed_ms();
  return best;
}

}  // namespace cgbg
