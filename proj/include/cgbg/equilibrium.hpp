#pragma once

#include <algorithm>
#include <cstddef>
#include <vector>

#include "cgbg/game.hpp"

namespace cgbg {

// q[t][a]: the part of the policy value that depends on agent i's choice for
// type t, if that choice were a. Other agents' policies are held fixed. The
// value is linear in these per-type choices, so V(policy with type t set to
// a) - V(policy) = q[t][a] - q[t][policy_i(t)].
inline std::vector<std::vector<double>> type_action_values(const CGBG& game,
                                                           const JointPolicy& policy,
                                                           std::size_t agent) {
  std::vector<std::vector<double>> q(game.type_counts[agent],
                                     std::vector<double>(game.action_counts[agent], 0.0));
  for (const Component& c : game.components) {
    auto pos_it = std::find(c.scope.begin(), c.scope.end(), agent);
    if (pos_it == c.scope.end()) continue;
    const std::size_t pos = static_cast<std::size_t>(pos_it - c.scope.begin());
    const auto strides = row_major_strides(game.scope_action_sizes(c));
    const std::size_t num_actions = game.num_local_actions(c);
    Odometer types(game.scope_type_sizes(c));
    std::size_t t = 0;
    do {
      const double p = c.type_probs[t];
      if (p != 0) {
        std::size_t base = 0;
        for (std::size_t j = 0; j < c.scope.size(); ++j) {
          if (j != pos) base += policy.assignments[c.scope[j]][types[j]] * strides[j];
        }
        auto& row = q[types[pos]];
        const double* u = &c.payoffs[t * num_actions + base];
        for (std::size_t a = 0; a < row.size(); ++a) row[a] += p * u[a * strides[pos]];
      }
      ++t;
    } while (types.next());
  }
  return q;
}

inline std::size_t argmax_lowest(const std::vector<double>& v) {
  std::size_t best = 0;
  for (std::size_t j = 1; j < v.size(); ++j) {
    if (v[j] > v[best]) best = j;
  }
  return best;
}

// True iff no agent can raise the value by more than `slack` by switching to
// any other individual policy. The best deviation of an agent is the sum of
// its per-type best gains.
inline bool is_nash_equilibrium(const CGBG& game, const JointPolicy& policy,
                                double slack = 1e-9) {
  check_policy_shape(game, policy);
  for (std::size_t i = 0; i < game.num_agents; ++i) {
    const auto q = type_action_values(game, policy, i);
    double gain = 0;
    for (std::size_t t = 0; t < q.size(); ++t) {
      const double current = q[t][policy.assignments[i][t]];
      gain += std::max(0.0, *std::max_element(q[t].begin(), q[t].end()) - current);
    }
    if (gain > slack) return false;
  }
  return true;
}

}  // namespace cgbg
