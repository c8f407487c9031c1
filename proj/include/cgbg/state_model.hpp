#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "cgbg/errors.hpp"
#include "cgbg/game.hpp"

namespace cgbg {

// A Bayesian game given by a hidden state: a prior over states, the
// conditional distribution of joint types given each state, and state-
// dependent payoffs.
struct StateModel {
  std::size_t num_states = 0;
  std::vector<double> prior;             // Pr(s)
  std::vector<double> type_given_state;  // Pr(theta | s), index s * num_joint_types + theta
  std::vector<double> state_payoffs;     // u(s, a), index s * num_joint_actions + a
};

// Collapses the hidden state into a single-component game over all agents:
//   Pr(theta)    = sum_s Pr(theta | s) Pr(s)
//   u(theta, a)  = sum_s u(s, a) Pr(s | theta)
// Joint types of probability zero get payoff 0.
inline CGBG bg_from_state_model(const StateModel& model, std::vector<std::size_t> type_counts,
                                std::vector<std::size_t> action_counts) {
  if (type_counts.empty() || type_counts.size() != action_counts.size()) {
    throw InvalidArgument("state model: type/action count vectors must be nonempty and equal length");
  }
  const std::size_t n = type_counts.size();
  const std::size_t num_types = saturating_product(type_counts);
  const std::size_t num_actions = saturating_product(action_counts);
  const std::size_t S = model.num_states;
  if (S == 0 || model.prior.size() != S || model.type_given_state.size() != S * num_types ||
      model.state_payoffs.size() != S * num_actions) {
    throw InvalidArgument("state model: table dimensions do not match the requested game shape");
  }

  Component c;
  for (std::size_t i = 0; i < n; ++i) c.scope.push_back(i);
  c.type_probs.assign(num_types, 0.0);
  c.payoffs.assign(num_types * num_actions, 0.0);
  for (std::size_t t = 0; t < num_types; ++t) {
    double pt = 0;
    for (std::size_t s = 0; s < S; ++s) pt += model.type_given_state[s * num_types + t] * model.prior[s];
    c.type_probs[t] = pt;
    if (pt <= 0) continue;
    for (std::size_t a = 0; a < num_actions; ++a) {
      double u = 0;
      for (std::size_t s = 0; s < S; ++s) {
        const double posterior = model.type_given_state[s * num_types + t] * model.prior[s] / pt;
        u += model.state_payoffs[s * num_actions + a] * posterior;
      }
      c.payoffs[t * num_actions + a] = u;
    }
  }

  CGBG game;
  game.num_agents = n;
  game.type_counts = std::move(type_counts);
  game.action_counts = std::move(action_counts);
  game.components.push_back(std::move(c));
  game.validate();
  return game;
}

// Two agents, two houses each (agent 0: H1, H2; agent 1: H2, H3). Types are
// flames (0) / no flames (1) observed at H1 resp. H3; actions are indexed in
// the order listed. States: no neighbor on fire, H1 on fire, H3 on fire,
// both on fire.
inline StateModel two_agent_firefight_model() {
  StateModel m;
  m.num_states = 4;
  m.prior = {0.7, 0.10, 0.15, 0.05};
  // joint types ordered <F,F>, <F,N>, <N,F>, <N,N>
  m.type_given_state = {
      0.01, 0.09, 0.09, 0.81,  //
      0.09, 0.81, 0.01, 0.09,  //
      0.09, 0.01, 0.81, 0.09,  //
      0.81, 0.09, 0.09, 0.01,
  };
  // joint actions ordered <H1,H2>, <H1,H3>, <H2,H2>, <H2,H3>
  m.state_payoffs = {
      2, 0, 3, 2,  //
      4, 2, 3, 2,  //
      2, 2, 3, 4,  //
      4, 4, 3, 4,
  };
  return m;
}

inline CGBG build_two_agent_firefight() {
  return bg_from_state_model(two_agent_firefight_model(), {2, 2}, {2, 2});
}

}  // namespace cgbg
