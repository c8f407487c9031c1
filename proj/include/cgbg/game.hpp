#pragma once

// Collaborative graphical Bayesian games: the data model and exact policy
// evaluation.
//
// A game has n agents, each with a finite action set and a finite type set.
// The team payoff is a sum of components; component e covers an ascending
// scope of agents and carries a distribution over its local joint types and a
// payoff table over (local joint type, local joint action). All tables are
// flattened row-major over the scope order (see local_index).

#include <cmath>
#include <compare>
#include <cstddef>
#include <string>
#include <vector>

#include "cgbg/errors.hpp"
#include "cgbg/indexing.hpp"

namespace cgbg {

inline constexpr double kProbabilityTolerance = 1e-9;

struct Component {
  std::vector<std::size_t> scope;
  std::vector<double> type_probs;
  // index = local_joint_type_index * num_local_joint_actions + local_joint_action_index
  std::vector<double> payoffs;
};

struct CGBG {
  std::size_t num_agents = 0;
  std::vector<std::size_t> action_counts;
  std::vector<std::size_t> type_counts;
  std::vector<Component> components;

  std::size_t num_local_types(const Component& c) const {
    std::size_t p = 1;
    for (std::size_t a : c.scope) p *= type_counts[a];
    return p;
  }
  std::size_t num_local_actions(const Component& c) const {
    std::size_t p = 1;
    for (std::size_t a : c.scope) p *= action_counts[a];
    return p;
  }
  std::vector<std::size_t> scope_type_sizes(const Component& c) const {
    std::vector<std::size_t> out;
    out.reserve(c.scope.size());
    for (std::size_t a : c.scope) out.push_back(type_counts[a]);
    return out;
  }
  std::vector<std::size_t> scope_action_sizes(const Component& c) const {
    std::vector<std::size_t> out;
    out.reserve(c.scope.size());
    for (std::size_t a : c.scope) out.push_back(action_counts[a]);
    return out;
  }

  // Number of deterministic joint policies, saturating.
  std::size_t num_joint_policies() const {
    std::vector<std::size_t> factors;
    for (std::size_t i = 0; i < num_agents; ++i) {
      factors.push_back(saturating_pow(action_counts[i], type_counts[i]));
    }
    return saturating_product(factors);
  }

  // Components that include agent i.
  std::vector<std::size_t> components_of(std::size_t agent) const {
    std::vector<std::size_t> out;
    for (std::size_t e = 0; e < components.size(); ++e) {
      for (std::size_t a : components[e].scope) {
        if (a == agent) {
          out.push_back(e);
          break;
        }
      }
    }
    return out;
  }

  // Throws InvalidArgument describing the first violated invariant.
  void validate() const {
    if (num_agents == 0) throw InvalidArgument("game has no agents");
    if (action_counts.size() != num_agents || type_counts.size() != num_agents) {
      throw InvalidArgument("action_counts/type_counts length differs from num_agents");
    }
    for (std::size_t i = 0; i < num_agents; ++i) {
      if (action_counts[i] == 0 || type_counts[i] == 0) {
        throw InvalidArgument("agent " + std::to_string(i) + " has an empty action or type set");
      }
    }
    std::vector<bool> covered(num_agents, false);
    for (std::size_t e = 0; e < components.size(); ++e) {
      const Component& c = components[e];
      const std::string where = "component " + std::to_string(e);
      if (c.scope.empty()) throw InvalidArgument(where + ": empty scope");
      for (std::size_t j = 0; j < c.scope.size(); ++j) {
        if (c.scope[j] >= num_agents) throw InvalidArgument(where + ": agent index out of range");
        if (j > 0 && c.scope[j] <= c.scope[j - 1]) {
          throw InvalidArgument(where + ": scope must be strictly ascending");
        }
        covered[c.scope[j]] = true;
      }
      const std::size_t nt = num_local_types(c);
      const std::size_t na = num_local_actions(c);
      if (c.type_probs.size() != nt) {
        throw InvalidArgument(where + ": type_probs has " + std::to_string(c.type_probs.size()) +
                              " entries, expected " + std::to_string(nt));
      }
      if (c.payoffs.size() != nt * na) {
        throw InvalidArgument(where + ": payoffs has " + std::to_string(c.payoffs.size()) +
                              " entries, expected " + std::to_string(nt * na));
      }
      double total = 0;
      for (double p : c.type_probs) {
        if (!(p >= 0) || !std::isfinite(p)) throw InvalidArgument(where + ": negative probability");
        total += p;
      }
      if (std::abs(total - 1.0) > kProbabilityTolerance) {
        throw InvalidArgument(where + ": type_probs sum to " + std::to_string(total));
      }
      for (double u : c.payoffs) {
        if (!std::isfinite(u)) throw InvalidArgument(where + ": non-finite payoff");
      }
    }
    for (std::size_t i = 0; i < num_agents; ++i) {
      if (!covered[i]) throw InvalidArgument("agent " + std::to_string(i) + " is in no scope");
    }
  }
};

// assignments[i][t] is the action agent i takes when it has type t.
struct JointPolicy {
  std::vector<std::vector<std::size_t>> assignments;

  std::size_t action(std::size_t agent, std::size_t type) const {
    return assignments[agent][type];
  }

  // Agents in index order, then types in index order.
  auto operator<=>(const JointPolicy&) const = default;
  bool operator==(const JointPolicy&) const = default;

  static JointPolicy constant(const CGBG& game, std::size_t action = 0) {
    JointPolicy p;
    for (std::size_t i = 0; i < game.num_agents; ++i) {
      p.assignments.emplace_back(game.type_counts[i], action);
    }
    return p;
  }
};

inline void check_policy_shape(const CGBG& game, const JointPolicy& policy) {
  if (policy.assignments.size() != game.num_agents) {
    throw InvalidArgument("policy covers " + std::to_string(policy.assignments.size()) +
                          " agents, game has " + std::to_string(game.num_agents));
  }
  for (std::size_t i = 0; i < game.num_agents; ++i) {
    if (policy.assignments[i].size() != game.type_counts[i]) {
      throw InvalidArgument("policy for agent " + std::to_string(i) + " has wrong type count");
    }
    for (std::size_t a : policy.assignments[i]) {
      if (a >= game.action_counts[i]) {
        throw InvalidArgument("policy for agent " + std::to_string(i) + " uses invalid action");
      }
    }
  }
}

// Evaluates many policies on one game. Caches per-component shapes; the
// summation order is fixed (components, then local joint types in row-major
// order) so equal policies always produce bit-identical values.
class PolicyEvaluator {
 public:
  explicit PolicyEvaluator(const CGBG& game) : game_(&game) {
    for (const Component& c : game.components) {
      Shape s;
      s.type_sizes = game.scope_type_sizes(c);
      s.action_strides = row_major_strides(game.scope_action_sizes(c));
      s.num_actions = game.num_local_actions(c);
      shapes_.push_back(std::move(s));
    }
  }

  const CGBG& game() const { return *game_; }

  // Local joint action index induced by the policy at local joint type digits.
  std::size_t local_action(std::size_t e, std::span<const std::size_t> type_digits,
                           const JointPolicy& policy) const {
    const Component& c = game_->components[e];
    const Shape& s = shapes_[e];
    std::size_t a = 0;
    for (std::size_t j = 0; j < c.scope.size(); ++j) {
      a += policy.assignments[c.scope[j]][type_digits[j]] * s.action_strides[j];
    }
    return a;
  }

  double component_value(std::size_t e, const JointPolicy& policy) const {
    const Component& c = game_->components[e];
    const Shape& s = shapes_[e];
    Odometer types(s.type_sizes);
    double v = 0;
    std::size_t t = 0;
    do {
      const double p = c.type_probs[t];
      if (p != 0) v += p * c.payoffs[t * s.num_actions + local_action(e, types.digits(), policy)];
      ++t;
    } while (types.next());
    return v;
  }

  // Unchecked: the caller guarantees the policy shape.
  double value(const JointPolicy& policy) const {
    double v = 0;
    for (std::size_t e = 0; e < shapes_.size(); ++e) v += component_value(e, policy);
    return v;
  }

 private:
  struct Shape {
    std::vector<std::size_t> type_sizes;
    std::vector<std::size_t> action_strides;
    std::size_t num_actions = 0;
  };
  const CGBG* game_;
  std::vector<Shape> shapes_;
};

// Expected team payoff: sum over components and local joint types of
// Pr(local type) * payoff(local type, induced local action).
inline double evaluate_policy(const CGBG& game, const JointPolicy& policy) {
  check_policy_shape(game, policy);
  return PolicyEvaluator(game).value(policy);
}

}  // namespace cgbg
