#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <vector>

#include "cgbg/deadline.hpp"
#include "cgbg/errors.hpp"
#include "cgbg/game.hpp"
#include "cgbg/rng.hpp"
#include "cgbg/solve_result.hpp"

namespace cgbg {

struct CeParams {
  std::size_t restarts = 10;
  std::size_t iterations = 50;
  std::size_t samples_per_iteration = 100;
  std::size_t elite_count = 5;
  double learning_rate = 0.2;
  // 0 evaluates every sampled policy exactly; S > 0 estimates each value from
  // S sampled local joint types per component.
  std::size_t evaluations_per_policy = 0;
  std::uint64_t seed = 0;
  Deadline deadline;

  static CeParams normal() { return {}; }
  static CeParams fast() {
    CeParams p;
    p.iterations = 15;
    p.samples_per_iteration = 40;
    p.elite_count = 2;
    return p;
  }

  void validate() const {
    if (restarts == 0 || iterations == 0 || samples_per_iteration == 0 || elite_count == 0) {
      throw InvalidArgument("cross-entropy: counts must be positive");
    }
    if (elite_count > samples_per_iteration) throw InvalidArgument("cross-entropy: more elites than samples");
    if (!(learning_rate > 0 && learning_rate <= 1)) throw InvalidArgument("cross-entropy: learning rate outside (0, 1]");
  }
};

// probs[i][t][a]: probability that agent i plays a when it has type t.
struct PolicyDistribution {
  std::vector<std::vector<std::vector<double>>> probs;

  static PolicyDistribution uniform(const CGBG& game) {
    PolicyDistribution d;
    for (std::size_t i = 0; i < game.num_agents; ++i) {
      const double p = 1.0 / static_cast<double>(game.action_counts[i]);
      d.probs.emplace_back(game.type_counts[i], std::vector<double>(game.action_counts[i], p));
    }
    return d;
  }

  JointPolicy sample(Rng& rng) const {
    JointPolicy policy;
    for (const auto& agent : probs) {
      std::vector<std::size_t> row;
      row.reserve(agent.size());
      for (const auto& cat : agent) row.push_back(rng.categorical(cat));
      policy.assignments.push_back(std::move(row));
    }
    return policy;
  }

  // p <- (1 - rate) p + rate * (empirical frequency in elites)
  void update(const std::vector<const JointPolicy*>& elites, double rate) {
    const double w = 1.0 / static_cast<double>(elites.size());
    for (std::size_t i = 0; i < probs.size(); ++i) {
      for (std::size_t t = 0; t < probs[i].size(); ++t) {
        auto& cat = probs[i][t];
        std::vector<double> freq(cat.size(), 0.0);
        for (const JointPolicy* e : elites) freq[e->assignments[i][t]] += w;
        for (std::size_t a = 0; a < cat.size(); ++a) cat[a] = (1.0 - rate) * cat[a] + rate * freq[a];
      }
    }
  }
};

namespace detail {

// Monte Carlo estimate: for each component, average the payoff over
// `draws` local joint types sampled from its distribution.
inline double sampled_value(const CGBG& game, const PolicyEvaluator& eval, const JointPolicy& policy,
                            std::size_t draws, Rng& rng) {
  double total = 0;
  for (std::size_t e = 0; e < game.components.size(); ++e) {
    const Component& c = game.components[e];
    const auto sizes = game.scope_type_sizes(c);
    const std::size_t na = game.num_local_actions(c);
    double acc = 0;
    for (std::size_t s = 0; s < draws; ++s) {
      const std::size_t t = rng.categorical(c.type_probs);
      const auto digits = local_unindex(sizes, t);
      acc += c.payoffs[t * na + eval.local_action(e, digits, policy)];
    }
    total += acc / static_cast<double>(draws);
  }
  return total;
}

}  // namespace detail

// Cross-entropy search over deterministic joint policies. Elites are the
// highest-scoring samples, ties broken toward the lexicographically smaller
// policy. The returned policy is the best sample seen in any restart and its
// value is exact.
inline SolveResult cross_entropy(const CGBG& game, const CeParams& params,
                                 PolicyDistribution* final_distribution = nullptr) {
  game.validate();
  params.validate();
  Stopwatch clock;
  Rng rng(params.seed);
  PolicyEvaluator eval(game);
  SolveResult best;
  double best_score = 0;
  bool have_best = false;

  struct Sample {
    double score;
    JointPolicy policy;
  };
  std::vector<Sample> batch(params.samples_per_iteration);
  std::vector<std::size_t> rank(params.samples_per_iteration);

  for (std::size_t r = 0; r < params.restarts; ++r) {
    PolicyDistribution dist = PolicyDistribution::uniform(game);
    for (std::size_t it = 0; it < params.iterations; ++it) {
      params.deadline.check("cross-entropy");
      for (Sample& s : batch) {
        s.policy = dist.sample(rng);
        s.score = params.evaluations_per_policy == 0
                      ? eval.value(s.policy)
                      : detail::sampled_value(game, eval, s.policy, params.evaluations_per_policy, rng);
        ++best.evaluations;
      }
      std::iota(rank.begin(), rank.end(), 0);
      std::partial_sort(rank.begin(), rank.begin() + static_cast<std::ptrdiff_t>(params.elite_count), rank.end(),
                        [&](std::size_t a, std::size_t b) {
                          if (batch[a].score != batch[b].score) return batch[a].score > batch[b].score;
                          return batch[a].policy < batch[b].policy;
                        });
      const Sample& top = batch[rank[0]];
      if (!have_best || top.score > best_score || (top.score == best_score && top.policy < best.policy)) {
        best_score = top.score;
        best.policy = top.policy;
        have_best = true;
      }
      std::vector<const JointPolicy*> elites;
      for (std::size_t k = 0; k < params.elite_count; ++k) elites.push_back(&batch[rank[k]].policy);
      dist.update(elites, params.learning_rate);
      ++best.iterations;
    }
    if (final_distribution && r + 1 == params.restarts) *final_distribution = dist;
  }
  best.value = eval.value(best.policy);
  best.restarts = params.restarts;
  best.converged = true;
  best.runtime_ms = clock.elapsed_ms();
  return best;
}

}  // namespace cgbg
