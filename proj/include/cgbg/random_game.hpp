#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "cgbg/errors.hpp"
#include "cgbg/game.hpp"
#include "cgbg/rng.hpp"

namespace cgbg {

struct RandomGameConfig {
  std::size_t num_agents = 2;
  std::size_t scope_size = 2;  // k
  std::size_t actions_per_agent = 2;
  std::size_t types_per_agent = 2;
  std::uint64_t seed = 0;

  void validate() const {
    if (num_agents == 0) throw ConfigError("random game: need at least one agent");
    if (scope_size == 0 || scope_size > num_agents) throw ConfigError("random game: scope size must lie in [1, agents]");
    if (actions_per_agent == 0 || types_per_agent == 0) throw ConfigError("random game: empty action or type set");
    if (scope_size == 1 && num_agents > 1) throw ConfigError("random game: single-agent scopes cannot connect several agents");
  }
};

// Union-find over agents; true iff the hyperedges join all n agents.
inline bool is_connected(const std::vector<std::vector<std::size_t>>& scopes, std::size_t n) {
  if (n <= 1) return true;
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  std::size_t groups = n;
  for (const auto& s : scopes) {
    for (std::size_t j = 1; j < s.size(); ++j) {
      const std::size_t a = find(s[0]), b = find(s[j]);
      if (a != b) {
        parent[a] = b;
        --groups;
      }
    }
  }
  return groups == 1;
}

namespace detail {

// k agents drawn from those in the fewest edges; when that set is smaller
// than k, it is taken whole and the rest is drawn from the next count level.
// With slack > 0 the draw is uniform over every agent whose edge count is at
// most slack above the k-th smallest count, which lets a repeated scope be
// escaped once the least-used agents have no new scope left among them.
inline std::vector<std::size_t> draw_scope(const std::vector<std::size_t>& edge_count, std::size_t k, Rng& rng,
                                           std::size_t slack = 0) {
  std::vector<std::size_t> chosen;
  if (slack > 0) {
    std::vector<std::size_t> sorted(edge_count);
    std::sort(sorted.begin(), sorted.end());
    const std::size_t limit = sorted[k - 1] + slack;
    std::vector<std::size_t> pool;
    for (std::size_t i = 0; i < edge_count.size(); ++i) {
      if (edge_count[i] <= limit) pool.push_back(i);
    }
    for (std::size_t j = 0; j < k; ++j) {
      const std::size_t pick = j + rng.below(pool.size() - j);
      std::swap(pool[j], pool[pick]);
      chosen.push_back(pool[j]);
    }
    std::sort(chosen.begin(), chosen.end());
    return chosen;
  }
  std::vector<std::size_t> levels(edge_count);
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
  for (std::size_t level : levels) {
    std::vector<std::size_t> group;
    for (std::size_t i = 0; i < edge_count.size(); ++i) {
      if (edge_count[i] == level) group.push_back(i);
    }
    const std::size_t need = k - chosen.size();
    if (group.size() <= need) {
      chosen.insert(chosen.end(), group.begin(), group.end());
    } else {
      for (std::size_t j = 0; j < need; ++j) {
        const std::size_t pick = j + rng.below(group.size() - j);
        std::swap(group[j], group[pick]);
        chosen.push_back(group[j]);
      }
    }
    if (chosen.size() == k) break;
  }
  std::sort(chosen.begin(), chosen.end());
  return chosen;
}

}  // namespace detail

// Adds k-agent components until the interaction hypergraph is connected
// (at least one component for a single agent). A scope that repeats an
// existing one is redrawn; every 100 failed redraws widen the candidate pool
// by one edge-count level. Tables are drawn afterwards, component by
// component: type probabilities uniform on [0, 1) then normalized, payoffs
// standard normal.
inline CGBG generate_random_cgbg(const RandomGameConfig& cfg) {
  cfg.validate();
  Rng rng(cfg.seed);
  const std::size_t n = cfg.num_agents;
  std::vector<std::vector<std::size_t>> scopes;
  std::set<std::vector<std::size_t>> seen;
  std::vector<std::size_t> edge_count(n, 0);
  constexpr std::size_t kMaxRedraws = 100000;
  while (scopes.empty() || !is_connected(scopes, n)) {
    std::vector<std::size_t> scope;
    std::size_t attempts = 0;
    do {
      if (++attempts > kMaxRedraws) throw ConfigError("random game: could not draw a new distinct scope");
      scope = detail::draw_scope(edge_count, cfg.scope_size, rng, (attempts - 1) / 100);
    } while (seen.count(scope));
    seen.insert(scope);
    for (std::size_t a : scope) ++edge_count[a];
    scopes.push_back(std::move(scope));
  }

  CGBG game;
  game.num_agents = n;
  game.action_counts.assign(n, cfg.actions_per_agent);
  game.type_counts.assign(n, cfg.types_per_agent);
  for (auto& scope : scopes) {
    Component c;
    c.scope = std::move(scope);
    const std::size_t nt = game.num_local_types(c);
    const std::size_t na = game.num_local_actions(c);
    c.type_probs.resize(nt);
    double total = 0;
    for (double& p : c.type_probs) {
      p = rng.uniform();
      total += p;
    }
    if (total <= 0) {
      std::fill(c.type_probs.begin(), c.type_probs.end(), 1.0);
      total = static_cast<double>(nt);
    }
    for (double& p : c.type_probs) p /= total;
    c.payoffs.resize(nt * na);
    for (double& u : c.payoffs) u = rng.normal();
    game.components.push_back(std::move(c));
  }
  game.validate();
  return game;
}

}  // namespace cgbg
