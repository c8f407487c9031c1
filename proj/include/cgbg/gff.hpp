#pragma once

// Generalized Fire Fighting on the unit square.
//
// Houses and agents get uniform random positions. Agents, in index order,
// claim their N_A nearest houses that fewer than k agents hold so far; the
// N_O nearest of those are the houses they observe. An agent's type is its
// vector of flames / no-flames observations (flames = bit 0, row-major over
// the observed houses, nearest first). Fire levels are independent and
// uniform over {0, ..., N_f - 1}; a house at level x shows flames with
// probability 0.2, 0.5 or 0.8 for x = 0, 1, >1, independently per observer.
// A house with n agents fighting at it yields -x * 0.7^n.
//
// Each house with holders induces a local payoff over its holders. Houses
// whose holder set is contained in another house's holder set share that
// component, and all type and payoff tables are exact posteriors computed by
// enumerating the fire levels of the houses the component depends on.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "cgbg/errors.hpp"
#include "cgbg/game.hpp"
#include "cgbg/indexing.hpp"
#include "cgbg/rng.hpp"
#include "json.hpp"

namespace cgbg {

struct GffConfig {
  std::size_t num_agents = 3;
  std::size_t actions_per_agent = 2;  // N_A
  std::size_t observed_houses = 1;    // N_O
  std::size_t max_agents_per_house = 2;
  double house_density = 1.2;
  std::size_t fire_levels = 3;  // N_f
  std::uint64_t seed = 0;

  void validate() const {
    if (num_agents == 0) throw ConfigError("gff: need at least one agent");
    if (actions_per_agent == 0) throw ConfigError("gff: agents need at least one house to fight at");
    if (observed_houses > actions_per_agent) throw ConfigError("gff: observed houses must not exceed action houses");
    if (max_agents_per_house == 0) throw ConfigError("gff: house capacity must be positive");
    if (fire_levels < 2) throw ConfigError("gff: need at least two fire levels");
    if (!(house_density > 0)) throw ConfigError("gff: house density must be positive");
  }

  std::size_t num_houses() const {
    return static_cast<std::size_t>(
        std::ceil(house_density * static_cast<double>(actions_per_agent) * static_cast<double>(num_agents) - 1e-9));
  }
};

inline double gff_flame_probability(std::size_t fire_level) {
  if (fire_level == 0) return 0.2;
  if (fire_level == 1) return 0.5;
  return 0.8;
}

inline double gff_reward(double fire_level, std::size_t agents_present) {
  return -fire_level * std::pow(0.7, static_cast<double>(agents_present));
}

struct GffLayout {
  struct Point {
    double x, y;
  };
  std::vector<Point> houses;
  std::vector<Point> agents;
  std::vector<std::vector<std::size_t>> action_houses;    // per agent, action index -> house
  std::vector<std::vector<std::size_t>> observed_houses;  // per agent, nearest first
  std::vector<std::vector<std::size_t>> component_houses; // houses folded into each component
};

struct GffInstance {
  CGBG game;
  GffLayout layout;
};

inline nlohmann::json layout_to_json(const GffLayout& layout) {
  nlohmann::json j;
  auto points = [](const std::vector<GffLayout::Point>& pts) {
    nlohmann::json a = nlohmann::json::array();
    for (const auto& p : pts) a.push_back({p.x, p.y});
    return a;
  };
  j["houses"] = points(layout.houses);
  j["agents"] = points(layout.agents);
  j["action_houses"] = layout.action_houses;
  j["observed_houses"] = layout.observed_houses;
  j["component_houses"] = layout.component_houses;
  return j;
}

namespace detail {

inline double squared_distance(const GffLayout::Point& a, const GffLayout::Point& b) {
  const double dx = a.x - b.x, dy = a.y - b.y;
  return dx * dx + dy * dy;
}

inline bool is_subset(const std::vector<std::size_t>& small, const std::vector<std::size_t>& big) {
  return std::includes(big.begin(), big.end(), small.begin(), small.end());
}

// Type and payoff tables for one component by enumerating fire levels of
// every house that the scoped agents observe or that the component pays for.
inline Component gff_component(const GffConfig& cfg, const GffLayout& layout, const std::vector<std::size_t>& scope,
                               const std::vector<std::size_t>& paid_houses) {
  std::vector<std::size_t> relevant = paid_houses;
  for (std::size_t i : scope) {
    relevant.insert(relevant.end(), layout.observed_houses[i].begin(), layout.observed_houses[i].end());
  }
  std::sort(relevant.begin(), relevant.end());
  relevant.erase(std::unique(relevant.begin(), relevant.end()), relevant.end());
  auto slot_of = [&](std::size_t house) {
    return static_cast<std::size_t>(std::lower_bound(relevant.begin(), relevant.end(), house) - relevant.begin());
  };

  const std::size_t num_obs = cfg.observed_houses;
  const std::size_t types_per_agent = std::size_t{1} << num_obs;
  const std::size_t k = scope.size();
  std::vector<std::size_t> type_sizes(k, types_per_agent);
  const std::size_t num_types = saturating_product(type_sizes);
  const std::size_t levels = cfg.fire_levels;
  const std::size_t P = paid_houses.size();

  std::vector<double> joint(num_types, 0.0);
  // level_mass[t][h][x] = Pr(theta = t, x_h = x)
  std::vector<double> level_mass(num_types * P * levels, 0.0);

  const double prior = std::pow(1.0 / static_cast<double>(levels), static_cast<double>(relevant.size()));
  std::vector<std::size_t> level_sizes(relevant.size(), levels);
  Odometer fire(level_sizes);
  std::vector<std::vector<double>> agent_lik(k, std::vector<double>(types_per_agent));
  do {
    for (std::size_t j = 0; j < k; ++j) {
      const auto& obs = layout.observed_houses[scope[j]];
      for (std::size_t t = 0; t < types_per_agent; ++t) {
        double lik = 1;
        for (std::size_t o = 0; o < num_obs; ++o) {
          const bool flames = ((t >> (num_obs - 1 - o)) & 1U) == 0;
          const double pf = gff_flame_probability(fire[slot_of(obs[o])]);
          lik *= flames ? pf : 1.0 - pf;
        }
        agent_lik[j][t] = lik;
      }
    }
    Odometer theta(type_sizes);
    std::size_t t = 0;
    do {
      double w = prior;
      for (std::size_t j = 0; j < k; ++j) w *= agent_lik[j][theta[j]];
      joint[t] += w;
      for (std::size_t h = 0; h < P; ++h) level_mass[(t * P + h) * levels + fire[slot_of(paid_houses[h])]] += w;
      ++t;
    } while (theta.next());
  } while (fire.next());

  Component c;
  c.scope = scope;
  c.type_probs = joint;

  std::vector<std::size_t> action_sizes;
  for (std::size_t i : scope) action_sizes.push_back(layout.action_houses[i].size());
  const std::size_t num_actions = saturating_product(action_sizes);
  c.payoffs.assign(num_types * num_actions, 0.0);
  std::vector<std::size_t> present(P);
  Odometer acts(action_sizes);
  std::size_t a = 0;
  do {
    for (std::size_t h = 0; h < P; ++h) {
      present[h] = 0;
      for (std::size_t j = 0; j < k; ++j) {
        if (layout.action_houses[scope[j]][acts[j]] == paid_houses[h]) ++present[h];
      }
    }
    for (std::size_t t = 0; t < num_types; ++t) {
      if (joint[t] <= 0) continue;
      double u = 0;
      for (std::size_t h = 0; h < P; ++h) {
        for (std::size_t x = 1; x < levels; ++x) {
          u += level_mass[(t * P + h) * levels + x] / joint[t] * gff_reward(static_cast<double>(x), present[h]);
        }
      }
      c.payoffs[t * num_actions + a] = u;
    }
    ++a;
  } while (acts.next());
  return c;
}

}  // namespace detail

inline GffInstance generate_gff(const GffConfig& cfg) {
  cfg.validate();
  Rng rng(cfg.seed);
  const std::size_t n = cfg.num_agents;
  const std::size_t H = cfg.num_houses();
  GffInstance out;
  GffLayout& layout = out.layout;
  for (std::size_t h = 0; h < H; ++h) {
    const double x = rng.uniform();
    layout.houses.push_back({x, rng.uniform()});
  }
  for (std::size_t i = 0; i < n; ++i) {
    const double x = rng.uniform();
    layout.agents.push_back({x, rng.uniform()});
  }

  std::vector<std::size_t> holders(H, 0);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::size_t> available;
    for (std::size_t h = 0; h < H; ++h) {
      if (holders[h] < cfg.max_agents_per_house) available.push_back(h);
    }
    if (available.size() < cfg.actions_per_agent) {
      throw ConfigError("gff: agent " + std::to_string(i) + " finds only " + std::to_string(available.size()) +
                        " available houses but needs " + std::to_string(cfg.actions_per_agent) + " (shortfall " +
                        std::to_string(cfg.actions_per_agent - available.size()) + ")");
    }
    const auto& me = layout.agents[i];
    std::stable_sort(available.begin(), available.end(), [&](std::size_t a, std::size_t b) {
      return detail::squared_distance(me, layout.houses[a]) < detail::squared_distance(me, layout.houses[b]);
    });
    available.resize(cfg.actions_per_agent);
    for (std::size_t h : available) ++holders[h];
    layout.observed_houses.emplace_back(available.begin(), available.begin() + static_cast<std::ptrdiff_t>(cfg.observed_houses));
    layout.action_houses.push_back(std::move(available));
  }

  // holder set of each house that anyone can fight at
  std::vector<std::size_t> used_houses;
  std::vector<std::vector<std::size_t>> house_scope;
  for (std::size_t h = 0; h < H; ++h) {
    std::vector<std::size_t> scope;
    for (std::size_t i = 0; i < n; ++i) {
      if (std::find(layout.action_houses[i].begin(), layout.action_houses[i].end(), h) != layout.action_houses[i].end()) {
        scope.push_back(i);
      }
    }
    if (!scope.empty()) {
      used_houses.push_back(h);
      house_scope.push_back(std::move(scope));
    }
  }
  // Maximal scopes in order of first appearance; each house joins the first
  // maximal scope containing its holders.
  std::vector<std::vector<std::size_t>> maximal;
  for (std::size_t a = 0; a < house_scope.size(); ++a) {
    bool dominated = false;
    for (std::size_t b = 0; b < house_scope.size() && !dominated; ++b) {
      if (a != b && house_scope[a] != house_scope[b] && detail::is_subset(house_scope[a], house_scope[b])) dominated = true;
    }
    if (!dominated && std::find(maximal.begin(), maximal.end(), house_scope[a]) == maximal.end()) {
      maximal.push_back(house_scope[a]);
    }
  }
  layout.component_houses.assign(maximal.size(), {});
  for (std::size_t a = 0; a < house_scope.size(); ++a) {
    for (std::size_t m = 0; m < maximal.size(); ++m) {
      if (detail::is_subset(house_scope[a], maximal[m])) {
        layout.component_houses[m].push_back(used_houses[a]);
        break;
      }
    }
  }

  CGBG& game = out.game;
  game.num_agents = n;
  game.action_counts.assign(n, cfg.actions_per_agent);
  game.type_counts.assign(n, std::size_t{1} << cfg.observed_houses);
  for (std::size_t m = 0; m < maximal.size(); ++m) {
    game.components.push_back(detail::gff_component(cfg, layout, maximal[m], layout.component_houses[m]));
  }
  game.validate();
  return out;
}

}  // namespace cgbg
