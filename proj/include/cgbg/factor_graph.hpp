#pragma once

// Factor-graph formulations of a CGBG.
//
//   AI   one variable per agent whose values index that agent's individual
//        policies; one factor per component, entry = the component's expected
//        payoff under the chosen individual policies.
//   TI   one variable per (agent, type) with the agent's actions as domain; one
//        factor per full joint type over all agents.
//   ATI  one variable per (agent, type); one factor per (component, local
//        joint type) holding Pr(local type) * payoff(local type, .), connected
//        to the (agent, type) variables the local joint type selects.
//
// In all three the maximum-sum assignment is an optimal joint policy, and the
// sum of factor entries at any assignment equals the value of the decoded
// policy.

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <limits>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "cgbg/errors.hpp"
#include "cgbg/game.hpp"
#include "cgbg/indexing.hpp"

namespace cgbg {

enum class FgVariant { kAI, kTI, kATI, kGeneric };

inline std::string_view to_string(FgVariant v) {
  switch (v) {
    case FgVariant::kAI: return "ai";
    case FgVariant::kTI: return "ti";
    case FgVariant::kATI: return "ati";
    case FgVariant::kGeneric: return "generic";
  }
  return "?";
}

inline FgVariant parse_fg_variant(std::string_view s) {
  std::string lower(s);
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
  if (lower == "ai") return FgVariant::kAI;
  if (lower == "ti") return FgVariant::kTI;
  if (lower == "ati") return FgVariant::kATI;
  throw InvalidArgument("unknown factor graph variant '" + std::string(s) + "'");
}

inline constexpr std::size_t kNoTag = std::numeric_limits<std::size_t>::max();

struct Variable {
  std::size_t domain = 0;
  std::size_t agent = kNoTag;
  std::size_t type = kNoTag;  // unset for AI variables
};

struct Factor {
  std::vector<std::size_t> vars;  // incident variables; table is row-major in this order
  std::vector<double> table;
  std::size_t component = kNoTag;   // AI, ATI
  std::size_t joint_type = kNoTag;  // TI: joint type index; ATI: local joint type index
};

struct FgStats {
  std::size_t num_factors = 0;
  std::size_t num_variables = 0;
  std::size_t max_factor_degree = 0;
  std::size_t max_variable_degree = 0;
  std::size_t max_variable_domain = 0;
  std::size_t total_edges = 0;

  bool operator==(const FgStats&) const = default;
};

class FactorGraph {
 public:
  FactorGraph() = default;
  explicit FactorGraph(FgVariant variant) : variant_(variant) {}

  FgVariant variant() const { return variant_; }
  const std::vector<Variable>& variables() const { return variables_; }
  const std::vector<Factor>& factors() const { return factors_; }
  std::size_t num_variables() const { return variables_.size(); }
  std::size_t num_factors() const { return factors_.size(); }

  // Per agent action and type counts of the source game (empty for generic graphs).
  const std::vector<std::size_t>& agent_actions() const { return agent_actions_; }
  const std::vector<std::size_t>& agent_types() const { return agent_types_; }

  std::size_t add_variable(Variable v) {
    if (v.domain == 0) throw InvalidArgument("variable with empty domain");
    variables_.push_back(v);
    var_factors_.emplace_back();
    return variables_.size() - 1;
  }

  std::size_t add_factor(Factor f) {
    std::size_t cells = 1;
    for (std::size_t j = 0; j < f.vars.size(); ++j) {
      if (f.vars[j] >= variables_.size()) throw InvalidArgument("factor references unknown variable");
      for (std::size_t j2 = 0; j2 < j; ++j2) {
        if (f.vars[j2] == f.vars[j]) throw InvalidArgument("factor lists a variable twice");
      }
      cells *= variables_[f.vars[j]].domain;
    }
    if (f.table.size() != cells) {
      throw InvalidArgument("factor table has " + std::to_string(f.table.size()) + " cells, expected " +
                            std::to_string(cells));
    }
    const std::size_t id = factors_.size();
    for (std::size_t v : f.vars) var_factors_[v].push_back(id);
    factors_.push_back(std::move(f));
    return id;
  }

  // Factors incident to variable v, ascending.
  const std::vector<std::size_t>& factors_of(std::size_t v) const { return var_factors_[v]; }

  std::vector<std::size_t> domains_of(const Factor& f) const {
    std::vector<std::size_t> d;
    d.reserve(f.vars.size());
    for (std::size_t v : f.vars) d.push_back(variables_[v].domain);
    return d;
  }

  std::size_t entry_index(const Factor& f, std::span<const std::size_t> assignment) const {
    std::size_t idx = 0;
    for (std::size_t v : f.vars) idx = idx * variables_[v].domain + assignment[v];
    return idx;
  }

  void check_assignment(std::span<const std::size_t> assignment) const {
    if (assignment.size() != variables_.size()) {
      throw InvalidArgument("assignment has " + std::to_string(assignment.size()) +
                            " values for " + std::to_string(variables_.size()) + " variables");
    }
    for (std::size_t v = 0; v < assignment.size(); ++v) {
      if (assignment[v] >= variables_[v].domain) {
        throw InvalidArgument("assignment value " + std::to_string(assignment[v]) +
                              " out of range for variable " + std::to_string(v));
      }
    }
  }

  // Sum of factor entries selected by a complete assignment.
  double value(std::span<const std::size_t> assignment) const {
    check_assignment(assignment);
    double total = 0;
    for (const Factor& f : factors_) total += f.table[entry_index(f, assignment)];
    return total;
  }

  // Every variable is in some factor.
  void validate() const {
    for (std::size_t v = 0; v < variables_.size(); ++v) {
      if (var_factors_[v].empty()) throw InvalidArgument("variable " + std::to_string(v) + " is in no factor");
    }
  }

  void set_game_shape(std::vector<std::size_t> actions, std::vector<std::size_t> types) {
    agent_actions_ = std::move(actions);
    agent_types_ = std::move(types);
  }

 private:
  FgVariant variant_ = FgVariant::kGeneric;
  std::vector<Variable> variables_;
  std::vector<Factor> factors_;
  std::vector<std::vector<std::size_t>> var_factors_;
  std::vector<std::size_t> agent_actions_;
  std::vector<std::size_t> agent_types_;
};

inline constexpr std::size_t kDefaultMaterializationCap = 10'000'000;

struct FgBuildOptions {
  std::size_t cell_cap = kDefaultMaterializationCap;
};

namespace detail {

inline void require_within_cap(std::size_t amount, std::size_t cap, const std::string& what) {
  if (amount > cap) {
    throw ResourceLimitError("factor graph: " + what + " = " +
                             (amount == std::numeric_limits<std::size_t>::max() ? std::string("overflow")
                                                                                : std::to_string(amount)) +
                             " exceeds the materialization cap of " + std::to_string(cap));
  }
}

// variable index of (agent, type) in TI/ATI graphs
inline std::vector<std::size_t> type_variable_offsets(const CGBG& game) {
  std::vector<std::size_t> offset(game.num_agents + 1, 0);
  for (std::size_t i = 0; i < game.num_agents; ++i) offset[i + 1] = offset[i] + game.type_counts[i];
  return offset;
}

inline FactorGraph with_type_variables(const CGBG& game, FgVariant variant) {
  FactorGraph fg(variant);
  fg.set_game_shape(game.action_counts, game.type_counts);
  for (std::size_t i = 0; i < game.num_agents; ++i) {
    for (std::size_t t = 0; t < game.type_counts[i]; ++t) {
      fg.add_variable({game.action_counts[i], i, t});
    }
  }
  return fg;
}

inline FactorGraph build_ati(const CGBG& game) {
  FactorGraph fg = with_type_variables(game, FgVariant::kATI);
  const auto offset = type_variable_offsets(game);
  for (std::size_t e = 0; e < game.components.size(); ++e) {
    const Component& c = game.components[e];
    const std::size_t num_actions = game.num_local_actions(c);
    Odometer types(game.scope_type_sizes(c));
    std::size_t t = 0;
    do {
      Factor f;
      f.component = e;
      f.joint_type = t;
      for (std::size_t j = 0; j < c.scope.size(); ++j) f.vars.push_back(offset[c.scope[j]] + types[j]);
      const double p = c.type_probs[t];
      f.table.resize(num_actions);
      for (std::size_t a = 0; a < num_actions; ++a) f.table[a] = p * c.payoffs[t * num_actions + a];
      fg.add_factor(std::move(f));
      ++t;
    } while (types.next());
  }
  return fg;
}

// Each local contribution Pr(theta_e) u^e(theta_e, a_e) is spread evenly over
// the full joint types that extend theta_e. For one full-scope component this
// is exactly Pr(theta) u(theta, a); in general it keeps the graph's value equal
// to the game's value without needing a full joint type distribution.
inline FactorGraph build_ti(const CGBG& game, const FgBuildOptions& opts) {
  const std::size_t joint_types = saturating_product(game.type_counts);
  const std::size_t joint_actions = saturating_product(game.action_counts);
  require_within_cap(joint_types, opts.cell_cap, "TI joint types (product of type counts)");
  require_within_cap(joint_actions, opts.cell_cap, "TI joint actions (product of action counts)");
  require_within_cap(saturating_product(std::vector<std::size_t>{joint_types, joint_actions}), opts.cell_cap,
                     "TI table cells (joint types x joint actions)");

  FactorGraph fg = with_type_variables(game, FgVariant::kTI);
  const auto offset = type_variable_offsets(game);
  const std::size_t n = game.num_agents;

  struct Piece {
    std::vector<std::size_t> scope;
    std::vector<std::size_t> type_strides;
    std::vector<std::size_t> action_strides;
    std::size_t num_actions;
    double inv_multiplicity;
  };
  std::vector<Piece> pieces;
  for (const Component& c : game.components) {
    Piece p;
    p.scope = c.scope;
    p.type_strides = row_major_strides(game.scope_type_sizes(c));
    p.action_strides = row_major_strides(game.scope_action_sizes(c));
    p.num_actions = game.num_local_actions(c);
    double mult = 1;
    for (std::size_t i = 0; i < n; ++i) {
      if (std::find(c.scope.begin(), c.scope.end(), i) == c.scope.end()) mult *= static_cast<double>(game.type_counts[i]);
    }
    p.inv_multiplicity = 1.0 / mult;
    pieces.push_back(std::move(p));
  }

  Odometer theta(game.type_counts);
  std::size_t joint_t = 0;
  std::vector<std::size_t> local_t(pieces.size());
  std::vector<double> weight(pieces.size());
  std::vector<std::size_t> local_a(pieces.size());
  do {
    Factor f;
    f.joint_type = joint_t;
    for (std::size_t i = 0; i < n; ++i) f.vars.push_back(offset[i] + theta[i]);
    for (std::size_t e = 0; e < pieces.size(); ++e) {
      std::size_t lt = 0;
      for (std::size_t j = 0; j < pieces[e].scope.size(); ++j) lt += theta[pieces[e].scope[j]] * pieces[e].type_strides[j];
      local_t[e] = lt;
      weight[e] = game.components[e].type_probs[lt] * pieces[e].inv_multiplicity;
    }
    f.table.resize(joint_actions);
    Odometer action(game.action_counts);
    std::size_t a = 0;
    do {
      double v = 0;
      for (std::size_t e = 0; e < pieces.size(); ++e) {
        if (weight[e] == 0) continue;
        std::size_t la = 0;
        for (std::size_t j = 0; j < pieces[e].scope.size(); ++j) la += action[pieces[e].scope[j]] * pieces[e].action_strides[j];
        v += weight[e] * game.components[e].payoffs[local_t[e] * pieces[e].num_actions + la];
      }
      f.table[a++] = v;
    } while (action.next());
    fg.add_factor(std::move(f));
    ++joint_t;
  } while (theta.next());
  return fg;
}

// Individual policy index -> per-type actions, for one agent.
inline std::vector<std::vector<std::size_t>> individual_policy_table(std::size_t actions, std::size_t types) {
  const std::size_t count = saturating_pow(actions, types);
  std::vector<std::vector<std::size_t>> table(count);
  std::vector<std::size_t> sizes(types, actions);
  Odometer odo(sizes);
  for (std::size_t k = 0; k < count; ++k) {
    table[k] = odo.digits();
    odo.next();
  }
  return table;
}

inline FactorGraph build_ai(const CGBG& game, const FgBuildOptions& opts) {
  FactorGraph fg(FgVariant::kAI);
  fg.set_game_shape(game.action_counts, game.type_counts);
  std::vector<std::size_t> domain(game.num_agents);
  for (std::size_t i = 0; i < game.num_agents; ++i) {
    domain[i] = saturating_pow(game.action_counts[i], game.type_counts[i]);
    require_within_cap(domain[i], opts.cell_cap,
                       "AI policy count of agent " + std::to_string(i) + " (actions^types)");
    fg.add_variable({domain[i], i, kNoTag});
  }
  std::vector<std::size_t> factor_cells;
  for (const Component& c : game.components) {
    std::vector<std::size_t> d;
    for (std::size_t a : c.scope) d.push_back(domain[a]);
    factor_cells.push_back(saturating_product(d));
  }
  std::size_t total = 0;
  for (std::size_t cells : factor_cells) {
    total = (total > std::numeric_limits<std::size_t>::max() - cells) ? std::numeric_limits<std::size_t>::max()
                                                                         : total + cells;
  }
  require_within_cap(total, opts.cell_cap, "AI table cells (sum over components of joint policy counts)");

  std::vector<std::vector<std::vector<std::size_t>>> policies(game.num_agents);
  for (std::size_t i = 0; i < game.num_agents; ++i) {
    policies[i] = individual_policy_table(game.action_counts[i], game.type_counts[i]);
  }

  for (std::size_t e = 0; e < game.components.size(); ++e) {
    const Component& c = game.components[e];
    const std::size_t num_actions = game.num_local_actions(c);
    const auto action_strides = row_major_strides(game.scope_action_sizes(c));
    const auto type_sizes = game.scope_type_sizes(c);
    Factor f;
    f.component = e;
    f.vars = c.scope;
    f.table.resize(factor_cells[e]);
    std::vector<std::size_t> dom;
    for (std::size_t a : c.scope) dom.push_back(domain[a]);
    Odometer beta(dom);
    std::size_t cell = 0;
    do {
      double v = 0;
      Odometer types(type_sizes);
      std::size_t t = 0;
      do {
        const double p = c.type_probs[t];
        if (p != 0) {
          std::size_t la = 0;
          for (std::size_t j = 0; j < c.scope.size(); ++j) la += policies[c.scope[j]][beta[j]][types[j]] * action_strides[j];
          v += p * c.payoffs[t * num_actions + la];
        }
        ++t;
      } while (types.next());
      f.table[cell++] = v;
    } while (beta.next());
    fg.add_factor(std::move(f));
  }
  return fg;
}

}  // namespace detail

inline FactorGraph build_factor_graph(const CGBG& game, FgVariant variant, const FgBuildOptions& opts = {}) {
  game.validate();
  switch (variant) {
    case FgVariant::kATI: return detail::build_ati(game);
    case FgVariant::kTI: return detail::build_ti(game, opts);
    case FgVariant::kAI: return detail::build_ai(game, opts);
    case FgVariant::kGeneric: break;
  }
  throw InvalidArgument("build_factor_graph: a game graph must be AI, TI or ATI");
}

inline FgStats fg_stats(const FactorGraph& fg) {
  FgStats s;
  s.num_factors = fg.num_factors();
  s.num_variables = fg.num_variables();
  for (const Factor& f : fg.factors()) {
    s.max_factor_degree = std::max(s.max_factor_degree, f.vars.size());
    s.total_edges += f.vars.size();
  }
  for (std::size_t v = 0; v < fg.num_variables(); ++v) {
    s.max_variable_degree = std::max(s.max_variable_degree, fg.factors_of(v).size());
    s.max_variable_domain = std::max(s.max_variable_domain, fg.variables()[v].domain);
  }
  return s;
}

// Decodes a variable assignment of an AI/TI/ATI graph into a joint policy.
inline JointPolicy assignment_to_policy(const FactorGraph& fg, std::span<const std::size_t> assignment) {
  fg.check_assignment(assignment);
  if (fg.variant() == FgVariant::kGeneric) throw InvalidArgument("generic factor graph has no policy decoding");
  JointPolicy policy;
  const auto& actions = fg.agent_actions();
  const auto& types = fg.agent_types();
  for (std::size_t i = 0; i < actions.size(); ++i) policy.assignments.emplace_back(types[i], 0);
  for (std::size_t v = 0; v < fg.num_variables(); ++v) {
    const Variable& var = fg.variables()[v];
    if (fg.variant() == FgVariant::kAI) {
      std::vector<std::size_t> sizes(types[var.agent], actions[var.agent]);
      policy.assignments[var.agent] = local_unindex(sizes, assignment[v]);
    } else {
      policy.assignments[var.agent][var.type] = assignment[v];
    }
  }
  return policy;
}

inline std::vector<std::size_t> policy_to_assignment(const FactorGraph& fg, const JointPolicy& policy) {
  if (fg.variant() == FgVariant::kGeneric) throw InvalidArgument("generic factor graph has no policy encoding");
  std::vector<std::size_t> assignment(fg.num_variables());
  for (std::size_t v = 0; v < fg.num_variables(); ++v) {
    const Variable& var = fg.variables()[v];
    if (var.agent >= policy.assignments.size()) throw InvalidArgument("policy does not cover the graph's agents");
    if (fg.variant() == FgVariant::kAI) {
      std::vector<std::size_t> sizes(fg.agent_types()[var.agent], fg.agent_actions()[var.agent]);
      assignment[v] = local_index(sizes, policy.assignments[var.agent]);
    } else {
      assignment[v] = policy.assignments[var.agent].at(var.type);
    }
  }
  return assignment;
}

// One `factor_id<TAB>variable_id` line per edge.
inline void write_edge_list(std::ostream& out, const FactorGraph& fg) {
  for (std::size_t f = 0; f < fg.num_factors(); ++f) {
    for (std::size_t v : fg.factors()[f].vars) out << f << '\t' << v << '\n';
  }
}

inline std::string stats_csv_header() {
  return "num_factors,num_variables,max_factor_degree,max_variable_degree,max_variable_domain,total_edges";
}

inline std::string stats_csv_line(const FgStats& s) {
  std::ostringstream out;
  out << s.num_factors << ',' << s.num_variables << ',' << s.max_factor_degree << ',' << s.max_variable_degree << ','
      << s.max_variable_domain << ',' << s.total_edges;
  return out.str();
}

}  // namespace cgbg
