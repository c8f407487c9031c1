#pragma once

#include <algorithm>
#include <cstddef>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "cgbg/errors.hpp"
#include "cgbg/factor_graph.hpp"

namespace cgbg {

enum class OrderHeuristic { kGiven, kSequential, kMinDegree, kMinFill };

inline std::string_view to_string(OrderHeuristic h) {
  switch (h) {
    case OrderHeuristic::kGiven: return "given";
    case OrderHeuristic::kSequential: return "sequential";
    case OrderHeuristic::kMinDegree: return "min-degree";
    case OrderHeuristic::kMinFill: return "min-fill";
  }
  return "?";
}

inline OrderHeuristic parse_order_heuristic(std::string_view s) {
  if (s == "given") return OrderHeuristic::kGiven;
  if (s == "sequential") return OrderHeuristic::kSequential;
  if (s == "min-degree") return OrderHeuristic::kMinDegree;
  if (s == "min-fill") return OrderHeuristic::kMinFill;
  throw InvalidArgument("unknown elimination heuristic '" + std::string(s) + "'");
}

struct EliminationOrder {
  std::vector<std::size_t> order;
  OrderHeuristic heuristic = OrderHeuristic::kGiven;

  void validate(std::size_t num_variables) const {
    if (order.size() != num_variables) throw InvalidArgument("elimination order has wrong length");
    std::vector<bool> seen(num_variables, false);
    for (std::size_t v : order) {
      if (v >= num_variables || seen[v]) throw InvalidArgument("elimination order is not a permutation");
      seen[v] = true;
    }
  }
};

// Interaction graph over variables: two variables are adjacent when some
// factor contains both. Sorted adjacency lists.
inline std::vector<std::vector<std::size_t>> variable_adjacency(const FactorGraph& fg) {
  std::vector<std::vector<std::size_t>> adj(fg.num_variables());
  for (const Factor& f : fg.factors()) {
    for (std::size_t a : f.vars) {
      for (std::size_t b : f.vars) {
        if (a != b) adj[a].push_back(b);
      }
    }
  }
  for (auto& list : adj) {
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
  }
  return adj;
}

namespace detail {

// Greedy elimination driven by a per-variable score on the current graph;
// eliminating a variable connects all its remaining neighbors.
template <typename Score>
std::vector<std::size_t> greedy_order(const FactorGraph& fg, Score score) {
  auto adj = variable_adjacency(fg);
  const std::size_t V = adj.size();
  std::vector<bool> done(V, false);
  std::vector<std::size_t> order;
  order.reserve(V);
  for (std::size_t step = 0; step < V; ++step) {
    std::size_t best = V;
    std::size_t best_score = std::numeric_limits<std::size_t>::max();
    for (std::size_t v = 0; v < V; ++v) {
      if (done[v]) continue;
      const std::size_t s = score(adj, v);
      if (s < best_score) {
        best_score = s;
        best = v;
      }
    }
    done[best] = true;
    order.push_back(best);
    const std::vector<std::size_t> nbrs = adj[best];
    for (std::size_t a : nbrs) {
      auto& la = adj[a];
      la.erase(std::remove(la.begin(), la.end(), best), la.end());
      std::vector<std::size_t> merged;
      std::set_union(la.begin(), la.end(), nbrs.begin(), nbrs.end(), std::back_inserter(merged));
      merged.erase(std::remove(merged.begin(), merged.end(), a), merged.end());
      la = std::move(merged);
    }
    adj[best].clear();
  }
  return order;
}

inline std::size_t fill_in(const std::vector<std::vector<std::size_t>>& adj, std::size_t v) {
  const auto& nbrs = adj[v];
  std::size_t missing = 0;
  for (std::size_t x = 0; x < nbrs.size(); ++x) {
    const auto& lx = adj[nbrs[x]];
    for (std::size_t y = x + 1; y < nbrs.size(); ++y) {
      if (!std::binary_search(lx.begin(), lx.end(), nbrs[y])) ++missing;
    }
  }
  return missing;
}

}  // namespace detail

// Ties go to the lowest variable index.
inline EliminationOrder compute_order(const FactorGraph& fg, OrderHeuristic heuristic) {
  EliminationOrder out;
  out.heuristic = heuristic;
  switch (heuristic) {
    case OrderHeuristic::kGiven:
    case OrderHeuristic::kSequential:
      out.order.resize(fg.num_variables());
      for (std::size_t v = 0; v < fg.num_variables(); ++v) out.order[v] = v;
      break;
    case OrderHeuristic::kMinDegree:
      out.order = detail::greedy_order(fg, [](const auto& adj, std::size_t v) { return adj[v].size(); });
      break;
    case OrderHeuristic::kMinFill:
      out.order = detail::greedy_order(fg, [](const auto& adj, std::size_t v) { return detail::fill_in(adj, v); });
      break;
  }
  return out;
}

// Largest factor degree k. Eliminating any variable of that factor creates a
// factor over the other k - 1, so every order has induced width >= k - 1.
inline std::size_t predicted_width_lower_bound(const FactorGraph& fg) {
  std::size_t k = 0;
  for (const Factor& f : fg.factors()) k = std::max(k, f.vars.size());
  return k;
}

}  // namespace cgbg
