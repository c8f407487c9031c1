#pragma once

// Non-serial dynamic programming (variable elimination) for max-sum over a
// factor graph.
//
// Forward pass: eliminating variable v replaces every live factor that
// contains v by one new factor over their other variables, holding the best
// sum over v's values; the argmax is recorded for the backward pass. Factors
// whose scope becomes empty fold into a scalar offset. The induced width of
// an order is the largest number of variables in any new factor, so a lone
// variable has width 0.
//
// Backward pass: variables are visited in reverse elimination order and each
// reads its recorded best response to the variables eliminated after it.

#include <algorithm>
#include <cstddef>
#include <string>
#include <vector>

#include "cgbg/deadline.hpp"
#include "cgbg/elimination_order.hpp"
#include "cgbg/errors.hpp"
#include "cgbg/factor_graph.hpp"
#include "cgbg/indexing.hpp"

namespace cgbg {

inline constexpr std::size_t kDefaultNdpCellCap = 100'000'000;

struct NdpOptions {
  std::size_t cell_cap = kDefaultNdpCellCap;
  Deadline deadline;
};

struct NdpResult {
  std::vector<std::size_t> assignment;
  double value = 0;
  std::size_t induced_width = 0;
  std::size_t peak_cells = 0;  // largest new factor table
  std::size_t work = 0;        // (new cell, eliminated value) pairs visited
};

namespace detail {

struct WorkFactor {
  std::vector<std::size_t> vars;  // ascending
  std::vector<double> table;      // row-major over vars
};

// Re-lays a factor table so that its variables are in ascending order.
inline WorkFactor to_sorted(const FactorGraph& fg, const Factor& f) {
  WorkFactor w;
  w.vars = f.vars;
  std::sort(w.vars.begin(), w.vars.end());
  if (w.vars == f.vars) {
    w.table = f.table;
    return w;
  }
  const auto src_strides = row_major_strides(fg.domains_of(f));
  std::vector<std::size_t> stride_in_src(w.vars.size());
  std::vector<std::size_t> sorted_domains(w.vars.size());
  for (std::size_t j = 0; j < w.vars.size(); ++j) {
    const auto pos = static_cast<std::size_t>(std::find(f.vars.begin(), f.vars.end(), w.vars[j]) - f.vars.begin());
    stride_in_src[j] = src_strides[pos];
    sorted_domains[j] = fg.variables()[w.vars[j]].domain;
  }
  w.table.resize(f.table.size());
  Odometer odo(sorted_domains);
  std::size_t k = 0;
  do {
    std::size_t src = 0;
    for (std::size_t j = 0; j < w.vars.size(); ++j) src += odo[j] * stride_in_src[j];
    w.table[k++] = f.table[src];
  } while (odo.next());
  return w;
}

struct EliminationStep {
  std::size_t var;
  std::vector<std::size_t> scope;   // new factor's variables, ascending
  std::vector<std::size_t> argmax;  // best value of var per scope assignment
};

}  // namespace detail

inline NdpResult ndp_solve(const FactorGraph& fg, const EliminationOrder& order, const NdpOptions& opts = {}) {
  const std::size_t V = fg.num_variables();
  order.validate(V);
  const auto& vars = fg.variables();

  std::vector<detail::WorkFactor> pool;
  std::vector<bool> alive;
  std::vector<std::vector<std::size_t>> containing(V);
  auto add_work = [&](detail::WorkFactor w) {
    const std::size_t id = pool.size();
    for (std::size_t v : w.vars) containing[v].push_back(id);
    pool.push_back(std::move(w));
    alive.push_back(true);
  };
  NdpResult result;
  double offset = 0;
  for (const Factor& f : fg.factors()) {
    auto w = detail::to_sorted(fg, f);
    if (w.vars.empty()) {
      offset += w.table[0];
    } else {
      add_work(std::move(w));
    }
  }
  std::vector<detail::EliminationStep> steps;
  steps.reserve(V);

  for (std::size_t step = 0; step < V; ++step) {
    opts.deadline.check("variable elimination");
    const std::size_t v = order.order[step];
    const std::size_t m = vars[v].domain;

    std::vector<std::size_t> bucket;
    for (std::size_t id : containing[v]) {
      if (alive[id]) bucket.push_back(id);
    }
    std::vector<std::size_t> scope;
    for (std::size_t id : bucket) {
      for (std::size_t u : pool[id].vars) {
        if (u != v) scope.push_back(u);
      }
    }
    std::sort(scope.begin(), scope.end());
    scope.erase(std::unique(scope.begin(), scope.end()), scope.end());

    std::vector<std::size_t> scope_domains;
    for (std::size_t u : scope) scope_domains.push_back(vars[u].domain);
    const std::size_t cells = saturating_product(scope_domains);
    if (cells > opts.cell_cap) {
      throw ResourceLimitError("variable elimination: step " + std::to_string(step) + " (variable " +
                               std::to_string(v) + ") would create a factor of width " +
                               std::to_string(scope.size()) + " with " +
                               (cells == std::numeric_limits<std::size_t>::max() ? std::string("overflowing")
                                                                                 : std::to_string(cells)) +
                               " cells, above the cap of " + std::to_string(opts.cell_cap));
    }
    result.induced_width = std::max(result.induced_width, scope.size());
    result.peak_cells = std::max(result.peak_cells, cells);

    // For each bucket factor: its stride for each scope position and for v.
    const std::size_t B = bucket.size();
    std::vector<std::vector<std::size_t>> scope_stride(B, std::vector<std::size_t>(scope.size(), 0));
    std::vector<std::size_t> v_stride(B, 0);
    for (std::size_t b = 0; b < B; ++b) {
      const auto& w = pool[bucket[b]];
      std::vector<std::size_t> dom;
      for (std::size_t u : w.vars) dom.push_back(vars[u].domain);
      const auto strides = row_major_strides(dom);
      for (std::size_t j = 0; j < w.vars.size(); ++j) {
        if (w.vars[j] == v) {
          v_stride[b] = strides[j];
        } else {
          const auto pos = static_cast<std::size_t>(std::lower_bound(scope.begin(), scope.end(), w.vars[j]) - scope.begin());
          scope_stride[b][pos] = strides[j];
        }
      }
    }

    detail::WorkFactor fresh;
    fresh.vars = scope;
    fresh.table.resize(cells);
    detail::EliminationStep rec{v, scope, std::vector<std::size_t>(cells, 0)};
    std::vector<std::size_t> base(B, 0);
    Odometer odo(scope_domains);
    for (std::size_t cell = 0; cell < cells; ++cell) {
      for (std::size_t b = 0; b < B; ++b) {
        std::size_t idx = 0;
        for (std::size_t j = 0; j < scope.size(); ++j) idx += odo[j] * scope_stride[b][j];
        base[b] = idx;
      }
      double best = 0;
      std::size_t best_x = 0;
      for (std::size_t x = 0; x < m; ++x) {
        double s = 0;
        for (std::size_t b = 0; b < B; ++b) s += pool[bucket[b]].table[base[b] + x * v_stride[b]];
        if (x == 0 || s > best) {
          best = s;
          best_x = x;
        }
      }
      fresh.table[cell] = best;
      rec.argmax[cell] = best_x;
      odo.next();
      if ((cell & 0xFFFFF) == 0xFFFFF) opts.deadline.check("variable elimination");
    }
    result.work += cells * m;

    for (std::size_t id : bucket) alive[id] = false;
    if (scope.empty()) {
      offset += fresh.table[0];
    } else {
      add_work(std::move(fresh));
    }
    steps.push_back(std::move(rec));
  }

  result.assignment.assign(V, 0);
  for (std::size_t s = steps.size(); s-- > 0;) {
    const auto& rec = steps[s];
    std::size_t idx = 0;
    for (std::size_t u : rec.scope) idx = idx * vars[u].domain + result.assignment[u];
    result.assignment[rec.var] = rec.argmax[idx];
  }
  result.value = offset;
  return result;
}

inline NdpResult ndp_solve(const FactorGraph& fg, OrderHeuristic heuristic, const NdpOptions& opts = {}) {
  return ndp_solve(fg, compute_order(fg, heuristic), opts);
}

}  // namespace cgbg
