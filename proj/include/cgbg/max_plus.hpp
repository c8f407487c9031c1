#pragma once

// Max-Plus message passing on a factor graph.
//
// Messages live on factor-variable edges, one per direction:
//   variable -> factor  sum of the variable's other incoming factor messages
//   factor -> variable  max over the factor's other variables of the table
//                       entry plus their incoming variable messages
// Every computed message is normalized so its largest entry is 0 and then
// damped: sent = (1 - damping) * computed + damping * previously sent.
// After each iteration the per-variable belief argmax is decoded and scored
// exactly; the best candidate over all iterations and restarts is returned.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "cgbg/deadline.hpp"
#include "cgbg/errors.hpp"
#include "cgbg/factor_graph.hpp"
#include "cgbg/rng.hpp"

namespace cgbg {

enum class Schedule { kSequentialRandom, kSequentialFixed, kParallel };

inline std::string_view to_string(Schedule s) {
  switch (s) {
    case Schedule::kSequentialRandom: return "sequential-random";
    case Schedule::kSequentialFixed: return "sequential-fixed";
    case Schedule::kParallel: return "parallel";
  }
  return "?";
}

inline Schedule parse_schedule(std::string_view s) {
  if (s == "sequential-random") return Schedule::kSequentialRandom;
  if (s == "sequential-fixed") return Schedule::kSequentialFixed;
  if (s == "parallel") return Schedule::kParallel;
  throw InvalidArgument("unknown message schedule '" + std::string(s) + "'");
}

struct MaxPlusParams {
  std::size_t restarts = 10;
  std::size_t max_iterations = 25;  // per restart
  double damping = 0.2;
  Schedule schedule = Schedule::kSequentialRandom;
  double convergence_tolerance = 1e-9;
  std::uint64_t seed = 0;
  Deadline deadline;

  void validate() const {
    if (restarts == 0) throw InvalidArgument("max-plus: restarts must be positive");
    if (max_iterations == 0) throw InvalidArgument("max-plus: max_iterations must be positive");
    if (!(damping >= 0 && damping < 1)) throw InvalidArgument("max-plus: damping must lie in [0, 1)");
    if (!(convergence_tolerance >= 0)) throw InvalidArgument("max-plus: negative convergence tolerance");
  }
};

struct IterationStats {
  double max_delta = 0;
  std::size_t messages = 0;
  std::size_t operations = 0;  // additions and comparisons spent building messages
};

// Mutable message state for one run over a shared immutable graph.
class MaxPlusState {
 public:
  MaxPlusState(const FactorGraph& fg, Schedule schedule, double damping, std::uint64_t seed)
      : fg_(&fg), schedule_(schedule), damping_(damping), rng_(seed) {
    const auto& vars = fg.variables();
    var_edges_.resize(fg.num_variables());
    for (std::size_t f = 0; f < fg.num_factors(); ++f) {
      factor_first_edge_.push_back(edge_var_.size());
      const auto& fv = fg.factors()[f].vars;
      for (std::size_t p = 0; p < fv.size(); ++p) {
        const std::size_t e = edge_var_.size();
        edge_var_.push_back(fv[p]);
        edge_factor_.push_back(f);
        edge_offset_.push_back(total_len_);
        total_len_ += vars[fv[p]].domain;
        var_edges_[fv[p]].push_back(e);
      }
    }
    factor_first_edge_.push_back(edge_var_.size());
    to_factor_.assign(total_len_, 0.0);
    to_var_.assign(total_len_, 0.0);
    directed_.resize(2 * num_edges());
    for (std::size_t d = 0; d < directed_.size(); ++d) directed_[d] = d;
  }

  std::size_t num_edges() const { return edge_var_.size(); }
  const FactorGraph& graph() const { return *fg_; }
  Rng& rng() { return rng_; }

  void reset_zero() {
    std::fill(to_factor_.begin(), to_factor_.end(), 0.0);
    std::fill(to_var_.begin(), to_var_.end(), 0.0);
  }

  void reset_random(double scale) {
    for (double& x : to_factor_) x = rng_.uniform(-scale, scale);
    for (double& x : to_var_) x = rng_.uniform(-scale, scale);
  }

  // Sends one message over each direction of every edge.
  IterationStats run_iteration() {
    IterationStats stats;
    switch (schedule_) {
      case Schedule::kSequentialRandom:
        rng_.shuffle(directed_);
        [[fallthrough]];
      case Schedule::kSequentialFixed:
        for (std::size_t d : directed_) send(d, to_factor_, to_var_, stats);
        break;
      case Schedule::kParallel: {
        std::vector<double> next_to_factor = to_factor_;
        std::vector<double> next_to_var = to_var_;
        for (std::size_t d = 0; d < 2 * num_edges(); ++d) {
          // read from the previous iteration, write into the next
          send_from(d, to_factor_, to_var_, next_to_factor, next_to_var, stats);
        }
        to_factor_ = std::move(next_to_factor);
        to_var_ = std::move(next_to_var);
        break;
      }
    }
    return stats;
  }

  // Per-variable argmax of the summed incoming factor messages; ties to the
  // lowest value.
  std::vector<std::size_t> decode_beliefs() const {
    const auto& vars = fg_->variables();
    std::vector<std::size_t> out(vars.size(), 0);
    std::vector<double> belief;
    for (std::size_t v = 0; v < vars.size(); ++v) {
      belief.assign(vars[v].domain, 0.0);
      for (std::size_t e : var_edges_[v]) {
        const double* msg = &to_var_[edge_offset_[e]];
        for (std::size_t x = 0; x < belief.size(); ++x) belief[x] += msg[x];
      }
      std::size_t best = 0;
      for (std::size_t x = 1; x < belief.size(); ++x) {
        if (belief[x] > belief[best]) best = x;
      }
      out[v] = best;
    }
    return out;
  }

  bool messages_finite() const {
    for (double x : to_factor_) {
      if (!std::isfinite(x)) return false;
    }
    for (double x : to_var_) {
      if (!std::isfinite(x)) return false;
    }
    return true;
  }

  double max_abs_message() const {
    double m = 0;
    for (double x : to_factor_) m = std::max(m, std::abs(x));
    for (double x : to_var_) m = std::max(m, std::abs(x));
    return m;
  }

 private:
  // Directed edge d < E is variable->factor over edge d; d >= E is
  // factor->variable over edge d - E.
  void send(std::size_t d, std::vector<double>& to_factor, std::vector<double>& to_var, IterationStats& stats) {
    send_from(d, to_factor, to_var, to_factor, to_var, stats);
  }

  void send_from(std::size_t d, const std::vector<double>& in_to_factor, const std::vector<double>& in_to_var,
                 std::vector<double>& out_to_factor, std::vector<double>& out_to_var, IterationStats& stats) {
    const std::size_t E = num_edges();
    const bool var_to_factor = d < E;
    const std::size_t e = var_to_factor ? d : d - E;
    const std::size_t v = edge_var_[e];
    const std::size_t m = fg_->variables()[v].domain;
    scratch_.assign(m, 0.0);

    if (var_to_factor) {
      for (std::size_t other : var_edges_[v]) {
        if (other == e) continue;
        const double* msg = &in_to_var[edge_offset_[other]];
        for (std::size_t x = 0; x < m; ++x) scratch_[x] += msg[x];
        stats.operations += m;
      }
    } else {
      const std::size_t f = edge_factor_[e];
      const Factor& factor = fg_->factors()[f];
      const std::size_t first = factor_first_edge_[f];
      const std::size_t deg = factor.vars.size();
      const std::size_t pos = e - first;
      std::fill(scratch_.begin(), scratch_.end(), -std::numeric_limits<double>::infinity());
      digits_.assign(deg, 0);
      const auto& vars = fg_->variables();
      for (std::size_t idx = 0; idx < factor.table.size(); ++idx) {
        double val = factor.table[idx];
        for (std::size_t q = 0; q < deg; ++q) {
          if (q != pos) val += in_to_factor[edge_offset_[first + q] + digits_[q]];
        }
        double& slot = scratch_[digits_[pos]];
        if (val > slot) slot = val;
        for (std::size_t q = deg; q-- > 0;) {
          if (++digits_[q] < vars[factor.vars[q]].domain) break;
          digits_[q] = 0;
        }
      }
      stats.operations += factor.table.size() * deg;
    }

    const double top = *std::max_element(scratch_.begin(), scratch_.end());
    std::vector<double>& out = var_to_factor ? out_to_factor : out_to_var;
    const std::vector<double>& prev = var_to_factor ? in_to_factor : in_to_var;
    double* dst = &out[edge_offset_[e]];
    const double* old = &prev[edge_offset_[e]];
    for (std::size_t x = 0; x < m; ++x) {
      const double fresh = (1.0 - damping_) * (scratch_[x] - top) + damping_ * old[x];
      stats.max_delta = std::max(stats.max_delta, std::abs(fresh - old[x]));
      dst[x] = fresh;
    }
    stats.operations += 2 * m;
    ++stats.messages;
  }

  const FactorGraph* fg_;
  Schedule schedule_;
  double damping_;
  Rng rng_;
  std::vector<std::size_t> edge_var_, edge_factor_, edge_offset_, factor_first_edge_;
  std::vector<std::vector<std::size_t>> var_edges_;
  std::size_t total_len_ = 0;
  std::vector<double> to_factor_, to_var_;
  std::vector<std::size_t> directed_;
  std::vector<double> scratch_;
  std::vector<std::size_t> digits_;
};

struct MaxPlusResult {
  std::vector<std::size_t> assignment;
  double exact_value = -std::numeric_limits<double>::infinity();
  bool converged = false;  // every restart met the tolerance before its cap
  std::vector<std::size_t> iterations_used;  // per restart
  std::size_t messages_sent = 0;
  std::size_t operations = 0;
  std::size_t operations_per_iteration = 0;  // of the first iteration
  std::vector<double> anytime_trace;         // best-so-far value after each iteration
};

// Scores a candidate assignment; the default sums the graph's tables.
using AssignmentScorer = std::function<double(const std::vector<std::size_t>&)>;

inline double mean_abs_entry(const FactorGraph& fg) {
  double sum = 0;
  std::size_t count = 0;
  for (const Factor& f : fg.factors()) {
    for (double x : f.table) sum += std::abs(x);
    count += f.table.size();
  }
  return count ? sum / static_cast<double>(count) : 0.0;
}

// Restart 0 starts from all-zero messages; later restarts draw every entry
// uniformly from [-s, s], s = mean absolute factor entry.
inline MaxPlusResult max_plus(const FactorGraph& fg, const MaxPlusParams& params, AssignmentScorer scorer = {}) {
  params.validate();
  if (!scorer) scorer = [&fg](const std::vector<std::size_t>& a) { return fg.value(a); };

  MaxPlusResult result;
  MaxPlusState state(fg, params.schedule, params.damping, params.seed);
  const double scale = mean_abs_entry(fg);
  bool all_converged = true;
  for (std::size_t r = 0; r < params.restarts; ++r) {
    if (r == 0) {
      state.reset_zero();
    } else {
      state.reset_random(scale);
    }
    std::size_t used = 0;
    bool converged = false;
    for (std::size_t it = 0; it < params.max_iterations; ++it) {
      params.deadline.check("max-plus");
      const IterationStats stats = state.run_iteration();
      ++used;
      result.messages_sent += stats.messages;
      result.operations += stats.operations;
      if (result.operations_per_iteration == 0) result.operations_per_iteration = stats.operations;
      auto candidate = state.decode_beliefs();
      const double value = scorer(candidate);
      if (result.assignment.empty() || value > result.exact_value) {
        result.exact_value = value;
        result.assignment = std::move(candidate);
      }
      result.anytime_trace.push_back(result.exact_value);
      if (stats.max_delta < params.convergence_tolerance) {
        converged = true;
        break;
      }
    }
    all_converged = all_converged && converged;
    result.iterations_used.push_back(used);
  }
  result.converged = all_converged;
  return result;
}

}  // namespace cgbg
