#pragma once

// Game-level entry points for every solver, and the method names used by the
// CLI and the benchmark harness:
//   BruteForce, NDP-{AI,TI,ATI}[/<order>], MP-{AI,TI,ATI}, AM, CE-normal, CE-fast
// where <order> is sequential, min-degree (default) or min-fill.

#include <cstdint>
#include <string>
#include <string_view>

#include "cgbg/alternating_max.hpp"
#include "cgbg/brute_force.hpp"
#include "cgbg/cross_entropy.hpp"
#include "cgbg/deadline.hpp"
#include "cgbg/factor_graph.hpp"
#include "cgbg/max_plus.hpp"
#include "cgbg/ndp.hpp"
#include "cgbg/solve_result.hpp"

namespace cgbg {

inline SolveResult solve_ndp(const CGBG& game, FgVariant variant, OrderHeuristic heuristic,
                             const FgBuildOptions& build = {}, const NdpOptions& opts = {}) {
  Stopwatch clock;
  const FactorGraph fg = build_factor_graph(game, variant, build);
  const NdpResult r = ndp_solve(fg, heuristic, opts);
  SolveResult out;
  out.policy = assignment_to_policy(fg, r.assignment);
  out.value = evaluate_policy(game, out.policy);
  out.induced_width = r.induced_width;
  out.peak_cells = r.peak_cells;
  out.iterations = fg.num_variables();
  out.evaluations = 1;
  out.runtime_ms = clock.elapsed_ms();
  return out;
}

// Candidates are scored through evaluate_policy, so the reported value is
// exact for the decoded policy.
inline SolveResult solve_max_plus(const CGBG& game, FgVariant variant, const MaxPlusParams& params,
                                  const FgBuildOptions& build = {}) {
  Stopwatch clock;
  const FactorGraph fg = build_factor_graph(game, variant, build);
  PolicyEvaluator eval(game);
  std::size_t evaluations = 0;
  const MaxPlusResult r = max_plus(fg, params, [&](const std::vector<std::size_t>& a) {
    ++evaluations;
    return eval.value(assignment_to_policy(fg, a));
  });
  SolveResult out;
  out.policy = assignment_to_policy(fg, r.assignment);
  out.value = r.exact_value;
  out.converged = r.converged;
  for (std::size_t used : r.iterations_used) out.iterations += used;
  out.messages = r.messages_sent;
  out.evaluations = evaluations;
  out.restarts = params.restarts;
  out.runtime_ms = clock.elapsed_ms();
  return out;
}

enum class Method { kBruteForce, kNdp, kMaxPlus, kAlternatingMax, kCeNormal, kCeFast };

struct MethodSpec {
  Method method = Method::kBruteForce;
  FgVariant variant = FgVariant::kATI;
  OrderHeuristic order = OrderHeuristic::kMinDegree;

  bool uses_factor_graph() const { return method == Method::kNdp || method == Method::kMaxPlus; }
};

inline MethodSpec parse_method(std::string_view name) {
  MethodSpec spec;
  if (name == "BruteForce") return spec;
  if (name == "AM") {
    spec.method = Method::kAlternatingMax;
    return spec;
  }
  if (name == "CE-normal") {
    spec.method = Method::kCeNormal;
    return spec;
  }
  if (name == "CE-fast") {
    spec.method = Method::kCeFast;
    return spec;
  }
  std::string_view rest;
  if (name.starts_with("NDP-")) {
    spec.method = Method::kNdp;
    rest = name.substr(4);
  } else if (name.starts_with("MP-")) {
    spec.method = Method::kMaxPlus;
    rest = name.substr(3);
  } else {
    throw InvalidArgument("unknown method '" + std::string(name) + "'");
  }
  const auto slash = rest.find('/');
  if (slash != std::string_view::npos) {
    if (spec.method != Method::kNdp) throw InvalidArgument("only NDP methods take an elimination order: " + std::string(name));
    spec.order = parse_order_heuristic(rest.substr(slash + 1));
    rest = rest.substr(0, slash);
  }
  spec.variant = parse_fg_variant(rest);
  return spec;
}

struct SolverSettings {
  std::size_t enumeration_cap = kDefaultEnumerationCap;
  std::size_t materialization_cap = kDefaultMaterializationCap;
  std::size_t ndp_cell_cap = kDefaultNdpCellCap;
  MaxPlusParams max_plus;   // seed and deadline are overwritten per solve
  std::size_t restarts = 10; // AM and CE
  std::uint64_t seed = 0;
  Deadline deadline;
};

inline SolveResult solve_game(const CGBG& game, const MethodSpec& spec, const SolverSettings& settings) {
  const FgBuildOptions build{settings.materialization_cap};
  switch (spec.method) {
    case Method::kBruteForce:
      return solve_brute_force(game, {settings.enumeration_cap, settings.deadline});
    case Method::kNdp:
      return solve_ndp(game, spec.variant, spec.order, build, {settings.ndp_cell_cap, settings.deadline});
    case Method::kMaxPlus: {
      MaxPlusParams p = settings.max_plus;
      p.seed = settings.seed;
      p.deadline = settings.deadline;
      return solve_max_plus(game, spec.variant, p, build);
    }
    case Method::kAlternatingMax:
      return alternating_maximization(game, {settings.restarts, settings.seed, settings.deadline});
    case Method::kCeNormal:
    case Method::kCeFast: {
      CeParams p = spec.method == Method::kCeNormal ? CeParams::normal() : CeParams::fast();
      p.restarts = settings.restarts;
      p.seed = settings.seed;
      p.deadline = settings.deadline;
      return cross_entropy(game, p);
    }
  }
  throw InvalidArgument("unhandled method");
}

}  // namespace cgbg
