// Acceptance suite: one PASS/FAIL line per criterion.
//
// The exit status is nonzero when a criterion fails unexpectedly. Criteria in
// kKnownRed fail for a documented reason that the implementation cannot fix
// without faking data; they still print FAIL.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "../oracles.hpp"
#include "cgbg/alternating_max.hpp"
#include "cgbg/bench/csv.hpp"
#include "cgbg/bench/experiment.hpp"
#include "cgbg/brute_force.hpp"
#include "cgbg/equilibrium.hpp"
#include "cgbg/factor_graph.hpp"
#include "cgbg/max_plus.hpp"
#include "cgbg/ndp.hpp"
#include "cgbg/random_game.hpp"
#include "cgbg/solvers.hpp"
#include "cgbg/state_model.hpp"

using namespace cgbg;

namespace {

// The printed payoff table lists 2.032 for flames/flames at <H1,H3>; Bayes'
// rule on the printed state model gives 0.207 / 0.07 = 2.957.
const std::set<int> kKnownRed{1};

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

// Log-log least squares slope.
double fitted_exponent(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxy += (std::log(x[i]) - mx) * (std::log(y[i]) - my);
    sxx += (std::log(x[i]) - mx) * (std::log(x[i]) - mx);
  }
  return sxy / sxx;
}

Outcome fixture_exactness() {
  // rows: joint types FF, FN, NF, NN; columns: <H1,H2>, <H1,H3>, <H2,H2>, <H2,H3>
  const double printed[4][4] = {
      {3.414, 2.032, 3, 3.543},
      {3.14, 1.22, 3, 2.08},
      {2.058, 1.384, 3, 3.326},
      {2.032, 0.079, 3, 2.047},
  };
  const double marginal[4] = {0.07, 0.15, 0.19, 0.59};
  const auto t0 = std::chrono::steady_clock::now();
  const CGBG g = build_two_agent_firefight();
  const double ms = seconds_since(t0) * 1e3;
  const Component& c = g.components.at(0);
  int bad = 0;
  std::string where;
  for (int t = 0; t < 4; ++t) {
    for (int a = 0; a < 4; ++a) {
      const double got = c.payoffs[static_cast<std::size_t>(t * 4 + a)];
      if (std::abs(got - printed[t][a]) > 0.005) {
        ++bad;
        where += " [type " + std::to_string(t) + ", action " + std::to_string(a) + "] printed " +
                 fmt("%.3f", printed[t][a]) + " computed " + fmt("%.4f", got);
      }
    }
  }
  bool marg_ok = true;
  for (int t = 0; t < 4; ++t) marg_ok = marg_ok && std::abs(c.type_probs[static_cast<std::size_t>(t)] - marginal[t]) <= 1e-9;
  Outcome o;
  o.pass = bad == 0 && marg_ok && ms < 1.0;
  o.detail = std::to_string(16 - bad) + "/16 payoff entries within 0.005" + where + "; marginal " +
             (marg_ok ? "exact" : "off") + "; build " + fmt("%.3f ms", ms);
  return o;
}

Outcome oracle_equivalence() {
  const auto t0 = std::chrono::steady_clock::now();
  Rng rng(2024);
  std::size_t mismatches = 0;
  double worst = 0;
  for (int game = 0; game < 1000; ++game) {
    const std::size_t n = 2 + rng.below(3), T = 1 + rng.below(3), A = 1 + rng.below(3);
    const CGBG g = generate_random_cgbg({n, 2, A, T, rng.next_u64()});
    const double bf = solve_brute_force(g).value;
    for (FgVariant v : {FgVariant::kAI, FgVariant::kTI, FgVariant::kATI}) {
      const double d = std::abs(solve_ndp(g, v, OrderHeuristic::kMinDegree).value - bf);
      worst = std::max(worst, d);
      if (d > 1e-9) ++mismatches;
    }
  }
  const double s = seconds_since(t0);
  return {mismatches == 0 && s < 120,
          "3000 NDP solves over 1000 games, " + std::to_string(mismatches) + " mismatches, max |diff| " +
              fmt("%.2e", worst) + ", " + fmt("%.1f s", s)};
}

Outcome max_plus_quality() {
  const auto t0 = std::chrono::steady_clock::now();
  Rng rng(7);
  double sum_delta = 0, sum_abs = 0;
  std::size_t optimal = 0;
  for (int game = 0; game < 1000; ++game) {
    const std::uint64_t seed = rng.next_u64();
    const CGBG g = generate_random_cgbg({5, 2, 3, 3, seed});
    const double exact = solve_ndp(g, FgVariant::kATI, OrderHeuristic::kMinDegree).value;
    MaxPlusParams p;
    p.seed = seed ^ bench::kSolverSeedMix;
    const double mp = solve_max_plus(g, FgVariant::kATI, p).value;
    sum_delta += mp - exact;
    sum_abs += std::abs(exact);
    if (mp >= exact - 1e-9) ++optimal;
  }
  const double s = seconds_since(t0);
  const double mean_delta = sum_delta / 1000, bound = -0.01 * sum_abs / 1000;
  return {mean_delta >= bound && s < 600,
          "mean(MP-ATI - NDP-ATI) = " + fmt("%.5f", mean_delta) + " vs bound " + fmt("%.5f", bound) + ", optimal on " +
              std::to_string(optimal) + "/1000, " + fmt("%.1f s", s)};
}

Outcome structural_counts() {
  Rng rng(11);
  std::size_t checked = 0, bad = 0;
  for (std::size_t k : {2u, 3u}) {
    for (std::size_t T : {2u, 3u, 4u}) {
      for (int game = 0; game < 100; ++game) {
        const std::size_t n = 5, A = 2;
        const CGBG g = generate_random_cgbg({n, k, A, T, rng.next_u64()});
        const std::size_t rho = g.components.size();
        std::size_t rho_star = 0;
        for (std::size_t i = 0; i < n; ++i) rho_star = std::max(rho_star, g.components_of(i).size());
        const std::size_t Tk = saturating_pow(T, k), Tn = saturating_pow(T, n);
        const FgStats want_ai{rho, n, k, rho_star, saturating_pow(A, T), rho * k};
        const FgStats want_ti{Tn, n * T, n, Tn / T, A, Tn * n};
        const FgStats want_ati{rho * Tk, n * T, k, rho_star * Tk / T, A, rho * Tk * k};
        bad += !(fg_stats(build_factor_graph(g, FgVariant::kAI)) == want_ai);
        bad += !(fg_stats(build_factor_graph(g, FgVariant::kTI)) == want_ti);
        bad += !(fg_stats(build_factor_graph(g, FgVariant::kATI)) == want_ati);
        checked += 3;
      }
    }
  }
  return {bad == 0, std::to_string(checked - bad) + "/" + std::to_string(checked) + " graphs match the closed forms"};
}

Outcome induced_width_anchor() {
  const CGBG g = testing::chain_game_three_agents();
  const std::size_t ati = ndp_solve(build_factor_graph(g, FgVariant::kATI), OrderHeuristic::kSequential).induced_width;
  const std::size_t ai = ndp_solve(build_factor_graph(g, FgVariant::kAI), OrderHeuristic::kSequential).induced_width;
  return {ati == 3 && ai == 1, "ATI width " + std::to_string(ati) + " (want 3), AI width " + std::to_string(ai) +
                                   " (want 1)"};
}

Outcome type_scaling() {
  std::vector<double> types, peak, ops;
  for (std::size_t T = 2; T <= 5; ++T) {
    double cells = 0, work = 0;
    const int games = 20;
    for (int game = 0; game < games; ++game) {
      const CGBG g = generate_random_cgbg({3, 2, 2, T, 1000 + static_cast<std::uint64_t>(game)});
      const FactorGraph fg = build_factor_graph(g, FgVariant::kATI);
      cells += static_cast<double>(ndp_solve(fg, OrderHeuristic::kMinDegree).peak_cells);
      MaxPlusState state(fg, Schedule::kSequentialRandom, 0.2, 1);
      work += static_cast<double>(state.run_iteration().operations);
    }
    types.push_back(static_cast<double>(T));
    peak.push_back(cells / games);
    ops.push_back(work / games);
  }
  double min_ratio = 1e300;
  std::string peaks;
  for (std::size_t i = 0; i < peak.size(); ++i) {
    peaks += (i ? "," : "") + fmt("%.0f", peak[i]);
    if (i) min_ratio = std::min(min_ratio, peak[i] / peak[i - 1]);
  }
  const double exponent = fitted_exponent(types, ops);
  return {min_ratio >= 1.5 && exponent <= 3.5,
          "NDP-ATI mean peak cells " + peaks + " (min ratio " + fmt("%.2f", min_ratio) +
              ", want >= 1.5); MP-ATI ops exponent in |types| " + fmt("%.2f", exponent) + " (want <= 3.5)"};
}

Outcome agent_scaling() {
  std::vector<double> edges, messages;
  double slowest = 0;
  bool exact_counts = true;
  for (std::size_t n : {10u, 50u, 100u, 200u}) {
    for (int game = 0; game < 2; ++game) {
      const CGBG g = generate_random_cgbg({n, 2, 4, 4, 500 + n + static_cast<std::uint64_t>(game)});
      MaxPlusParams p;
      p.convergence_tolerance = 0;  // always run all 25 iterations
      p.seed = static_cast<std::uint64_t>(game);
      const auto t0 = std::chrono::steady_clock::now();
      const SolveResult r = solve_max_plus(g, FgVariant::kATI, p);
      slowest = std::max(slowest, seconds_since(t0));
      const std::size_t E = fg_stats(build_factor_graph(g, FgVariant::kATI)).total_edges;
      exact_counts = exact_counts && r.iterations == 250 && r.messages == 2 * E * 250;
      edges.push_back(static_cast<double>(E));
      messages.push_back(static_cast<double>(r.messages));
    }
  }
  const double exponent = fitted_exponent(edges, messages);
  return {exact_counts && std::abs(exponent - 1.0) < 1e-9 && slowest < 30,
          std::string("messages = 2 * edges * 250 on every game: ") + (exact_counts ? "yes" : "no") +
              ", fitted exponent in edges " + fmt("%.6f", exponent) + ", slowest game " + fmt("%.2f s", slowest)};
}

Outcome equilibrium_property() {
  Rng rng(13);
  int ok = 0;
  for (int game = 0; game < 100; ++game) {
    const CGBG g = generate_random_cgbg({4, 2, 2 + rng.below(2), 2 + rng.below(2), rng.next_u64()});
    ok += is_nash_equilibrium(g, alternating_maximization(g, {10, rng.next_u64(), {}}).policy);
  }
  return {ok == 100, std::to_string(ok) + "/100 outputs are Bayesian Nash equilibria"};
}

Outcome tree_exactness() {
  Rng rng(17);
  int ok = 0;
  double worst = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const FactorGraph fg = testing::random_tree_graph(rng, 2 + rng.below(12), 4);
    const double exact = ndp_solve(fg, OrderHeuristic::kMinDegree).value;
    MaxPlusParams p;
    p.seed = rng.next_u64();
    p.max_iterations = 100;
    const double mp = max_plus(fg, p).exact_value;
    worst = std::max(worst, std::abs(mp - exact));
    ok += std::abs(mp - exact) <= 1e-9;
  }
  return {ok == 100, std::to_string(ok) + "/100 trees, max |diff| " + fmt("%.2e", worst)};
}

Outcome determinism() {
  namespace fs = std::filesystem;
  bench::ExperimentConfig cfg;
  cfg.agents = {3, 5};
  cfg.types = {2, 3};
  cfg.games_per_point = 10;
  cfg.methods = {"MP-ATI", "NDP-ATI", "MP-AI", "AM", "CE-fast"};
  cfg.master_seed = 4242;
  cfg.workers = 2;
  const fs::path root = fs::temp_directory_path() / "cgbg_acceptance_determinism";
  fs::remove_all(root);
  std::vector<std::string> texts;
  for (const char* run : {"a", "b"}) {
    const auto rows = bench::run_experiment(cfg, false);
    bench::emit(rows, bench::summarize(rows), root / run);
    std::string all;
    for (const char* f : {"results.csv", "summary.csv", "plotdata/n.csv", "plotdata/num_types.csv"}) {
      std::ifstream in(root / run / f);
      std::stringstream ss;
      ss << in.rdbuf();
      all += ss.str();
    }
    texts.push_back(all);
  }
  return {texts[0] == texts[1] && !texts[0].empty(),
          std::string("two no-timing runs ") + (texts[0] == texts[1] ? "byte-identical" : "differ") + " (" +
              std::to_string(texts[0].size()) + " bytes)"};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"fixture exactness", fixture_exactness},
      {"oracle equivalence", oracle_equivalence},
      {"max-plus quality", max_plus_quality},
      {"structural counts", structural_counts},
      {"induced-width anchor", induced_width_anchor},
      {"type-scaling trend", type_scaling},
      {"agent scaling", agent_scaling},
      {"equilibrium property", equilibrium_property},
      {"tree exactness", tree_exactness},
      {"determinism", determinism},
  };
  int passed = 0, unexpected = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const bool known = kKnownRed.count(id) > 0;
    std::printf("%s %2d %s: %s%s\n", o.pass ? "PASS" : "FAIL", id, criteria[i].first, o.detail.c_str(),
                !o.pass && known ? " [known: source table misprint]" : "");
    std::fflush(stdout);
    passed += o.pass;
    if (!o.pass && !known) ++unexpected;
  }
  std::printf("%d/%zu criteria pass, %d unexpected failures\n", passed, criteria.size(), unexpected);
  return unexpected == 0 ? 0 : 1;
}
