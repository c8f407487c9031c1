// Command-line front end: game generation, single solves, benchmark runs and
// summaries. Exit codes: 0 success, 2 configuration error, 3 resource or
// time limit hit, 1 anything else.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "cgbg/bench/csv.hpp"
#include "cgbg/bench/experiment.hpp"
#include "cgbg/bench/summary.hpp"
#include "cgbg/game_io.hpp"
#include "cgbg/gff.hpp"
#include "cgbg/random_game.hpp"
#include "cgbg/solvers.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using namespace cgbg;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitLimit = 3;

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw FileError("cannot create " + dir.string() + ": " + ec.message());
}

struct GenRandomArgs {
  std::size_t agents = 3, k = 2, actions = 2, types = 2, count = 1;
  std::uint64_t seed = 0;
  std::string out = ".";
};

int gen_random(const GenRandomArgs& a) {
  ensure_dir(a.out);
  for (std::size_t i = 0; i < a.count; ++i) {
    const CGBG g = generate_random_cgbg({a.agents, a.k, a.actions, a.types, a.seed + i});
    const fs::path path = fs::path(a.out) / ("game_" + std::to_string(i) + ".json");
    write_game_file(path, g);
    std::cout << path.string() << '\n';
  }
  return 0;
}

struct GenGffArgs {
  GffConfig cfg;
  std::size_t count = 1;
  std::string out = ".";
};

int gen_gff(const GenGffArgs& a) {
  ensure_dir(a.out);
  for (std::size_t i = 0; i < a.count; ++i) {
    GffConfig cfg = a.cfg;
    cfg.seed = a.cfg.seed + i;
    const GffInstance inst = generate_gff(cfg);
    const std::string stem = "gff_" + std::to_string(i);
    write_game_file(fs::path(a.out) / (stem + ".json"), inst.game);
    write_json_file(fs::path(a.out) / (stem + ".layout.json"), layout_to_json(inst.layout));
    std::cout << (fs::path(a.out) / (stem + ".json")).string() << '\n';
  }
  return 0;
}

struct SolveArgs {
  std::string game, method = "NDP", fg = "ati", order = "min-degree", schedule = "sequential-random";
  std::size_t restarts = 10, max_iter = 25;
  double damping = 0.2, time_limit = 0;
  std::uint64_t seed = 0;
  std::size_t cell_cap = kDefaultMaterializationCap;
};

int solve(const SolveArgs& a) {
  const CGBG game = read_game_file(a.game);
  MethodSpec spec;
  try {
    if (a.method == "NDP" || a.method == "MP") {
      spec.method = a.method == "NDP" ? Method::kNdp : Method::kMaxPlus;
      spec.variant = parse_fg_variant(a.fg);
      spec.order = parse_order_heuristic(a.order);
    } else {
      spec = parse_method(a.method);
    }
  } catch (const InvalidArgument& e) {
    throw ConfigError(e.what());
  }
  SolverSettings s;
  s.materialization_cap = a.cell_cap;
  s.ndp_cell_cap = a.cell_cap;
  s.max_plus.restarts = a.restarts;
  s.max_plus.max_iterations = a.max_iter;
  s.max_plus.damping = a.damping;
  s.max_plus.schedule = parse_schedule(a.schedule);
  s.restarts = a.restarts;
  s.seed = a.seed;
  s.deadline = Deadline::after_seconds(a.time_limit);
  s.max_plus.validate();
  const SolveResult r = solve_game(game, spec, s);

  nlohmann::json out;
  out["method"] = a.method;
  if (spec.uses_factor_graph()) out["fg"] = to_string(spec.variant);
  out["value"] = r.value;
  out["policy"] = r.policy.assignments;
  out["runtime_ms"] = r.runtime_ms;
  out["iterations"] = r.iterations;
  out["converged"] = r.converged;
  if (r.induced_width) out["induced_width"] = *r.induced_width;
  if (r.peak_cells) out["peak_cells"] = r.peak_cells;
  if (r.messages) out["messages"] = r.messages;
  out["evaluations"] = r.evaluations;
  std::cout << out.dump(2) << '\n';
  return 0;
}

int run_bench(const std::string& config, const std::string& out, bool no_timing) {
  const bench::ExperimentConfig cfg = bench::config_from_json(read_json_file(config));
  const auto rows = bench::run_experiment(cfg, !no_timing);
  const auto summary = bench::summarize(rows);
  bench::emit(rows, summary, out);
  std::size_t ok = 0;
  for (const auto& r : rows) ok += r.status == bench::RowStatus::kOk;
  std::cerr << rows.size() << " rows (" << ok << " ok) written to " << out << '\n';
  return 0;
}

int stats(const std::string& dir) {
  const fs::path path = fs::path(dir) / "results.csv";
  std::ifstream in(path);
  if (!in) throw FileError("cannot read " + path.string());
  const auto rows = bench::read_results(in);
  bench::write_summary(std::cout, bench::summarize(rows));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Collaborative graphical Bayesian game solvers and benchmarks"};
  app.require_subcommand(1);

  GenRandomArgs gr;
  auto* cmd_gr = app.add_subcommand("gen-random", "Generate random games");
  cmd_gr->add_option("--agents", gr.agents)->required();
  cmd_gr->add_option("--k", gr.k)->required();
  cmd_gr->add_option("--actions", gr.actions)->required();
  cmd_gr->add_option("--types", gr.types)->required();
  cmd_gr->add_option("--seed", gr.seed);
  cmd_gr->add_option("--count", gr.count);
  cmd_gr->add_option("--out", gr.out)->required();

  GenGffArgs gg;
  auto* cmd_gg = app.add_subcommand("gen-gff", "Generate Generalized Fire Fighting games");
  cmd_gg->add_option("--agents", gg.cfg.num_agents)->required();
  cmd_gg->add_option("--na", gg.cfg.actions_per_agent)->required();
  cmd_gg->add_option("--no", gg.cfg.observed_houses)->required();
  cmd_gg->add_option("--k", gg.cfg.max_agents_per_house)->required();
  cmd_gg->add_option("--density", gg.cfg.house_density);
  cmd_gg->add_option("--firelevels", gg.cfg.fire_levels);
  cmd_gg->add_option("--seed", gg.cfg.seed);
  cmd_gg->add_option("--count", gg.count);
  cmd_gg->add_option("--out", gg.out)->required();

  SolveArgs sv;
  auto* cmd_sv = app.add_subcommand("solve", "Solve one game file");
  cmd_sv->add_option("--game", sv.game)->required();
  cmd_sv->add_option("--method", sv.method, "BruteForce, NDP, MP, AM, CE-normal, CE-fast");
  cmd_sv->add_option("--fg", sv.fg)->check(CLI::IsMember({"ai", "ti", "ati"}, CLI::ignore_case));
  cmd_sv->add_option("--order", sv.order)->check(CLI::IsMember({"sequential", "min-degree", "min-fill"}));
  cmd_sv->add_option("--restarts", sv.restarts);
  cmd_sv->add_option("--max-iter", sv.max_iter);
  cmd_sv->add_option("--damping", sv.damping);
  cmd_sv->add_option("--schedule", sv.schedule)
      ->check(CLI::IsMember({"sequential-random", "sequential-fixed", "parallel"}));
  cmd_sv->add_option("--seed", sv.seed);
  cmd_sv->add_option("--time-limit", sv.time_limit, "seconds, 0 for none");
  cmd_sv->add_option("--cell-cap", sv.cell_cap);

  std::string bench_config, bench_out;
  bool no_timing = false;
  auto* cmd_bench = app.add_subcommand("bench", "Run an experiment");
  cmd_bench->add_option("--config", bench_config)->required();
  cmd_bench->add_option("--out", bench_out)->required();
  cmd_bench->add_flag("--no-timing", no_timing, "write zero runtimes for byte-exact comparison");

  std::string stats_in;
  auto* cmd_stats = app.add_subcommand("stats", "Summarize a results directory");
  cmd_stats->add_option("--in", stats_in)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (*cmd_gr) return gen_random(gr);
    if (*cmd_gg) return gen_gff(gg);
    if (*cmd_sv) return solve(sv);
    if (*cmd_bench) return run_bench(bench_config, bench_out, no_timing);
    if (*cmd_stats) return stats(stats_in);
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const InvalidArgument& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kExitConfig;
  } catch (const FileError& e) {
    std::cerr << "file error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const ResourceLimitError& e) {
    std::cerr << "resource limit: " << e.what() << '\n';
    return kExitLimit;
  } catch (const TimeoutError& e) {
    std::cerr << "time limit: " << e.what() << '\n';
    return kExitLimit;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
