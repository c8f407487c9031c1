#pragma once

// Experiment configuration and the seeded runner.
//
// Games are numbered globally: grid points in row-major order over the axes
// (first axis slowest), then games within a point. Game g is generated with
// seed master_seed + g, and every method solves that same game with solver
// seed (master_seed + g) ^ kSolverSeedMix.

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "cgbg/errors.hpp"
#include "cgbg/game_io.hpp"
#include "cgbg/gff.hpp"
#include "cgbg/random_game.hpp"
#include "cgbg/solvers.hpp"
#include "json.hpp"

namespace cgbg::bench {

inline constexpr std::uint64_t kSolverSeedMix = 0x9E3779B97F4A7C15ULL;

enum class GeneratorKind { kRandom, kGff, kFile };

struct GridPoint {
  // random: agents, k, actions, types
  // gff: agents, na, no, k, density, firelevels
  std::size_t agents = 0, k = 0, actions = 0, types = 0;
  std::size_t observed = 0, fire_levels = 0;
  double density = 0;
  std::size_t file_index = 0;
};

struct ExperimentConfig {
  GeneratorKind generator = GeneratorKind::kRandom;
  std::vector<std::string> files;  // file generator: one game per path

  std::vector<std::size_t> agents{3}, k{2}, actions{2}, types{2};
  std::vector<std::size_t> na{2}, no{1}, firelevels{3};
  std::vector<double> density{1.2};

  std::size_t games_per_point = 1000;
  std::vector<std::string> methods;
  double time_limit = 5;  // seconds per (game, method); <= 0 disables
  std::size_t cell_cap = kDefaultMaterializationCap;
  std::size_t enumeration_cap = kDefaultEnumerationCap;
  std::uint64_t master_seed = 0;
  std::string reference_method = "MP-ATI";  // empty disables normalization
  std::size_t workers = 1;

  MaxPlusParams max_plus;  // seed and deadline are set per solve
  std::size_t restarts = 10;

  void validate() const {
    if (methods.empty()) throw ConfigError("experiment: methods must be nonempty");
    if (games_per_point == 0) throw ConfigError("experiment: games_per_point must be at least 1");
    if (workers == 0) throw ConfigError("experiment: workers must be at least 1");
    for (const auto& m : methods) {
      try {
        parse_method(m);
      } catch (const InvalidArgument& e) {
        throw ConfigError(std::string("experiment: ") + e.what());
      }
    }
    if (!reference_method.empty() &&
        std::find(methods.begin(), methods.end(), reference_method) == methods.end()) {
      throw ConfigError("experiment: reference method '" + reference_method + "' is not in the methods list");
    }
    if (generator == GeneratorKind::kFile && files.empty()) throw ConfigError("experiment: file generator needs files");
    try {
      max_plus.validate();
    } catch (const InvalidArgument& e) {
      throw ConfigError(std::string("experiment: ") + e.what());
    }
    auto nonempty = [](const auto& axis, const char* name) {
      if (axis.empty()) throw ConfigError(std::string("experiment: grid axis '") + name + "' is empty");
    };
    nonempty(agents, "agents");
    nonempty(k, "k");
    if (generator == GeneratorKind::kRandom) {
      nonempty(actions, "actions");
      nonempty(types, "types");
    } else if (generator == GeneratorKind::kGff) {
      nonempty(na, "na");
      nonempty(no, "no");
      nonempty(firelevels, "firelevels");
      nonempty(density, "density");
    }
  }

  std::vector<GridPoint> grid() const {
    std::vector<GridPoint> out;
    switch (generator) {
      case GeneratorKind::kRandom:
        for (auto n : agents)
          for (auto kk : k)
            for (auto a : actions)
              for (auto t : types) out.push_back({n, kk, a, t, 0, 0, 0, 0});
        break;
      case GeneratorKind::kGff:
        for (auto n : agents)
          for (auto a : na)
            for (auto o : no)
              for (auto kk : k)
                for (auto d : density)
                  for (auto f : firelevels) out.push_back({n, kk, a, std::size_t{1} << o, o, f, d, 0});
        break;
      case GeneratorKind::kFile:
        for (std::size_t i = 0; i < files.size(); ++i) out.push_back({0, 0, 0, 0, 0, 0, 0, i});
        break;
    }
    return out;
  }

  std::size_t games_at_point() const { return generator == GeneratorKind::kFile ? 1 : games_per_point; }
};

namespace detail {

template <typename T>
std::vector<T> axis(const nlohmann::json& grid, const char* name, std::vector<T> fallback) {
  if (!grid.contains(name)) return fallback;
  const auto& v = grid.at(name);
  if (v.is_array()) return v.get<std::vector<T>>();
  return {v.get<T>()};
}

}  // namespace detail

inline ExperimentConfig config_from_json(const nlohmann::json& j) {
  ExperimentConfig cfg;
  try {
    const std::string gen = j.value("generator", std::string("random"));
    if (gen == "random") {
      cfg.generator = GeneratorKind::kRandom;
    } else if (gen == "gff") {
      cfg.generator = GeneratorKind::kGff;
    } else if (gen == "file") {
      cfg.generator = GeneratorKind::kFile;
      cfg.files = j.at("files").get<std::vector<std::string>>();
    } else {
      throw ConfigError("experiment: unknown generator '" + gen + "'");
    }
    const nlohmann::json grid = j.value("grid", nlohmann::json::object());
    if (!grid.is_object()) throw ConfigError("experiment: grid must be an object");
    cfg.agents = detail::axis(grid, "agents", cfg.agents);
    cfg.k = detail::axis(grid, "k", cfg.k);
    cfg.actions = detail::axis(grid, "actions", cfg.actions);
    cfg.types = detail::axis(grid, "types", cfg.types);
    cfg.na = detail::axis(grid, "na", cfg.na);
    cfg.no = detail::axis(grid, "no", cfg.no);
    cfg.density = detail::axis(grid, "density", cfg.density);
    cfg.firelevels = detail::axis(grid, "firelevels", cfg.firelevels);

    cfg.games_per_point = j.value("games_per_point", cfg.games_per_point);
    cfg.methods = j.at("methods").get<std::vector<std::string>>();
    cfg.time_limit = j.value("time_limit", cfg.time_limit);
    cfg.cell_cap = j.value("cell_cap", cfg.cell_cap);
    cfg.enumeration_cap = j.value("enumeration_cap", cfg.enumeration_cap);
    cfg.master_seed = j.value("master_seed", cfg.master_seed);
    cfg.reference_method = j.value("reference_method", cfg.reference_method);
    cfg.workers = j.value("workers", cfg.workers);
    cfg.restarts = j.value("restarts", cfg.restarts);
    cfg.max_plus.restarts = cfg.restarts;
    cfg.max_plus.max_iterations = j.value("max_iterations", cfg.max_plus.max_iterations);
    cfg.max_plus.damping = j.value("damping", cfg.max_plus.damping);
    if (j.contains("schedule")) cfg.max_plus.schedule = parse_schedule(j.at("schedule").get<std::string>());
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("experiment: malformed config: ") + e.what());
  } catch (const InvalidArgument& e) {
    throw ConfigError(std::string("experiment: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

enum class RowStatus { kOk, kTimeout, kCapExceeded };

inline std::string_view to_string(RowStatus s) {
  switch (s) {
    case RowStatus::kOk: return "ok";
    case RowStatus::kTimeout: return "timeout";
    case RowStatus::kCapExceeded: return "cap-exceeded";
  }
  return "?";
}

inline RowStatus parse_row_status(std::string_view s) {
  if (s == "ok") return RowStatus::kOk;
  if (s == "timeout") return RowStatus::kTimeout;
  if (s == "cap-exceeded") return RowStatus::kCapExceeded;
  throw InvalidArgument("unknown row status '" + std::string(s) + "'");
}

struct ResultRow {
  std::size_t game_id = 0;
  std::uint64_t seed = 0;
  std::size_t n = 0, k = 0, num_actions = 0, num_types = 0;
  std::string method;
  std::string fg_variant;  // empty for methods without a factor graph
  std::optional<double> value;
  std::optional<double> normalized_value;  // value / reference, when reference > 0 and value >= 0
  double runtime_ms = 0;
  bool converged = false;
  std::size_t iterations = 0;
  std::optional<std::size_t> induced_width;
  RowStatus status = RowStatus::kOk;
  std::optional<double> value_delta;  // value - reference
};

struct LoadedGame {
  CGBG game;
  GridPoint shape;  // n, k, actions, types as reported in rows
};

inline LoadedGame make_game(const ExperimentConfig& cfg, const GridPoint& p, std::uint64_t seed) {
  LoadedGame out;
  out.shape = p;
  switch (cfg.generator) {
    case GeneratorKind::kRandom:
      out.game = generate_random_cgbg({p.agents, p.k, p.actions, p.types, seed});
      break;
    case GeneratorKind::kGff: {
      GffConfig g;
      g.num_agents = p.agents;
      g.actions_per_agent = p.actions;
      g.observed_houses = p.observed;
      g.max_agents_per_house = p.k;
      g.house_density = p.density;
      g.fire_levels = p.fire_levels;
      g.seed = seed;
      out.game = generate_gff(g).game;
      break;
    }
    case GeneratorKind::kFile: {
      out.game = read_game_file(cfg.files[p.file_index]);
      const CGBG& g = out.game;
      out.shape.agents = g.num_agents;
      for (const auto& c : g.components) out.shape.k = std::max(out.shape.k, c.scope.size());
      out.shape.actions = *std::max_element(g.action_counts.begin(), g.action_counts.end());
      out.shape.types = *std::max_element(g.type_counts.begin(), g.type_counts.end());
      break;
    }
  }
  return out;
}

inline SolverSettings settings_for(const ExperimentConfig& cfg, std::uint64_t game_seed) {
  SolverSettings s;
  s.enumeration_cap = cfg.enumeration_cap;
  s.materialization_cap = cfg.cell_cap;
  s.ndp_cell_cap = cfg.cell_cap;
  s.max_plus = cfg.max_plus;
  s.restarts = cfg.restarts;
  s.seed = game_seed ^ kSolverSeedMix;
  return s;
}

// All method rows for one game, in the configured method order.
inline std::vector<ResultRow> run_game(const ExperimentConfig& cfg, const GridPoint& p, std::size_t game_id,
                                       bool record_timing = true) {
  const std::uint64_t seed = cfg.master_seed + game_id;
  const LoadedGame lg = make_game(cfg, p, seed);
  std::vector<ResultRow> rows;
  std::optional<double> reference;
  for (const std::string& name : cfg.methods) {
    const MethodSpec spec = parse_method(name);
    ResultRow row;
    row.game_id = game_id;
    row.seed = seed;
    row.n = lg.shape.agents;
    row.k = lg.shape.k;
    row.num_actions = lg.shape.actions;
    row.num_types = lg.shape.types;
    row.method = name;
    if (spec.uses_factor_graph()) row.fg_variant = std::string(to_string(spec.variant));
    SolverSettings settings = settings_for(cfg, seed);
    settings.deadline = Deadline::after_seconds(cfg.time_limit);
    Stopwatch clock;
    try {
      const SolveResult r = solve_game(lg.game, spec, settings);
      row.value = r.value;
      row.converged = r.converged;
      row.iterations = r.iterations;
      row.induced_width = r.induced_width;
    } catch (const TimeoutError&) {
      row.status = RowStatus::kTimeout;
    } catch (const ResourceLimitError&) {
      row.status = RowStatus::kCapExceeded;
    }
    row.runtime_ms = record_timing ? clock.elapsed_ms() : 0.0;
    if (name == cfg.reference_method && row.value) reference = row.value;
    rows.push_back(std::move(row));
  }
  if (reference) {
    for (ResultRow& row : rows) {
      if (!row.value) continue;
      row.value_delta = *row.value - *reference;
      if (*reference > 0 && *row.value >= 0) {
        row.normalized_value = row.method == cfg.reference_method ? 1.0 : *row.value / *reference;
      }
    }
  }
  return rows;
}

// Rows ordered by (grid point, game_id, method) whatever order workers finish in.
inline std::vector<ResultRow> run_experiment(const ExperimentConfig& cfg, bool record_timing = true) {
  cfg.validate();
  const auto points = cfg.grid();
  const std::size_t per_point = cfg.games_at_point();
  const std::size_t total = points.size() * per_point;
  std::vector<std::vector<ResultRow>> slots(total);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  auto worker = [&]() {
    for (;;) {
      const std::size_t g = next.fetch_add(1);
      if (g >= total || failed.load()) return;
      try {
        slots[g] = run_game(cfg, points[g / per_point], g, record_timing);
      } catch (...) {
        if (!failed.exchange(true)) failure = std::current_exception();
        return;
      }
    }
  };
  const std::size_t threads = std::min(cfg.workers, std::max<std::size_t>(total, 1));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);
  std::vector<ResultRow> rows;
  for (auto& s : slots) {
    for (auto& r : s) rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace cgbg::bench
