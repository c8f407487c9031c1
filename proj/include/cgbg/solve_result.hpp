#pragma once

#include <cstddef>
#include <optional>
#include <string>

#include "cgbg/game.hpp"

namespace cgbg {

struct SolveResult {
  JointPolicy policy;
  double value = 0;  // always evaluate_policy(game, policy)
  double runtime_ms = 0;
  std::size_t iterations = 0;  // sweeps, CE iterations, or message-passing iterations
  bool converged = true;
  std::optional<std::size_t> induced_width;
  std::size_t peak_cells = 0;    // largest table created (NDP)
  std::size_t messages = 0;      // messages sent (Max-Plus)
  std::size_t evaluations = 0;   // exact policy evaluations
  std::size_t restarts = 0;
};

}  // namespace cgbg
