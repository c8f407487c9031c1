#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "cgbg/errors.hpp"
#include "cgbg/game.hpp"
#include "json.hpp"

namespace cgbg {

inline nlohmann::json game_to_json(const CGBG& game) {
  nlohmann::json j;
  j["num_agents"] = game.num_agents;
  j["action_counts"] = game.action_counts;
  j["type_counts"] = game.type_counts;
  j["components"] = nlohmann::json::array();
  for (const Component& c : game.components) {
    j["components"].push_back({{"scope", c.scope}, {"type_probs", c.type_probs}, {"payoffs", c.payoffs}});
  }
  return j;
}

inline CGBG game_from_json(const nlohmann::json& j) {
  CGBG game;
  try {
    game.num_agents = j.at("num_agents").get<std::size_t>();
    game.action_counts = j.at("action_counts").get<std::vector<std::size_t>>();
    game.type_counts = j.at("type_counts").get<std::vector<std::size_t>>();
    for (const auto& jc : j.at("components")) {
      Component c;
      c.scope = jc.at("scope").get<std::vector<std::size_t>>();
      c.type_probs = jc.at("type_probs").get<std::vector<double>>();
      c.payoffs = jc.at("payoffs").get<std::vector<double>>();
      game.components.push_back(std::move(c));
    }
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("malformed game document: ") + e.what());
  }
  game.validate();
  return game;
}

// nlohmann::json prints doubles with the shortest round-trip representation.
inline std::string game_to_string(const CGBG& game) { return game_to_json(game).dump(); }

inline void write_json_file(const std::filesystem::path& path, const nlohmann::json& j) {
  std::ofstream out(path);
  if (!out) throw FileError("cannot write " + path.string());
  out << j.dump() << '\n';
  if (!out) throw FileError("write failed for " + path.string());
}

inline nlohmann::json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FileError("cannot read " + path.string());
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw InvalidArgument("parse error in " + path.string() + ": " + e.what());
  }
}

inline void write_game_file(const std::filesystem::path& path, const CGBG& game) {
  write_json_file(path, game_to_json(game));
}

inline CGBG read_game_file(const std::filesystem::path& path) {
  return game_from_json(read_json_file(path));
}

}  // namespace cgbg
