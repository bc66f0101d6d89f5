#pragma once

// Run configuration documents for the command-line tool.
//
// Simulation config:
//   {"schema_version": "1", "n_matches": 200, "master_seed": 7,
//    "alternate_first_server": true, "parallelism": 1,
//    "match": {"sets_to_win": 2, "games_per_set": 6, "tiebreak_at": 6,
//              "tiebreak_points": 7, "advantage_scoring": true, "rally_shot_cap": 500},
//    "agent_a": {"kind": "mcts", "iterations": 1000, "c": 1.4142, "selection": "uct",
//                "decision": "greedy_value", "rollout_cap": 200,
//                "self_model": "avg.json", "opponent_model": "djokovic.json"},
//    "agent_b": {"kind": "bot", "profile": "djokovic.json"}}
// "kind" is one of "bot", "mcts", "random". Profile paths are resolved
// against the config file's directory. "tiebreak_at": null disables tiebreaks.

#include <filesystem>
#include <map>
#include <string>

#include <json.hpp>

#include "matchpoint/agents.hpp"
#include "matchpoint/sim.hpp"

namespace matchpoint {

inline constexpr const char* kRunConfigSchemaVersion = "1";

// Loads each referenced profile once.
class ProfileCache {
 public:
  explicit ProfileCache(std::filesystem::path base_dir) : base_dir_(std::move(base_dir)) {}
  ProfileRef get(const std::string& path);

 private:
  std::filesystem::path base_dir_;
  std::map<std::filesystem::path, ProfileRef> loaded_;
};

// All parsers throw SchemaError with JSON pointer paths rooted at `path`.
MatchConfig match_config_from_json(const nlohmann::json& j, const std::string& path);
nlohmann::json match_config_to_json(const MatchConfig& config);
AgentSpec agent_spec_from_json(const nlohmann::json& j, const std::string& path,
                               ProfileCache& profiles);
BatchConfig batch_config_from_json(const nlohmann::json& j, ProfileCache& profiles);

// Reads and parses a simulation config file; profiles resolve next to it.
BatchConfig load_batch_config(const std::filesystem::path& path);

}  // namespace matchpoint
