#include "matchpoint/config_io.hpp"

#include <algorithm>
#include <initializer_list>

#include "matchpoint/errors.hpp"
#include "matchpoint/profile_io.hpp"

namespace matchpoint {

using nlohmann::json;

ProfileRef ProfileCache::get(const std::string& path) {
  std::filesystem::path p = path;
  if (p.is_relative()) p = base_dir_ / p;
  p = p.lexically_normal();
  auto it = loaded_.find(p);
  if (it != loaded_.end()) return it->second;
  auto profile = std::make_shared<const SkillProfile>(load_profile(p));
  loaded_.emplace(p, profile);
  return profile;
}

namespace {

void reject_unknown(const json& j, const std::string& path,
                    std::initializer_list<const char*> known) {
  for (const auto& [key, value] : j.items()) {
    if (std::none_of(known.begin(), known.end(), [&](const char* k) { return key == k; })) {
      throw SchemaError(path + "/" + key, "unknown field");
    }
  }
}

template <typename T>
T get_or(const json& j, const char* key, const std::string& path, T fallback) {
  auto it = j.find(key);
  if (it == j.end()) return fallback;
  try {
    return it->get<T>();
  } catch (const json::exception&) {
    throw SchemaError(path + "/" + key, "wrong type");
  }
}

template <typename T>
T required(const json& j, const char* key, const std::string& path) {
  if (!j.contains(key)) throw SchemaError(path + "/" + key, "missing field");
  return get_or<T>(j, key, path, T{});
}

int get_int(const json& j, const char* key, const std::string& path, int fallback) {
  auto it = j.find(key);
  if (it == j.end()) return fallback;
  if (!it->is_number_integer()) throw SchemaError(path + "/" + key, "expected integer");
  return it->get<int>();
}

double get_number(const json& j, const char* key, const std::string& path, double fallback) {
  auto it = j.find(key);
  if (it == j.end()) return fallback;
  if (!it->is_number()) throw SchemaError(path + "/" + key, "expected number");
  return it->get<double>();
}

void check_version(const json& j, const std::string& path) {
  auto v = get_or<std::string>(j, "schema_version", path, kRunConfigSchemaVersion);
  if (v != kRunConfigSchemaVersion) {
    throw SchemaError(path + "/schema_version", "unsupported version \"" + v + "\"");
  }
}

ProfileRef profile_at(const json& j, const char* key, const std::string& path,
                      ProfileCache& profiles) {
  auto file = required<std::string>(j, key, path);
  try {
    return profiles.get(file);
  } catch (const SchemaError& e) {
    throw SchemaError(path + "/" + key, file + e.path() + ": " + e.reason());
  }
}

}  // namespace

MatchConfig match_config_from_json(const json& j, const std::string& path) {
  if (!j.is_object()) throw SchemaError(path, "expected object");
  reject_unknown(j, path,
                 {"sets_to_win", "games_per_set", "tiebreak_at", "tiebreak_points",
                  "advantage_scoring", "rally_shot_cap"});
  MatchConfig c;
  c.sets_to_win = get_int(j, "sets_to_win", path, c.sets_to_win);
  c.games_per_set = get_int(j, "games_per_set", path, c.games_per_set);
  if (auto it = j.find("tiebreak_at"); it != j.end()) {
    if (it->is_null()) {
      c.tiebreak_at.reset();
    } else {
      c.tiebreak_at = get_int(j, "tiebreak_at", path, 6);
    }
  }
  c.tiebreak_points = get_int(j, "tiebreak_points", path, c.tiebreak_points);
  c.advantage_scoring = get_or<bool>(j, "advantage_scoring", path, c.advantage_scoring);
  c.rally_shot_cap = get_int(j, "rally_shot_cap", path, c.rally_shot_cap);
  try {
    c.validate();
  } catch (const ConfigError& e) {
    throw SchemaError(path, e.what());
  }
  return c;
}

json match_config_to_json(const MatchConfig& c) {
  return {{"sets_to_win", c.sets_to_win},
          {"games_per_set", c.games_per_set},
          {"tiebreak_at", c.tiebreak_at ? json(*c.tiebreak_at) : json(nullptr)},
          {"tiebreak_points", c.tiebreak_points},
          {"advantage_scoring", c.advantage_scoring},
          {"rally_shot_cap", c.rally_shot_cap}};
}

AgentSpec agent_spec_from_json(const json& j, const std::string& path, ProfileCache& profiles) {
  if (!j.is_object()) throw SchemaError(path, "expected object");
  auto kind = required<std::string>(j, "kind", path);
  if (kind == "bot" || kind == "random") {
    reject_unknown(j, path, {"kind", "profile"});
    auto source = required<std::string>(j, "profile", path);
    auto profile = profile_at(j, "profile", path, profiles);
    if (kind == "bot") return BotSpec{profile, source};
    return UniformRandomSpec{profile, source};
  }
  if (kind != "mcts") {
    throw SchemaError(path + "/kind", "expected \"bot\", \"mcts\" or \"random\"");
  }
  reject_unknown(j, path,
                 {"kind", "iterations", "c", "selection", "decision", "rollout_cap", "self_model",
                  "opponent_model"});
  MctsConfig m;
  m.iterations = get_int(j, "iterations", path, m.iterations);
  m.exploration_c = get_number(j, "c", path, m.exploration_c);
  m.rollout_cap = get_int(j, "rollout_cap", path, m.rollout_cap);
  auto selection = get_or<std::string>(j, "selection", path, "uct");
  if (selection == "uct") {
    m.selection = SelectionPolicy::Uct;
  } else if (selection == "random") {
    m.selection = SelectionPolicy::Random;
  } else if (selection == "greedy") {
    m.selection = SelectionPolicy::Greedy;
  } else {
    throw SchemaError(path + "/selection", "expected \"uct\", \"random\" or \"greedy\"");
  }
  auto decision = get_or<std::string>(j, "decision", path, "greedy_value");
  if (decision == "greedy_value") {
    m.decision = DecisionPolicy::GreedyValue;
  } else if (decision == "max_visits") {
    m.decision = DecisionPolicy::MaxVisits;
  } else {
    throw SchemaError(path + "/decision", "expected \"greedy_value\" or \"max_visits\"");
  }
  m.self_model_source = required<std::string>(j, "self_model", path);
  m.opponent_model_source = required<std::string>(j, "opponent_model", path);
  m.self_model = profile_at(j, "self_model", path, profiles);
  m.opponent_model = profile_at(j, "opponent_model", path, profiles);
  try {
    m.validate();
  } catch (const ConfigError& e) {
    throw SchemaError(path, e.what());
  }
  return m;
}

BatchConfig batch_config_from_json(const json& j, ProfileCache& profiles) {
  if (!j.is_object()) throw SchemaError("", "expected object");
  check_version(j, "");
  reject_unknown(j, "",
                 {"schema_version", "n_matches", "master_seed", "alternate_first_server",
                  "parallelism", "match", "agent_a", "agent_b"});
  for (const char* key : {"agent_a", "agent_b"}) {
    if (!j.contains(key)) throw SchemaError(std::string("/") + key, "missing field");
  }
  BatchConfig b;
  b.n_matches = get_int(j, "n_matches", "", 1);
  b.master_seed = get_or<std::uint64_t>(j, "master_seed", "", 0);
  if (j.contains("match")) b.match = match_config_from_json(j["match"], "/match");
  b.agent_a = agent_spec_from_json(j["agent_a"], "/agent_a", profiles);
  b.agent_b = agent_spec_from_json(j["agent_b"], "/agent_b", profiles);
  b.alternate_first_server = get_or<bool>(j, "alternate_first_server", "", true);
  b.parallelism = get_int(j, "parallelism", "", 1);
  if (b.n_matches <= 0) throw SchemaError("/n_matches", "must be positive");
  if (b.parallelism < 1) throw SchemaError("/parallelism", "must be >= 1");
  return b;
}

BatchConfig load_batch_config(const std::filesystem::path& path) {
  json doc = parse_json_document(read_text_file(path));
  ProfileCache profiles(path.parent_path());
  return batch_config_from_json(doc, profiles);
}

}  // namespace matchpoint
