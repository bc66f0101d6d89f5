#include "matchpoint/records_io.hpp"

#include <fstream>
#include <istream>
#include <ostream>

#include "matchpoint/errors.hpp"

namespace matchpoint {

using nlohmann::json;

namespace {

const json& field(const json& j, const char* key, const std::string& path) {
  auto it = j.find(key);
  if (it == j.end()) throw SchemaError(path + "/" + key, "missing field");
  return *it;
}

Player player_from(const json& j, const char* key, const std::string& path) {
  const auto& v = field(j, key, path);
  if (v == "A") return Player::A;
  if (v == "B") return Player::B;
  throw SchemaError(path + "/" + key, "expected \"A\" or \"B\"");
}

template <typename T>
T typed(const json& j, const char* key, const std::string& path) {
  const auto& v = field(j, key, path);
  try {
    return v.get<T>();
  } catch (const json::exception& e) {
    throw SchemaError(path + "/" + key, e.what());
  }
}

Outcome outcome_from(const std::string& s, const std::string& path) {
  if (s == "error") return Outcome::Error;
  if (s == "winner") return Outcome::Winner;
  if (s == "in_play") return Outcome::InPlay;
  throw SchemaError(path, "unknown outcome \"" + s + "\"");
}

}  // namespace

json match_to_json(const MatchRecord& r) {
  json points = json::array();
  for (const auto& p : r.points) {
    json shots = json::array();
    for (const auto& s : p.shots) {
      json shot = {{"hitter", to_string(s.hitter)},
                   {"ctx", context_index(s.context)},
                   {"dir", s.direction.code()},
                   {"outcome", to_string(s.outcome)}};
      if (s.depth) shot["depth"] = *s.depth;
      shots.push_back(std::move(shot));
    }
    points.push_back({{"score_before", p.score_before},
                      {"server", to_string(p.server)},
                      {"side", to_string(p.side)},
                      {"serves", p.serves},
                      {"rally_length", p.rally_length},
                      {"winner", to_string(p.winner)},
                      {"capped", p.capped},
                      {"shots", std::move(shots)}});
  }
  return {{"schema_version", kRecordSchemaVersion},
          {"index", r.index},
          {"seed", r.seed},
          {"agent_a", r.agent_a},
          {"agent_b", r.agent_b},
          {"first_server", to_string(r.first_server)},
          {"final_score", r.final_score},
          {"winner", to_string(r.winner)},
          {"points", std::move(points)}};
}

MatchRecord match_from_json(const json& j) {
  if (!j.is_object()) throw SchemaError("", "expected object");
  if (typed<std::string>(j, "schema_version", "") != kRecordSchemaVersion) {
    throw SchemaError("/schema_version", "unsupported version");
  }
  MatchRecord r;
  r.index = typed<std::uint64_t>(j, "index", "");
  r.seed = typed<std::uint64_t>(j, "seed", "");
  r.agent_a = typed<std::string>(j, "agent_a", "");
  r.agent_b = typed<std::string>(j, "agent_b", "");
  r.first_server = player_from(j, "first_server", "");
  r.final_score = typed<std::string>(j, "final_score", "");
  r.winner = player_from(j, "winner", "");
  const auto& points = field(j, "points", "");
  if (!points.is_array()) throw SchemaError("/points", "expected array");
  for (std::size_t i = 0; i < points.size(); ++i) {
    const std::string path = "/points/" + std::to_string(i);
    const auto& pj = points[i];
    PointRecord p;
    p.score_before = typed<std::string>(pj, "score_before", path);
    p.server = player_from(pj, "server", path);
    auto side = typed<std::string>(pj, "side", path);
    if (side != "deuce" && side != "advantage") throw SchemaError(path + "/side", "bad side");
    p.side = side == "deuce" ? Side::Deuce : Side::Advantage;
    p.serves = typed<int>(pj, "serves", path);
    p.rally_length = typed<int>(pj, "rally_length", path);
    p.winner = player_from(pj, "winner", path);
    p.capped = typed<bool>(pj, "capped", path);
    const auto& shots = field(pj, "shots", path);
    if (!shots.is_array()) throw SchemaError(path + "/shots", "expected array");
    for (std::size_t k = 0; k < shots.size(); ++k) {
      const std::string spath = path + "/shots/" + std::to_string(k);
      const auto& sj = shots[k];
      try {
        ShotRecord s{player_from(sj, "hitter", spath),
                     context_at(typed<int>(sj, "ctx", spath)),
                     Direction::from_code(typed<int>(sj, "dir", spath)),
                     std::nullopt,
                     outcome_from(typed<std::string>(sj, "outcome", spath), spath + "/outcome")};
        if (sj.contains("depth")) s.depth = typed<int>(sj, "depth", spath);
        p.shots.push_back(std::move(s));
      } catch (const SchemaError&) {
        throw;
      } catch (const Error& e) {
        throw SchemaError(spath, e.what());
      }
    }
    r.points.push_back(std::move(p));
  }
  return r;
}

void write_jsonl(std::ostream& out, const std::vector<MatchRecord>& records) {
  for (const auto& r : records) out << match_to_json(r).dump() << '\n';
}

void write_jsonl(const std::filesystem::path& path, const std::vector<MatchRecord>& records) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FileError("cannot write " + path.string());
  write_jsonl(out, records);
}

std::vector<MatchRecord> read_jsonl(std::istream& in) {
  std::vector<MatchRecord> out;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (line.empty()) continue;
    const std::string prefix = "/line/" + std::to_string(n);
    try {
      out.push_back(match_from_json(json::parse(line)));
    } catch (const json::parse_error& e) {
      throw SchemaError(prefix, std::string("malformed JSON: ") + e.what());
    } catch (const SchemaError& e) {
      throw SchemaError(prefix + e.path(), e.reason());
    }
  }
  return out;
}

std::vector<MatchRecord> read_jsonl(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FileError("cannot open " + path.string());
  return read_jsonl(in);
}

json summary_to_json(const BatchSummary& s) {
  json sides = json::object();
  for (Player p : {Player::A, Player::B}) {
    const auto& t = s.sides[index_of(p)];
    sides[to_string(p)] = {{"points_won", t.points_won},
                           {"matches_won", t.matches_won},
                           {"point_win_rate", t.point_win_rate},
                           {"match_win_rate", t.match_win_rate},
                           {"point_ci95", {t.point_ci.low, t.point_ci.high}},
                           {"match_ci95", {t.match_ci.low, t.match_ci.high}}};
  }
  json failed = json::array();
  for (const auto& f : s.failed) failed.push_back({{"index", f.index}, {"message", f.message}});
  return {{"schema_version", kRecordSchemaVersion},
          {"n_matches", s.n_matches},
          {"completed", s.completed},
          {"failed", failed},
          {"points_total", s.points_total},
          {"capped_points", s.capped_points},
          {"sides", sides}};
}

}  // namespace matchpoint
