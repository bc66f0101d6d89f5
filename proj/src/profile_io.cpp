#include "matchpoint/profile_io.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "matchpoint/errors.hpp"

namespace matchpoint {

using nlohmann::json;

namespace {

const json& member(const json& obj, const char* key, const std::string& path) {
  auto it = obj.find(key);
  if (it == obj.end()) throw SchemaError(path + "/" + key, "missing field");
  return *it;
}

std::string string_member(const json& obj, const char* key, const std::string& path) {
  const auto& v = member(obj, key, path);
  if (!v.is_string()) throw SchemaError(path + "/" + key, "expected string");
  return v.get<std::string>();
}

Side side_from(const json& obj, const std::string& path) {
  auto s = string_member(obj, "side", path);
  if (s == "deuce") return Side::Deuce;
  if (s == "advantage") return Side::Advantage;
  throw SchemaError(path + "/side", "expected \"deuce\" or \"advantage\", got \"" + s + "\"");
}

ServeNumber serve_number_from(const json& obj, const std::string& path) {
  auto s = string_member(obj, "serve_number", path);
  if (s == "first") return ServeNumber::First;
  if (s == "second") return ServeNumber::Second;
  throw SchemaError(path + "/serve_number", "expected \"first\" or \"second\", got \"" + s + "\"");
}

Direction direction_from(const json& obj, const char* key, bool serve, const std::string& path) {
  const auto& v = member(obj, key, path);
  if (!v.is_number_integer()) throw SchemaError(path + "/" + key, "expected integer");
  int code = v.get<int>();
  try {
    return serve ? Direction::serve(code) : Direction::rally(code);
  } catch (const EncodingError& e) {
    throw SchemaError(path + "/" + key, e.what());
  }
}

}  // namespace

json context_to_json(const HitterContext& ctx) {
  if (const auto* s = std::get_if<ServeContext>(&ctx)) {
    return {{"variant", "serve"}, {"side", to_string(s->side)},
            {"serve_number", to_string(s->serve_number)}};
  }
  if (const auto* r = std::get_if<ReturnContext>(&ctx)) {
    return {{"variant", "return"},
            {"side", to_string(r->side)},
            {"serve_number", to_string(r->serve_number)},
            {"serve_direction", r->serve_direction.code()}};
  }
  const auto& y = std::get<RallyContext>(ctx);
  return {{"variant", "rally"},
          {"hitter_served", y.hitter_served},
          {"serve_number", to_string(y.serve_number)},
          {"previous_direction", y.previous_direction.code()}};
}

HitterContext context_from_json(const json& j, const std::string& path) {
  if (!j.is_object()) throw SchemaError(path, "expected object");
  auto variant = string_member(j, "variant", path);
  if (variant == "serve") return ServeContext{side_from(j, path), serve_number_from(j, path)};
  if (variant == "return") {
    return ReturnContext{side_from(j, path), serve_number_from(j, path),
                         direction_from(j, "serve_direction", true, path)};
  }
  if (variant == "rally") {
    const auto& hs = member(j, "hitter_served", path);
    if (!hs.is_boolean()) throw SchemaError(path + "/hitter_served", "expected boolean");
    return RallyContext{hs.get<bool>(), serve_number_from(j, path),
                        direction_from(j, "previous_direction", false, path)};
  }
  throw SchemaError(path + "/variant", "unknown variant \"" + variant + "\"");
}

json profile_to_json(const SkillProfile& profile) {
  json tables = json::array();
  for (const auto& ctx : all_contexts()) {
    const auto* grid = profile.find(ctx);
    if (grid == nullptr) continue;
    json rows = json::array();
    for (const auto& row : *grid) rows.push_back({row[0], row[1], row[2]});
    tables.push_back({{"context", context_to_json(ctx)}, {"probabilities", rows}});
  }
  return {{"schema_version", kProfileSchemaVersion},
          {"provenance", profile.provenance()},
          {"tables", tables}};
}

SkillProfile profile_from_json_unchecked(const json& doc) {
  if (!doc.is_object()) throw SchemaError("", "expected object");
  auto version = string_member(doc, "schema_version", "");
  if (version != kProfileSchemaVersion) {
    throw SchemaError("/schema_version", "unsupported version \"" + version + "\"");
  }
  SkillProfile profile;
  if (auto it = doc.find("provenance"); it != doc.end()) {
    if (!it->is_string()) throw SchemaError("/provenance", "expected string");
    profile.set_provenance(it->get<std::string>());
  }
  const auto& tables = member(doc, "tables", "");
  if (!tables.is_array()) throw SchemaError("/tables", "expected array");
  for (std::size_t i = 0; i < tables.size(); ++i) {
    const std::string path = "/tables/" + std::to_string(i);
    const auto& entry = tables[i];
    if (!entry.is_object()) throw SchemaError(path, "expected object");
    HitterContext ctx = context_from_json(member(entry, "context", path), path + "/context");
    if (profile.contains(ctx)) {
      throw SchemaError(path + "/context", "duplicate context " + to_string(ctx));
    }
    const auto& probs = member(entry, "probabilities", path);
    const std::string ppath = path + "/probabilities";
    if (!probs.is_array() || probs.size() != 3) throw SchemaError(ppath, "expected 3 rows");
    ProbabilityGrid grid{};
    for (std::size_t d = 0; d < 3; ++d) {
      const auto& row = probs[d];
      const std::string rpath = ppath + "/" + std::to_string(d);
      if (!row.is_array() || row.size() != 3) throw SchemaError(rpath, "expected 3 entries");
      for (std::size_t o = 0; o < 3; ++o) {
        if (!row[o].is_number()) {
          throw SchemaError(rpath + "/" + std::to_string(o), "expected number");
        }
        grid[d][o] = row[o].get<double>();
      }
    }
    profile.set(ctx, grid);
  }
  return profile;
}

SkillProfile profile_from_json(const json& doc) {
  SkillProfile profile = profile_from_json_unchecked(doc);
  auto report = validate_profile(profile);
  if (report.ok()) return profile;

  // Point at the table entry when it exists, else at the array itself.
  const auto& issue = report.issues.front();
  std::string path = "/tables";
  const auto& tables = doc["tables"];
  for (std::size_t i = 0; i < tables.size(); ++i) {
    if (context_from_json(tables[i]["context"], "") == issue.context) {
      path += "/" + std::to_string(i) + "/probabilities";
      break;
    }
  }
  std::string msg = issue.describe();
  if (report.issues.size() > 1) {
    msg += " (+" + std::to_string(report.issues.size() - 1) + " more)";
  }
  throw SchemaError(path, msg);
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FileError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json parse_json_document(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw SchemaError("", std::string("malformed JSON: ") + e.what());
  }
}

void save_profile(const SkillProfile& profile, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FileError("cannot write " + path.string());
  out << profile_to_json(profile).dump(2) << '\n';
}

SkillProfile load_profile(const std::filesystem::path& path) {
  return profile_from_json(parse_json_document(read_text_file(path)));
}

json report_to_json(const IngestReport& report) {
  json hist = json::object();
  for (const auto& [type, n] : report.shot_type_histogram) hist[std::string(1, type)] = n;
  json categories = json::object();
  for (const auto& [name, pct] : report.shot_category_percent) categories[name] = pct;
  json share = json::array();
  for (const auto& p : report.player_share) {
    share.push_back({{"player", p.name}, {"rallies", p.rallies}, {"percent", p.percent}});
  }
  return {{"rallies", report.rallies},
          {"skipped", report.skipped},
          {"shot_type_histogram", hist},
          {"shot_category_percent", categories},
          {"player_share", share}};
}

}  // namespace matchpoint
