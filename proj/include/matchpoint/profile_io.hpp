#pragma once

// Canonical JSON documents for skill profiles and ingest reports.
//
// Profile document:
//   {"schema_version": "1",
//    "provenance": "...",
//    "tables": [ {"context": {"variant": "serve", "side": "deuce", "serve_number": "first"},
//                 "probabilities": [[e, w, i], [e, w, i], [e, w, i]]}, ... 28 entries ]}
// Return contexts add "serve_direction" (4-6); rally contexts carry
// "hitter_served" (bool), "serve_number" and "previous_direction" (1-3).
// Rows are direction 1..3 (serve contexts: 4..6), columns Error, Winner, InPlay.

#include <filesystem>
#include <string>

#include <json.hpp>

#include "matchpoint/ingest.hpp"
#include "matchpoint/shot_model.hpp"

namespace matchpoint {

inline constexpr const char* kProfileSchemaVersion = "1";

nlohmann::json context_to_json(const HitterContext& ctx);
// Throws SchemaError with a JSON pointer rooted at `path`.
HitterContext context_from_json(const nlohmann::json& j, const std::string& path);

nlohmann::json profile_to_json(const SkillProfile& profile);
// Structural checks only; contexts may be missing and rows may be off.
SkillProfile profile_from_json_unchecked(const nlohmann::json& doc);
// Structural checks plus validate_profile. Throws SchemaError.
SkillProfile profile_from_json(const nlohmann::json& doc);

void save_profile(const SkillProfile& profile, const std::filesystem::path& path);
SkillProfile load_profile(const std::filesystem::path& path);

nlohmann::json report_to_json(const IngestReport& report);

// Reads a whole file; throws Error when it cannot be opened.
std::string read_text_file(const std::filesystem::path& path);
// Parses JSON, mapping syntax errors to SchemaError at "".
nlohmann::json parse_json_document(const std::string& text);

}  // namespace matchpoint
