#pragma once

// JSON-lines match records and batch summaries. Field names are frozen in
// docs/schema.md.

#include <filesystem>
#include <iosfwd>
#include <vector>

#include <json.hpp>

#include "matchpoint/sim.hpp"

namespace matchpoint {

inline constexpr const char* kRecordSchemaVersion = "1";

nlohmann::json match_to_json(const MatchRecord& record);
// Throws SchemaError.
MatchRecord match_from_json(const nlohmann::json& j);

// One compact JSON document per line, newline-terminated.
void write_jsonl(std::ostream& out, const std::vector<MatchRecord>& records);
void write_jsonl(const std::filesystem::path& path, const std::vector<MatchRecord>& records);
// Throws SchemaError with the line number in the path ("/line/<n>/...").
std::vector<MatchRecord> read_jsonl(std::istream& in);
std::vector<MatchRecord> read_jsonl(const std::filesystem::path& path);

nlohmann::json summary_to_json(const BatchSummary& summary);

}  // namespace matchpoint
