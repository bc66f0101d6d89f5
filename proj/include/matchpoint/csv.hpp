#pragma once

#include <istream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "matchpoint/ingest.hpp"

namespace matchpoint {

// RFC 4180 reader: quoted fields, doubled quotes, CRLF, embedded newlines.
class CsvReader {
 public:
  explicit CsvReader(std::istream& in, char delimiter = ',') : in_(in), delimiter_(delimiter) {}

  // False at end of input. Blank lines are skipped.
  bool next(std::vector<std::string>& fields);
  // 1-based line number where the last record started.
  std::size_t line() const { return record_line_; }

 private:
  std::istream& in_;
  char delimiter_;
  std::size_t line_ = 1;
  std::size_t record_line_ = 0;
};

// Maps raw charting CSV columns onto RallyRow fields. Defaults follow the
// public Match Charting Project points files.
struct ColumnMapping {
  enum class ServerFormat { Name, Index };
  enum class SideFormat { Label, Points };

  std::string match_id = "match_id";
  std::string first_serve = "1st";
  std::string second_serve = "2nd";
  // Index: column holds 1 or 2 and player names come from the last two
  // '-'-separated tokens of match_id (underscores become spaces).
  // Name: column holds the server's name and `returner` names the other column.
  std::string server = "Svr";
  ServerFormat server_format = ServerFormat::Index;
  std::string returner;
  // Points: score before the point ("30-15", "AD-40", tiebreak "3-2"); the
  // parity of points played gives the side. Label: "deuce"/"ad" style values.
  std::string side = "Pts";
  SideFormat side_format = SideFormat::Points;
  char delimiter = ',';
  // Inclusive range on the leading YYYY of match_id.
  std::optional<std::pair<int, int>> years;

  // Throws SchemaError.
  static ColumnMapping from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

// Parses a "Pts"-style score into the side of the next serve.
std::optional<Side> side_from_points(const std::string& pts);

class RallyRowReader {
 public:
  enum class Status { Row, Unreadable, Filtered, End };

  // Reads the header; throws SchemaError when a mapped column is missing.
  RallyRowReader(std::istream& in, ColumnMapping mapping);

  Status next(RallyRow& row);
  const std::string& last_error() const { return last_error_; }

 private:
  ColumnMapping mapping_;
  CsvReader reader_;
  std::vector<std::string> fields_;
  std::string last_error_;
  int match_id_col_ = -1, first_col_ = -1, second_col_ = -1, server_col_ = -1,
      returner_col_ = -1, side_col_ = -1;
  std::size_t width_ = 0;
};

}  // namespace matchpoint
