#pragma once

// Charting-notation rally parsing, context classification, count
// accumulation and profile estimation.

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "matchpoint/shot_model.hpp"

namespace matchpoint {

struct RallyRow {
  std::string match_id;
  std::string server_name;
  std::string returner_name;
  Side side = Side::Deuce;
  std::string first_serve_string;
  std::optional<std::string> second_serve_string;
};

enum class ServeTerminal { Fault, Ace, InPlay };

struct ServeAttempt {
  ServeNumber serve_number;
  Direction direction;
  ServeTerminal terminal;
};

struct ParsedShot {
  char shot_type;
  Direction direction;
  std::optional<int> depth;  // visualization only, never fed into probabilities
  Outcome terminal;          // Winner, Error or InPlay
};

struct ParsedRally {
  std::vector<ServeAttempt> serves;
  std::vector<ParsedShot> shots;
  int rally_length = 0;
};

// Grammar (one serve attempt per string):
//   serve    := [4-6] serve-end
//   serve-end:= '*' | '#' | [nwdx]+ ['@' | '#']? | '@' | shot+ | <empty only if shots follow>
//   shot     := type [1-3] [7-9]? ( '*' | '@' | '#' | [nwdx]+ ['@' | '#']? )?
//   type     := one of "fbrsvzopuylmhijktq"
// On a serve, '*' and '#' end the point for the server (ace / unreturnable),
// and an error-location letter or '@' marks a fault. On a shot, '*' is a
// winner and '@', '#' or an error-location letter is an error. Only the last
// element may carry a terminal, and the last element must carry one.
ParsedRally parse_rally_string(std::string_view s, ServeNumber serve_number);

// Combines the first-serve string and, when the first serve faulted, the
// second-serve string. Throws ParseError (offset into the offending string)
// when the row is inconsistent.
ParsedRally parse_row(const RallyRow& row);

bool is_groundstroke(char shot_type);

struct ClassifiedShot {
  std::string hitter;
  HitterContext context;
  Direction direction;
  Outcome outcome;
  char shot_type = 0;  // 0 for serves
};

std::vector<ClassifiedShot> classify_shots(const ParsedRally& rally, const RallyRow& row);

using CountGrid = std::array<std::array<std::int64_t, 3>, 3>;

struct CountTables {
  std::array<CountGrid, kContextCount> counts{};
  std::int64_t rally_count = 0;
  std::int64_t skipped_rallies = 0;
  std::int64_t classified_shots = 0;
  std::map<char, std::int64_t> shot_type_histogram;
  std::map<std::string, std::int64_t> player_share;

  CountGrid& at(const HitterContext& ctx) { return counts[context_index(ctx)]; }
  const CountGrid& at(const HitterContext& ctx) const { return counts[context_index(ctx)]; }
  std::int64_t cell_total() const;
  std::int64_t context_total(const HitterContext& ctx) const;

  // Cell-wise addition; associative and commutative.
  CountTables& merge(const CountTables& other);

  friend bool operator==(const CountTables&, const CountTables&) = default;
};

struct PlayerFilter {
  // Empty name: every rally and every shot (Average profile).
  std::string name;
  // With a name: also count the opponents' shots from that player's rallies.
  bool include_opponents = false;

  static PlayerFilter all() { return {}; }
  static PlayerFilter player(std::string n) { return {std::move(n), false}; }
};

struct IngestOptions {
  PlayerFilter filter;
  // Exclude non-groundstroke shots from the counts (they still carry the
  // previous-direction chain).
  bool strict_shot_types = false;
};

// Streaming accumulator; rows may be fed from any source.
class CorpusIngestor {
 public:
  explicit CorpusIngestor(IngestOptions options = {}) : options_(std::move(options)) {}

  void add_row(const RallyRow& row);
  // A row that could not be read from its source at all.
  void add_unreadable();

  const CountTables& counts() const { return counts_; }
  const std::vector<std::string>& errors() const { return errors_; }

 private:
  IngestOptions options_;
  CountTables counts_;
  std::vector<std::string> errors_;
};

struct PlayerShare {
  std::string name;
  std::int64_t rallies;
  double percent;
};

struct IngestReport {
  std::int64_t rallies = 0;
  std::int64_t skipped = 0;
  std::map<char, std::int64_t> shot_type_histogram;
  // Groundstrokes, slices, volleys, drop shots, lobs, others.
  std::vector<std::pair<std::string, double>> shot_category_percent;
  std::vector<PlayerShare> player_share;  // top 10 then "Others"
};

IngestReport make_report(const CountTables& counts, std::size_t top_players = 10);

struct IngestResult {
  CountTables counts;
  IngestReport report;
};

IngestResult ingest_corpus(std::span<const RallyRow> rows, const IngestOptions& options);

struct Smoothing {
  double alpha = 0.0;  // 0 disables smoothing
  static Smoothing none() { return {0.0}; }
  static Smoothing laplace(double a) { return {a}; }
  bool enabled() const { return alpha > 0.0; }
};

// p[d][o] = (count + alpha) / (total + 9 alpha). Throws ProfileError when a
// context has no observations and smoothing is off, or when the result
// fails validation.
SkillProfile finalize_profile(const CountTables& counts, Smoothing smoothing,
                              std::string provenance = {});

}  // namespace matchpoint
