#include "matchpoint/ingest.hpp"

#include <algorithm>
#include <sstream>

#include "matchpoint/errors.hpp"

namespace matchpoint {

namespace {

constexpr std::string_view kShotTypes = "fbrsvzopuylmhijktq";
constexpr std::string_view kErrorLocations = "nwdx";

bool is_shot_type(char c) { return kShotTypes.find(c) != std::string_view::npos; }
bool is_error_location(char c) { return kErrorLocations.find(c) != std::string_view::npos; }

std::string quoted(char c) {
  std::ostringstream os;
  if (c >= 0x20 && c < 0x7f) {
    os << '\'' << c << '\'';
  } else {
    os << "byte 0x" << std::hex << (static_cast<unsigned>(c) & 0xffu);
  }
  return os.str();
}

// Consumes [nwdx]* followed by an optional '@' or '#'. Returns true if
// anything was consumed.
bool consume_error_mark(std::string_view s, std::size_t& i) {
  std::size_t start = i;
  while (i < s.size() && is_error_location(s[i])) ++i;
  if (i < s.size() && (s[i] == '@' || s[i] == '#')) ++i;
  return i > start;
}

void expect_end(std::string_view s, std::size_t i, const char* what) {
  if (i != s.size()) {
    throw ParseError(i, std::string("unexpected ") + quoted(s[i]) + " after " + what);
  }
}

}  // namespace

bool is_groundstroke(char shot_type) { return shot_type == 'f' || shot_type == 'b'; }

ParsedRally parse_rally_string(std::string_view s, ServeNumber serve_number) {
  if (s.empty()) throw ParseError(0, "empty rally string");
  if (s[0] < '4' || s[0] > '6') {
    throw ParseError(0, "expected serve direction 4-6, got " + quoted(s[0]));
  }
  ParsedRally rally;
  const Direction serve_dir = Direction::serve(s[0] - '0');
  std::size_t i = 1;
  if (i == s.size()) throw ParseError(i, "serve without outcome");

  if (s[i] == '*' || s[i] == '#') {
    ++i;
    expect_end(s, i, "ace");
    rally.serves.push_back({serve_number, serve_dir, ServeTerminal::Ace});
    rally.rally_length = 1;
    return rally;
  }
  if (s[i] == '@' || is_error_location(s[i])) {
    consume_error_mark(s, i);
    expect_end(s, i, "fault");
    rally.serves.push_back({serve_number, serve_dir, ServeTerminal::Fault});
    rally.rally_length = 0;
    return rally;
  }

  rally.serves.push_back({serve_number, serve_dir, ServeTerminal::InPlay});
  while (i < s.size()) {
    const char type = s[i];
    if (!is_shot_type(type)) throw ParseError(i, "unknown shot character " + quoted(type));
    ++i;
    if (i >= s.size() || s[i] < '1' || s[i] > '3') {
      throw ParseError(i, "expected shot direction 1-3");
    }
    ParsedShot shot{type, Direction::rally(s[i] - '0'), std::nullopt, Outcome::InPlay};
    ++i;
    if (i < s.size() && s[i] >= '7' && s[i] <= '9') {
      shot.depth = s[i] - '0';
      ++i;
    }
    if (i < s.size()) {
      if (s[i] == '*') {
        shot.terminal = Outcome::Winner;
        ++i;
      } else if (consume_error_mark(s, i)) {
        shot.terminal = Outcome::Error;
      }
    }
    rally.shots.push_back(shot);
    if (shot.terminal != Outcome::InPlay) expect_end(s, i, "rally terminal");
  }
  if (rally.shots.empty() || rally.shots.back().terminal == Outcome::InPlay) {
    throw ParseError(s.size(), "rally ends without a terminal");
  }
  rally.rally_length = 1 + static_cast<int>(rally.shots.size());
  return rally;
}

ParsedRally parse_row(const RallyRow& row) {
  ParsedRally rally = parse_rally_string(row.first_serve_string, ServeNumber::First);
  const bool faulted = rally.serves.front().terminal == ServeTerminal::Fault;
  const bool has_second = row.second_serve_string && !row.second_serve_string->empty();
  if (!faulted) {
    if (has_second) throw ParseError(0, "second serve recorded after a good first serve");
    return rally;
  }
  if (!has_second) {
    throw ParseError(row.first_serve_string.size(), "first serve faulted but no second serve");
  }
  ParsedRally second;
  try {
    second = parse_rally_string(*row.second_serve_string, ServeNumber::Second);
  } catch (const ParseError& e) {
    throw ParseError(e.offset(), std::string("second serve: ") + e.what());
  }
  rally.serves.push_back(second.serves.front());
  rally.shots = std::move(second.shots);
  rally.rally_length = second.rally_length;
  return rally;
}

std::vector<ClassifiedShot> classify_shots(const ParsedRally& rally, const RallyRow& row) {
  std::vector<ClassifiedShot> out;
  out.reserve(rally.serves.size() + rally.shots.size());
  for (const auto& serve : rally.serves) {
    Outcome o = serve.terminal == ServeTerminal::Fault ? Outcome::Error
                : serve.terminal == ServeTerminal::Ace ? Outcome::Winner
                                                       : Outcome::InPlay;
    out.push_back({row.server_name, ServeContext{row.side, serve.serve_number}, serve.direction,
                   o, 0});
  }
  if (rally.shots.empty()) return out;

  const auto& landed = rally.serves.back();
  for (std::size_t k = 0; k < rally.shots.size(); ++k) {
    const auto& shot = rally.shots[k];
    const bool server_hits = k % 2 == 1;
    const std::string& hitter = server_hits ? row.server_name : row.returner_name;
    HitterContext ctx = k == 0 ? HitterContext{ReturnContext{row.side, landed.serve_number,
                                                             landed.direction}}
                               : HitterContext{RallyContext{server_hits, landed.serve_number,
                                                            rally.shots[k - 1].direction}};
    out.push_back({hitter, ctx, shot.direction, shot.terminal, shot.shot_type});
  }
  return out;
}

std::int64_t CountTables::cell_total() const {
  std::int64_t total = 0;
  for (const auto& grid : counts) {
    for (const auto& row : grid) {
      for (auto c : row) total += c;
    }
  }
  return total;
}

std::int64_t CountTables::context_total(const HitterContext& ctx) const {
  std::int64_t total = 0;
  for (const auto& row : at(ctx)) {
    for (auto c : row) total += c;
  }
  return total;
}

CountTables& CountTables::merge(const CountTables& other) {
  for (int c = 0; c < kContextCount; ++c) {
    for (int d = 0; d < 3; ++d) {
      for (int o = 0; o < 3; ++o) counts[c][d][o] += other.counts[c][d][o];
    }
  }
  rally_count += other.rally_count;
  skipped_rallies += other.skipped_rallies;
  classified_shots += other.classified_shots;
  for (const auto& [k, v] : other.shot_type_histogram) shot_type_histogram[k] += v;
  for (const auto& [k, v] : other.player_share) player_share[k] += v;
  return *this;
}

void CorpusIngestor::add_unreadable() { counts_.skipped_rallies++; }

void CorpusIngestor::add_row(const RallyRow& row) {
  const auto& name = options_.filter.name;
  if (!name.empty() && row.server_name != name && row.returner_name != name) return;

  ParsedRally rally;
  try {
    rally = parse_row(row);
  } catch (const ParseError& e) {
    counts_.skipped_rallies++;
    errors_.push_back(row.match_id + ": " + e.what());
    return;
  }

  counts_.rally_count++;
  counts_.player_share[row.server_name]++;
  counts_.player_share[row.returner_name]++;
  for (const auto& shot : classify_shots(rally, row)) {
    if (!name.empty() && !options_.filter.include_opponents && shot.hitter != name) continue;
    if (shot.shot_type != 0) {
      counts_.shot_type_histogram[shot.shot_type]++;
      if (options_.strict_shot_types && !is_groundstroke(shot.shot_type)) continue;
    }
    counts_.at(shot.context)[shot.direction.slot()][outcome_index(shot.outcome)]++;
    counts_.classified_shots++;
  }
}

namespace {

const char* shot_category(char type) {
  switch (type) {
    case 'f': case 'b': return "groundstroke";
    case 'r': case 's': return "slice";
    case 'v': case 'z': case 'h': case 'i': case 'j': case 'k': return "volley";
    case 'u': case 'y': return "drop_shot";
    case 'l': case 'm': return "lob";
    default: return "other";
  }
}

}  // namespace

IngestReport make_report(const CountTables& counts, std::size_t top_players) {
  IngestReport report;
  report.rallies = counts.rally_count;
  report.skipped = counts.skipped_rallies;
  report.shot_type_histogram = counts.shot_type_histogram;

  const std::vector<std::string> categories = {"groundstroke", "slice", "volley",
                                               "drop_shot",    "lob",   "other"};
  std::map<std::string, std::int64_t> by_category;
  std::int64_t shots = 0;
  for (const auto& [type, n] : counts.shot_type_histogram) {
    by_category[shot_category(type)] += n;
    shots += n;
  }
  for (const auto& cat : categories) {
    double pct = shots > 0 ? 100.0 * static_cast<double>(by_category[cat]) / shots : 0.0;
    report.shot_category_percent.emplace_back(cat, pct);
  }

  std::vector<std::pair<std::string, std::int64_t>> players(counts.player_share.begin(),
                                                            counts.player_share.end());
  std::stable_sort(players.begin(), players.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  std::int64_t total = 0;
  for (const auto& p : players) total += p.second;
  auto pct = [&](std::int64_t n) { return total > 0 ? 100.0 * static_cast<double>(n) / total : 0.0; };
  std::int64_t others = 0;
  for (std::size_t i = 0; i < players.size(); ++i) {
    if (i < top_players) {
      report.player_share.push_back({players[i].first, players[i].second, pct(players[i].second)});
    } else {
      others += players[i].second;
    }
  }
  if (players.size() > top_players) report.player_share.push_back({"Others", others, pct(others)});
  return report;
}

IngestResult ingest_corpus(std::span<const RallyRow> rows, const IngestOptions& options) {
  CorpusIngestor ingestor(options);
  for (const auto& row : rows) ingestor.add_row(row);
  return {ingestor.counts(), make_report(ingestor.counts())};
}

SkillProfile finalize_profile(const CountTables& counts, Smoothing smoothing,
                              std::string provenance) {
  SkillProfile profile(std::move(provenance));
  const double alpha = smoothing.enabled() ? smoothing.alpha : 0.0;
  for (const auto& ctx : all_contexts()) {
    const auto& grid = counts.at(ctx);
    const auto total = counts.context_total(ctx);
    if (total == 0 && !smoothing.enabled()) {
      throw ProfileError("no observations for context " + to_string(ctx) +
                         " and smoothing disabled");
    }
    const double denom = static_cast<double>(total) + 9.0 * alpha;
    ProbabilityGrid p{};
    for (int d = 0; d < 3; ++d) {
      for (int o = 0; o < 3; ++o) p[d][o] = (static_cast<double>(grid[d][o]) + alpha) / denom;
    }
    profile.set(ctx, p);
  }
  auto report = validate_profile(profile);
  if (!report.ok()) {
    std::string msg = "estimated profile is invalid:";
    for (const auto& issue : report.issues) msg += " " + issue.describe() + ";";
    throw ProfileError(msg);
  }
  return profile;
}

}  // namespace matchpoint
