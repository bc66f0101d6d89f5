#pragma once

// Tennis scoring and the serve/rally state machine. Everything here is a
// value-semantics transition; nothing holds shared state.

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "matchpoint/shot_model.hpp"

namespace matchpoint {

enum class Player { A, B };

inline Player other(Player p) { return p == Player::A ? Player::B : Player::A; }
inline int index_of(Player p) { return static_cast<int>(p); }
const char* to_string(Player p);

struct MatchConfig {
  int sets_to_win = 2;
  int games_per_set = 6;
  std::optional<int> tiebreak_at = 6;
  int tiebreak_points = 7;
  bool advantage_scoring = true;
  int rally_shot_cap = 500;

  // Throws ConfigError.
  void validate() const;

  friend bool operator==(const MatchConfig&, const MatchConfig&) = default;
};

struct CompletedSet {
  std::array<int, 2> games{};
  std::optional<int> tiebreak_loser_points;

  friend bool operator==(const CompletedSet&, const CompletedSet&) = default;
};

struct MatchScore {
  std::array<int, 2> sets_won{};
  std::array<int, 2> games{};
  // 0,1,2,3,4 rendered as 0/15/30/40/Ad. Deuce after advantage folds back to 3-3.
  std::array<int, 2> points{};
  bool in_tiebreak = false;
  std::array<int, 2> tiebreak_points{};
  Player server = Player::A;
  Player tiebreak_first_server = Player::A;
  std::optional<Player> completed;
  std::vector<CompletedSet> set_history;

  int points_played_in_game() const {
    return in_tiebreak ? tiebreak_points[0] + tiebreak_points[1] : points[0] + points[1];
  }

  friend bool operator==(const MatchScore&, const MatchScore&) = default;
};

MatchScore new_match(const MatchConfig& config, Player first_server);

// Throws RulesError on a completed match.
MatchScore apply_point(const MatchConfig& config, const MatchScore& score, Player point_winner);

Side serve_side(const MatchScore& score);

std::optional<Player> match_winner(const MatchConfig& config, const MatchScore& score);

// Returns one message per violated invariant; empty when consistent.
std::vector<std::string> check_score_invariants(const MatchConfig& config, const MatchScore& score);

// "6-4 3-6 7-6(5)": completed sets from A's perspective, tiebreak loser's
// points in parentheses.
std::string render_sets(const MatchScore& score);
// "0", "15", "30", "40" per player, "40-40" at deuce, "Ad-40"/"40-Ad" on
// advantage; tiebreaks as "[3-2]".
std::string render_points(const MatchConfig& config, const MatchScore& score);
// Completed match: render_sets. Otherwise completed sets (if any), current
// set games, then points, space-separated, e.g. "6-4 2-1 30-15".
std::string render_score(const MatchConfig& config, const MatchScore& score);

struct LoggedShot {
  Player player;
  Direction direction;
  std::optional<int> depth;  // 7-9, visualization only
  Outcome outcome;
  bool serve = false;
  bool fault = false;  // serve attempt that ended in Error
};

struct RallyState {
  Player rally_server = Player::A;
  ServeNumber serve_number = ServeNumber::First;
  Side side = Side::Deuce;
  Player hitter = Player::A;
  std::optional<Direction> previous_direction;
  // Rally length so far: shots landed plus terminal shots, faults excluded.
  int shot_count = 0;
  std::vector<LoggedShot> shot_log;
  int faults = 0;
  int shot_cap = 500;
  std::optional<Player> winner;
  bool capped = false;

  bool finished() const { return winner.has_value(); }
  bool serving() const { return !finished() && shot_count == 0; }
  // Context of the hitter's next shot. Throws RulesError once finished.
  HitterContext context() const;
};

struct ContinueEvent {
  HitterContext context;
  Player hitter;
};
struct SecondServeEvent {};
struct PointWonEvent {
  Player winner;
  bool capped = false;
};
using RallyEvent = std::variant<ContinueEvent, SecondServeEvent, PointWonEvent>;

RallyState start_rally(const MatchConfig& config, const MatchScore& score);

// Mutating form used on hot simulation paths.
RallyEvent advance_rally_in_place(RallyState& rally, Direction direction, Outcome outcome,
                                  std::optional<int> depth = std::nullopt);

std::pair<RallyState, RallyEvent> advance_rally(RallyState rally, Direction direction,
                                                Outcome outcome,
                                                std::optional<int> depth = std::nullopt);

}  // namespace matchpoint
