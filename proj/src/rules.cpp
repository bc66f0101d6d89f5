#include "matchpoint/rules.hpp"

#include <algorithm>
#include <cstdlib>
#include <sstream>

#include "matchpoint/errors.hpp"

namespace matchpoint {

const char* to_string(Player p) { return p == Player::A ? "A" : "B"; }

void MatchConfig::validate() const {
  if (sets_to_win < 1) throw ConfigError("sets_to_win must be >= 1");
  if (games_per_set < 1) throw ConfigError("games_per_set must be >= 1");
  if (tiebreak_points < 1) throw ConfigError("tiebreak_points must be >= 1");
  if (rally_shot_cap < 1) throw ConfigError("rally_shot_cap must be >= 1");
  if (tiebreak_at) {
    if (*tiebreak_at < 1) throw ConfigError("tiebreak_at must be >= 1");
    if (*tiebreak_at > games_per_set) throw ConfigError("tiebreak_at exceeds games_per_set");
  }
}

MatchScore new_match(const MatchConfig& config, Player first_server) {
  config.validate();
  MatchScore score;
  score.server = first_server;
  score.tiebreak_first_server = first_server;
  return score;
}

namespace {

void finish_set(const MatchConfig& config, MatchScore& s, int winner,
                std::optional<int> tiebreak_loser_points) {
  s.set_history.push_back({s.games, tiebreak_loser_points});
  s.sets_won[winner]++;
  s.games = {0, 0};
  s.points = {0, 0};
  s.tiebreak_points = {0, 0};
  s.in_tiebreak = false;
  if (s.sets_won[winner] >= config.sets_to_win) s.completed = static_cast<Player>(winner);
}

// Tiebreak serve order: first point by the opener, then two each.
Player tiebreak_server(Player opener, int points_played) {
  return ((points_played + 1) / 2) % 2 == 0 ? opener : other(opener);
}

}  // namespace

MatchScore apply_point(const MatchConfig& config, const MatchScore& score, Player point_winner) {
  if (score.completed) throw RulesError("point applied to a completed match");
  MatchScore s = score;
  const int w = index_of(point_winner);
  const int l = 1 - w;

  if (s.in_tiebreak) {
    s.tiebreak_points[w]++;
    if (s.tiebreak_points[w] >= config.tiebreak_points &&
        s.tiebreak_points[w] - s.tiebreak_points[l] >= 2) {
      int loser_points = s.tiebreak_points[l];
      s.games[w]++;
      Player next_server = other(s.tiebreak_first_server);
      finish_set(config, s, w, loser_points);
      s.server = next_server;
    } else {
      s.server = tiebreak_server(s.tiebreak_first_server, s.points_played_in_game());
    }
    return s;
  }

  s.points[w]++;
  bool game_won = config.advantage_scoring
                      ? s.points[w] >= 4 && s.points[w] - s.points[l] >= 2
                      : s.points[w] >= 4;
  if (!game_won) {
    if (s.points[0] == 4 && s.points[1] == 4) s.points = {3, 3};
    return s;
  }

  s.points = {0, 0};
  s.games[w]++;
  s.server = other(s.server);
  if (s.games[w] >= config.games_per_set && s.games[w] - s.games[l] >= 2) {
    finish_set(config, s, w, std::nullopt);
  } else if (config.tiebreak_at && s.games[0] == *config.tiebreak_at &&
             s.games[1] == *config.tiebreak_at) {
    s.in_tiebreak = true;
    s.tiebreak_points = {0, 0};
    s.tiebreak_first_server = s.server;
  }
  return s;
}

Side serve_side(const MatchScore& score) {
  return score.points_played_in_game() % 2 == 0 ? Side::Deuce : Side::Advantage;
}

std::optional<Player> match_winner(const MatchConfig& config, const MatchScore& score) {
  for (Player p : {Player::A, Player::B}) {
    if (score.sets_won[index_of(p)] >= config.sets_to_win) return p;
  }
  return std::nullopt;
}

std::vector<std::string> check_score_invariants(const MatchConfig& config, const MatchScore& s) {
  std::vector<std::string> out;
  auto fail = [&](const std::string& m) { out.push_back(m); };
  const auto& p = s.points;
  const auto& g = s.games;
  const auto& tb = s.tiebreak_points;

  if (p[0] < 0 || p[1] < 0 || g[0] < 0 || g[1] < 0 || tb[0] < 0 || tb[1] < 0) {
    fail("negative counter");
  }
  if (s.in_tiebreak) {
    if (p[0] != 0 || p[1] != 0) fail("game points nonzero inside tiebreak");
    if (!config.tiebreak_at || g[0] != *config.tiebreak_at || g[1] != *config.tiebreak_at) {
      fail("tiebreak outside tiebreak_at-all");
    }
    int hi = std::max(tb[0], tb[1]);
    if (hi >= config.tiebreak_points && std::abs(tb[0] - tb[1]) >= 2) {
      fail("tiebreak already decided");
    }
  } else {
    if (tb[0] != 0 || tb[1] != 0) fail("tiebreak points outside tiebreak");
    int hi = std::max(p[0], p[1]);
    if (config.advantage_scoring) {
      if (hi > 4) fail("point count above advantage");
      if (p[0] >= 4 && p[1] >= 4) fail("both players beyond deuce");
      if (hi >= 4 && std::abs(p[0] - p[1]) >= 2) fail("game already decided");
    } else if (hi >= 4) {
      fail("game already decided");
    }
    for (int i = 0; i < 2; ++i) {
      if (g[i] >= config.games_per_set && g[i] - g[1 - i] >= 2) fail("set already decided");
    }
    if (config.tiebreak_at && g[0] == *config.tiebreak_at && g[1] == *config.tiebreak_at) {
      fail("tiebreak_at-all without tiebreak");
    }
  }
  if (static_cast<int>(s.set_history.size()) != s.sets_won[0] + s.sets_won[1]) {
    fail("set history disagrees with sets won");
  }
  auto winner = match_winner(config, s);
  if (winner != s.completed) fail("completed flag disagrees with sets won");
  if (s.completed && (g[0] || g[1] || p[0] || p[1])) fail("play after completion");
  return out;
}

std::string render_sets(const MatchScore& score) {
  std::ostringstream os;
  bool first = true;
  for (const auto& set : score.set_history) {
    if (!first) os << ' ';
    first = false;
    os << set.games[0] << '-' << set.games[1];
    if (set.tiebreak_loser_points) os << '(' << *set.tiebreak_loser_points << ')';
  }
  return os.str();
}

std::string render_points(const MatchConfig& config, const MatchScore& score) {
  const auto& p = score.points;
  if (score.in_tiebreak) {
    return "[" + std::to_string(score.tiebreak_points[0]) + "-" +
           std::to_string(score.tiebreak_points[1]) + "]";
  }
  if (config.advantage_scoring && p[0] >= 3 && p[1] >= 3) {
    if (p[0] == p[1]) return "40-40";
    return p[0] > p[1] ? "Ad-40" : "40-Ad";
  }
  static const char* kCalls[] = {"0", "15", "30", "40"};
  auto call = [](int n) { return std::string(kCalls[std::clamp(n, 0, 3)]); };
  return call(p[0]) + "-" + call(p[1]);
}

std::string render_score(const MatchConfig& config, const MatchScore& score) {
  std::string sets = render_sets(score);
  if (score.completed) return sets;
  std::string out = sets.empty() ? "" : sets + " ";
  out += std::to_string(score.games[0]) + "-" + std::to_string(score.games[1]) + " ";
  out += render_points(config, score);
  return out;
}

HitterContext RallyState::context() const {
  if (finished()) throw RulesError("rally already finished");
  if (shot_count == 0) return ServeContext{side, serve_number};
  if (shot_count == 1) return ReturnContext{side, serve_number, *previous_direction};
  return RallyContext{hitter == rally_server, serve_number, *previous_direction};
}

RallyState start_rally(const MatchConfig& config, const MatchScore& score) {
  if (score.completed) throw RulesError("rally started in a completed match");
  RallyState r;
  r.rally_server = score.server;
  r.hitter = score.server;
  r.side = serve_side(score);
  r.shot_cap = config.rally_shot_cap;
  return r;
}

namespace {

RallyEvent finish(RallyState& r, Player winner, bool capped = false) {
  r.winner = winner;
  r.capped = capped;
  return PointWonEvent{winner, capped};
}

RallyEvent continue_or_cap(RallyState& r, Direction direction) {
  r.previous_direction = direction;
  r.hitter = other(r.hitter);
  if (r.shot_count >= r.shot_cap) return finish(r, other(r.hitter), true);
  return ContinueEvent{r.context(), r.hitter};
}

}  // namespace

RallyEvent advance_rally_in_place(RallyState& r, Direction direction, Outcome outcome,
                                  std::optional<int> depth) {
  if (r.finished()) throw RulesError("rally already finished");
  const bool serving = r.serving();
  if (direction.is_serve() != serving) {
    throw RulesError(std::string(serving ? "serve" : "rally shot") + " cannot use direction " +
                     std::to_string(direction.code()));
  }
  const Player hitter = r.hitter;

  if (serving) {
    const bool fault = outcome == Outcome::Error;
    r.shot_log.push_back({hitter, direction, depth, outcome, true, fault});
    if (fault) {
      r.faults++;
      if (r.serve_number == ServeNumber::First) {
        r.serve_number = ServeNumber::Second;
        return SecondServeEvent{};
      }
      return finish(r, other(hitter));
    }
    r.shot_count++;
    if (outcome == Outcome::Winner) return finish(r, hitter);
    return continue_or_cap(r, direction);
  }

  r.shot_log.push_back({hitter, direction, depth, outcome, false, false});
  r.shot_count++;
  switch (outcome) {
    case Outcome::Error: return finish(r, other(hitter));
    case Outcome::Winner: return finish(r, hitter);
    case Outcome::InPlay: break;
  }
  return continue_or_cap(r, direction);
}

std::pair<RallyState, RallyEvent> advance_rally(RallyState rally, Direction direction,
                                                Outcome outcome, std::optional<int> depth) {
  RallyEvent ev = advance_rally_in_place(rally, direction, outcome, depth);
  return {std::move(rally), std::move(ev)};
}

}  // namespace matchpoint
