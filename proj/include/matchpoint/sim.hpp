#pragma once

// Points, matches and seeded batches between two agent specs.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "matchpoint/agents.hpp"
#include "matchpoint/random.hpp"
#include "matchpoint/rules.hpp"
#include "matchpoint/stats.hpp"

namespace matchpoint {

struct ShotRecord {
  Player hitter;
  HitterContext context;
  Direction direction;
  std::optional<int> depth;
  Outcome outcome;

  friend bool operator==(const ShotRecord&, const ShotRecord&) = default;
};

struct PointRecord {
  std::string score_before;
  Player server = Player::A;
  Side side = Side::Deuce;
  int serves = 1;  // serve attempts used (2 after a first-serve fault)
  std::vector<ShotRecord> shots;  // includes faulted serves
  int rally_length = 0;           // faults excluded; an ace is 1
  Player winner = Player::A;
  bool capped = false;

  friend bool operator==(const PointRecord&, const PointRecord&) = default;
};

struct MatchRecord {
  std::uint64_t index = 0;
  std::uint64_t seed = 0;
  std::string agent_a;
  std::string agent_b;
  Player first_server = Player::A;
  std::string final_score;
  std::vector<PointRecord> points;
  Player winner = Player::A;

  friend bool operator==(const MatchRecord&, const MatchRecord&) = default;
};

// Non-owning view of the two sides of a point.
struct PointSides {
  std::array<Agent*, 2> agents{};
  std::array<const SkillProfile*, 2> outcome_models{};
};

// Plays one point from `score`. The hitter's agent picks each direction and
// the outcome is drawn from the hitter's outcome model.
PointRecord play_point(const MatchConfig& config, const MatchScore& score, const PointSides& sides,
                       RandomStream& rng);

MatchRecord play_match(const MatchConfig& config, const AgentSpec& agent_a,
                       const AgentSpec& agent_b, std::uint64_t seed, Player first_server);

// Re-derives the score from the point winners. Throws RulesError when the
// sequence overruns the end of the match.
MatchScore replay_score(const MatchConfig& config, const MatchRecord& record);

struct BatchConfig {
  int n_matches = 1;
  std::uint64_t master_seed = 0;
  MatchConfig match;
  AgentSpec agent_a;
  AgentSpec agent_b;
  bool alternate_first_server = true;
  int parallelism = 1;
  // Drop per-shot logs from stored records (summary statistics unaffected).
  bool keep_shots = true;

  void validate() const;
};

// Seed of match `index`: split_seed(master_seed, index).
std::uint64_t match_seed(const BatchConfig& batch, int index);
// A serves first in even-indexed matches when alternating, else always A.
Player first_server_for(const BatchConfig& batch, int index);

struct SideTotals {
  std::int64_t points_won = 0;
  std::int64_t matches_won = 0;
  double point_win_rate = 0.0;  // percent
  double match_win_rate = 0.0;  // percent
  Interval point_ci;            // percent
  Interval match_ci;            // percent
};

struct MatchFailure {
  int index;
  std::string message;
};

struct BatchSummary {
  int n_matches = 0;
  int completed = 0;
  std::vector<MatchFailure> failed;
  std::int64_t points_total = 0;
  std::int64_t capped_points = 0;
  std::array<SideTotals, 2> sides{};
};

BatchSummary summarize(const std::vector<MatchRecord>& records, int n_matches);

struct BatchResult {
  std::vector<MatchRecord> records;  // completed matches in index order
  BatchSummary summary;
};

// Matches run on up to `parallelism` threads; results do not depend on it.
// After the first failing match no new matches are started.
BatchResult run_batch(const BatchConfig& batch);

}  // namespace matchpoint
