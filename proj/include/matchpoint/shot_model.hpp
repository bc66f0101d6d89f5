#pragma once

// Shot-direction encoding, hitter contexts and the joint (direction, outcome)
// probability tables that make up a player's skill profile.

#include <array>
#include <compare>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "matchpoint/random.hpp"

namespace matchpoint {

inline constexpr double kProbabilityTolerance = 1e-9;

enum class Outcome { Error, Winner, InPlay };
enum class Side { Deuce, Advantage };
enum class ServeNumber { First, Second };

const char* to_string(Outcome o);
const char* to_string(Side s);
const char* to_string(ServeNumber n);

// Codes 1-3 are rally shots (forehand side of a right-hander, middle,
// backhand side). Codes 4-6 are serves (wide, body, down the T).
class Direction {
 public:
  static Direction from_code(int code);
  static Direction rally(int code);
  static Direction serve(int code);
  // slot 0..2 within the serve or rally group.
  static Direction from_slot(bool serve, int slot);

  int code() const { return code_; }
  bool is_serve() const { return code_ >= 4; }
  int slot() const { return is_serve() ? code_ - 4 : code_ - 1; }

  friend auto operator<=>(const Direction&, const Direction&) = default;

 private:
  explicit Direction(int code) : code_(code) {}
  int code_;
};

struct ServeContext {
  Side side;
  ServeNumber serve_number;
  friend auto operator<=>(const ServeContext&, const ServeContext&) = default;
};

struct ReturnContext {
  Side side;
  ServeNumber serve_number;
  Direction serve_direction;  // always 4-6
  friend auto operator<=>(const ReturnContext&, const ReturnContext&) = default;
};

struct RallyContext {
  bool hitter_served;
  ServeNumber serve_number;
  Direction previous_direction;  // always 1-3
  friend auto operator<=>(const RallyContext&, const RallyContext&) = default;
};

using HitterContext = std::variant<ServeContext, ReturnContext, RallyContext>;

inline constexpr int kContextCount = 28;
inline constexpr int kServeContextCount = 4;
inline constexpr int kReturnContextCount = 12;
inline constexpr int kRallyContextCount = 12;

// Dense index in [0, 28): serve contexts 0-3, return 4-15, rally 16-27.
// Throws EncodingError when a context carries a direction of the wrong kind.
int context_index(const HitterContext& ctx);
HitterContext context_at(int index);
const std::array<HitterContext, kContextCount>& all_contexts();
std::string to_string(const HitterContext& ctx);

inline bool is_serve_context(const HitterContext& ctx) {
  return std::holds_alternative<ServeContext>(ctx);
}

// [direction slot][Error, Winner, InPlay]
using ProbabilityGrid = std::array<std::array<double, 3>, 3>;

inline int outcome_index(Outcome o) { return static_cast<int>(o); }

class SkillProfile {
 public:
  SkillProfile() = default;
  explicit SkillProfile(std::string provenance) : provenance_(std::move(provenance)) {}

  void set(const HitterContext& ctx, const ProbabilityGrid& grid);
  void erase(const HitterContext& ctx);
  bool contains(const HitterContext& ctx) const;
  const ProbabilityGrid* find(const HitterContext& ctx) const;
  // Throws LookupError naming the context.
  const ProbabilityGrid& at(const HitterContext& ctx) const;
  int context_count() const;

  const std::string& provenance() const { return provenance_; }
  void set_provenance(std::string p) { provenance_ = std::move(p); }

  friend bool operator==(const SkillProfile&, const SkillProfile&) = default;

 private:
  std::array<std::optional<ProbabilityGrid>, kContextCount> tables_{};
  std::string provenance_;
};

struct ValidationIssue {
  enum class Kind { Missing, Negative, NotNormalized, NoTerminal };
  HitterContext context;
  Kind kind;
  // Missing: 0. Negative: the offending entry. NotNormalized: 1 - row sum.
  // NoTerminal: total Error + Winner mass.
  double value = 0.0;

  std::string describe() const;
};

struct ValidationReport {
  std::vector<ValidationIssue> issues;
  bool ok() const { return issues.empty(); }
};

ValidationReport validate_profile(const SkillProfile& profile);

// Bot action policy: sum over outcomes for each direction slot.
std::array<double, 3> direction_marginal(const SkillProfile& profile, const HitterContext& ctx);

struct OutcomeDistribution {
  double error = 0.0;
  double winner = 0.0;
  double in_play = 0.0;
};

// Environment stochasticity: p[dir][o] / marginal(dir).
OutcomeDistribution outcome_conditional(const SkillProfile& profile, const HitterContext& ctx,
                                        Direction dir);

// Consumes exactly one draw from rng.
Outcome sample_outcome(const SkillProfile& profile, const HitterContext& ctx, Direction dir,
                       RandomStream& rng);
Outcome sample_outcome(const OutcomeDistribution& dist, RandomStream& rng);

// Directions with positive marginal in ctx, in code order.
std::vector<Direction> supported_directions(const SkillProfile& profile, const HitterContext& ctx);

}  // namespace matchpoint
