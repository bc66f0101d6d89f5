#pragma once

// Shot-direction policies: the data-driven bot, a uniform random player and
// an open-loop MCTS agent whose horizon is the end of the current point.

#include <array>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "matchpoint/random.hpp"
#include "matchpoint/rules.hpp"
#include "matchpoint/shot_model.hpp"

namespace matchpoint {

inline constexpr double kSqrt2 = 1.4142135623730951;

enum class SelectionPolicy { Uct, Random, Greedy };
enum class DecisionPolicy { GreedyValue, MaxVisits };

const char* to_string(SelectionPolicy p);
const char* to_string(DecisionPolicy p);

using ProfileRef = std::shared_ptr<const SkillProfile>;

struct MctsConfig {
  int iterations = 1000;
  double exploration_c = kSqrt2;
  SelectionPolicy selection = SelectionPolicy::Uct;
  DecisionPolicy decision = DecisionPolicy::GreedyValue;
  int rollout_cap = 200;
  // Governs the agent's own shot outcomes, in search and in play.
  ProfileRef self_model;
  ProfileRef opponent_model;
  // Where the models came from; informational.
  std::string self_model_source;
  std::string opponent_model_source;

  // Throws ConfigError.
  void validate() const;
};

struct BotSpec {
  ProfileRef profile;
  std::string profile_source;
};

struct UniformRandomSpec {
  // Outcome model; directions are drawn uniformly among those it supports.
  ProfileRef profile;
  std::string profile_source;
};

using AgentSpec = std::variant<BotSpec, MctsConfig, UniformRandomSpec>;

// Profile that governs the outcomes of this agent's shots.
const SkillProfile& outcome_model(const AgentSpec& spec);
void validate_agent_spec(const AgentSpec& spec);
std::string describe(const AgentSpec& spec);

// Draws a direction from the profile's direction marginal. One rng draw.
Direction bot_decide(const SkillProfile& profile, const HitterContext& ctx, RandomStream& rng);

// w/n + C sqrt(ln N / n). Throws std::invalid_argument when n or N is zero.
double uct_value(double wins, std::int64_t visits, std::int64_t parent_visits, double c);

struct SearchNode {
  std::int64_t visits = 0;
  double wins = 0.0;
  // Indexed by direction code - 1.
  std::array<std::unique_ptr<SearchNode>, 6> children;

  const SearchNode* child(Direction d) const { return children[d.code() - 1].get(); }
  SearchNode& child_or_create(Direction d);
  std::int64_t child_visit_sum() const;
};

// UCT: unvisited legal children first (uniformly), else argmax uct_value.
// Random: uniform over legal. Greedy: unvisited first, else argmax w/n.
// Ties are broken uniformly; the rng is consulted only when a choice remains.
Direction select_child(SelectionPolicy policy, const SearchNode& node,
                       std::span<const Direction> legal, double c, RandomStream& rng);

// Episode interface the tree search runs against. The agent always moves at
// decision points; chance and the opponent are resolved inside play().
class SearchEnvironment {
 public:
  virtual ~SearchEnvironment() = default;
  virtual void reset() = 0;
  virtual bool terminal() const = 0;
  virtual std::vector<Direction> legal_directions() const = 0;
  virtual void play(Direction d, RandomStream& rng) = 0;
  virtual double rollout(RandomStream& rng) = 0;
  virtual double reward() const = 0;
};

struct SearchParams {
  int iterations = 1000;
  double exploration_c = kSqrt2;
  SelectionPolicy selection = SelectionPolicy::Uct;
  DecisionPolicy decision = DecisionPolicy::GreedyValue;
};

struct SearchResult {
  Direction choice;
  std::unique_ptr<SearchNode> root;
};

// Open-loop MCTS: selection, one expansion, rollout, backpropagation of the
// reward to every node on the descent path. Throws ConfigError on zero
// iterations and RulesError when the root has no legal direction.
SearchResult run_search(const SearchParams& params, SearchEnvironment& env, RandomStream& rng);

// Plays the point out with both players following their profiles' marginals.
// Returns 1 iff `self` wins. After `cap` shots the player on turn loses.
int rollout(const RallyState& point_state, Player self, const SkillProfile& self_model,
            const SkillProfile& opponent_model, RandomStream& rng, int cap);

// Search environment over the remainder of a tennis point.
class PointEnvironment final : public SearchEnvironment {
 public:
  PointEnvironment(const RallyState& root, Player self, const SkillProfile& self_model,
                   const SkillProfile& opponent_model, int rollout_cap);

  void reset() override;
  bool terminal() const override { return state_.finished(); }
  std::vector<Direction> legal_directions() const override;
  void play(Direction d, RandomStream& rng) override;
  double rollout(RandomStream& rng) override;
  double reward() const override { return *state_.winner == self_ ? 1.0 : 0.0; }

 private:
  void step(Direction d, const SkillProfile& model, RandomStream& rng);

  RallyState root_;
  RallyState state_;
  Player self_;
  const SkillProfile& self_model_;
  const SkillProfile& opponent_model_;
  int rollout_cap_;
};

SearchParams search_params(const MctsConfig& config);

// Runs a search from `point_state`, where `self` is the hitter.
SearchResult mcts_search(const RallyState& point_state, Player self, const MctsConfig& config,
                         RandomStream& rng);
Direction mcts_decide(const RallyState& point_state, Player self, const MctsConfig& config,
                      RandomStream& rng);

class Agent {
 public:
  virtual ~Agent() = default;
  // Called when `self` is the hitter in `rally`.
  virtual Direction decide(const RallyState& rally, Player self, RandomStream& rng) = 0;
};

std::unique_ptr<Agent> make_agent(const AgentSpec& spec);

}  // namespace matchpoint
