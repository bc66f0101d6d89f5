#include "matchpoint/agents.hpp"

#include <sstream>

#include "matchpoint/errors.hpp"

namespace matchpoint {

const char* to_string(SelectionPolicy p) {
  switch (p) {
    case SelectionPolicy::Uct: return "uct";
    case SelectionPolicy::Random: return "random";
    case SelectionPolicy::Greedy: return "greedy";
  }
  return "?";
}

const char* to_string(DecisionPolicy p) {
  return p == DecisionPolicy::GreedyValue ? "greedy_value" : "max_visits";
}

namespace {

void require_valid(const ProfileRef& profile, const char* what) {
  if (!profile) throw ConfigError(std::string(what) + " is not set");
  auto report = validate_profile(*profile);
  if (!report.ok()) {
    throw ConfigError(std::string(what) + " is invalid: " + report.issues.front().describe());
  }
}

}  // namespace

void MctsConfig::validate() const {
  if (iterations <= 0) throw ConfigError("mcts iterations must be positive");
  if (!(exploration_c >= 0.0)) throw ConfigError("exploration constant must be >= 0");
  if (rollout_cap <= 0) throw ConfigError("rollout_cap must be positive");
  require_valid(self_model, "self_model");
  require_valid(opponent_model, "opponent_model");
}

const SkillProfile& outcome_model(const AgentSpec& spec) {
  struct Visitor {
    const ProfileRef& operator()(const BotSpec& s) const { return s.profile; }
    const ProfileRef& operator()(const MctsConfig& s) const { return s.self_model; }
    const ProfileRef& operator()(const UniformRandomSpec& s) const { return s.profile; }
  };
  const auto& ref = std::visit(Visitor{}, spec);
  if (!ref) throw ConfigError("agent has no outcome model");
  return *ref;
}

void validate_agent_spec(const AgentSpec& spec) {
  if (const auto* b = std::get_if<BotSpec>(&spec)) {
    require_valid(b->profile, "bot profile");
  } else if (const auto* m = std::get_if<MctsConfig>(&spec)) {
    m->validate();
  } else {
    require_valid(std::get<UniformRandomSpec>(spec).profile, "random agent profile");
  }
}

std::string describe(const AgentSpec& spec) {
  std::ostringstream os;
  if (const auto* b = std::get_if<BotSpec>(&spec)) {
    os << "bot(" << b->profile_source << ")";
  } else if (const auto* m = std::get_if<MctsConfig>(&spec)) {
    os << "mcts(" << to_string(m->selection) << ",c=" << m->exploration_c
       << ",it=" << m->iterations << ")";
  } else {
    os << "random(" << std::get<UniformRandomSpec>(spec).profile_source << ")";
  }
  return os.str();
}

Direction bot_decide(const SkillProfile& profile, const HitterContext& ctx, RandomStream& rng) {
  const auto marginal = direction_marginal(profile, ctx);
  const bool serve = is_serve_context(ctx);
  double u = rng.uniform();
  int last_supported = -1;
  double acc = 0.0;
  for (int d = 0; d < 3; ++d) {
    if (!(marginal[d] > 0.0)) continue;
    last_supported = d;
    acc += marginal[d];
    if (u < acc) return Direction::from_slot(serve, d);
  }
  if (last_supported < 0) throw UnsupportedDirection("no direction observed in " + to_string(ctx));
  // u landed in the rounding gap above the cumulative sum.
  return Direction::from_slot(serve, last_supported);
}

namespace {

class BotAgent final : public Agent {
 public:
  explicit BotAgent(ProfileRef profile) : profile_(std::move(profile)) {}
  Direction decide(const RallyState& rally, Player, RandomStream& rng) override {
    return bot_decide(*profile_, rally.context(), rng);
  }

 private:
  ProfileRef profile_;
};

class RandomAgent final : public Agent {
 public:
  explicit RandomAgent(ProfileRef profile) : profile_(std::move(profile)) {}
  Direction decide(const RallyState& rally, Player, RandomStream& rng) override {
    auto legal = supported_directions(*profile_, rally.context());
    if (legal.empty()) throw UnsupportedDirection("no legal direction");
    return legal[rng.below(static_cast<int>(legal.size()))];
  }

 private:
  ProfileRef profile_;
};

class MctsAgent final : public Agent {
 public:
  explicit MctsAgent(MctsConfig config) : config_(std::move(config)) {}
  Direction decide(const RallyState& rally, Player self, RandomStream& rng) override {
    return mcts_decide(rally, self, config_, rng);
  }

 private:
  MctsConfig config_;
};

}  // namespace

std::unique_ptr<Agent> make_agent(const AgentSpec& spec) {
  validate_agent_spec(spec);
  if (const auto* b = std::get_if<BotSpec>(&spec)) return std::make_unique<BotAgent>(b->profile);
  if (const auto* m = std::get_if<MctsConfig>(&spec)) return std::make_unique<MctsAgent>(*m);
  return std::make_unique<RandomAgent>(std::get<UniformRandomSpec>(spec).profile);
}

}  // namespace matchpoint
