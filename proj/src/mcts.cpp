#include <cmath>
#include <limits>
#include <stdexcept>

#include "matchpoint/agents.hpp"
#include "matchpoint/errors.hpp"

namespace matchpoint {

double uct_value(double wins, std::int64_t visits, std::int64_t parent_visits, double c) {
  if (visits <= 0) throw std::invalid_argument("uct_value: child has no visits");
  if (parent_visits <= 0) throw std::invalid_argument("uct_value: parent has no visits");
  const double n = static_cast<double>(visits);
  return wins / n + c * std::sqrt(std::log(static_cast<double>(parent_visits)) / n);
}

SearchNode& SearchNode::child_or_create(Direction d) {
  auto& slot = children[d.code() - 1];
  if (!slot) slot = std::make_unique<SearchNode>();
  return *slot;
}

std::int64_t SearchNode::child_visit_sum() const {
  std::int64_t sum = 0;
  for (const auto& c : children) {
    if (c) sum += c->visits;
  }
  return sum;
}

namespace {

Direction pick_uniform(const std::vector<Direction>& candidates, RandomStream& rng) {
  if (candidates.size() == 1) return candidates.front();
  return candidates[rng.below(static_cast<int>(candidates.size()))];
}

template <typename Score>
Direction argmax(std::span<const Direction> options, Score score, RandomStream& rng) {
  std::vector<Direction> best;
  double best_value = -std::numeric_limits<double>::infinity();
  for (Direction d : options) {
    double v = score(d);
    if (v > best_value) {
      best_value = v;
      best.assign(1, d);
    } else if (v == best_value) {
      best.push_back(d);
    }
  }
  return pick_uniform(best, rng);
}

}  // namespace

Direction select_child(SelectionPolicy policy, const SearchNode& node,
                       std::span<const Direction> legal, double c, RandomStream& rng) {
  if (legal.empty()) throw RulesError("select_child: no legal children");
  if (policy == SelectionPolicy::Random) {
    return legal[rng.below(static_cast<int>(legal.size()))];
  }
  std::vector<Direction> unvisited;
  for (Direction d : legal) {
    const auto* child = node.child(d);
    if (child == nullptr || child->visits == 0) unvisited.push_back(d);
  }
  if (!unvisited.empty()) return pick_uniform(unvisited, rng);

  if (policy == SelectionPolicy::Greedy) {
    return argmax(
        legal,
        [&](Direction d) {
          const auto* ch = node.child(d);
          return ch->wins / static_cast<double>(ch->visits);
        },
        rng);
  }
  return argmax(
      legal,
      [&](Direction d) {
        const auto* ch = node.child(d);
        return uct_value(ch->wins, ch->visits, node.visits, c);
      },
      rng);
}

SearchResult run_search(const SearchParams& params, SearchEnvironment& env, RandomStream& rng) {
  if (params.iterations <= 0) throw ConfigError("search needs at least one iteration");
  env.reset();
  if (env.terminal()) throw RulesError("search started from a terminal state");
  const std::vector<Direction> root_legal = env.legal_directions();
  if (root_legal.empty()) throw RulesError("no legal direction at the root");

  auto root = std::make_unique<SearchNode>();
  std::vector<SearchNode*> path;
  for (int it = 0; it < params.iterations; ++it) {
    env.reset();
    path.assign(1, root.get());
    SearchNode* node = root.get();
    while (!env.terminal()) {
      const auto legal = env.legal_directions();
      Direction d = select_child(params.selection, *node, legal, params.exploration_c, rng);
      SearchNode& child = node->child_or_create(d);
      const bool fresh = child.visits == 0;
      env.play(d, rng);
      node = &child;
      path.push_back(node);
      if (fresh) break;
    }
    const double reward = env.terminal() ? env.reward() : env.rollout(rng);
    for (SearchNode* n : path) {
      n->visits += 1;
      n->wins += reward;
    }
  }

  std::vector<Direction> visited;
  for (Direction d : root_legal) {
    const auto* ch = root->child(d);
    if (ch != nullptr && ch->visits > 0) visited.push_back(d);
  }
  Direction choice = params.decision == DecisionPolicy::MaxVisits
                         ? argmax(
                               visited,
                               [&](Direction d) {
                                 return static_cast<double>(root->child(d)->visits);
                               },
                               rng)
                         : argmax(
                               visited,
                               [&](Direction d) {
                                 const auto* ch = root->child(d);
                                 return ch->wins / static_cast<double>(ch->visits);
                               },
                               rng);
  return {choice, std::move(root)};
}

namespace {

// Plays the rest of the point in place; returns the winner.
Player play_out(RallyState& state, Player self, const SkillProfile& self_model,
                const SkillProfile& opponent_model, RandomStream& rng, int cap) {
  int shots = 0;
  while (!state.finished()) {
    if (shots >= cap) {
      state.winner = other(state.hitter);
      state.capped = true;
      break;
    }
    const SkillProfile& model = state.hitter == self ? self_model : opponent_model;
    const HitterContext ctx = state.context();
    Direction d = bot_decide(model, ctx, rng);
    Outcome o = sample_outcome(model, ctx, d, rng);
    advance_rally_in_place(state, d, o);
    ++shots;
  }
  return *state.winner;
}

}  // namespace

int rollout(const RallyState& point_state, Player self, const SkillProfile& self_model,
            const SkillProfile& opponent_model, RandomStream& rng, int cap) {
  RallyState state = point_state;
  return play_out(state, self, self_model, opponent_model, rng, cap) == self ? 1 : 0;
}

PointEnvironment::PointEnvironment(const RallyState& root, Player self,
                                   const SkillProfile& self_model,
                                   const SkillProfile& opponent_model, int rollout_cap)
    : root_(root),
      state_(root),
      self_(self),
      self_model_(self_model),
      opponent_model_(opponent_model),
      rollout_cap_(rollout_cap) {
  // The search never reads the log; dropping it keeps resets cheap.
  root_.shot_log.clear();
  root_.shot_log.shrink_to_fit();
  state_ = root_;
}

// Copy-assigning the empty root log keeps state_'s buffer capacity.
void PointEnvironment::reset() { state_ = root_; }

std::vector<Direction> PointEnvironment::legal_directions() const {
  return supported_directions(self_model_, state_.context());
}

void PointEnvironment::step(Direction d, const SkillProfile& model, RandomStream& rng) {
  const HitterContext ctx = state_.context();
  advance_rally_in_place(state_, d, sample_outcome(model, ctx, d, rng));
}

void PointEnvironment::play(Direction d, RandomStream& rng) {
  step(d, self_model_, rng);
  while (!state_.finished() && state_.hitter != self_) {
    step(bot_decide(opponent_model_, state_.context(), rng), opponent_model_, rng);
  }
}

double PointEnvironment::rollout(RandomStream& rng) {
  return play_out(state_, self_, self_model_, opponent_model_, rng, rollout_cap_) == self_ ? 1.0
                                                                                           : 0.0;
}

SearchParams search_params(const MctsConfig& config) {
  return {config.iterations, config.exploration_c, config.selection, config.decision};
}

SearchResult mcts_search(const RallyState& point_state, Player self, const MctsConfig& config,
                         RandomStream& rng) {
  if (!config.self_model || !config.opponent_model) {
    throw ConfigError("mcts agent needs self_model and opponent_model");
  }
  if (point_state.finished() || point_state.hitter != self) {
    throw RulesError("mcts search requires the agent to be on turn");
  }
  PointEnvironment env(point_state, self, *config.self_model, *config.opponent_model,
                       config.rollout_cap);
  return run_search(search_params(config), env, rng);
}

Direction mcts_decide(const RallyState& point_state, Player self, const MctsConfig& config,
                      RandomStream& rng) {
  return mcts_search(point_state, self, config, rng).choice;
}

}  // namespace matchpoint
