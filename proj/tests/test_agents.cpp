#include <doctest.h>

#include <cmath>
#include <functional>
#include <memory>

#include "helpers.hpp"
#include "matchpoint/agents.hpp"
#include "matchpoint/errors.hpp"

using namespace matchpoint;
using namespace matchpoint::testing;

namespace {

const MatchConfig kConfig{};

// Direction in slot 1 wins 90% of the time; the other two err 90% of the time.
SkillProfile degenerate_profile() {
  return uniform_profile({{{0.3, 0.0, 0.1 / 3}, {0.0, 0.3, 0.1 / 3}, {0.3, 0.0, 0.1 / 3}}});
}

// Self is on turn mid-rally: B served into play, A returns.
RallyState return_state() {
  auto r = start_rally(kConfig, new_match(kConfig, Player::B));
  advance_rally_in_place(r, Direction::serve(5), Outcome::InPlay);
  return r;
}

MctsConfig mcts_with(ProfileRef self, ProfileRef opp, int iterations, double c = kSqrt2) {
  MctsConfig m;
  m.iterations = iterations;
  m.exploration_c = c;
  m.self_model = std::move(self);
  m.opponent_model = std::move(opp);
  return m;
}

// One decision, then a fixed reward per direction; nothing random after.
class FrozenRewardEnv final : public SearchEnvironment {
 public:
  explicit FrozenRewardEnv(std::array<double, 3> rewards) : rewards_(rewards) {}
  void reset() override { chosen_ = 0; }
  bool terminal() const override { return chosen_ != 0; }
  std::vector<Direction> legal_directions() const override {
    return {Direction::rally(1), Direction::rally(2), Direction::rally(3)};
  }
  void play(Direction d, RandomStream&) override { chosen_ = d.code(); }
  double rollout(RandomStream&) override { throw std::logic_error("rollout on terminal"); }
  double reward() const override { return rewards_[chosen_ - 1]; }

 private:
  std::array<double, 3> rewards_;
  int chosen_ = 0;
};

std::array<std::int64_t, 3> root_visits(const SearchNode& root) {
  std::array<std::int64_t, 3> v{};
  for (int d = 1; d <= 3; ++d) {
    if (const auto* c = root.child(Direction::rally(d))) v[d - 1] = c->visits;
  }
  return v;
}

void check_tree(const SearchNode& n, int& nodes) {
  ++nodes;
  CHECK(n.wins <= static_cast<double>(n.visits));
  CHECK(n.wins >= 0.0);
  CHECK(n.visits >= n.child_visit_sum());
  for (const auto& c : n.children) {
    if (c) check_tree(*c, nodes);
  }
}

}  // namespace

TEST_CASE("bot_decide follows the direction marginal") {
  const HitterContext rally = RallyContext{false, ServeNumber::First, Direction::rally(3)};
  auto only2 = uniform_profile({{{0, 0, 0}, {0.1, 0.2, 0.7}, {0, 0, 0}}});
  RandomStream rng(5);
  for (int i = 0; i < 1000; ++i) CHECK(bot_decide(only2, rally, rng).code() == 2);

  auto flat = uniform_profile(flat_grid());
  std::array<int, 3> counts{};
  for (int i = 0; i < 30000; ++i) counts[bot_decide(flat, rally, rng).code() - 1]++;
  for (int c : counts) CHECK(std::abs(c / 30000.0 - 1.0 / 3) < 0.02);

  const HitterContext serve = ServeContext{Side::Advantage, ServeNumber::Second};
  for (int i = 0; i < 100; ++i) {
    const int code = bot_decide(flat, serve, rng).code();
    CHECK(code >= 4);
    CHECK(code <= 6);
  }

  RandomStream a(3), b(3);
  bot_decide(flat, rally, a);
  b.uniform();
  CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("uct_value examples and errors") {
  // 0.5 + sqrt(2) sqrt(ln 100 / 10), evaluated to 30 digits offline.
  CHECK(std::abs(uct_value(5, 10, 100, kSqrt2) - 1.45970518243761624) < 1e-12);
  CHECK(uct_value(3, 7, 50, 0.0) == 3.0 / 7.0);
  const int n = 40;
  CHECK(uct_value(n, n, n, 2.5) == doctest::Approx(1 + 2.5 * std::sqrt(std::log(40.0) / 40)));
  CHECK_THROWS_AS(uct_value(0, 0, 10, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(uct_value(0, 1, 0, 1.0), std::invalid_argument);
}

TEST_CASE("uct_value matches independent arithmetic on 1000 random tuples") {
  RandomStream rng(606);
  for (int i = 0; i < 1000; ++i) {
    const std::int64_t n = 1 + rng.below(100000);
    const std::int64_t N = n + rng.below(1000000);
    const double w = std::floor(rng.uniform() * static_cast<double>(n + 1));
    const double c = rng.uniform() * 5.0;
    // ln N via log2 so the reference does not share the code path.
    const double ln_N = std::log2(static_cast<double>(N)) * 0.69314718055994530942;
    const double expected = w / n + c * std::sqrt(ln_N / static_cast<double>(n));
    CHECK(std::abs(uct_value(w, n, N, c) - expected) <= 1e-12);
  }
}

TEST_CASE("select_child examples") {
  RandomStream rng(1);
  const std::vector<Direction> legal{Direction::rally(1), Direction::rally(2),
                                     Direction::rally(3)};
  SearchNode node;
  node.visits = 15;
  auto& a = node.child_or_create(Direction::rally(1));
  a.visits = 10;
  a.wins = 5;
  auto& b = node.child_or_create(Direction::rally(2));
  b.visits = 5;
  b.wins = 3;

  // Direction 3 is unvisited and comes first.
  CHECK(select_child(SelectionPolicy::Uct, node, legal, kSqrt2, rng).code() == 3);

  // Without it: A = 1.236, B = 1.641.
  const std::vector<Direction> ab{Direction::rally(1), Direction::rally(2)};
  CHECK(uct_value(5, 10, 15, kSqrt2) == doctest::Approx(1.236).epsilon(1e-3));
  CHECK(uct_value(3, 5, 15, kSqrt2) == doctest::Approx(1.641).epsilon(1e-3));
  CHECK(select_child(SelectionPolicy::Uct, node, ab, kSqrt2, rng).code() == 2);

  auto& c = node.child_or_create(Direction::rally(3));
  a = {};
  a.visits = 10, a.wins = 6;
  b.visits = 10, b.wins = 5;
  c.visits = 10, c.wins = 4;
  node.visits = 30;
  CHECK(select_child(SelectionPolicy::Greedy, node, legal, kSqrt2, rng).code() == 1);

  std::array<int, 3> counts{};
  for (int i = 0; i < 3000; ++i) {
    counts[select_child(SelectionPolicy::Random, node, legal, 0, rng).code() - 1]++;
  }
  for (int n : counts) CHECK(std::abs(n / 3000.0 - 1.0 / 3) < 0.04);

  // Ties are broken uniformly.
  c.wins = 6;
  std::array<int, 3> ties{};
  for (int i = 0; i < 2000; ++i) {
    ties[select_child(SelectionPolicy::Greedy, node, legal, 0, rng).code() - 1]++;
  }
  CHECK(ties[1] == 0);
  CHECK(std::abs(ties[0] - 1000) < 120);

  CHECK_THROWS_AS(select_child(SelectionPolicy::Uct, node, {}, kSqrt2, rng), RulesError);
}

TEST_CASE("frozen rewards: Greedy selection is UCT with C = 0") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    FrozenRewardEnv env({0.3, 0.7, 0.5});
    SearchParams greedy{200, kSqrt2, SelectionPolicy::Greedy, DecisionPolicy::GreedyValue};
    SearchParams uct0{200, 0.0, SelectionPolicy::Uct, DecisionPolicy::GreedyValue};
    RandomStream r1(seed), r2(seed);
    auto g = run_search(greedy, env, r1);
    auto u = run_search(uct0, env, r2);
    CHECK(g.choice == u.choice);
    CHECK(root_visits(*g.root) == root_visits(*u.root));
    // After each child is tried once only the best keeps receiving visits.
    CHECK(root_visits(*u.root) == std::array<std::int64_t, 3>{1, 198, 1});
    CHECK(u.choice.code() == 2);
  }
}

TEST_CASE("large C balances root visits") {
  FrozenRewardEnv env({0.1, 0.9, 0.5});
  for (int iterations : {300, 900}) {
    RandomStream rng(17);
    auto r = run_search({iterations, 100.0, SelectionPolicy::Uct, DecisionPolicy::MaxVisits}, env,
                        rng);
    auto v = root_visits(*r.root);
    const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    CHECK(static_cast<double>(*hi) <= 1.2 * static_cast<double>(*lo));
    CHECK(r.root->visits == iterations);
  }
}

TEST_CASE("degenerate profile: point values and search choice") {
  // Independent oracle. A bot on turn wins immediately w.p. 0.3, loses
  // immediately w.p. 0.6 and hands the ball back w.p. 0.1:
  //   v = 0.3 + 0.1 (1 - v)  =>  v = 0.4 / 1.1.
  // Agent choosing slot 1: 0.9 + 0.1 (1 - v); slot 0 or 2: 0.1 (1 - v).
  const double v = 0.4 / 1.1;
  const double good = 0.9 + 0.1 * (1 - v);
  const double bad = 0.1 * (1 - v);
  CHECK(good == doctest::Approx(0.963636).epsilon(1e-5));
  CHECK(bad == doctest::Approx(0.063636).epsilon(1e-5));

  auto p = std::make_shared<const SkillProfile>(degenerate_profile());
  const auto state = return_state();

  // Rollout estimates of each first move agree with the oracle.
  RandomStream rr(77);
  for (int d = 1; d <= 3; ++d) {
    double total = 0;
    const int n = 20000;
    for (int i = 0; i < n; ++i) {
      auto s = state;
      advance_rally_in_place(s, Direction::rally(d),
                             sample_outcome(*p, s.context(), Direction::rally(d), rr));
      total += s.finished() ? (*s.winner == Player::A) : rollout(s, Player::A, *p, *p, rr, 200);
    }
    CHECK(std::abs(total / n - (d == 2 ? good : bad)) < 0.01);
  }

  int picked = 0;
  const auto config = mcts_with(p, p, 500);
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    RandomStream rng(split_seed(99, seed));
    if (mcts_decide(state, Player::A, config, rng).code() == 2) ++picked;
  }
  CHECK(picked >= 95);
}

TEST_CASE("identical directions: choices are uniform (chi-square, alpha 0.01)") {
  auto p = std::make_shared<const SkillProfile>(uniform_profile(grid_with(0.2, 0.1)));
  const auto state = return_state();
  const auto config = mcts_with(p, p, 30);
  std::array<int, 3> counts{};
  const int n = 3000;
  for (int i = 0; i < n; ++i) {
    RandomStream rng(split_seed(2024, i));
    counts[mcts_decide(state, Player::A, config, rng).code() - 1]++;
  }
  double chi2 = 0;
  for (int c : counts) chi2 += (c - n / 3.0) * (c - n / 3.0) / (n / 3.0);
  CHECK(chi2 < 9.21);
}

TEST_CASE("rollout symmetry and forced rewards") {
  auto flat = uniform_profile(grid_with(0.15, 0.1));
  RandomStream rng(4);
  double total = 0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    const Player server = i % 2 ? Player::A : Player::B;
    auto s = start_rally(kConfig, new_match(kConfig, server));
    total += rollout(s, Player::A, flat, flat, rng, 200);
  }
  CHECK(std::abs(total / n - 0.5) < 0.02);

  auto always_win = uniform_profile({{{0, 1.0 / 3, 0}, {0, 1.0 / 3, 0}, {0, 1.0 / 3, 0}}});
  auto always_err = uniform_profile({{{1.0 / 3, 0, 0}, {1.0 / 3, 0, 0}, {1.0 / 3, 0, 0}}});
  const auto state = return_state();
  for (int i = 0; i < 100; ++i) {
    CHECK(rollout(state, Player::A, always_win, flat, rng, 200) == 1);
    CHECK(rollout(state, Player::A, always_err, flat, rng, 200) == 0);
  }
}

TEST_CASE("search bookkeeping, boundaries and determinism") {
  auto p = std::make_shared<const SkillProfile>(uniform_profile(grid_with(0.2, 0.1)));
  auto q = std::make_shared<const SkillProfile>(uniform_profile(grid_with(0.25, 0.08)));
  const auto state = return_state();

  for (int it : {1, 3, 50, 400}) {
    RandomStream rng(it);
    auto r = mcts_search(state, Player::A, mcts_with(p, q, it), rng);
    CHECK(r.root->visits == it);
    CHECK(r.root->child_visit_sum() == it);
    double child_wins = 0;
    for (const auto& c : r.root->children) {
      if (c) child_wins += c->wins;
    }
    CHECK(r.root->wins == child_wins);
    int nodes = 0;
    check_tree(*r.root, nodes);
    CHECK(nodes <= it + 1);
    CHECK(r.choice.code() >= 1);
    CHECK(r.choice.code() <= 3);
  }

  // Serving: choices are serve codes.
  auto serve_state = start_rally(kConfig, new_match(kConfig, Player::A));
  RandomStream srng(9);
  const int code = mcts_decide(serve_state, Player::A, mcts_with(p, q, 60), srng).code();
  CHECK(code >= 4);

  std::vector<int> first, second;
  for (int k = 0; k < 2; ++k) {
    RandomStream rng(1234);
    auto& out = k == 0 ? first : second;
    for (int i = 0; i < 20; ++i) out.push_back(mcts_decide(state, Player::A, mcts_with(p, q, 80), rng).code());
  }
  CHECK(first == second);

  RandomStream rng(1);
  CHECK_THROWS_AS(mcts_decide(state, Player::B, mcts_with(p, q, 10), rng), RulesError);
  auto zero = mcts_with(p, q, 0);
  CHECK_THROWS_AS(zero.validate(), ConfigError);
  FrozenRewardEnv env({0, 0, 0});
  CHECK_THROWS_AS(run_search({0, 1.0, SelectionPolicy::Uct, DecisionPolicy::GreedyValue}, env, rng),
                  ConfigError);
}

TEST_CASE("legal directions come from the self model") {
  // Self model never uses direction 1 anywhere.
  auto no1 = std::make_shared<const SkillProfile>(
      uniform_profile({{{0, 0, 0}, {0.1, 0.1, 0.3}, {0.1, 0.1, 0.3}}}));
  auto flat = std::make_shared<const SkillProfile>(uniform_profile(flat_grid()));
  const auto state = return_state();
  RandomStream rng(2);
  auto r = mcts_search(state, Player::A, mcts_with(no1, flat, 100), rng);
  CHECK(r.root->child(Direction::rally(1)) == nullptr);
  CHECK(r.choice.code() != 1);
}

TEST_CASE("agent specs") {
  auto flat = std::make_shared<const SkillProfile>(uniform_profile(flat_grid()));
  CHECK(describe(AgentSpec{BotSpec{flat, "avg.json"}}) == "bot(avg.json)");
  CHECK(describe(AgentSpec{UniformRandomSpec{flat, "avg.json"}}) == "random(avg.json)");
  CHECK(describe(AgentSpec{mcts_with(flat, flat, 1000)}) == "mcts(uct,c=1.41421,it=1000)");

  SkillProfile broken = uniform_profile(flat_grid());
  broken.erase(ServeContext{Side::Deuce, ServeNumber::First});
  auto bad = std::make_shared<const SkillProfile>(broken);
  CHECK_THROWS_AS(validate_agent_spec(AgentSpec{BotSpec{bad, "x"}}), ConfigError);
  CHECK_THROWS_AS(make_agent(AgentSpec{mcts_with(flat, nullptr, 10)}), ConfigError);

  // The random agent ignores the marginal but never picks unsupported directions.
  auto only23 = std::make_shared<const SkillProfile>(
      uniform_profile({{{0, 0, 0}, {0.45, 0.05, 0.4}, {0.01, 0.01, 0.08}}}));
  auto agent = make_agent(AgentSpec{UniformRandomSpec{only23, "x"}});
  RandomStream rng(8);
  const auto state = return_state();
  std::array<int, 3> counts{};
  for (int i = 0; i < 6000; ++i) counts[agent->decide(state, Player::A, rng).code() - 1]++;
  CHECK(counts[0] == 0);
  CHECK(std::abs(counts[1] - 3000) < 200);
}
