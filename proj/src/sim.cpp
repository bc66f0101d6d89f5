#include "matchpoint/sim.hpp"

#include <algorithm>
#include <atomic>
#include <mutex>
#include <thread>

#include "matchpoint/errors.hpp"

namespace matchpoint {

PointRecord play_point(const MatchConfig& config, const MatchScore& score, const PointSides& sides,
                       RandomStream& rng) {
  PointRecord record;
  record.score_before = render_score(config, score);
  RallyState rally = start_rally(config, score);
  record.server = rally.rally_server;
  record.side = rally.side;
  while (!rally.finished()) {
    const Player hitter = rally.hitter;
    const int h = index_of(hitter);
    const HitterContext ctx = rally.context();
    Direction d = sides.agents[h]->decide(rally, hitter, rng);
    Outcome o = sample_outcome(*sides.outcome_models[h], ctx, d, rng);
    record.shots.push_back({hitter, ctx, d, std::nullopt, o});
    advance_rally_in_place(rally, d, o);
  }
  record.serves = rally.serve_number == ServeNumber::Second ? 2 : 1;
  record.rally_length = rally.shot_count;
  record.winner = *rally.winner;
  record.capped = rally.capped;
  return record;
}

MatchRecord play_match(const MatchConfig& config, const AgentSpec& agent_a,
                       const AgentSpec& agent_b, std::uint64_t seed, Player first_server) {
  auto a = make_agent(agent_a);
  auto b = make_agent(agent_b);
  PointSides sides{{a.get(), b.get()}, {&outcome_model(agent_a), &outcome_model(agent_b)}};

  MatchRecord record;
  record.seed = seed;
  record.agent_a = describe(agent_a);
  record.agent_b = describe(agent_b);
  record.first_server = first_server;

  RandomStream rng(seed);
  MatchScore score = new_match(config, first_server);
  while (!score.completed) {
    PointRecord point = play_point(config, score, sides, rng);
    score = apply_point(config, score, point.winner);
    record.points.push_back(std::move(point));
  }
  record.final_score = render_score(config, score);
  record.winner = *score.completed;
  return record;
}

MatchScore replay_score(const MatchConfig& config, const MatchRecord& record) {
  MatchScore score = new_match(config, record.first_server);
  for (const auto& p : record.points) score = apply_point(config, score, p.winner);
  return score;
}

void BatchConfig::validate() const {
  if (n_matches <= 0) throw ConfigError("n_matches must be positive");
  if (parallelism < 1) throw ConfigError("parallelism must be >= 1");
  match.validate();
  validate_agent_spec(agent_a);
  validate_agent_spec(agent_b);
}

std::uint64_t match_seed(const BatchConfig& batch, int index) {
  return split_seed(batch.master_seed, static_cast<std::uint64_t>(index));
}

Player first_server_for(const BatchConfig& batch, int index) {
  if (!batch.alternate_first_server) return Player::A;
  return index % 2 == 0 ? Player::A : Player::B;
}

namespace {

Interval as_percent(Interval i) { return {100.0 * i.low, 100.0 * i.high}; }

double percent(std::int64_t k, std::int64_t n) {
  return n > 0 ? 100.0 * static_cast<double>(k) / static_cast<double>(n) : 0.0;
}

}  // namespace

BatchSummary summarize(const std::vector<MatchRecord>& records, int n_matches) {
  BatchSummary s;
  s.n_matches = n_matches;
  s.completed = static_cast<int>(records.size());
  for (const auto& m : records) {
    s.sides[index_of(m.winner)].matches_won++;
    for (const auto& p : m.points) {
      s.points_total++;
      s.sides[index_of(p.winner)].points_won++;
      if (p.capped) s.capped_points++;
    }
  }
  for (auto& side : s.sides) {
    side.point_win_rate = percent(side.points_won, s.points_total);
    side.match_win_rate = percent(side.matches_won, s.completed);
    side.point_ci = as_percent(wilson_interval(side.points_won, s.points_total));
    side.match_ci = as_percent(wilson_interval(side.matches_won, s.completed));
  }
  return s;
}

BatchResult run_batch(const BatchConfig& batch) {
  batch.validate();
  const int n = batch.n_matches;
  std::vector<std::optional<MatchRecord>> slots(n);
  std::vector<MatchFailure> failures;
  std::mutex failure_mutex;
  std::atomic<int> next{0};
  std::atomic<bool> abort{false};

  auto worker = [&] {
    for (;;) {
      if (abort.load()) return;
      int i = next.fetch_add(1);
      if (i >= n) return;
      try {
        MatchRecord rec = play_match(batch.match, batch.agent_a, batch.agent_b,
                                     match_seed(batch, i), first_server_for(batch, i));
        rec.index = static_cast<std::uint64_t>(i);
        if (!batch.keep_shots) {
          for (auto& p : rec.points) {
            p.shots.clear();
            p.shots.shrink_to_fit();
          }
        }
        slots[i] = std::move(rec);
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        failures.push_back({i, e.what()});
        abort.store(true);
      }
    }
  };

  const int threads = std::min(batch.parallelism, n);
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  BatchResult result;
  for (auto& slot : slots) {
    if (slot) result.records.push_back(std::move(*slot));
  }
  result.summary = summarize(result.records, n);
  std::sort(failures.begin(), failures.end(),
            [](const MatchFailure& a, const MatchFailure& b) { return a.index < b.index; });
  result.summary.failed = std::move(failures);
  return result;
}

}  // namespace matchpoint
