#include "matchpoint/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>
#include <stdexcept>

namespace matchpoint {

using nlohmann::json;

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

Histogram Histogram::from_lengths(std::span<const int> lengths, int cap) {
  if (cap < 1) throw std::invalid_argument("histogram cap must be >= 1");
  Histogram h;
  h.cap = cap;
  h.counts.assign(cap + 1, 0);
  for (int len : lengths) {
    if (len <= 0) {
      h.excluded_zero_length++;
      continue;
    }
    h.counts[std::min(len, cap + 1) - 1]++;
    h.total++;
  }
  h.percent.assign(cap + 1, 0.0);
  if (h.total > 0) {
    for (int i = 0; i <= cap; ++i) {
      h.percent[i] = 100.0 * static_cast<double>(h.counts[i]) / static_cast<double>(h.total);
    }
  }
  return h;
}

Histogram Histogram::from_percentages(const std::vector<double>& bins) {
  if (bins.empty()) throw std::invalid_argument("histogram needs at least one bin");
  Histogram h;
  h.cap = static_cast<int>(bins.size());
  h.counts.assign(h.cap + 1, 0);
  h.percent = bins;
  double sum = 0.0;
  for (double b : bins) sum += b;
  h.percent.push_back(100.0 - sum);
  return h;
}

std::string Histogram::bin_label(int bin) const {
  return bin < cap ? std::to_string(bin + 1) : ">" + std::to_string(cap);
}

Histogram rally_length_distribution(const std::vector<MatchRecord>& records, int cap) {
  std::vector<int> lengths;
  for (const auto& m : records) {
    for (const auto& p : m.points) lengths.push_back(p.rally_length);
  }
  if (lengths.empty()) throw std::invalid_argument("rally_length_distribution: no points");
  return Histogram::from_lengths(lengths, cap);
}

HistogramDistance histogram_distance(const Histogram& a, const Histogram& b) {
  if (a.cap != b.cap || a.percent.size() != b.percent.size()) {
    throw std::invalid_argument("histogram_distance: binning mismatch");
  }
  HistogramDistance d;
  for (std::size_t i = 0; i < a.percent.size(); ++i) {
    double gap = std::abs(a.percent[i] - b.percent[i]);
    d.l1 += gap;
    if (gap > d.max_gap) {
      d.max_gap = gap;
      d.max_bin = static_cast<int>(i) + 1;
    }
  }
  return d;
}

namespace {

SideTotals side_totals(std::int64_t points_won, std::int64_t points_total,
                       std::int64_t matches_won, std::int64_t matches_total) {
  auto pct = [](std::int64_t k, std::int64_t n) {
    return n > 0 ? 100.0 * static_cast<double>(k) / static_cast<double>(n) : 0.0;
  };
  auto ci = [](std::int64_t k, std::int64_t n) {
    Interval i = wilson_interval(k, n);
    return Interval{100.0 * i.low, 100.0 * i.high};
  };
  SideTotals t;
  t.points_won = points_won;
  t.matches_won = matches_won;
  t.point_win_rate = pct(points_won, points_total);
  t.match_win_rate = pct(matches_won, matches_total);
  t.point_ci = ci(points_won, points_total);
  t.match_ci = ci(matches_won, matches_total);
  return t;
}

}  // namespace

WinSummary win_summary_from_counts(std::int64_t points_won_a, std::int64_t points_total,
                                   std::int64_t matches_won_a, std::int64_t matches_total) {
  WinSummary s;
  s.points_total = points_total;
  s.matches_total = matches_total;
  s.sides[0] = side_totals(points_won_a, points_total, matches_won_a, matches_total);
  s.sides[1] = side_totals(points_total - points_won_a, points_total,
                           matches_total - matches_won_a, matches_total);
  return s;
}

WinSummary win_summary(const std::vector<MatchRecord>& records) {
  if (records.empty()) throw std::invalid_argument("win_summary: no records");
  std::int64_t points = 0, points_a = 0, matches_a = 0;
  for (const auto& m : records) {
    if (m.winner == Player::A) matches_a++;
    for (const auto& p : m.points) {
      points++;
      if (p.winner == Player::A) points_a++;
    }
  }
  return win_summary_from_counts(points_a, points, matches_a,
                                 static_cast<std::int64_t>(records.size()));
}

Scenario scenario_at(int index) {
  return {static_cast<ServeNumber>(index / 2), static_cast<Side>(index % 2)};
}

int scenario_index(const Scenario& s) {
  return static_cast<int>(s.serve_number) * 2 + static_cast<int>(s.side);
}

std::array<std::vector<ShotPattern>, kScenarioCount> top_patterns(
    const std::vector<MatchRecord>& records, Player side, int k, PatternOptions options) {
  if (records.empty()) throw std::invalid_argument("top_patterns: no records");
  if (k < 1) throw std::invalid_argument("top_patterns: k must be >= 1");

  // directions -> (frequency, wins), per scenario
  std::array<std::map<std::vector<int>, std::pair<std::int64_t, std::int64_t>>, kScenarioCount>
      tallies;
  for (const auto& m : records) {
    for (const auto& p : m.points) {
      if (p.server != side) continue;
      std::size_t serve_at = p.shots.size();
      for (std::size_t i = 0; i < p.shots.size(); ++i) {
        if (p.shots[i].direction.is_serve()) serve_at = i;
      }
      if (serve_at == p.shots.size()) continue;  // shot log dropped
      std::vector<int> dirs;
      for (std::size_t i = serve_at; i < p.shots.size() && dirs.size() < 3; ++i) {
        bool is_return = i == serve_at + 1;
        dirs.push_back(is_return && !options.include_return ? 0 : p.shots[i].direction.code());
      }
      Scenario sc{p.serves == 2 ? ServeNumber::Second : ServeNumber::First, p.side};
      auto& cell = tallies[scenario_index(sc)][dirs];
      cell.first++;
      if (p.winner == side) cell.second++;
    }
  }

  std::array<std::vector<ShotPattern>, kScenarioCount> out;
  for (int s = 0; s < kScenarioCount; ++s) {
    auto& list = out[s];
    for (const auto& [dirs, fw] : tallies[s]) {
      list.push_back({scenario_at(s), dirs, fw.first, fw.second,
                      100.0 * static_cast<double>(fw.second) / static_cast<double>(fw.first)});
    }
    std::stable_sort(list.begin(), list.end(), [](const ShotPattern& a, const ShotPattern& b) {
      if (a.frequency != b.frequency) return a.frequency > b.frequency;
      return a.directions < b.directions;
    });
    if (static_cast<int>(list.size()) > k) list.resize(k);
  }
  return out;
}

std::string pattern_label(const ShotPattern& p) {
  std::string s;
  for (std::size_t i = 0; i < p.directions.size(); ++i) {
    if (i) s += '-';
    s += p.directions[i] == 0 ? std::string("*") : std::to_string(p.directions[i]);
  }
  return s;
}

std::vector<SweepRow> sweep_report(const std::vector<std::pair<std::string, BatchSummary>>& batches) {
  std::vector<SweepRow> rows;
  for (const auto& [label, summary] : batches) {
    rows.push_back({label, summary.sides[0].point_win_rate, summary.sides[0].match_win_rate});
  }
  return rows;
}

json histogram_to_json(const Histogram& h) {
  json bins = json::array();
  for (int i = 0; i < h.bin_count(); ++i) {
    bins.push_back({{"rally_length", h.bin_label(i)},
                    {"count", h.counts[i]},
                    {"percent", h.percent[i]}});
  }
  return {{"cap", h.cap},
          {"total", h.total},
          {"excluded_zero_length", h.excluded_zero_length},
          {"bins", bins}};
}

json win_summary_to_json(const WinSummary& s) {
  json sides = json::object();
  for (Player p : {Player::A, Player::B}) {
    const auto& t = s.sides[index_of(p)];
    sides[to_string(p)] = {{"points_won", t.points_won},
                           {"matches_won", t.matches_won},
                           {"point_win_rate", t.point_win_rate},
                           {"match_win_rate", t.match_win_rate},
                           {"point_ci95", {t.point_ci.low, t.point_ci.high}},
                           {"match_ci95", {t.match_ci.low, t.match_ci.high}}};
  }
  return {{"points_total", s.points_total}, {"matches_total", s.matches_total}, {"sides", sides}};
}

json patterns_to_json(const std::array<std::vector<ShotPattern>, kScenarioCount>& p) {
  json out = json::array();
  for (int s = 0; s < kScenarioCount; ++s) {
    const Scenario sc = scenario_at(s);
    json list = json::array();
    for (const auto& pat : p[s]) {
      list.push_back({{"pattern", pattern_label(pat)},
                      {"frequency", pat.frequency},
                      {"wins", pat.wins},
                      {"point_win_rate", pat.point_win_rate}});
    }
    out.push_back({{"serve_number", to_string(sc.serve_number)},
                   {"side", to_string(sc.side)},
                   {"patterns", list}});
  }
  return out;
}

json sweep_to_json(const std::vector<SweepRow>& rows) {
  json out = json::array();
  for (const auto& r : rows) {
    out.push_back({{"label", r.label},
                   {"point_win_rate", r.point_win_rate},
                   {"match_win_rate", r.match_win_rate}});
  }
  return out;
}

void write_histogram_csv(std::ostream& out, const Histogram& h) {
  out << "rally_length,count,percent\n";
  for (int i = 0; i < h.bin_count(); ++i) {
    out << h.bin_label(i) << ',' << h.counts[i] << ',' << format_number(h.percent[i]) << '\n';
  }
}

void write_win_summary_csv(std::ostream& out, const WinSummary& s) {
  out << "side,points_won,points_total,point_win_rate,point_ci_low,point_ci_high,"
         "matches_won,matches_total,match_win_rate,match_ci_low,match_ci_high\n";
  for (Player p : {Player::A, Player::B}) {
    const auto& t = s.sides[index_of(p)];
    out << to_string(p) << ',' << t.points_won << ',' << s.points_total << ','
        << format_number(t.point_win_rate) << ',' << format_number(t.point_ci.low) << ','
        << format_number(t.point_ci.high) << ',' << t.matches_won << ',' << s.matches_total << ','
        << format_number(t.match_win_rate) << ',' << format_number(t.match_ci.low) << ','
        << format_number(t.match_ci.high) << '\n';
  }
}

void write_patterns_csv(std::ostream& out,
                        const std::array<std::vector<ShotPattern>, kScenarioCount>& p) {
  out << "serve_number,side,rank,pattern,frequency,wins,point_win_rate\n";
  for (int s = 0; s < kScenarioCount; ++s) {
    const Scenario sc = scenario_at(s);
    for (std::size_t r = 0; r < p[s].size(); ++r) {
      const auto& pat = p[s][r];
      out << to_string(sc.serve_number) << ',' << to_string(sc.side) << ',' << r + 1 << ','
          << pattern_label(pat) << ',' << pat.frequency << ',' << pat.wins << ','
          << format_number(pat.point_win_rate) << '\n';
    }
  }
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << "label,point_win_rate,match_win_rate\n";
  for (const auto& r : rows) {
    out << r.label << ',' << format_number(r.point_win_rate) << ','
        << format_number(r.match_win_rate) << '\n';
  }
}

}  // namespace matchpoint
