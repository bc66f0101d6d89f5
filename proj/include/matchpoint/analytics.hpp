#pragma once

// Evaluation artifacts computed from match records: rally-length
// histograms, win summaries, serve-pattern mining and parameter sweeps.

#include <array>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "matchpoint/sim.hpp"

namespace matchpoint {

inline constexpr int kDefaultHistogramCap = 16;

// Rally lengths 1..cap plus one overflow bin (> cap). Double faults
// (length 0) are not binned; they are counted in excluded_zero_length.
struct Histogram {
  int cap = kDefaultHistogramCap;
  std::vector<std::int64_t> counts;  // size cap + 1, last is overflow
  std::vector<double> percent;       // same layout, sums to 100
  std::int64_t total = 0;
  std::int64_t excluded_zero_length = 0;

  static Histogram from_lengths(std::span<const int> lengths, int cap = kDefaultHistogramCap);
  // Percentages for lengths 1..cap; the overflow bin takes 100 - sum.
  static Histogram from_percentages(const std::vector<double>& bins);

  int bin_count() const { return cap + 1; }
  // "1".."16", then ">16".
  std::string bin_label(int bin) const;
};

// Throws std::invalid_argument on empty input.
Histogram rally_length_distribution(const std::vector<MatchRecord>& records,
                                    int cap = kDefaultHistogramCap);

struct HistogramDistance {
  double l1 = 0.0;   // percentage points
  int max_bin = 1;   // rally length; cap + 1 denotes the overflow bin
  double max_gap = 0.0;
};

// Throws std::invalid_argument when binning differs.
HistogramDistance histogram_distance(const Histogram& a, const Histogram& b);

struct WinSummary {
  std::int64_t points_total = 0;
  std::int64_t matches_total = 0;
  std::array<SideTotals, 2> sides{};
};

WinSummary win_summary(const std::vector<MatchRecord>& records);
WinSummary win_summary_from_counts(std::int64_t points_won_a, std::int64_t points_total,
                                   std::int64_t matches_won_a, std::int64_t matches_total);

struct Scenario {
  ServeNumber serve_number;
  Side side;
  friend auto operator<=>(const Scenario&, const Scenario&) = default;
};

// First serve deuce, first serve advantage, second serve deuce, second
// serve advantage.
inline constexpr int kScenarioCount = 4;
Scenario scenario_at(int index);
int scenario_index(const Scenario& s);

struct ShotPattern {
  Scenario scenario;
  // Serve direction, then up to two more directions. 0 marks a wildcard.
  std::vector<int> directions;
  std::int64_t frequency = 0;
  std::int64_t wins = 0;
  double point_win_rate = 0.0;  // percent
};

struct PatternOptions {
  // When false the return direction is replaced by a wildcard.
  bool include_return = true;
};

// Per scenario (indexed by scenario_index), the k most frequent direction
// prefixes of points `side` served. Ranked by frequency, then by
// directions ascending. A point belongs to the scenario of the serve that
// ended the serve phase; a double fault contributes the second serve alone.
std::array<std::vector<ShotPattern>, kScenarioCount> top_patterns(
    const std::vector<MatchRecord>& records, Player side, int k, PatternOptions options = {});

std::string pattern_label(const ShotPattern& p);

struct SweepRow {
  std::string label;
  double point_win_rate = 0.0;
  double match_win_rate = 0.0;
};

// One row per labeled batch, side A's rates.
std::vector<SweepRow> sweep_report(const std::vector<std::pair<std::string, BatchSummary>>& batches);

nlohmann::json histogram_to_json(const Histogram& h);
nlohmann::json win_summary_to_json(const WinSummary& s);
nlohmann::json patterns_to_json(const std::array<std::vector<ShotPattern>, kScenarioCount>& p);
nlohmann::json sweep_to_json(const std::vector<SweepRow>& rows);

void write_histogram_csv(std::ostream& out, const Histogram& h);
void write_win_summary_csv(std::ostream& out, const WinSummary& s);
void write_patterns_csv(std::ostream& out,
                        const std::array<std::vector<ShotPattern>, kScenarioCount>& p);
void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);

// Fixed-point rendering used in every CSV ("%.6f").
std::string format_number(double v);

}  // namespace matchpoint
