#include "matchpoint/shot_model.hpp"

#include <cmath>
#include <sstream>
#include <utility>

#include "matchpoint/errors.hpp"

namespace matchpoint {

const char* to_string(Outcome o) {
  switch (o) {
    case Outcome::Error: return "error";
    case Outcome::Winner: return "winner";
    case Outcome::InPlay: return "in_play";
  }
  return "?";
}

const char* to_string(Side s) { return s == Side::Deuce ? "deuce" : "advantage"; }

const char* to_string(ServeNumber n) { return n == ServeNumber::First ? "first" : "second"; }

Direction Direction::from_code(int code) {
  if (code < 1 || code > 6) {
    throw EncodingError("direction code " + std::to_string(code) + " outside 1-6");
  }
  return Direction(code);
}

Direction Direction::rally(int code) {
  if (code < 1 || code > 3) {
    throw EncodingError("rally direction code " + std::to_string(code) + " outside 1-3");
  }
  return Direction(code);
}

Direction Direction::serve(int code) {
  if (code < 4 || code > 6) {
    throw EncodingError("serve direction code " + std::to_string(code) + " outside 4-6");
  }
  return Direction(code);
}

Direction Direction::from_slot(bool serve, int slot) {
  if (slot < 0 || slot > 2) throw EncodingError("direction slot " + std::to_string(slot));
  return Direction(serve ? slot + 4 : slot + 1);
}

namespace {

int side_serve_index(Side side, ServeNumber n) {
  return static_cast<int>(side) * 2 + static_cast<int>(n);
}

}  // namespace

int context_index(const HitterContext& ctx) {
  struct Visitor {
    int operator()(const ServeContext& c) const { return side_serve_index(c.side, c.serve_number); }
    int operator()(const ReturnContext& c) const {
      if (!c.serve_direction.is_serve()) {
        throw EncodingError("return context needs a serve direction, got " +
                            std::to_string(c.serve_direction.code()));
      }
      return kServeContextCount + side_serve_index(c.side, c.serve_number) * 3 +
             c.serve_direction.slot();
    }
    int operator()(const RallyContext& c) const {
      if (c.previous_direction.is_serve()) {
        throw EncodingError("rally context needs a rally direction, got " +
                            std::to_string(c.previous_direction.code()));
      }
      int group = (c.hitter_served ? 1 : 0) * 2 + static_cast<int>(c.serve_number);
      return kServeContextCount + kReturnContextCount + group * 3 + c.previous_direction.slot();
    }
  };
  return std::visit(Visitor{}, ctx);
}

HitterContext context_at(int index) {
  if (index < 0 || index >= kContextCount) {
    throw LookupError("context index " + std::to_string(index) + " outside 0-27");
  }
  if (index < kServeContextCount) {
    return ServeContext{static_cast<Side>(index / 2), static_cast<ServeNumber>(index % 2)};
  }
  index -= kServeContextCount;
  if (index < kReturnContextCount) {
    int group = index / 3;
    return ReturnContext{static_cast<Side>(group / 2), static_cast<ServeNumber>(group % 2),
                         Direction::from_slot(true, index % 3)};
  }
  index -= kReturnContextCount;
  int group = index / 3;
  return RallyContext{group / 2 == 1, static_cast<ServeNumber>(group % 2),
                      Direction::from_slot(false, index % 3)};
}

namespace {

template <std::size_t... I>
std::array<HitterContext, kContextCount> make_contexts(std::index_sequence<I...>) {
  return {context_at(static_cast<int>(I))...};
}

}  // namespace

const std::array<HitterContext, kContextCount>& all_contexts() {
  static const auto contexts = make_contexts(std::make_index_sequence<kContextCount>{});
  return contexts;
}

std::string to_string(const HitterContext& ctx) {
  std::ostringstream os;
  if (const auto* s = std::get_if<ServeContext>(&ctx)) {
    os << "Serve{" << to_string(s->side) << "," << to_string(s->serve_number) << "}";
  } else if (const auto* r = std::get_if<ReturnContext>(&ctx)) {
    os << "Return{" << to_string(r->side) << "," << to_string(r->serve_number) << ",serve "
       << r->serve_direction.code() << "}";
  } else {
    const auto& y = std::get<RallyContext>(ctx);
    os << "Rally{" << (y.hitter_served ? "server" : "returner") << ","
       << to_string(y.serve_number) << ",prev " << y.previous_direction.code() << "}";
  }
  return os.str();
}

void SkillProfile::set(const HitterContext& ctx, const ProbabilityGrid& grid) {
  tables_[context_index(ctx)] = grid;
}

void SkillProfile::erase(const HitterContext& ctx) { tables_[context_index(ctx)].reset(); }

bool SkillProfile::contains(const HitterContext& ctx) const {
  return tables_[context_index(ctx)].has_value();
}

const ProbabilityGrid* SkillProfile::find(const HitterContext& ctx) const {
  const auto& slot = tables_[context_index(ctx)];
  return slot ? &*slot : nullptr;
}

const ProbabilityGrid& SkillProfile::at(const HitterContext& ctx) const {
  if (const auto* grid = find(ctx)) return *grid;
  throw LookupError("profile has no table for context " + to_string(ctx));
}

int SkillProfile::context_count() const {
  int n = 0;
  for (const auto& t : tables_) n += t.has_value() ? 1 : 0;
  return n;
}

std::string ValidationIssue::describe() const {
  std::ostringstream os;
  os << to_string(context) << ": ";
  switch (kind) {
    case Kind::Missing: os << "missing context"; break;
    case Kind::Negative: os << "entry outside [0,1]: " << value; break;
    case Kind::NotNormalized: os << "row does not sum to 1 (deficit " << value << ")"; break;
    case Kind::NoTerminal: os << "zero error+winner probability"; break;
  }
  return os.str();
}

ValidationReport validate_profile(const SkillProfile& profile) {
  ValidationReport report;
  for (const auto& ctx : all_contexts()) {
    const auto* grid = profile.find(ctx);
    if (grid == nullptr) {
      report.issues.push_back({ctx, ValidationIssue::Kind::Missing, 0.0});
      continue;
    }
    double sum = 0.0;
    double terminal = 0.0;
    for (const auto& row : *grid) {
      for (int o = 0; o < 3; ++o) {
        double p = row[o];
        if (!(p >= 0.0 && p <= 1.0)) {
          report.issues.push_back({ctx, ValidationIssue::Kind::Negative, p});
        }
        sum += p;
        if (o != outcome_index(Outcome::InPlay)) terminal += p;
      }
    }
    if (!(std::abs(sum - 1.0) <= kProbabilityTolerance)) {
      report.issues.push_back({ctx, ValidationIssue::Kind::NotNormalized, 1.0 - sum});
    }
    if (!(terminal > 0.0)) {
      report.issues.push_back({ctx, ValidationIssue::Kind::NoTerminal, terminal});
    }
  }
  return report;
}

std::array<double, 3> direction_marginal(const SkillProfile& profile, const HitterContext& ctx) {
  const auto& grid = profile.at(ctx);
  std::array<double, 3> out{};
  for (int d = 0; d < 3; ++d) out[d] = grid[d][0] + grid[d][1] + grid[d][2];
  return out;
}

OutcomeDistribution outcome_conditional(const SkillProfile& profile, const HitterContext& ctx,
                                        Direction dir) {
  if (dir.is_serve() != is_serve_context(ctx)) {
    throw EncodingError("direction " + std::to_string(dir.code()) + " is illegal in " +
                        to_string(ctx));
  }
  const auto& row = profile.at(ctx)[dir.slot()];
  double total = row[0] + row[1] + row[2];
  if (!(total > 0.0)) {
    throw UnsupportedDirection("direction " + std::to_string(dir.code()) +
                               " never observed in " + to_string(ctx));
  }
  return {row[0] / total, row[1] / total, row[2] / total};
}

Outcome sample_outcome(const OutcomeDistribution& dist, RandomStream& rng) {
  double u = rng.uniform();
  if (u < dist.error) return Outcome::Error;
  if (u < dist.error + dist.winner) return Outcome::Winner;
  return Outcome::InPlay;
}

Outcome sample_outcome(const SkillProfile& profile, const HitterContext& ctx, Direction dir,
                       RandomStream& rng) {
  return sample_outcome(outcome_conditional(profile, ctx, dir), rng);
}

std::vector<Direction> supported_directions(const SkillProfile& profile, const HitterContext& ctx) {
  auto marginal = direction_marginal(profile, ctx);
  std::vector<Direction> out;
  for (int d = 0; d < 3; ++d) {
    if (marginal[d] > 0.0) out.push_back(Direction::from_slot(is_serve_context(ctx), d));
  }
  return out;
}

}  // namespace matchpoint
