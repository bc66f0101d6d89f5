#pragma once

// Shared profile builders for the tests.

#include <functional>

#include "matchpoint/shot_model.hpp"

namespace matchpoint::testing {

// Same grid in every context.
inline SkillProfile uniform_profile(const ProbabilityGrid& grid, std::string provenance = "test") {
  SkillProfile p(std::move(provenance));
  for (const auto& ctx : all_contexts()) p.set(ctx, grid);
  return p;
}

inline ProbabilityGrid flat_grid() {
  ProbabilityGrid g{};
  for (auto& row : g) row = {1.0 / 9, 1.0 / 9, 1.0 / 9};
  return g;
}

// Each direction equally likely; per shot P(error)=e, P(winner)=w.
inline ProbabilityGrid grid_with(double e, double w) {
  ProbabilityGrid g{};
  for (auto& row : g) row = {e / 3, w / 3, (1.0 - e - w) / 3};
  return g;
}

inline SkillProfile profile_from(const std::function<ProbabilityGrid(const HitterContext&)>& f) {
  SkillProfile p("test");
  for (const auto& ctx : all_contexts()) p.set(ctx, f(ctx));
  return p;
}

}  // namespace matchpoint::testing
