#pragma once

#include <cmath>
#include <cstdint>

namespace matchpoint {

inline constexpr double kZ95 = 1.959963984540054;

struct Interval {
  double low = 0.0;
  double high = 0.0;
  double half_width() const { return (high - low) / 2.0; }
};

// Wilson score interval for a binomial proportion, on the [0, 1] scale.
inline Interval wilson_interval(std::int64_t successes, std::int64_t trials, double z = kZ95) {
  if (trials <= 0) return {0.0, 1.0};
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (p + z2 / (2.0 * n)) / denom;
  const double half = z / denom * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n));
  return {center - half, center + half};
}

}  // namespace matchpoint
