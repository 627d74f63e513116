#pragma once

// Revival quality under the per-step coin-dephasing model.

#include <cmath>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "qwrevival/analysis.hpp"
#include "qwrevival/evolution.hpp"
#include "qwrevival/walk_state.hpp"

namespace qwr {

struct NoisePoint {
  double visibility = 1.0;
  double p0 = 0.0;
  double overlap_initial = 0.0;
  std::optional<double> overlap_predicted;
};

inline NoisePoint noise_point(WalkSchedule schedule, const CoinVector& coin, double visibility) {
  schedule.visibility = visibility;
  const RevivalReport r = classify(schedule, coin);
  return {visibility, r.p0_at_T, r.overlap_initial, r.overlap_predicted};
}

inline std::vector<NoisePoint> noise_sweep(const WalkSchedule& schedule, const CoinVector& coin,
                                           std::span<const double> visibilities) {
  std::vector<NoisePoint> out;
  out.reserve(visibilities.size());
  for (double v : visibilities) out.push_back(noise_point(schedule, coin, v));
  return out;
}

struct VisibilityFit {
  double visibility = 1.0;
  double p0 = 1.0;
  int iterations = 0;
};

// Bisection on v in [0, 1] for p0(T) = target, assuming p0 increases with v.
inline VisibilityFit fit_visibility(const WalkSchedule& schedule, const CoinVector& coin,
                                    double target, double tol = 1e-6) {
  auto p0_at = [&](double v) { return noise_point(schedule, coin, v).p0; };
  double lo = 0.0, hi = 1.0;
  double f_lo = p0_at(lo), f_hi = p0_at(hi);
  if (!(target >= f_lo - tol && target <= f_hi + tol)) {
    throw std::invalid_argument("target origin probability not reachable for v in [0, 1]");
  }
  VisibilityFit fit{hi, f_hi, 0};
  if (std::abs(f_lo - target) <= tol) return {lo, f_lo, 0};
  if (std::abs(f_hi - target) <= tol) return fit;
  for (int i = 1; i <= 100; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double f = p0_at(mid);
    fit = {mid, f, i};
    if (std::abs(f - target) <= tol) break;
    (f < target ? lo : hi) = mid;
  }
  return fit;
}

}  // namespace qwr
