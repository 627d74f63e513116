#pragma once

// Revival metrics: total-variation distance, Polya number, the effective
// coin by path enumeration and by operator extraction, and classification.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "qwrevival/coin_algebra.hpp"
#include "qwrevival/evolution.hpp"
#include "qwrevival/walk_state.hpp"

namespace qwr {

inline constexpr int kMaxBalancedSteps = 20;

// Probabilities within this distance of [0, 1] are accepted.
inline constexpr double kProbabilitySlack = 1e-12;

inline double tv_distance(const PositionDistribution& p, const PositionDistribution& q) {
  if (!(p.lattice() == q.lattice())) {
    throw std::invalid_argument("distributions live on different lattices");
  }
  const auto& a = p.probabilities();
  const auto& b = q.probabilities();
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
  return 0.5 * s;
}

// d_TV against the initial distribution, valid only for walks started at the origin.
inline double tv_from_origin_probability(double p0) {
  if (!(p0 >= -kProbabilitySlack && p0 <= 1.0 + kProbabilitySlack)) {
    throw std::invalid_argument("origin probability outside [0, 1]");
  }
  return 1.0 - p0;
}

// 1 - prod_{t=1}^{horizon} (1 - p0(t))
inline double polya_number(std::span<const double> p0_series, int horizon) {
  if (horizon < 0 || static_cast<std::size_t>(horizon) > p0_series.size()) {
    throw std::invalid_argument("horizon exceeds the return-probability series");
  }
  double survive = 1.0;
  for (int t = 0; t < horizon; ++t) {
    const double p = p0_series[static_cast<std::size_t>(t)];
    if (!(p >= -kProbabilitySlack && p <= 1.0 + kProbabilitySlack)) {
      throw std::invalid_argument("return probability outside [0, 1] at t=" +
                                  std::to_string(t + 1));
    }
    survive *= std::clamp(1.0 - p, 0.0, 1.0);
  }
  return 1.0 - survive;
}

namespace detail {

inline void require_even_steps(const WalkSchedule& schedule) {
  schedule.validate();
  if (schedule.steps % 2 != 0) {
    throw std::invalid_argument("effective coin needs an even number of steps, got " +
                                std::to_string(schedule.steps));
  }
}

// |c><c| M: keep row c of M.
inline Matrix2 project_row(const Matrix2& m, int c) {
  Matrix2 out = Matrix2::Zero();
  out.row(c) = m.row(c);
  return out;
}

}  // namespace detail

// Sum over all +/- strings with equal counts of the ordered products
// |c(T)><c(T)| C(T) ... |c(1)><c(1)| C(1).  Unitary only at revivals.
inline CoinOperator effective_coin_balanced_strings(const WalkSchedule& schedule) {
  detail::require_even_steps(schedule);
  const int steps = schedule.steps;
  if (steps > kMaxBalancedSteps) {
    throw std::invalid_argument("balanced-string enumeration limited to " +
                                std::to_string(kMaxBalancedSteps) + " steps");
  }
  std::vector<Matrix2> coins;
  coins.reserve(static_cast<std::size_t>(steps));
  for (int k = 1; k <= steps; ++k) {
    coins.push_back(schedule.coin(schedule.index_of_step(k)).matrix());
  }

  // Bit k of a mask set means the k-th step projects onto |->.
  const std::uint32_t half = static_cast<std::uint32_t>(steps / 2);
  const std::uint32_t limit = 1u << steps;
  Matrix2 total = Matrix2::Zero();
  for (std::uint32_t mask = (1u << half) - 1; mask < limit;) {
    Matrix2 m = Matrix2::Identity();
    for (int k = 0; k < steps; ++k) {
      const int c = (mask >> k) & 1u ? kMinus : kPlus;
      m = detail::project_row(coins[static_cast<std::size_t>(k)], c) * m;
    }
    total += m;
    if (mask == 0) break;
    // Next mask with the same popcount.
    const std::uint32_t low = mask & (~mask + 1);
    const std::uint32_t ripple = mask + low;
    mask = ripple | (((mask ^ ripple) >> 2) / low);
  }
  return CoinOperator{total};
}

// Origin-to-origin coin block of the multi-step operator.
inline CoinOperator effective_coin_from_operator(const WalkSchedule& schedule) {
  detail::require_even_steps(schedule);
  const auto u = multi_step_operator(schedule, Lattice::centered(schedule.steps + 1));
  return u.block(0, 0);
}

// Largest deviation of U(T) from 1 (x) C(T) over the columns |x| <= window:
// off-diagonal position blocks against zero, diagonal blocks against the
// origin block.
inline double revival_defect(const StepOperatorMatrix& u, int steps, int window) {
  if (window < 0 || window > exact_column_radius(u.lattice, steps)) {
    throw std::invalid_argument("revival window " + std::to_string(window) +
                                " too large for lattice");
  }
  const CoinOperator origin = u.block(0, 0);
  const auto& l = u.lattice;
  double defect = 0.0;
  for (int x = -window; x <= window; ++x) {
    for (int y = l.min_site(); y <= l.max_site(); ++y) {
      const CoinOperator b = u.block(y, x);
      const double d = y == x ? max_abs_diff(b, origin) : max_abs(b.matrix());
      defect = std::max(defect, d);
    }
  }
  return defect;
}

inline constexpr int kDefaultRevivalWindow = 3;

inline Lattice revival_lattice(int steps, int window) {
  return Lattice::centered(window + steps + 2);
}

inline double revival_defect(const WalkSchedule& schedule, int window = kDefaultRevivalWindow) {
  schedule.validate();
  const auto u = multi_step_operator(schedule, revival_lattice(schedule.steps, window));
  return revival_defect(u, schedule.steps, window);
}

inline bool is_revival_operator(const WalkSchedule& schedule, int window, double tol) {
  return revival_defect(schedule, window) <= tol;
}

struct ClassifyOptions {
  int window = kDefaultRevivalWindow;
  double revival_tol = 1e-8;
  double complete_tol = 1e-8;
};

struct RevivalReport {
  WalkSchedule schedule;
  std::vector<double> p0_series;  // p0(1) .. p0(T)
  double p0_at_T = 0.0;
  double d_tv = 1.0;
  double polya_truncated = 0.0;
  std::optional<CoinOperator> effective_coin;
  double revival_defect = 0.0;
  bool is_revival = false;
  bool is_complete = false;
  double overlap_initial = 0.0;
  std::optional<double> overlap_predicted;
  CoinDensityMatrix final_coin;
};

// For visibility < 1 the walk statistics come from the dephased density
// matrix; the operator-level checks always use the noiseless schedule.
inline RevivalReport classify(const WalkSchedule& schedule, const CoinVector& initial_coin,
                              const ClassifyOptions& options = {}) {
  schedule.validate();
  RevivalReport r;
  r.schedule = schedule;
  const Lattice lattice = Lattice::for_walk(schedule.steps);
  const auto psi0 = initial_state(lattice, initial_coin);
  const auto delta0 = PositionDistribution::delta(lattice, 0);

  PositionDistribution final_dist = delta0;
  if (schedule.visibility == 1.0) {
    const auto states = evolve(psi0, schedule);
    for (const auto& s : states) r.p0_series.push_back(position_distribution(s).at(0));
    final_dist = position_distribution(states.back());
    r.final_coin = reduced_coin_state(states.back());
  } else {
    const auto states = evolve_density(WalkerCoinDensityMatrix::from_pure(psi0), schedule);
    for (const auto& s : states) r.p0_series.push_back(position_distribution(s).at(0));
    final_dist = position_distribution(states.back());
    r.final_coin = reduced_coin_state(states.back());
  }
  r.p0_at_T = r.p0_series.back();
  r.d_tv = tv_distance(final_dist, delta0);
  r.polya_truncated = polya_number(r.p0_series, schedule.steps);
  r.overlap_initial = coin_overlap(r.final_coin, initial_coin);

  WalkSchedule noiseless = schedule;
  noiseless.visibility = 1.0;
  r.revival_defect = revival_defect(noiseless, options.window);
  r.is_revival = r.revival_defect <= options.revival_tol;

  if (schedule.steps % 2 == 0) {
    const CoinOperator c = effective_coin_from_operator(noiseless);
    r.effective_coin = c;
    r.is_complete =
        r.is_revival && equal_up_to_global_phase(c, CoinOperator::identity(), options.complete_tol);
    const CoinVector predicted = c * initial_coin;
    if (predicted.norm_squared() > 0.0) {
      r.overlap_predicted = coin_overlap(r.final_coin, predicted.normalized());
    }
  }
  return r;
}

}  // namespace qwr
