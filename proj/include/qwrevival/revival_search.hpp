#pragma once

// Scan of the ramp frequency Omega for revivals at fixed (T, theta).
//
// The grid pass evaluates the mass left off the origin after T steps from
// the symmetric coin; each grid minimum below the bracket threshold is
// refined by golden-section search and then accepted only if the
// multi-step operator factorizes as 1 (x) C(T).

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include "qwrevival/analysis.hpp"
#include "qwrevival/coin_algebra.hpp"
#include "qwrevival/evolution.hpp"
#include "qwrevival/walk_state.hpp"

namespace qwr {

struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  friend bool operator==(const Rational&, const Rational&) = default;
  friend auto operator<=>(const Rational& a, const Rational& b) {
    return a.num * b.den <=> b.num * a.den;
  }
};

inline constexpr double kRationalTol = 1e-7;

// Best approximation p/q of angle/pi with q <= max_denominator, kept only
// when |angle/pi - p/q| <= tol.
inline std::optional<Rational> rationalize(double angle, std::int64_t max_denominator,
                                           double tol = kRationalTol) {
  if (!std::isfinite(angle) || angle < 0.0 || max_denominator < 1) {
    return std::nullopt;
  }
  const double target = angle / kPi;
  std::int64_t p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  double x = target;
  for (int iter = 0; iter < 64; ++iter) {
    const double a_real = std::floor(x);
    if (a_real > 1e15) break;
    const auto a = static_cast<std::int64_t>(a_real);
    const std::int64_t q2 = q0 + a * q1;
    if (q2 > max_denominator) break;
    const std::int64_t p2 = p0 + a * p1;
    p0 = p1;
    q0 = q1;
    p1 = p2;
    q1 = q2;
    const double frac = x - a_real;
    if (frac < 1e-13) break;
    x = 1.0 / frac;
  }
  Rational best{p1, q1};
  if (q1 == 0) return std::nullopt;
  // Semiconvergent between the last two convergents.
  const std::int64_t k = (max_denominator - q0) / q1;
  const Rational semi{p0 + k * p1, q0 + k * q1};
  if (semi.den > 0 && std::abs(semi.value() - target) < std::abs(best.value() - target)) {
    best = semi;
  }
  if (std::abs(best.value() - target) > tol) return std::nullopt;
  return best;
}

struct SearchConfig {
  std::vector<int> steps_values{2, 4, 6, 8};
  std::vector<double> theta_values{0.0, kPi / 4};
  double omega_min = 0.0;
  double omega_max = kPi / 2;
  int omega_count = 4001;
  double refine_tol = 1e-12;
  std::int64_t rational_max_denominator = 64;
  double completeness_tol = 1e-8;
  double operator_tol = 1e-8;
  double bracket_threshold = 1e-3;
  double dedup_tol = 1e-9;
  StepConvention convention = StepConvention::OneBased;
  unsigned workers = 0;  // 0: hardware concurrency

  void validate() const {
    if (steps_values.empty()) throw std::invalid_argument("no step counts to scan");
    for (int t : steps_values) {
      if (t < 2 || t % 2 != 0) {
        throw std::invalid_argument("revival search needs even T >= 2, got " +
                                    std::to_string(t));
      }
      if (t > kMaxBalancedSteps) {
        throw std::invalid_argument("revival search limited to T <= " +
                                    std::to_string(kMaxBalancedSteps));
      }
    }
    for (double th : theta_values) {
      if (!std::isfinite(th)) throw std::invalid_argument("theta must be finite");
    }
    constexpr double slack = 1e-12;
    if (!(omega_min >= -slack && omega_max <= kPi / 2 + slack && omega_min < omega_max)) {
      throw std::invalid_argument("omega range must lie inside [0, pi/2]");
    }
    if (omega_count < 2) throw std::invalid_argument("omega grid needs at least 2 points");
    if (!(refine_tol > 0.0)) throw std::invalid_argument("refine tolerance must be positive");
    if (rational_max_denominator < 2) {
      throw std::invalid_argument("maximum denominator must be at least 2");
    }
  }
};

struct RevivalCandidate {
  int steps = 0;
  double theta = 0.0;
  double omega = 0.0;
  std::optional<Rational> omega_over_pi;
  bool complete = false;
  double residual = 1.0;  // 1 - p0(T) at omega
};

// Off-origin mass after `steps` steps from the symmetric coin.
inline double origin_leakage(double theta, double omega, int steps,
                             StepConvention convention = StepConvention::OneBased) {
  WalkSchedule s{theta, omega, steps, convention, 1.0};
  const auto states = evolve(initial_state(Lattice::for_walk(steps), CoinVector::symmetric()), s);
  return position_distribution(states.back()).off_origin_mass();
}

namespace detail {

inline double golden_section_min(auto&& f, double lo, double hi, double& fmin) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  for (int iter = 0; iter < 200 && (b - a) > 1e-16 * std::max(1.0, std::abs(a)); ++iter) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  double x = fc <= fd ? c : d;
  fmin = std::min(fc, fd);
  // Minima sitting on a bracket end (Omega = 0 or pi/2).
  for (double e : {lo, hi}) {
    const double fe = f(e);
    if (fe < fmin) {
      fmin = fe;
      x = e;
    }
  }
  return x;
}

inline std::vector<RevivalCandidate> scan_one(const SearchConfig& cfg, int steps, double theta) {
  auto f = [&](double omega) { return origin_leakage(theta, omega, steps, cfg.convention); };
  const int n = cfg.omega_count;
  std::vector<double> grid(static_cast<std::size_t>(n));
  std::vector<double> vals(grid.size());
  for (int i = 0; i < n; ++i) {
    grid[i] = i == n - 1 ? cfg.omega_max
                         : cfg.omega_min + (cfg.omega_max - cfg.omega_min) * i / (n - 1);
    vals[i] = f(grid[i]);
  }

  std::vector<RevivalCandidate> found;
  for (int i = 0; i < n; ++i) {
    if (vals[i] >= cfg.bracket_threshold) continue;
    if (i > 0 && vals[i] > vals[i - 1]) continue;
    if (i < n - 1 && vals[i] > vals[i + 1]) continue;
    const double lo = grid[std::max(i - 1, 0)];
    const double hi = grid[std::min(i + 1, n - 1)];
    double residual = 1.0;
    const double omega = golden_section_min(f, lo, hi, residual);
    if (residual > cfg.refine_tol) continue;
    if (!found.empty() && std::abs(found.back().omega - omega) <= cfg.dedup_tol) continue;

    WalkSchedule s{theta, omega, steps, cfg.convention, 1.0};
    ClassifyOptions opts;
    opts.revival_tol = cfg.operator_tol;
    opts.complete_tol = cfg.completeness_tol;
    const RevivalReport report = classify(s, CoinVector::symmetric(), opts);
    if (!report.is_revival) continue;

    RevivalCandidate c;
    c.steps = steps;
    c.theta = theta;
    c.omega = omega;
    c.omega_over_pi = rationalize(omega, cfg.rational_max_denominator);
    c.complete = report.is_complete;
    c.residual = 1.0 - report.p0_at_T;
    found.push_back(c);
  }
  return found;
}

}  // namespace detail

inline bool candidate_order(const RevivalCandidate& a, const RevivalCandidate& b) {
  return std::tie(a.steps, a.theta, a.omega) < std::tie(b.steps, b.theta, b.omega);
}

// Deterministic: each (T, theta) task is independent and the merged output is
// sorted by (T, theta, omega) whatever the worker count.
inline std::vector<RevivalCandidate> scan(const SearchConfig& cfg) {
  cfg.validate();
  std::vector<std::pair<int, double>> tasks;
  for (int t : cfg.steps_values) {
    for (double th : cfg.theta_values) tasks.emplace_back(t, th);
  }
  std::vector<std::vector<RevivalCandidate>> results(tasks.size());

  unsigned workers = cfg.workers ? cfg.workers : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<unsigned>(workers, static_cast<unsigned>(tasks.size()));
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++) {
      results[i] = detail::scan_one(cfg, tasks[i].first, tasks[i].second);
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  }

  std::vector<RevivalCandidate> out;
  for (auto& r : results) out.insert(out.end(), r.begin(), r.end());
  std::sort(out.begin(), out.end(), candidate_order);
  // Repeated (T, theta) inputs produce duplicate rows.
  out.erase(std::unique(out.begin(), out.end(),
                        [&](const RevivalCandidate& a, const RevivalCandidate& b) {
                          return a.steps == b.steps && a.theta == b.theta &&
                                 std::abs(a.omega - b.omega) <= cfg.dedup_tol;
                        }),
            out.end());
  return out;
}

}  // namespace qwr
