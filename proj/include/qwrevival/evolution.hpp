#pragma once

// Conditional shift, ramped-coin step, multi-step operator and the noisy
// density-matrix walk.

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qwrevival/coin_algebra.hpp"
#include "qwrevival/walk_state.hpp"

namespace qwr {

// Amplitude modulus at which a boundary site counts as occupied.
inline constexpr double kBoundaryAmplitude = 1e-14;

class BoundaryOverflow : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct WalkSchedule {
  double theta = 0.0;
  double omega = 0.0;
  int steps = 1;
  StepConvention convention = StepConvention::OneBased;
  double visibility = 1.0;

  void validate() const {
    if (steps < 1) {
      throw std::invalid_argument("walk needs at least one step, got " + std::to_string(steps));
    }
    if (!(visibility >= 0.0 && visibility <= 1.0)) {
      throw std::invalid_argument("visibility must lie in [0, 1]");
    }
    if (!std::isfinite(theta) || !std::isfinite(omega)) {
      throw std::invalid_argument("coin angles must be finite");
    }
  }

  int first_index() const { return convention == StepConvention::OneBased ? 1 : 0; }

  // Coin index used by the k-th applied step, k = 1..steps.
  int index_of_step(int k) const { return first_index() + k - 1; }

  CoinOperator coin(int t) const { return coin_at_step(theta, omega, t, convention); }
};

// Dense operator on the joint (site, coin) basis of a lattice.
struct StepOperatorMatrix {
  Lattice lattice;
  Eigen::MatrixXcd matrix;

  // Coin block <y| M |x>.
  CoinOperator block(int y, int x) const {
    const auto r = static_cast<Eigen::Index>(lattice.basis_index(y, kPlus));
    const auto c = static_cast<Eigen::Index>(lattice.basis_index(x, kPlus));
    return CoinOperator{Matrix2{matrix.block<2, 2>(r, c)}};
  }
};

// (x, +) -> (x+1, +) and (x, -) -> (x-1, -).  Components that would leave
// the window are dropped, so the matrix is unitary only on the interior.
inline StepOperatorMatrix shift_operator(const Lattice& lattice) {
  const auto d = static_cast<Eigen::Index>(lattice.dimension());
  Eigen::MatrixXcd f = Eigen::MatrixXcd::Zero(d, d);
  for (int x = lattice.min_site(); x <= lattice.max_site(); ++x) {
    const auto plus = static_cast<Eigen::Index>(lattice.basis_index(x, kPlus));
    const auto minus = static_cast<Eigen::Index>(lattice.basis_index(x, kMinus));
    if (lattice.contains(x + 1)) {
      f(static_cast<Eigen::Index>(lattice.basis_index(x + 1, kPlus)), plus) = 1.0;
    }
    if (lattice.contains(x - 1)) {
      f(static_cast<Eigen::Index>(lattice.basis_index(x - 1, kMinus)), minus) = 1.0;
    }
  }
  return {lattice, std::move(f)};
}

// 1 (x) C
inline Eigen::MatrixXcd coin_layer(const Lattice& lattice, const CoinOperator& c) {
  const auto d = static_cast<Eigen::Index>(lattice.dimension());
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(d, d);
  for (Eigen::Index k = 0; k < d; k += 2) {
    m.block<2, 2>(k, k) = c.matrix();
  }
  return m;
}

// U(t) = F (1 (x) C(t))
inline StepOperatorMatrix step_operator(const WalkSchedule& schedule, const Lattice& lattice,
                                        int t) {
  auto f = shift_operator(lattice);
  f.matrix = f.matrix * coin_layer(lattice, schedule.coin(t));
  return f;
}

namespace detail {

inline void check_boundary(const WalkerCoinPureState& s, int t) {
  const auto& l = s.lattice();
  for (int x : {l.min_site(), l.max_site()}) {
    for (int c : {kPlus, kMinus}) {
      if (std::abs(s.amplitude(x, c)) >= kBoundaryAmplitude) {
        throw BoundaryOverflow("amplitude reached boundary site " + std::to_string(x) +
                               " at step index " + std::to_string(t));
      }
    }
  }
}

inline void check_boundary(const WalkerCoinDensityMatrix& rho, int t) {
  const auto& l = rho.lattice();
  for (int x : {l.min_site(), l.max_site()}) {
    for (int c : {kPlus, kMinus}) {
      const auto k = static_cast<Eigen::Index>(l.basis_index(x, c));
      if (std::sqrt(std::abs(rho.matrix()(k, k).real())) >= kBoundaryAmplitude) {
        throw BoundaryOverflow("population reached boundary site " + std::to_string(x) +
                               " at step index " + std::to_string(t));
      }
    }
  }
}

inline void check_step_range(const WalkSchedule& schedule, int t) {
  const int first = schedule.first_index();
  if (t < first || t > first + schedule.steps - 1) {
    throw std::invalid_argument("step index " + std::to_string(t) + " outside schedule");
  }
}

}  // namespace detail

// One step: coin C(t) at every site, then the conditional shift.
inline WalkerCoinPureState step(const WalkerCoinPureState& state, const WalkSchedule& schedule,
                                int t) {
  detail::check_step_range(schedule, t);
  detail::check_boundary(state, t);
  const CoinOperator c = schedule.coin(t);
  const auto& l = state.lattice();
  WalkerCoinPureState next(l);
  for (int x = l.min_site(); x <= l.max_site(); ++x) {
    const CoinVector v = c * state.coin_at(x);
    if (l.contains(x + 1)) next.amplitude(x + 1, kPlus) = v.plus;
    if (l.contains(x - 1)) next.amplitude(x - 1, kMinus) = v.minus;
  }
  detail::check_boundary(next, t);
  return next;
}

// States after each of the steps 1..T.
inline std::vector<WalkerCoinPureState> evolve(const WalkerCoinPureState& state,
                                               const WalkSchedule& schedule) {
  schedule.validate();
  if (schedule.visibility != 1.0) {
    throw std::invalid_argument("pure-state evolution requires visibility 1");
  }
  std::vector<WalkerCoinPureState> out;
  out.reserve(static_cast<std::size_t>(schedule.steps));
  const WalkerCoinPureState* cur = &state;
  for (int k = 1; k <= schedule.steps; ++k) {
    out.push_back(step(*cur, schedule, schedule.index_of_step(k)));
    cur = &out.back();
  }
  return out;
}

// Radius |x| <= r of columns that a `steps`-step operator maps without loss.
inline int exact_column_radius(const Lattice& lattice, int steps) {
  return std::min(lattice.max_site(), -lattice.min_site()) - steps;
}

// U(k_last) ... U(k_1) with later steps on the left; `steps` factors
// (0 gives the identity).
inline StepOperatorMatrix multi_step_operator(const WalkSchedule& schedule,
                                              const Lattice& lattice, int steps) {
  if (steps < 0) {
    throw std::invalid_argument("negative step count");
  }
  if (exact_column_radius(lattice, steps) < 0) {
    throw std::invalid_argument("lattice too small for a " + std::to_string(steps) +
                                "-step operator window");
  }
  const auto d = static_cast<Eigen::Index>(lattice.dimension());
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(d, d);
  for (int k = 1; k <= steps; ++k) {
    u = step_operator(schedule, lattice, schedule.index_of_step(k)).matrix * u;
  }
  return {lattice, std::move(u)};
}

inline StepOperatorMatrix multi_step_operator(const WalkSchedule& schedule,
                                              const Lattice& lattice) {
  return multi_step_operator(schedule, lattice, schedule.steps);
}

// rho -> (1+v)/2 rho + (1-v)/2 (1 (x) Z) rho (1 (x) Z): coin coherences scale by v.
inline void apply_coin_dephasing(WalkerCoinDensityMatrix& rho, double visibility) {
  auto& m = rho.matrix();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if ((r & 1) != (c & 1)) m(r, c) *= visibility;
    }
  }
}

// States after each step: unitary U(t), then coin dephasing of strength v.
inline std::vector<WalkerCoinDensityMatrix> evolve_density(const WalkerCoinDensityMatrix& rho,
                                                           const WalkSchedule& schedule) {
  schedule.validate();
  std::vector<WalkerCoinDensityMatrix> out;
  out.reserve(static_cast<std::size_t>(schedule.steps));
  WalkerCoinDensityMatrix cur = rho;
  detail::check_boundary(cur, schedule.first_index());
  for (int k = 1; k <= schedule.steps; ++k) {
    const int t = schedule.index_of_step(k);
    const auto u = step_operator(schedule, cur.lattice(), t);
    cur.matrix() = u.matrix * cur.matrix() * u.matrix.adjoint();
    apply_coin_dephasing(cur, schedule.visibility);
    detail::check_boundary(cur, t);
    out.push_back(cur);
  }
  return out;
}

}  // namespace qwr
