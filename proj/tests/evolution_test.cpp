#include "qwrevival/evolution.hpp"

#include <cmath>
#include <random>

#include "gtest/gtest.h"
#include "oracle.hpp"

using namespace qwr;

namespace {

const Complex I{0.0, 1.0};

double origin_p(const WalkerCoinPureState& s) { return position_distribution(s).at(0); }

std::vector<WalkerCoinPureState> walk(double theta, double omega, int steps,
                                      CoinVector coin = CoinVector::symmetric()) {
  return evolve(initial_state(Lattice::for_walk(steps), coin), {theta, omega, steps});
}

}  // namespace

TEST(shift_operator, moves_coin_components) {
  const auto l = Lattice::centered(3);
  const auto f = shift_operator(l);
  Eigen::VectorXcd plus = Eigen::VectorXcd::Zero(14), minus = plus;
  plus(static_cast<Eigen::Index>(l.basis_index(0, kPlus))) = 1.0;
  minus(static_cast<Eigen::Index>(l.basis_index(0, kMinus))) = 1.0;
  const Eigen::VectorXcd a = f.matrix * plus;
  const Eigen::VectorXcd b = f.matrix * minus;
  EXPECT_EQ(a(static_cast<Eigen::Index>(l.basis_index(1, kPlus))), Complex(1.0));
  EXPECT_EQ(b(static_cast<Eigen::Index>(l.basis_index(-1, kMinus))), Complex(1.0));
  EXPECT_NEAR(a.norm(), 1.0, kAlgebraTol);

  const auto sym = CoinVector::symmetric();
  const auto s = initial_state(l, sym);
  const Eigen::VectorXcd shifted = f.matrix * s.as_vector();
  const WalkerCoinPureState out(l, {shifted.data(), shifted.data() + shifted.size()});
  EXPECT_NEAR(position_distribution(out).at(1), 0.5, kAlgebraTol);
  EXPECT_NEAR(position_distribution(out).at(-1), 0.5, kAlgebraTol);

  // Isometry on interior columns.
  const Eigen::MatrixXcd g = f.matrix.adjoint() * f.matrix;
  for (int x = -2; x <= 2; ++x)
    for (int c : {kPlus, kMinus}) {
      const auto k = static_cast<Eigen::Index>(l.basis_index(x, c));
      EXPECT_NEAR(g(k, k).real(), 1.0, kAlgebraTol);
    }
}

TEST(step, examples) {
  const WalkSchedule s{0, kPi / 8, 2};
  const auto l = Lattice::for_walk(2);
  const auto one = step(initial_state(l, CoinVector::symmetric()), s, 1);
  EXPECT_NEAR(position_distribution(one).at(-1), 1.0, kAlgebraTol);
  EXPECT_NEAR(one.norm_squared(), 1.0, kAlgebraTol);
  const auto two = step(one, s, 2);
  EXPECT_NEAR(origin_p(two), 1.0, kEvolutionTol);

  // No coin rotation: pure conditional shift.
  const WalkSchedule idle{0, 0, 1};
  const CoinVector psi{0.6, 0.8 * I};
  const auto moved = step(initial_state(l, psi), idle, 1);
  EXPECT_EQ(moved.amplitude(1, kPlus), psi.plus);
  EXPECT_EQ(moved.amplitude(-1, kMinus), psi.minus);
}

TEST(step, rejects_index_outside_schedule) {
  const WalkSchedule s{0, kPi / 8, 3};
  const auto st = initial_state(Lattice::for_walk(3), CoinVector::symmetric());
  EXPECT_THROW(step(st, s, 0), std::invalid_argument);
  EXPECT_THROW(step(st, s, 4), std::invalid_argument);
  WalkSchedule z = s;
  z.convention = StepConvention::ZeroBased;
  EXPECT_NO_THROW(step(st, z, 0));
  EXPECT_THROW(step(st, z, 3), std::invalid_argument);
}

TEST(step, boundary_overflow_is_an_error) {
  // A 3-step walk cannot fit on [-2, 2] without touching the boundary.
  const WalkSchedule s{0.3, 0.2, 3};
  EXPECT_THROW(evolve(initial_state(Lattice::centered(2), CoinVector::symmetric()), s),
               BoundaryOverflow);
  EXPECT_NO_THROW(evolve(initial_state(Lattice::for_walk(3), CoinVector::symmetric()), s));
}

TEST(evolve, revivals_at_eight_and_sixteen) {
  const auto states = walk(0, kPi / 8, 16);
  ASSERT_EQ(states.size(), 16u);
  EXPECT_NEAR(origin_p(states[7]), 1.0, kEvolutionTol);
  EXPECT_NEAR(origin_p(states[15]), 1.0, kEvolutionTol);
}

TEST(evolve, two_step_global_phase) {
  const CoinVector psi = CoinVector::symmetric();
  const auto s = walk(kPi / 4, 0, 2, psi).back();
  EXPECT_LE(std::abs(s.amplitude(0, kPlus) + psi.plus), kEvolutionTol);
  EXPECT_LE(std::abs(s.amplitude(0, kMinus) + psi.minus), kEvolutionTol);
}

TEST(evolve, incomplete_revival_final_coin) {
  const auto s = walk(kPi / 4, kPi / 10, 8).back();
  EXPECT_NEAR(origin_p(s), 1.0, kEvolutionTol);
  CoinVector c = s.coin_at(0);
  c = {c.plus * std::conj(c.plus) / std::abs(c.plus), c.minus * std::conj(c.plus) / std::abs(c.plus)};
  EXPECT_NEAR(c.plus.real(), 0.988, 1e-3);
  EXPECT_NEAR(c.minus.imag(), 0.156, 1e-3);
  EXPECT_NEAR(c.minus.real(), 0.0, 1e-3);
}

TEST(evolve, rejects_noisy_schedule_and_zero_steps) {
  const auto st = initial_state(Lattice::for_walk(2), CoinVector::symmetric());
  EXPECT_THROW(evolve(st, {0, 0.1, 2, StepConvention::OneBased, 0.9}), std::invalid_argument);
  EXPECT_THROW(evolve(st, {0, 0.1, 0}), std::invalid_argument);
}

TEST(evolve, matches_reference_walk) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> angle(0.0, kPi);
  for (int trial = 0; trial < 100; ++trial) {
    const double theta = angle(rng), omega = angle(rng);
    const int steps = 1 + trial % 10;
    const auto sym = CoinVector::symmetric();
    const auto w = oracle::Walk{steps + 2};
    const auto ref = oracle::evolve(w, theta, omega, steps, w.start(sym.plus, sym.minus));
    const auto got = walk(theta, omega, steps);
    for (int k = 0; k < steps; ++k) {
      for (int x = -steps - 2; x <= steps + 2; ++x)
        for (int c : {kPlus, kMinus}) {
          ASSERT_LE(std::abs(got[k].amplitude(x, c) - ref[k][w.idx(x, c)]), 1e-12);
        }
      ASSERT_NEAR(got[k].norm_squared(), 1.0, kEvolutionTol);
    }
  }
}

TEST(evolve, zero_based_convention_uses_shifted_coins) {
  WalkSchedule s{0.2, 0.3, 4, StepConvention::ZeroBased};
  const auto sym = CoinVector::symmetric();
  const auto got = evolve(initial_state(Lattice::for_walk(4), sym), s).back();
  const auto w = oracle::Walk{6};
  const auto ref = oracle::evolve(w, 0.2, 0.3, 4, w.start(sym.plus, sym.minus), 0).back();
  for (int x = -6; x <= 6; ++x)
    for (int c : {kPlus, kMinus}) EXPECT_LE(std::abs(got.amplitude(x, c) - ref[w.idx(x, c)]), 1e-12);
}

TEST(evolve, translation_covariance) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> angle(0.0, kPi);
  for (int trial = 0; trial < 20; ++trial) {
    const WalkSchedule s{angle(rng), angle(rng), 6};
    const auto wide = Lattice::centered(12);
    const auto base = evolve(initial_state(wide, CoinVector::symmetric()), s).back();
    for (int x0 = -2; x0 <= 2; ++x0) {
      WalkerCoinPureState start(wide);
      start.amplitude(x0, kPlus) = CoinVector::symmetric().plus;
      start.amplitude(x0, kMinus) = CoinVector::symmetric().minus;
      const auto moved = evolve(start, s).back();
      const auto p = position_distribution(base);
      const auto q = position_distribution(moved);
      for (int x = -8; x <= 8; ++x) ASSERT_NEAR(q.at(x + x0), p.at(x), 1e-12);
    }
  }
}

TEST(multi_step_operator, identity_for_zero_steps) {
  const auto l = Lattice::centered(2);
  const auto u = multi_step_operator({0.3, 0.4, 1}, l, 0);
  EXPECT_LE(max_abs(u.matrix - Eigen::MatrixXcd::Identity(10, 10)), kAlgebraTol);
  EXPECT_THROW(multi_step_operator({0.3, 0.4, 5}, l), std::invalid_argument);
}

TEST(multi_step_operator, interior_unitarity_and_column_consistency) {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> angle(0.0, kPi);
  for (int trial = 0; trial < 100; ++trial) {
    const int steps = 1 + trial % 10;
    const WalkSchedule s{angle(rng), angle(rng), steps};
    const auto l = Lattice::centered(steps + 3);
    const auto u = multi_step_operator(s, l);
    const int r = exact_column_radius(l, steps);
    ASSERT_EQ(r, 3);
    // Columns |x| <= r.
    const auto lo = static_cast<Eigen::Index>(l.basis_index(-r, kPlus));
    const auto n = static_cast<Eigen::Index>(2 * (2 * r + 1));
    const Eigen::MatrixXcd cols = u.matrix.middleCols(lo, n);
    ASSERT_LE(max_abs(cols.adjoint() * cols - Eigen::MatrixXcd::Identity(n, n)), kEvolutionTol);

    const auto final_state = evolve(initial_state(l, {1.0, 0.0}), s).back();
    const auto col = u.matrix.col(static_cast<Eigen::Index>(l.basis_index(0, kPlus)));
    for (std::size_t i = 0; i < l.dimension(); ++i) {
      ASSERT_LE(std::abs(col(static_cast<Eigen::Index>(i)) - final_state.amplitudes()[i]), 1e-12);
    }
  }
}

TEST(multi_step_operator, matches_reference_product) {
  const WalkSchedule s{0.7, 0.25, 5};
  const auto l = Lattice::centered(6);
  const auto u = multi_step_operator(s, l);
  const oracle::Walk w{6};
  oracle::Mat ref = oracle::eye(w.dim());
  for (int t = 1; t <= 5; ++t) ref = oracle::matmul(w.step(0.7, 0.25, t), ref);
  for (std::size_t i = 0; i < w.dim(); ++i)
    for (std::size_t j = 0; j < w.dim(); ++j)
      ASSERT_LE(std::abs(u.matrix(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) -
                         ref[i][j]),
                1e-12);
}

TEST(evolve_density, unit_visibility_matches_pure_walk) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> angle(0.0, kPi);
  for (int trial = 0; trial < 20; ++trial) {
    const int steps = 2 + trial % 8;
    const WalkSchedule s{angle(rng), angle(rng), steps};
    const auto psi = initial_state(Lattice::for_walk(steps), CoinVector::symmetric());
    const auto pure = evolve(psi, s);
    const auto mixed = evolve_density(WalkerCoinDensityMatrix::from_pure(psi), s);
    for (int k = 0; k < steps; ++k) {
      const auto p = position_distribution(pure[k]);
      const auto q = position_distribution(mixed[k]);
      for (int x = -steps; x <= steps; ++x) ASSERT_NEAR(p.at(x), q.at(x), kEvolutionTol);
    }
  }
}

TEST(evolve_density, full_dephasing_two_steps) {
  // With v = 0 the coin is measured after step 1; the return at step 2 needs a
  // coin flip, which has probability sin^2(4 omega) from either branch.
  for (double omega : {kPi / 10, kPi / 7, 0.3}) {
    const WalkSchedule s{0, omega, 2, StepConvention::OneBased, 0.0};
    const auto psi = initial_state(Lattice::for_walk(2), CoinVector::symmetric());
    const auto out = evolve_density(WalkerCoinDensityMatrix::from_pure(psi), s);
    const double expected = std::pow(std::sin(4 * omega), 2);
    EXPECT_NEAR(position_distribution(out[1]).at(0), expected, kEvolutionTol);
    // Coin coherences vanish after each step.
    const auto& m = out[0].matrix();
    for (Eigen::Index r = 0; r < m.rows(); ++r)
      for (Eigen::Index c = 0; c < m.cols(); ++c)
        if ((r & 1) != (c & 1)) ASSERT_EQ(m(r, c), Complex(0.0));
  }
}

TEST(evolve_density, matches_reference_channel) {
  const double v = 0.93;
  const WalkSchedule s{kPi / 4, kPi / 10, 6, StepConvention::OneBased, v};
  const auto sym = CoinVector::symmetric();
  const auto psi = initial_state(Lattice::for_walk(6), sym);
  const auto got = evolve_density(WalkerCoinDensityMatrix::from_pure(psi), s);
  const oracle::Walk w{8};
  const auto ref = oracle::evolve_density(w, kPi / 4, kPi / 10, 6, w.start(sym.plus, sym.minus), v);
  for (int k = 0; k < 6; ++k)
    for (std::size_t i = 0; i < w.dim(); ++i)
      for (std::size_t j = 0; j < w.dim(); ++j)
        ASSERT_LE(std::abs(got[k].matrix()(static_cast<Eigen::Index>(i),
                                           static_cast<Eigen::Index>(j)) -
                           ref[k][i][j]),
                  1e-12);
}

TEST(evolve_density, state_invariants_and_monotone_degradation) {
  const WalkSchedule base{0, kPi / 8, 8};
  const auto psi = initial_state(Lattice::for_walk(8), CoinVector::symmetric());
  const auto rho0 = WalkerCoinDensityMatrix::from_pure(psi);
  double previous = 2.0;
  for (double v : {1.0, 0.996, 0.99, 0.95, 0.9}) {
    WalkSchedule s = base;
    s.visibility = v;
    const auto out = evolve_density(rho0, s);
    for (const auto& r : out) {
      ASSERT_NEAR(r.trace().real(), 1.0, kEvolutionTol);
      ASSERT_NEAR(r.trace().imag(), 0.0, kEvolutionTol);
      ASSERT_LE(r.hermiticity_defect(), kEvolutionTol);
      ASSERT_GE(r.min_eigenvalue(), -1e-8);
    }
    const double p0 = position_distribution(out.back()).at(0);
    EXPECT_LE(p0, previous + 1e-12);
    previous = p0;
    if (v < 1.0) EXPECT_LT(p0, 1.0);
  }

  WalkSchedule hi = base, lo = base;
  hi.visibility = 0.996;
  lo.visibility = 0.95;
  const double p_hi = position_distribution(evolve_density(rho0, hi).back()).at(0);
  const double p_lo = position_distribution(evolve_density(rho0, lo).back()).at(0);
  EXPECT_LT(p_hi, 1.0);
  EXPECT_GT(p_hi, p_lo);
}

TEST(evolve_density, rejects_invalid_visibility) {
  const auto psi = initial_state(Lattice::for_walk(2), CoinVector::symmetric());
  const auto rho = WalkerCoinDensityMatrix::from_pure(psi);
  EXPECT_THROW(evolve_density(rho, {0, 0.1, 2, StepConvention::OneBased, 1.5}),
               std::invalid_argument);
  EXPECT_THROW(evolve_density(rho, {0, 0.1, 2, StepConvention::OneBased, -0.1}),
               std::invalid_argument);
}
