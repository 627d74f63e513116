#include "qwrevival/noise.hpp"

#include <cmath>
#include <vector>

#include "gtest/gtest.h"
#include "oracle.hpp"

using namespace qwr;

namespace {

double oracle_p0(double theta, double omega, int steps, double v) {
  const oracle::Walk w{steps + 1};
  const auto sym = CoinVector::symmetric();
  const auto rho = oracle::evolve_density(w, theta, omega, steps, w.start(sym.plus, sym.minus), v).back();
  return (rho[w.idx(0, 0)][w.idx(0, 0)] + rho[w.idx(0, 1)][w.idx(0, 1)]).real();
}

}  // namespace

TEST(noise, sweep_matches_reference_channel) {
  const WalkSchedule s{0, kPi / 8, 8};
  const std::vector<double> vs{0.0, 0.25, 0.5, 0.8, 0.93, 1.0};
  const auto pts = noise_sweep(s, CoinVector::symmetric(), vs);
  ASSERT_EQ(pts.size(), vs.size());
  for (std::size_t i = 0; i < vs.size(); ++i) {
    EXPECT_EQ(pts[i].visibility, vs[i]);
    EXPECT_NEAR(pts[i].p0, oracle_p0(0, kPi / 8, 8, vs[i]), 1e-12);
    EXPECT_NEAR(pts[i].p0, (1 + vs[i] * vs[i]) / 2, 1e-12);
  }
  EXPECT_NEAR(pts.back().p0, 1.0, kEvolutionTol);
}

TEST(noise, origin_probability_is_monotone_in_visibility) {
  for (const WalkSchedule& s : {WalkSchedule{0, kPi / 8, 8}, WalkSchedule{0, kPi / 20, 8},
                                WalkSchedule{kPi / 4, kPi / 10, 8}}) {
    std::vector<double> vs;
    for (int i = 0; i <= 20; ++i) vs.push_back(i / 20.0);
    const auto pts = noise_sweep(s, CoinVector::symmetric(), vs);
    for (std::size_t i = 1; i < pts.size(); ++i) ASSERT_GE(pts[i].p0, pts[i - 1].p0 - 1e-12);
  }
}

TEST(noise, fit_visibility_examples) {
  const WalkSchedule s{0, kPi / 8, 8};
  const auto fit = fit_visibility(s, CoinVector::symmetric(), 0.918);
  const double expected = std::sqrt(2 * 0.918 - 1);
  EXPECT_NEAR(fit.visibility, expected, 1e-5);
  EXPECT_GT(fit.visibility, 0.9);
  EXPECT_LT(fit.visibility, 1.0);
  EXPECT_NEAR(fit.p0, 0.918, 1e-6);

  EXPECT_EQ(fit_visibility(s, CoinVector::symmetric(), 1.0).visibility, 1.0);
  EXPECT_THROW(fit_visibility(s, CoinVector::symmetric(), 0.2), std::invalid_argument);
}

TEST(noise, invalid_visibility) {
  const WalkSchedule s{0, kPi / 8, 8};
  EXPECT_THROW(noise_point(s, CoinVector::symmetric(), 1.5), std::invalid_argument);
  EXPECT_THROW(noise_point(s, CoinVector::symmetric(), -0.1), std::invalid_argument);
}
