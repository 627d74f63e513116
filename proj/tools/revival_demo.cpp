// Walk the complete-revival schedule theta = 0, omega = pi/8 for 16 steps and
// print the origin probability and the reduced coin after each step.

#include <cstdio>

#include "qwrevival/analysis.hpp"
#include "qwrevival/evolution.hpp"
#include "qwrevival/walk_state.hpp"

int main() {
  const qwr::WalkSchedule schedule{0.0, qwr::kPi / 8, 16};
  const auto lattice = qwr::Lattice::for_walk(schedule.steps);
  const auto psi0 = qwr::initial_state(lattice, qwr::CoinVector::symmetric());
  const auto states = qwr::evolve(psi0, schedule);

  std::printf("%4s %12s %12s %12s\n", "step", "p0", "d_tv", "purity");
  for (std::size_t k = 0; k < states.size(); ++k) {
    const auto p = qwr::position_distribution(states[k]);
    const double p0 = p.at(0);
    std::printf("%4zu %12.9f %12.9f %12.9f\n", k + 1, p0, qwr::tv_from_origin_probability(p0),
                qwr::purity(qwr::reduced_coin_state(states[k])));
  }

  const auto c = qwr::effective_coin_from_operator({0.0, qwr::kPi / 8, 8});
  std::printf("C(8) equals the identity up to phase: %s\n",
              qwr::equal_up_to_global_phase(c, qwr::CoinOperator::identity(), 1e-8) ? "yes" : "no");
  return 0;
}
