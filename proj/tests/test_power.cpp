#include <gtest/gtest.h>

#include "covert/power.hpp"
#include "covert/state.hpp"
#include "support.hpp"

using namespace covert;
using namespace covert::testing;

TEST(Xi, QosCapArithmetic) {
  Scenario s;
  s.noise_bob = 1.0;
  s.target_rate = 1.0;
  EXPECT_DOUBLE_EQ(s.qos_threshold(), 1.0);
  Gains g;
  g.gb = 4.0;
  g.ab = 1.0;
  const XiBundle xi = xi_values(s, g, {0.0, 1.0, 0.0});
  EXPECT_DOUBLE_EQ(xi.xi1, 3.0);
  // Largest P_a on a fine grid that keeps Grace's SINR at 1.
  double largest = 0.0;
  for (int i = 0; i <= 100000; ++i) {
    const double pa = 10.0 * i / 100000;
    if (4.0 / (pa + 1.0) >= 1.0) largest = pa;
  }
  EXPECT_NEAR(largest, xi.xi1, 1e-4);
}

TEST(Xi, ZeroWillieGainRemovesCovertnessCap) {
  Scenario s;
  Gains g;
  g.gb = 1.0;
  g.ab = 1.0;
  EXPECT_EQ(xi_values(s, g, {0.0, 0.1, 0.0}).xi3, kInf);
}

TEST(Xi, ZeroJamPathGivesZeroFloorWhenCovert) {
  Scenario s;
  Gains g;
  EXPECT_EQ(xi_values(s, g, {0.0, 0.1, 0.0}).xi6, 0.0);
}

TEST(AlicePower, TakesSmallestCap) {
  XiBundle xi;
  xi.xi1 = 3.0;
  xi.xi2 = 5.0;
  xi.xi3 = 2.0;
  EXPECT_DOUBLE_EQ(optimal_alice_power(xi, 10.0).value, 2.0);
  xi.xi1 = xi.xi2 = xi.xi3 = 20.0;
  EXPECT_DOUBLE_EQ(optimal_alice_power(xi, 10.0).value, 10.0);
  xi.xi1 = -0.1;
  EXPECT_FALSE(optimal_alice_power(xi, 10.0).feasible);
}

TEST(AlicePower, GridOracleOnScalarCaps) {
  // Maximize R_a = P_a over [0, 10] subject to P_a <= 3, P_a <= 5, P_a <= 2.
  double best = 0.0;
  for (int i = 0; i <= 100000; ++i) {
    const double pa = 1e-4 * i;
    if (pa <= 3.0 && pa <= 5.0 && pa <= 2.0) best = pa;
  }
  XiBundle xi;
  xi.xi1 = 3.0;
  xi.xi2 = 5.0;
  xi.xi3 = 2.0;
  EXPECT_NEAR(optimal_alice_power(xi, 10.0).value, best, 1e-4);
}

TEST(JamPower, Branches) {
  XiBundle xi;
  xi.xi6 = -0.3;
  EXPECT_EQ(optimal_jamming_power(xi, 1.0), 0.0);
  xi.xi6 = 0.5;
  xi.xi4 = 1.0;
  xi.xi5 = 2.0;
  EXPECT_DOUBLE_EQ(optimal_jamming_power(xi, 1.0), 0.5);
  xi.xi6 = 1.5;
  EXPECT_EQ(optimal_jamming_power(xi, 1.0), 0.0);
  xi.xi6 = 0.5;
  xi.xi4 = 0.4;
  EXPECT_EQ(optimal_jamming_power(xi, 1.0), 0.0);
}

TEST(GracePower, Budget) {
  Scenario s;
  EXPECT_NEAR(grace_power(s), 0.1, 1e-15);
  s.budget_grace = 0.05;
  EXPECT_EQ(grace_power(s), 0.05);
}

TEST(GracePower, FullBudgetIsBest) {
  Scenario s;
  std::mt19937_64 rng(12);
  for (int t = 0; t < 10; ++t) {
    const ChannelSet ch = generate_channels(s, t);
    const Gains g = effective_gains(ch, random_beam(rng, 16, 2.0), random_fd(rng, 4));
    const PowerSolution full = solve_power(s, g);
    for (double frac : {0.25, 0.5, 0.9}) {
      Scenario lower = s;
      lower.budget_grace = frac * s.budget_grace;
      const PowerSolution less = solve_power(lower, g);
      if (!less.feasible) continue;
      ASSERT_TRUE(full.feasible);
      const double r_full = sinr_and_rates(g, full.powers, s.noise_bob, s.noise_ios, s.si_level).rate_a;
      const double r_less = sinr_and_rates(g, less.powers, s.noise_bob, s.noise_ios, s.si_level).rate_a;
      EXPECT_GE(r_full, r_less - 1e-12);
    }
  }
}

TEST(SolvePower, MatchesGridSearch) {
  Scenario s;
  std::mt19937_64 rng(31);
  int checked = 0;
  for (int t = 0; checked < 15 && t < 200; ++t) {
    const ChannelSet ch = generate_channels(s, t);
    const Gains g = effective_gains(ch, random_beam(rng, 16, 3.0), random_fd(rng, 4));
    const PowerSolution ps = solve_power(s, g);
    const GridOptimum grid = power_grid_search(s, g, 10000);
    ASSERT_EQ(ps.feasible, grid.feasible) << "trial " << t;
    if (!ps.feasible) continue;
    ++checked;
    EXPECT_NEAR(ps.powers.alice, grid.alice, 1e-4 * s.budget_alice * 1.0001) << "trial " << t;
    EXPECT_NEAR(ps.powers.jam, grid.jam, 1e-4 * s.budget_jam * 1.0001) << "trial " << t;
  }
  EXPECT_EQ(checked, 15);
}

TEST(SolvePower, FeasibleAndMonotoneInKappa) {
  Scenario s;
  std::mt19937_64 rng(5);
  for (int t = 0; t < 20; ++t) {
    const ChannelSet ch = generate_channels(s, t);
    SolutionState st;
    st.ios = random_beam(rng, 16, 1.5);
    st.fd = random_fd(rng, 4);
    const Gains g = effective_gains(ch, st.ios, st.fd);
    double last = -1.0;
    for (double eps : {0.02, 0.05, 0.1, 0.2}) {
      Scenario e = s;
      e.covertness_eps = eps;
      const PowerSolution ps = solve_power(e, g);
      if (!ps.feasible) continue;
      const XiBundle xi = xi_values(e, g, {0.0, e.budget_grace, 0.0});
      const double pa0 = optimal_alice_power(xi, e.budget_alice).value;
      EXPECT_GE(pa0, last - 1e-15);
      last = pa0;
      st.powers = ps.powers;
      settle_element_budgets(e, ch, st);
      const ConstraintReport rep = check_all_constraints(e, ch, st);
      // Surface-dependent constraints (SIC order, element budgets) are not
      // part of the power step, so only the power-step ones are asserted.
      for (const char* name : {"P_a<=max", "P_g<=max", "P_j<=max", "qos_grace", "covertness", "ios_output"}) {
        EXPECT_GE(rep.find(name)->value, -1e-6) << name << " eps=" << eps;
      }
    }
  }
}

TEST(SolvePower, ZeroJamBudgetNeverJams) {
  Scenario s;
  s.budget_jam = 0.0;
  std::mt19937_64 rng(9);
  for (int t = 0; t < 10; ++t) {
    const ChannelSet ch = generate_channels(s, t);
    const Gains g = effective_gains(ch, random_beam(rng, 16, 2.0), random_fd(rng, 4));
    const PowerSolution ps = solve_power(s, g);
    if (ps.feasible) EXPECT_EQ(ps.powers.jam, 0.0);
  }
}

TEST(SolvePower, PassiveIgnoresSurfaceBudget) {
  Scenario s;
  s.surface = SurfaceMode::passive;
  s.budget_ios = 1e-30;
  std::mt19937_64 rng(10);
  const ChannelSet ch = generate_channels(s, 0);
  const Gains g = effective_gains(ch, random_beam(rng, 16, 0.7), random_fd(rng, 4));
  const XiBundle xi = xi_values(s, g, {0.01, 0.1, 0.0});
  EXPECT_EQ(xi.xi2, kInf);
  EXPECT_EQ(xi.xi5, kInf);
}
