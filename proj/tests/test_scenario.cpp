#include <gtest/gtest.h>

#include <cmath>

#include "covert/scenario.hpp"

using namespace covert;

TEST(PathLoss, UnitDistanceGivesReference) { EXPECT_DOUBLE_EQ(path_loss(1.0, 1e-3, 2.2), 1e-3); }

TEST(PathLoss, PowerLaw) {
  EXPECT_NEAR(path_loss(100.0, 1e-3, 2.0), 1e-7, 1e-20);
  EXPECT_NEAR(path_loss(20.0, 1.0, 2.5) / path_loss(10.0, 1.0, 2.5), std::pow(2.0, -2.5), 1e-14);
}

TEST(PathLoss, RejectsNonPositiveDistance) {
  EXPECT_THROW(path_loss(0.0, 1.0, 2.0), std::invalid_argument);
  EXPECT_THROW(path_loss(-1.0, 1.0, 2.0), std::invalid_argument);
}

TEST(ScenarioValidate, DefaultsAreValid) { EXPECT_NO_THROW(Scenario{}.validate()); }

TEST(ScenarioValidate, RejectsBadValues) {
  Scenario s;
  s.noise_bob = 0.0;
  EXPECT_THROW(s.validate(), std::invalid_argument);
  s = Scenario{};
  s.si_level = 1.5;
  EXPECT_THROW(s.validate(), std::invalid_argument);
  s = Scenario{};
  s.rho_decay[1] = 1.0;
  EXPECT_THROW(s.validate(), std::invalid_argument);
  s = Scenario{};
  s.covertness_eps = 0.0;
  EXPECT_THROW(s.validate(), std::invalid_argument);
}

TEST(ScenarioValidate, ZeroJamBudgetIsAllowed) {
  Scenario s;
  s.budget_jam = 0.0;
  EXPECT_NO_THROW(s.validate());
}

TEST(ScenarioValidate, AliceAndGraceOnSameSideRejected) {
  Scenario s;
  s.grace = {70.0, 10.0};
  EXPECT_THROW(s.validate(), std::invalid_argument);
}

TEST(ScenarioConfig, RoundTrip) {
  Scenario s;
  s.num_elements = 8;
  s.budget_jam = 0.0;
  s.amp_max = 2.0;
  s.rng_seed = 12345;
  s.surface = SurfaceMode::passive;
  const Scenario t = parse_scenario(to_config_text(s));
  EXPECT_EQ(t.num_elements, 8);
  EXPECT_EQ(t.budget_jam, 0.0);
  EXPECT_NEAR(t.amp_max, 2.0, 1e-12);
  EXPECT_NEAR(t.noise_bob, s.noise_bob, 1e-24);
  EXPECT_NEAR(t.si_level, s.si_level, 1e-26);
  EXPECT_EQ(t.rng_seed, 12345u);
  EXPECT_TRUE(t.passive());
  EXPECT_EQ(to_config_text(t), to_config_text(s));
}

TEST(ScenarioConfig, DbmConversion) {
  const Scenario s = parse_scenario("budget_alice_dbm = 20\nnoise_bob_dbm = -90 # comment\n");
  EXPECT_NEAR(s.budget_alice, 0.1, 1e-15);
  EXPECT_NEAR(s.noise_bob, 1e-12, 1e-25);
}

TEST(ScenarioConfig, ErrorsCarryLine) {
  try {
    parse_scenario("num_elements = 4\nbogus_key = 1\n", "cfg.txt");
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("cfg.txt:2"), std::string::npos) << e.what();
  }
  EXPECT_THROW(parse_scenario("num_elements = four\n"), ConfigError);
  EXPECT_THROW(parse_scenario("si_level_db = 10\n"), ConfigError);
}

TEST(Channels, Shapes) {
  Scenario s;
  const ChannelSet ch = generate_channels(s, 0);
  EXPECT_EQ(ch.H_ob.rows(), 4);
  EXPECT_EQ(ch.H_ob.cols(), 16);
  EXPECT_EQ(ch.H_bo.rows(), 16);
  EXPECT_EQ(ch.H_bo.cols(), 4);
  EXPECT_EQ(ch.h_ao.size(), 16);
  EXPECT_EQ(ch.h_ow.size(), 16);
  EXPECT_EQ(ch.h_bw.size(), 4);
  EXPECT_EQ(ch.H_bb.rows(), 4);
  EXPECT_NO_THROW(ch.validate());
}

TEST(Channels, DeterministicPerTrial) {
  Scenario s;
  const ChannelSet a = generate_channels(s, 7);
  const ChannelSet b = generate_channels(s, 7);
  const ChannelSet c = generate_channels(s, 8);
  EXPECT_EQ(a.H_ob, b.H_ob);
  EXPECT_EQ(a.H_bb, b.H_bb);
  EXPECT_EQ(a.h_bw, b.h_bw);
  EXPECT_NE(a.h_ao, c.h_ao);
}

// Rician power is |los|^2 K/(1+K) + 1/(1+K) = 1 per entry, so the mean gain is
// the path loss alone.
TEST(Channels, MeanGainMatchesPathLoss) {
  Scenario s;
  s.num_elements = 1;
  s.num_antennas = 1;
  auto rng = make_trial_rng(99, 0);
  const int n = 100000;
  double acc = 0.0;
  for (int i = 0; i < n; ++i) acc += std::norm(generate_channels(s, rng).h_ao(0));
  const double expect = path_loss(distance(s.alice, s.ios), 1e-3, 2.2);
  EXPECT_NEAR(acc / n / expect, 1.0, 0.02);
}

TEST(Channels, CloserNodesAreStronger) {
  Scenario s;
  double near = 0.0, far = 0.0;
  for (int t = 0; t < 200; ++t) {
    const ChannelSet ch = generate_channels(s, t);
    near += ch.h_ow.squaredNorm();  // Willie is 18 m from the surface
    far += ch.h_ao.squaredNorm();   // Alice is 36 m away
  }
  EXPECT_GT(near, far);
}
