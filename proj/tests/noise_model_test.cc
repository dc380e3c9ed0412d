#include "distill/noise_model.h"

#include <cmath>

#include "gtest/gtest.h"

#include "distill/errors.h"
#include "oracles.h"

namespace distill {
namespace {

std::vector<double> epsilon_grid() {
  std::vector<double> grid;
  for (int i = 1; i <= 50; ++i) grid.push_back(0.5 * i / 51.0);
  return grid;
}

TEST(NoiseModel, AlphaValues) {
  EXPECT_DOUBLE_EQ(alpha_of(0.5), 1.0);
  EXPECT_DOUBLE_EQ(alpha_of(0.2), 2.0);
  EXPECT_DOUBLE_EQ(alpha_of(0.1), 3.0);
  EXPECT_THROW(alpha_of(0.0), DomainError);
  EXPECT_THROW(alpha_of(0.6), DomainError);
}

TEST(NoiseModel, ChannelDomain) {
  EXPECT_THROW(DephasingChannel(0.0), DomainError);
  EXPECT_THROW(DephasingChannel(0.5), DomainError);
  EXPECT_THROW(DephasingChannel(-0.1), DomainError);
  EXPECT_THROW(DephasingChannel(std::nan("")), DomainError);
  for (double eps : epsilon_grid()) {
    const DephasingChannel ch(eps);
    EXPECT_GT(ch.alpha(), 1.0);
    EXPECT_NEAR(ch.alpha() * ch.alpha() * eps, 1.0 - eps, 1e-12);
    EXPECT_NEAR(1.0 / (1.0 + ch.alpha() * ch.alpha()), eps, 1e-12);
  }
}

TEST(NoiseModel, FidelityMatchesPosterior) {
  const DephasingChannel ch(0.2);
  EXPECT_DOUBLE_EQ(fidelity_of_delta(ch, 0), 0.5);
  EXPECT_DOUBLE_EQ(fidelity_of_delta(ch, 1), 0.8);
  EXPECT_NEAR(fidelity_of_delta(ch, 2), 16.0 / 17.0, 1e-15);
  // Mixed sequences with the same net delta give the same posterior.
  EXPECT_NEAR(testing::posterior_fidelity(0.2, {+1, +1, -1}), 0.8, 1e-15);
  for (double eps : {0.05, 0.2, 0.37}) {
    const DephasingChannel c(eps);
    for (int delta = -8; delta <= 8; ++delta) {
      EXPECT_NEAR(fidelity_of_delta(c, delta),
                  testing::posterior_fidelity(eps, testing::sequence_with_delta(delta)), 1e-13);
    }
  }
}

TEST(NoiseModel, FidelityShape) {
  for (double eps : epsilon_grid()) {
    const DephasingChannel ch(eps);
    for (int d = 0; d < 30; ++d) {
      EXPECT_EQ(fidelity_of_delta(ch, d), fidelity_of_delta(ch, -d));
      const double next = fidelity_of_delta(ch, d + 1);
      if (next < 1.0) EXPECT_LT(fidelity_of_delta(ch, d), next);
    }
  }
  EXPECT_DOUBLE_EQ(fidelity_of_delta(DephasingChannel(0.2), 5000), 1.0);
}

TEST(NoiseModel, StepUpProbability) {
  const DephasingChannel ch(0.2);
  EXPECT_DOUBLE_EQ(step_up_probability(ch, 0), 0.5);
  EXPECT_NEAR(step_up_probability(ch, 1), 0.68, 1e-15);
  EXPECT_NEAR(step_up_probability(ch, 2), 13.0 / 17.0, 1e-15);
  EXPECT_NEAR(step_up_probability(ch, 400), 0.8, 1e-15);
  EXPECT_THROW(step_up_probability(ch, -1), DomainError);
  for (double eps : epsilon_grid()) {
    const DephasingChannel c(eps);
    EXPECT_DOUBLE_EQ(step_up_probability(c, 0), 0.5);
    for (int d = 0; d < 25; ++d) {
      EXPECT_LE(step_up_probability(c, d), step_up_probability(c, d + 1));
      EXPECT_NEAR(step_up_probability(c, d), testing::oracle_step_away(eps, d), 1e-13);
    }
  }
}

TEST(NoiseModel, KinkIdentity) {
  EXPECT_DOUBLE_EQ(kink_probability(0.5), 0.25);
  EXPECT_NEAR(kink_probability(DephasingChannel(0.2)), 0.16, 1e-15);
  EXPECT_NEAR(kink_probability(DephasingChannel(0.01)), 0.0099, 1e-15);
  EXPECT_NEAR(step_up_probability(DephasingChannel(0.2), 1) * (4.0 / 17.0), 0.16, 1e-15);
  std::vector<double> grid = epsilon_grid();
  grid.push_back(0.01);
  for (double eps : grid) {
    const DephasingChannel ch(eps);
    for (int d = 0; d <= 20; ++d) {
      const double lhs = step_up_probability(ch, d) * (1.0 - step_up_probability(ch, d + 1));
      EXPECT_NEAR(lhs, eps * (1.0 - eps), 1e-12) << "eps=" << eps << " d=" << d;
    }
  }
}

TEST(NoiseModel, MinDeltaForTarget) {
  EXPECT_EQ(min_delta_for_target(DephasingChannel(0.2), 0.8), 1);
  EXPECT_EQ(min_delta_for_target(DephasingChannel(0.2), 1.0 - 1e-4), 7);
  EXPECT_EQ(min_delta_for_target(DephasingChannel(0.1), 0.9), 1);
  EXPECT_THROW(min_delta_for_target(DephasingChannel(0.2), 0.5), DomainError);
  EXPECT_THROW(min_delta_for_target(DephasingChannel(0.2), 1.0), DomainError);
  for (double eps : {0.01, 0.1, 0.2, 0.3, 0.45, 0.49}) {
    const DephasingChannel ch(eps);
    for (double f : {0.6, 0.9, 0.99, 0.9999, 1.0 - 1e-9}) {
      const int h = min_delta_for_target(ch, f);
      EXPECT_GE(fidelity_of_delta(ch, h), f * (1.0 - 1e-15));
      if (h > 1) EXPECT_LT(fidelity_of_delta(ch, h - 1), f);
    }
  }
}

TEST(NoiseModel, WalkSpecFromTarget) {
  const WalkSpec spec = WalkSpec::for_target(DephasingChannel(0.2), 0.9999, Protocol::kNps);
  EXPECT_EQ(spec.delta_h(), 7);
  ASSERT_TRUE(spec.target_fidelity().has_value());
  EXPECT_THROW(WalkSpec(DephasingChannel(0.2), 0, Protocol::kNps), DomainError);
  EXPECT_EQ(parse_protocol("ps"), Protocol::kPs);
  EXPECT_THROW(parse_protocol("both"), DomainError);
}

TEST(NoiseModel, PathProbabilityExamples) {
  const DephasingChannel ch(0.2);
  EXPECT_EQ(path_probability(ch, 2, 3), 0.0);
  EXPECT_EQ(path_probability(ch, 2, 1), 0.0);
  EXPECT_NEAR(path_probability(ch, 2, 2), 0.34, 1e-15);
  EXPECT_NEAR(path_probability(ch, 2, 4), 0.0544, 1e-15);
  EXPECT_NEAR(testing::oracle_path_probability(0.2, {+1, -1, +1, +1}), 0.0544, 1e-15);
  EXPECT_GT(path_probability(ch, 400, 800), 0.0);
}

// Every explicit first-passage path has the same probability.
TEST(NoiseModel, PathProbabilityIsPathIndependent) {
  for (double eps : {0.05, 0.2, 0.4}) {
    const DephasingChannel ch(eps);
    for (int d = 1; d <= 4; ++d) {
      for (int t = d; t <= 12; ++t) {
        for (const auto& path : testing::enumerate_first_passage_paths(d, t)) {
          EXPECT_NEAR(testing::oracle_path_probability(eps, path), path_probability(ch, d, t),
                      1e-12);
        }
      }
    }
  }
}

}  // namespace
}  // namespace distill
