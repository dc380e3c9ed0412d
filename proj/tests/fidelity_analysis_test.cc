#include "distill/fidelity_analysis.h"

#include <cmath>

#include "gtest/gtest.h"

#include "distill/errors.h"

namespace distill {
namespace {

WalkSpec nps(double eps, int h) { return WalkSpec(DephasingChannel(eps), h, Protocol::kNps); }

TEST(FidelityAnalysis, EtaDomain) {
  EXPECT_NO_THROW(LocalErrorModel(0.0));
  EXPECT_THROW(LocalErrorModel(1.0), DomainError);
  EXPECT_THROW(LocalErrorModel(-1e-3), DomainError);
}

TEST(FidelityAnalysis, NoLocalErrors) {
  const FidelityReport r = expected_fidelity(nps(0.2, 2), LocalErrorModel(0.0));
  EXPECT_NEAR(r.expected_fidelity, 16.0 / 17.0, 1e-12);
  EXPECT_NEAR(r.expected_infidelity, 1.0 / 17.0, 1e-12);
  EXPECT_FALSE(r.clamp_activated);
}

TEST(FidelityAnalysis, SmallEtaMatchesClosedForm) {
  const FidelityReport r = expected_fidelity(nps(0.2, 2), LocalErrorModel(0.01));
  EXPECT_NEAR(r.expected_fidelity, (16.0 / 17.0) * (1.0 - 0.01 * 2.0 / 0.68), 1e-11);
  EXPECT_NEAR(r.expected_fidelity, 0.91349, 1e-5);
  EXPECT_FALSE(r.clamp_activated);
  EXPECT_NEAR(r.mean_rounds, 2.0 / 0.68, 1e-9);
}

TEST(FidelityAnalysis, DeltaOneHaltsAtOneRound) {
  for (double eta : {0.0, 0.01, 0.3, 0.99}) {
    const FidelityReport r = expected_fidelity(nps(0.2, 1), LocalErrorModel(eta));
    EXPECT_NEAR(r.expected_fidelity, 0.8 * (1.0 - eta), 1e-15);
  }
}

TEST(FidelityAnalysis, ClampFlagsLongWalks) {
  const FidelityReport r = expected_fidelity(nps(0.4, 6), LocalErrorModel(0.05));
  EXPECT_TRUE(r.clamp_activated);
  EXPECT_GE(r.expected_fidelity, 0.0);
}

TEST(FidelityAnalysis, Invariants) {
  for (double eps : {0.05, 0.2, 0.4}) {
    for (int h = 1; h <= 8; ++h) {
      const WalkSpec spec = nps(eps, h);
      const double f_halt = fidelity_of_delta(spec.channel(), h);
      double previous = 2.0;
      for (double eta : {0.0, 1e-5, 1e-4, 1e-3, 1e-2, 0.1}) {
        const FidelityReport r = expected_fidelity(spec, LocalErrorModel(eta));
        EXPECT_NEAR(r.expected_fidelity + r.expected_infidelity, 1.0, 1e-14);
        EXPECT_LE(r.expected_fidelity, f_halt);
        if (eta > 0.0) EXPECT_LT(r.expected_fidelity, f_halt);
        EXPECT_LE(r.expected_fidelity, previous);
        previous = r.expected_fidelity;
        if (!r.clamp_activated) {
          const double linear = f_halt * (1.0 - eta * expected_rounds(spec));
          EXPECT_LE(std::abs(r.expected_fidelity - linear), f_halt * r.tail_bound + 1e-14);
        }
      }
    }
  }
}

TEST(FidelityAnalysis, OptimalWithoutLocalErrorsHitsWindowEdge) {
  const OptimalHalting best = optimal_delta_h(DephasingChannel(0.2), LocalErrorModel(0.0), 10);
  EXPECT_EQ(best.delta_h, 10);
  EXPECT_TRUE(best.at_window_edge);
  EXPECT_THROW(optimal_delta_h(DephasingChannel(0.2), LocalErrorModel(0.0), 0), DomainError);
}

TEST(FidelityAnalysis, OptimumIsTheSweepArgmax) {
  for (double eta : {1e-4, 1e-3}) {
    const DephasingChannel ch(0.2);
    const OptimalHalting best = optimal_delta_h(ch, LocalErrorModel(eta), 30);
    EXPECT_FALSE(best.at_window_edge);
    int argmax = 0;
    double top = -1.0;
    for (int h = 1; h <= 30; ++h) {
      const double ef = expected_fidelity(nps(0.2, h), LocalErrorModel(eta)).expected_fidelity;
      if (ef > top) {
        top = ef;
        argmax = h;
      }
    }
    EXPECT_EQ(best.delta_h, argmax);
  }
}

TEST(FidelityAnalysis, TenEtaAtTwentyPercent) {
  for (double eta : {1e-4, 1e-3}) {
    const OptimalHalting best = optimal_delta_h(DephasingChannel(0.2), LocalErrorModel(eta));
    EXPECT_GE(best.report.expected_infidelity, 3.0 * eta);
    EXPECT_LE(best.report.expected_infidelity, 30.0 * eta);
  }
}

TEST(FidelityAnalysis, CurveRows) {
  const std::vector<double> single{0.2};
  const auto rows = infidelity_curve(single, LocalErrorModel(0.0), 10);
  ASSERT_EQ(rows.size(), 1u);
  ASSERT_TRUE(rows[0].optimum.has_value());
  EXPECT_NEAR(rows[0].optimum->report.expected_infidelity,
              1.0 - fidelity_of_delta(DephasingChannel(0.2), 10), 1e-11);

  std::vector<double> grid;
  for (int i = 0; i < 50; ++i) grid.push_back(0.01 + (0.45 - 0.01) * i / 49.0);
  const auto curve = infidelity_curve(grid, LocalErrorModel(1e-3));
  ASSERT_EQ(curve.size(), 50u);
  int transitions = 0;
  for (std::size_t i = 0; i < curve.size(); ++i) {
    ASSERT_TRUE(curve[i].optimum.has_value());
    EXPECT_GT(curve[i].optimum->report.expected_infidelity, 0.0);
    if (i > 0) {
      // Optimal halting line widens with the raw error rate.
      EXPECT_GE(curve[i].optimum->delta_h, curve[i - 1].optimum->delta_h);
      if (curve[i].optimum->delta_h != curve[i - 1].optimum->delta_h) ++transitions;
    }
  }
  EXPECT_GE(transitions, 2);

  const std::vector<double> bad{0.2, 0.7};
  const auto mixed = infidelity_curve(bad, LocalErrorModel(1e-3));
  EXPECT_TRUE(mixed[0].optimum.has_value());
  EXPECT_FALSE(mixed[1].optimum.has_value());
  EXPECT_FALSE(mixed[1].error.empty());
  EXPECT_THROW(infidelity_curve({}, LocalErrorModel(1e-3)), DomainError);
}

}  // namespace
}  // namespace distill
