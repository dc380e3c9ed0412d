#include "distill/walk_engine.h"

#include <cmath>

#include "gtest/gtest.h"

#include "distill/errors.h"
#include "oracles.h"

namespace distill {
namespace {

WalkSpec nps(double eps, int h) { return WalkSpec(DephasingChannel(eps), h, Protocol::kNps); }
WalkSpec ps(double eps, int h) { return WalkSpec(DephasingChannel(eps), h, Protocol::kPs); }

TEST(WalkEngine, Transitions) {
  const auto from0 = transitions_from(nps(0.2, 3), 0);
  ASSERT_EQ(from0.size(), 1u);
  EXPECT_EQ(from0[0].to.d, 1);
  EXPECT_EQ(from0[0].probability, 1.0);
  const auto nps2 = transitions_from(nps(0.2, 3), 2);
  EXPECT_TRUE(nps2[0].to.absorbed);
  EXPECT_EQ(nps2[1].to.d, 1);
  EXPECT_EQ(transitions_from(ps(0.2, 3), 2)[1].to.d, 0);
  EXPECT_THROW(transitions_from(nps(0.2, 3), 3), DomainError);
}

TEST(WalkEngine, NpsDeltaTwo) {
  const HaltingDistribution d = halting_distribution(nps(0.2, 2));
  EXPECT_NEAR(d.mass_at(2), 0.68, 1e-15);
  EXPECT_NEAR(d.mass_at(4), 0.2176, 1e-15);
  EXPECT_NEAR(d.mass_at(4), 0.32 * 0.68, 1e-15);
  EXPECT_EQ(d.mass_at(3), 0.0);
  EXPECT_LE(d.tail_bound, 1e-12);
  EXPECT_NEAR(d.cumulative.back() + d.tail_bound, 1.0, 1e-12);
}

TEST(WalkEngine, PsEqualsNpsAtDeltaTwo) {
  for (double eps : {0.05, 0.2, 0.4}) {
    const HaltingDistribution a = halting_distribution(nps(eps, 2));
    const HaltingDistribution b = halting_distribution(ps(eps, 2));
    ASSERT_EQ(a.mass.size(), b.mass.size());
    for (std::size_t t = 0; t < a.mass.size(); ++t) EXPECT_NEAR(a.mass[t], b.mass[t], 1e-12);
  }
}

TEST(WalkEngine, DeltaOneHaltsImmediately) {
  for (double eps : {0.01, 0.3}) {
    const HaltingDistribution d = halting_distribution(nps(eps, 1));
    EXPECT_EQ(d.last_round(), 1);
    EXPECT_EQ(d.mass_at(1), 1.0);
    EXPECT_EQ(d.tail_bound, 0.0);
  }
}

TEST(WalkEngine, MatchesSignedWalk) {
  for (double eps : {0.05, 0.2, 0.4}) {
    for (int h = 1; h <= 6; ++h) {
      for (bool post_select : {false, true}) {
        const WalkSpec spec = post_select ? ps(eps, h) : nps(eps, h);
        const HaltingDistribution d = halting_distribution(spec);
        const auto ref = testing::signed_walk_masses(eps, h, post_select, 80);
        // Beyond the last tabulated round only the truncated tail remains.
        double beyond = 0.0;
        for (long t = 0; t <= 80; ++t) {
          if (t <= d.last_round()) {
            EXPECT_NEAR(d.mass_at(t), ref[t], 1e-13) << eps << " " << h << " " << t;
          } else {
            beyond += ref[t];
          }
        }
        EXPECT_LE(beyond, d.tail_bound + 1e-15);
      }
    }
  }
}

TEST(WalkEngine, DistributionInvariants) {
  for (double eps : {0.05, 0.2, 0.4}) {
    for (int h = 1; h <= 8; ++h) {
      for (const WalkSpec& spec : {nps(eps, h), ps(eps, h)}) {
        const HaltingDistribution d = halting_distribution(spec);
        EXPECT_LE(d.tail_bound, 1e-12);
        EXPECT_NEAR(d.cumulative.back() + d.tail_bound, 1.0, 1e-12);
        for (long t = 1; t <= d.last_round(); ++t) {
          EXPECT_GE(d.mass_at(t), 0.0);
          EXPECT_LE(d.mass_at(t), 1.0);
          EXPECT_GE(d.cumulative_at(t), d.cumulative_at(t - 1));
          if (t < h) EXPECT_EQ(d.mass_at(t), 0.0);
          if (spec.protocol() == Protocol::kNps && (t - h) % 2 != 0) EXPECT_EQ(d.mass_at(t), 0.0);
        }
      }
    }
  }
}

// A reset from an even depth shifts the parity of the remaining walk, so the
// PS chain halts at T = delta_h + 3 as well.
TEST(WalkEngine, PsHasOffParityMassFromDeltaThree) {
  const HaltingDistribution d = halting_distribution(ps(0.2, 3));
  EXPECT_NEAR(d.mass_at(3), 0.5 * 0.68 * 13.0 / 17.0 * 2.0, 1e-15);
  EXPECT_EQ(d.mass_at(4), 0.0);
  // 0 -> 1 -> 2 -> reset -> 1 -> 2 -> 3
  const double p_up12 = 0.68 * 13.0 / 17.0;
  EXPECT_NEAR(d.mass_at(6), 0.68 * (4.0 / 17.0) * p_up12, 1e-15);
}

TEST(WalkEngine, SuccessProbabilityBy) {
  EXPECT_EQ(success_probability_by(nps(0.2, 2), 1), 0.0);
  EXPECT_NEAR(success_probability_by(nps(0.2, 2), 3), 0.68, 1e-15);
  EXPECT_NEAR(success_probability_by(nps(0.2, 2), 4), 0.8976, 1e-15);
  EXPECT_THROW(success_probability_by(nps(0.2, 2), -1), DomainError);
}

TEST(WalkEngine, ExpectedRoundsAndYield) {
  EXPECT_NEAR(expected_rounds(nps(0.2, 2)), 2.0 / 0.68, 1e-9);
  EXPECT_NEAR(expected_rounds(nps(0.2, 3)), 1.0 + 2.0 / 0.52, 1e-9);
  EXPECT_NEAR(expected_rounds(ps(0.2, 3)), 2.68 / 0.52, 1e-9);
  EXPECT_NEAR(protocol_yield(nps(0.2, 2)), 0.34, 1e-9);
  EXPECT_NEAR(protocol_yield(nps(0.2, 3)), 0.2063, 1e-4);
  EXPECT_NEAR(protocol_yield(ps(0.2, 3)), 0.1940, 1e-4);
}

TEST(WalkEngine, RoundsRoutesAgree) {
  for (double eps : {0.01, 0.05, 0.2, 0.4, 0.45}) {
    for (int h = 1; h <= 10; ++h) {
      for (const WalkSpec& spec : {nps(eps, h), ps(eps, h)}) {
        const RoundsEstimate r = expected_rounds_both(spec);
        EXPECT_NEAR(r.by_summation, r.by_linear_solve, 1e-9 * std::max(1.0, r.by_linear_solve));
      }
      EXPECT_GE(protocol_yield(nps(eps, h)), protocol_yield(ps(eps, h)) - 1e-15);
    }
  }
}

TEST(WalkEngine, NonConvergenceGuard) {
  HaltingOptions tight;
  tight.max_rounds = 10;
  EXPECT_THROW(halting_distribution(nps(0.45, 8), tight), NonConvergenceError);
  EXPECT_THROW(halting_distribution(nps(0.2, 2), {0.0, 100}), DomainError);
}

TEST(WalkEngine, CountPaths) {
  EXPECT_EQ(count_first_passage_paths(2, 2), 2);
  EXPECT_EQ(count_first_passage_paths(2, 4), 4);
  EXPECT_EQ(count_first_passage_paths(3, 3), 2);
  EXPECT_EQ(count_first_passage_paths(3, 4), 0);
  EXPECT_EQ(count_first_passage_paths(3, 2), 0);
  for (int d = 1; d <= 5; ++d) {
    for (int t = 1; t <= 16; ++t) {
      EXPECT_EQ(count_first_passage_paths(d, t),
                PathCount(testing::enumerate_first_passage_paths(d, t).size()))
          << d << " " << t;
    }
  }
}

TEST(WalkEngine, CountPathsBeyondNativeRange) {
  // Wide walks overflow 64 bits long before 2^t does for narrow ones.
  const PathCount big = count_first_passage_paths(60, 400);
  EXPECT_GT(big, PathCount(std::numeric_limits<std::uint64_t>::max()));
  // Ratio of consecutive counts for d = 1: only t = 1 is possible.
  EXPECT_EQ(count_first_passage_paths(1, 1), 2);
  EXPECT_EQ(count_first_passage_paths(1, 3), 0);
}

TEST(WalkEngine, MassEqualsCountTimesPathProbability) {
  for (double eps : {0.05, 0.2, 0.4}) {
    const DephasingChannel ch(eps);
    for (int h = 1; h <= 6; ++h) {
      const HaltingDistribution d = halting_distribution(nps(eps, h));
      for (long t = 1; t <= 60; ++t) {
        const double predicted =
            count_first_passage_paths(h, t).convert_to<double>() * path_probability(ch, h, t);
        EXPECT_NEAR(d.mass_at(t), predicted, 1e-12);
      }
    }
  }
}

TEST(WalkEngine, SequenceProbability) {
  const DephasingChannel ch(0.2);
  const std::vector<int> up_down_up_up{+1, -1, +1, +1};
  EXPECT_NEAR(sequence_probability(ch, up_down_up_up), 0.0544, 1e-15);
  const std::vector<int> bad{+1, 0};
  EXPECT_THROW(sequence_probability(ch, bad), DomainError);
}

}  // namespace
}  // namespace distill
