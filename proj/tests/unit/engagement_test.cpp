// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include "test_util.h"

namespace seqsub {
namespace {

using testing::LiftedFromMask;
using testing::LoadFixture;

constexpr double kOneMinusInvE = 1.0 - 0.36787944117144233;

TEST(GreedyTest, TightInstance) {
  const Instance inst = testing::GreedyTight(0.1);
  const Permutation pi = GreedyRank(inst);
  EXPECT_EQ(pi, Permutation::FromOneBased({2, 1}));
  EXPECT_NEAR(EvalEngagement(inst, pi), 0.55, 1e-12);
  const double ratio = EvalEngagement(inst, pi) /
                       BruteForceEngagementOpt(inst).best_value;
  EXPECT_NEAR(ratio, 1.1 / 2.1, 1e-12);
  EXPECT_LE(ratio, 0.524);
}

TEST(GreedyTest, SingleProduct) {
  const Instance inst = Instance::Shared(1, {1.0}, MnlFunction({1.0}, 1.0));
  EXPECT_EQ(GreedyRank(inst), Permutation::Identity(1));
}

TEST(GreedyTest, HalfOfOptimum) {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const int n = 2 + static_cast<int>(seed % 6);
    const Instance inst =
        RandomInstance(static_cast<ClickKind>(seed % 3), n, seed);
    const double opt = BruteForceEngagementOpt(inst).best_value;
    EXPECT_GE(EvalEngagement(inst, GreedyRank(inst)), 0.5 * opt - 1e-12)
        << "seed " << seed;
  }
}

TEST(LiftedObjectiveTest, PermutationSetEqualsEngagement) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Instance inst = RandomInstance(ClickKind::kExplicit, 4, seed);
    const LiftedObjective g(inst);
    for (const Permutation& pi : testing::AllPermutations(4)) {
      EXPECT_NEAR(LiftedGEval(g, LiftedSet::FromPermutation(pi)),
                  EvalEngagement(inst, pi), 1e-12);
    }
    double empty = 0.0;
    for (int i = 0; i < 4; ++i) empty += inst.lambda(i) * inst.f(i)(0);
    EXPECT_NEAR(g(LiftedSet(4)), empty, 1e-15);
  }
}

TEST(LiftedObjectiveTest, MatchesReferenceBuilder) {
  Rng rng(17);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Instance inst = RandomInstance(ClickKind::kMnl, 4, seed);
    const LiftedObjective g(inst);
    for (int t = 0; t < 50; ++t) {
      const LiftedSet r = LiftedFromMask(4, rng.Below(1u << 16));
      EXPECT_NEAR(g(r), testing::ReferenceLiftedG(inst, r.Elements()), 1e-12);
    }
  }
}

TEST(LiftedObjectiveTest, FastGainsMatchDirectEvaluation) {
  Rng rng(23);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const int n = 2 + static_cast<int>(seed % 4);
    const Instance inst =
        RandomInstance(static_cast<ClickKind>(seed % 3), n, seed);
    const LiftedObjective g(inst);
    for (int t = 0; t < 20; ++t) {
      const LiftedSet r = LiftedFromMask(n, rng.Below(1u << (n * n)));
      const SquareMatrix fast = g.MarginalGains(r);
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
          LiftedSet with = r, without = r;
          with.Insert(i, j);
          without.Erase(i, j);
          const double direct = testing::ReferenceLiftedG(inst, with.Elements()) -
                                testing::ReferenceLiftedG(inst, without.Elements());
          EXPECT_NEAR(fast(i, j), direct, 1e-12);
        }
      }
    }
  }
}

// g is monotone submodular over the 9-element lifted ground set.
TEST(LiftedObjectiveTest, MonotoneSubmodularForThreeProducts) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const Instance inst =
        RandomInstance(static_cast<ClickKind>(seed % 3), 3, seed);
    const LiftedObjective g(inst);
    const auto check = VerifyMonotoneSubmodular(
        [&](std::uint64_t mask) { return g(LiftedFromMask(3, mask)); }, 9);
    EXPECT_TRUE(check.passed) << check.Describe();
  }
}

// max over independent sets of g equals max over permutations of F, and a
// permutation-shaped set attains it.
TEST(LiftedObjectiveTest, IndependentMaximumIsPermutationOptimum) {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const int n = 3 + static_cast<int>(seed % 2);
    const Instance inst =
        RandomInstance(static_cast<ClickKind>(seed % 3), n, seed);
    const LiftedObjective g(inst);
    double best_g = -1.0;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << (n * n)); ++mask) {
      if (!testing::ReferenceIndependent(n, mask)) continue;
      best_g = std::max(best_g, g(LiftedFromMask(n, mask)));
    }
    const OracleReport opt = BruteForceEngagementOpt(inst);
    EXPECT_GE(best_g, opt.best_value - 1e-12);
    EXPECT_NEAR(g(LiftedSet::FromPermutation(opt.witness)), best_g, 1e-12);
  }
}

TEST(ExtractTest, Examples) {
  EXPECT_EQ(ExtractPermutation(LiftedSet::FromElements(3, {{0, 2}, {1, 0}}), 3),
            Permutation::FromOneBased({3, 1, 2}));
  EXPECT_EQ(ExtractPermutation(LiftedSet(4), 4), Permutation::Identity(4));
  EXPECT_THROW(ExtractPermutation(LiftedSet(3), 4), Error);
}

TEST(ExtractTest, NeverLosesValueOnIndependentSets) {
  Rng rng(29);
  int checked = 0;
  while (checked < 10000) {
    const int n = rng.UniformInt(2, 6);
    const Instance inst = RandomInstance(static_cast<ClickKind>(checked % 3), n,
                                         static_cast<std::uint64_t>(checked));
    const LiftedObjective g(inst);
    for (int t = 0; t < 50; ++t, ++checked) {
      // Random independent set: each position takes a few products while
      // prefix capacities allow.
      LiftedSet r(n);
      int used = 0;
      for (int i = 0; i < n; ++i) {
        const int take = rng.UniformInt(0, i + 1 - used);
        for (int c = 0; c < take; ++c) r.Insert(i, rng.UniformInt(0, n - 1));
        used = r.size();
      }
      ASSERT_TRUE(IsIndependent(LaminarMatroid(n), r));
      EXPECT_GE(EvalEngagement(inst, ExtractPermutation(r, n)), g(r) - 1e-12);
    }
  }
}

TEST(RankCgTest, DominantProductGoesFirst) {
  // Product 3 covers every item, so f({3}) = f(everything) at all levels.
  const CoverageFunction f({0.5, 0.3, 0.2}, {{0}, {1, 2}, {0, 1, 2}, {2}},
                           false);
  const Instance inst = Instance::Shared(4, {0.4, 0.3, 0.2, 0.1}, f);
  const double opt = BruteForceEngagementOpt(inst).best_value;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const RankCgResult res = RankContinuousGreedy(inst, {40, 200, seed});
    EXPECT_EQ(res.permutation[0], 2);
    EXPECT_NEAR(res.engagement, opt, 1e-12);
  }
}

TEST(RankCgTest, DiagnosticsAreConsistent) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const int n = 3 + static_cast<int>(seed % 3);
    const Instance inst =
        RandomInstance(static_cast<ClickKind>(seed % 3), n, seed);
    const RankCgResult res = RankContinuousGreedy(inst, {20, 50, seed});
    const LiftedObjective g(inst);
    EXPECT_TRUE(InMatroidPolytope(LaminarMatroid(n), res.fractional));
    EXPECT_TRUE(IsIndependent(LaminarMatroid(n), res.rounded));
    EXPECT_DOUBLE_EQ(res.rounded_value, g(res.rounded));
    EXPECT_GE(res.engagement, res.rounded_value - 1e-12);
    EXPECT_DOUBLE_EQ(res.engagement, EvalEngagement(inst, res.permutation));
    const RankCgResult again = RankContinuousGreedy(inst, {20, 50, seed});
    EXPECT_EQ(res.permutation, again.permutation);
  }
}

TEST(RankCgTest, LpGapMeanClearsBound) {
  const Instance inst = LoadFixture("lp_gap.json");
  std::vector<double> values;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    values.push_back(RankContinuousGreedy(inst, {40, 200, seed}).engagement);
  }
  EXPECT_GE(testing::Mean(values), kOneMinusInvE * 191.0 / 400.0);
}

TEST(RankCgTest, FractionalValueClearsBoundOnLpGap) {
  const Instance inst = LoadFixture("lp_gap.json");
  const RankCgResult res = RankContinuousGreedy(inst, {40, 200, 3});
  EXPECT_GE(res.fractional_value.mean,
            kOneMinusInvE * 191.0 / 400.0 - 3.0 * res.fractional_value.std_error);
}

TEST(RankCgTest, ValueComparingPipage) {
  const Instance inst = RandomInstance(ClickKind::kCoverage, 5, 8);
  RankCgOptions opts{20, 50, 8, PipageMode::kValueComparing};
  const RankCgResult res = RankContinuousGreedy(inst, opts);
  EXPECT_TRUE(IsIndependent(LaminarMatroid(5), res.rounded));
  EXPECT_GE(res.engagement, res.rounded_value - 1e-12);
}

}  // namespace
}  // namespace seqsub
