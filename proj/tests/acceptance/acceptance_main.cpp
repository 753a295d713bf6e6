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

// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails or overruns its time budget.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "test_util.h"

namespace seqsub {
namespace {

constexpr double kOneMinusInvE = 1.0 - 0.36787944117144233;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void Require(bool ok, const std::string& what) {
    if (!ok && pass) detail << "first failure: " << what << "; ";
    pass = pass && ok;
  }
};

struct Criterion {
  int id;
  std::string name;
  double limit_seconds;
  std::function<void(Outcome&)> body;
};

// Criterion 1.
void LpGapGolden(Outcome& out) {
  const Instance inst = testing::LoadFixture("lp_gap.json");
  const OracleReport opt = BruteForceRevenueOpt(inst);
  const Lp2Solution lp = SolveLp2(Lp2Model(inst));
  out.Require(std::abs(opt.best_value - 47.75) <= 1e-9, "OPT revenue");
  out.Require(lp.value >= 47.875 - 1e-9, "LP optimum");
  out.detail << "OPT revenue " << opt.best_value << ", LP optimum " << lp.value;
}

// Criterion 2.
void Certification(Outcome& out) {
  const PolicyVector pv = PolicyFromJson(
      ReadJsonFile(testing::FixturePath("lp_gap_policy.json")));
  const ImplementabilityReport rep = CheckImplementable(pv);
  out.Require(!rep.feasible && rep.violating_layer == 3, "rejected at layer 3");
  const LayerFlowCert& cert = rep.certs.at(2);
  out.Require(std::abs(cert.flow - 0.5) <= 1e-9, "layer 3 flow 0.5");
  bool witness = false;
  for (const auto& node : cert.cut_source_side) {
    witness = witness || (node.layer == 2 && node.set == 0b1001);
  }
  out.Require(witness, "cut contains {1,4}");

  Rng rng(41);
  int accepted = 0;
  for (int t = 0; t < 100; ++t) {
    const int n = rng.UniformInt(2, 6);
    const int parts = rng.UniformInt(1, 6);
    std::vector<std::pair<Permutation, double>> mix;
    double total = 0.0;
    for (int p = 0; p < parts; ++p) {
      std::vector<int> order(n);
      std::iota(order.begin(), order.end(), 0);
      rng.Shuffle(std::span<int>(order));
      const double w = rng.Uniform(0.05, 1.0);
      mix.emplace_back(Permutation(order), w);
      total += w;
    }
    double assigned = 0.0;
    for (int p = 0; p + 1 < parts; ++p) {
      mix[p].second /= total;
      assigned += mix[p].second;
    }
    mix.back().second = 1.0 - assigned;
    const ImplementabilityReport r = CheckImplementable(PolicyVector::Mixture(mix));
    bool ok = r.feasible;
    for (const auto& c : r.certs) ok = ok && std::abs(c.flow - 1.0) <= 1e-9;
    accepted += ok ? 1 : 0;
  }
  out.Require(accepted == 100, "random mixtures accepted");
  out.detail << "layer 3 flow " << cert.flow << ", mixtures accepted "
             << accepted << "/100";
}

// Criterion 3.
void GreedyGuarantee(Outcome& out) {
  int violations = 0;
  double worst = 1.0;
  for (int t = 0; t < 500; ++t) {
    const int n = 2 + t % 6;
    const Instance inst =
        RandomInstance(static_cast<ClickKind>(t % 3), n, 1000 + t);
    const double opt = BruteForceEngagementOpt(inst).best_value;
    const double got = EvalEngagement(inst, GreedyRank(inst));
    if (got < 0.5 * opt - 1e-12) ++violations;
    if (opt > 0.0) worst = std::min(worst, got / opt);
  }
  const Instance tight = testing::GreedyTight(0.1);
  const double ratio = EvalEngagement(tight, GreedyRank(tight)) /
                       BruteForceEngagementOpt(tight).best_value;
  out.Require(violations == 0, "greedy >= OPT/2");
  out.Require(ratio <= 0.524 && std::abs(ratio - 1.1 / 2.1) <= 1e-12,
              "tight instance ratio");
  out.detail << "violations " << violations << ", worst ratio " << worst
             << ", tight ratio " << ratio;
}

// Criterion 4.
void ContinuousGreedyRanking(Outcome& out) {
  const int instances = 100;
  const int seeds = 20;
  int within_allowance = 0;
  int exact = 0;
  double worst_gap = 1.0;
  for (int t = 0; t < instances; ++t) {
    const int n = 2 + t % 5;
    const Instance inst =
        RandomInstance(static_cast<ClickKind>(t % 3), n, 2000 + t);
    const double opt = BruteForceEngagementOpt(inst).best_value;
    std::vector<double> values(seeds);
    ParallelFor(seeds, [&](std::size_t s) {
      RankCgOptions opts;
      opts.seed = DeriveSeed(static_cast<std::uint64_t>(t), {s});
      values[s] = RankContinuousGreedy(inst, opts).engagement;
    });
    const double mean = testing::Mean(values);
    const double target = kOneMinusInvE * opt;
    within_allowance += mean >= target - 0.02 ? 1 : 0;
    exact += mean >= target ? 1 : 0;
    worst_gap = std::min(worst_gap, mean / opt);
  }
  out.Require(within_allowance == instances, "mean within allowance");
  out.Require(exact >= 95, "95 instances clear the exact bound");
  out.detail << "within allowance " << within_allowance << "/" << instances
             << ", exact " << exact << "/" << instances
             << ", worst mean/OPT " << worst_gap;
}

// Criterion 5.
void LiftedStructure(Outcome& out) {
  int submodular_fail = 0, optimum_fail = 0, extract_fail = 0;
  long extract_checked = 0;
  for (int n = 2; n <= 4; ++n) {
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
      const Instance inst =
          RandomInstance(static_cast<ClickKind>(seed % 3), n, 3000 + seed);
      const LiftedObjective g(inst);
      const int ground = n * n;
      if (n <= 3) {
        const auto check = VerifyMonotoneSubmodular(
            [&](std::uint64_t mask) {
              return g(testing::LiftedFromMask(n, mask));
            },
            ground);
        submodular_fail += check.passed ? 0 : 1;
      }
      const LaminarMatroid m(n);
      double best_g = -1.0;
      for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << ground); ++mask) {
        const LiftedSet r = testing::LiftedFromMask(n, mask);
        if (!IsIndependent(m, r)) continue;
        const double value = g(r);
        best_g = std::max(best_g, value);
        ++extract_checked;
        if (EvalEngagement(inst, ExtractPermutation(r, n)) < value - 1e-12) {
          ++extract_fail;
        }
      }
      const OracleReport opt = BruteForceEngagementOpt(inst);
      if (best_g < opt.best_value - 1e-12 ||
          std::abs(g(LiftedSet::FromPermutation(opt.witness)) - best_g) >
              1e-12) {
        ++optimum_fail;
      }
    }
  }
  out.Require(submodular_fail == 0, "lifted g monotone submodular");
  out.Require(optimum_fail == 0, "independent optimum equals ranking optimum");
  out.Require(extract_fail == 0, "extraction never loses value");
  out.detail << "submodularity failures " << submodular_fail
             << ", optimum failures " << optimum_fail << ", extraction "
             << extract_fail << "/" << extract_checked;
}

// Criterion 6.
void CorrelationGap(Outcome& out) {
  Rng rng(6);
  const int ground = 8;
  int violations = 0, not_submodular = 0;
  double worst = std::numeric_limits<double>::infinity();
  for (int t = 0; t < 100; ++t) {
    const auto table = testing::RandomSubmodularTable(ground, rng);
    const auto f = [&](std::uint64_t s) { return table[s]; };
    if (!VerifyMonotoneSubmodular(f, ground).passed) ++not_submodular;
    const auto d = testing::RandomSetDistribution(ground, rng);
    const double ratio = CorrelationGapRatio(f, ground, d);
    worst = std::min(worst, ratio);
    if (ratio < kOneMinusInvE - 1e-9) ++violations;
  }
  out.Require(not_submodular == 0, "functions monotone submodular");
  out.Require(violations == 0, "ratio >= 1 - 1/e");
  out.detail << "violations " << violations << ", worst ratio " << worst;
}

// Criterion 7.
void BiCriteria(Outcome& out) {
  int violations = 0;
  double worst_alpha = std::numeric_limits<double>::infinity();
  double worst_beta = std::numeric_limits<double>::infinity();
  // The 50 random instances plus the LP gap fixture, whose relaxation is
  // fractional.
  for (int t = 0; t <= 50; ++t) {
    const int n = 2 + t % 4;
    const Instance base =
        t < 50 ? RandomInstance(static_cast<ClickKind>(t % 3), n, 4000 + t)
               : testing::LoadFixture("lp_gap.json");
    const OracleReport best = BruteForceRevenueOpt(base);
    const double threshold = 0.5 * EvalEngagement(base, best.witness);
    BiCriteriaOptions opts;
    opts.trials = 200;
    opts.seed = static_cast<std::uint64_t>(t);
    const BiCriteriaReport rep =
        RunBiCriteria(base.WithThreshold(threshold), opts);
    const bool ok = rep.mean_revenue >= 0.25 * rep.lp2_value &&
                    rep.mean_engagement >= 0.25 * threshold;
    violations += ok ? 0 : 1;
    worst_alpha = std::min(worst_alpha, rep.mean_revenue / rep.lp2_value);
    worst_beta = std::min(worst_beta, rep.mean_engagement / threshold);
  }
  out.Require(violations == 0, "bi-criteria means");
  out.detail << "violations " << violations << ", worst mean G/LP "
             << worst_alpha << ", worst mean F/T " << worst_beta;
}

// Feasible fractional point: a random mixture of three permutation matrices
// with every y_k as large as its coverage allows.
Lp3Solution MixedPoint(const CoverageInstance& ci, Rng& rng) {
  const int n = ci.n();
  Lp3Solution sol;
  sol.x = SquareMatrix(n);
  const double w[3] = {0.5, 0.3, 0.2};
  for (double weight : w) {
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    rng.Shuffle(std::span<int>(order));
    for (int i = 0; i < n; ++i) sol.x(i, order[i]) += weight;
  }
  sol.y.assign(n, 0.0);
  for (int k = 0; k < n; ++k) {
    double cover = 0.0;
    for (int i = 0; i <= k; ++i) {
      for (int j = 0; j < n; ++j) {
        if (Contains(ci.interest(k), j)) cover += sol.x(i, j);
      }
    }
    sol.y[k] = std::min(1.0, cover);
    sol.value += sol.y[k];
  }
  return sol;
}

// Criterion 8. Each instance is rounded from its LP optimum and from a
// fractional feasible point.
void CoverageRoundingCriterion(Outcome& out) {
  int mean_fail = 0, not_permutation = 0, dominance_fail = 0;
  double worst = std::numeric_limits<double>::infinity();
  for (int t = 0; t < 100; ++t) {
    const CoverageInstance ci = RandomCoverageInstance(8, 5000 + t / 2);
    Rng rng(static_cast<std::uint64_t>(t));
    const Lp3Solution sol = t % 2 == 0 ? SolveLp3(ci) : MixedPoint(ci, rng);
    std::vector<double> clicks;
    clicks.reserve(1000);
    for (int r = 0; r < 1000; ++r) {
      const CoverageRounding rounded = RoundLp3(ci, sol, rng);
      const SquareMatrix x = rounded.Assignment();
      for (int i = 0; i < 8; ++i) {
        double row = 0.0, col = 0.0;
        for (int j = 0; j < 8; ++j) {
          if (x(i, j) != 0.0 && x(i, j) != 1.0) ++not_permutation;
          row += x(i, j);
          col += x(j, i);
        }
        if (row != 1.0 || col != 1.0) ++not_permutation;
      }
      for (int k = 0; k < 8; ++k) {
        if (rounded.y_repaired[k] < rounded.y_raw[k]) ++dominance_fail;
      }
      clicks.push_back(rounded.clicks);
    }
    const double mean = testing::Mean(clicks);
    if (mean < kOneMinusInvE * sol.value - 2.0 * testing::StdErr(clicks)) {
      ++mean_fail;
    }
    worst = std::min(worst, mean / sol.value);
  }
  out.Require(mean_fail == 0, "mean clicks");
  out.Require(not_permutation == 0, "permutation matrices");
  out.Require(dominance_fail == 0, "repair dominance");
  out.detail << "mean failures " << mean_fail << ", worst mean/value " << worst
             << ", non-permutation " << not_permutation << ", dominance "
             << dominance_fail;
}

// Criterion 9.
void HalfMatching(Outcome& out) {
  const Instance inst = testing::LoadFixture("half_matching.json");
  const LiftedObjective g(inst);
  const LiftedSet m1 =
      LiftedSet::FromPermutation(Permutation::FromOneBased({1, 3, 2, 4}));
  const LiftedSet m2 =
      LiftedSet::FromPermutation(Permutation::FromOneBased({3, 2, 4, 1}));
  const FractionalPoint x = PointFromJson(
      ReadJsonFile(testing::FixturePath("half_matching_point.json")));
  const double g1 = ExactMultilinear(g, FractionalPoint::Indicator(m1));
  const double g2 = ExactMultilinear(g, FractionalPoint::Indicator(m2));
  const double mid = ExactMultilinear(g, x);
  const double independent = testing::ReferenceMultilinear(g, x);
  out.Require(std::abs(mid - independent) <= 1e-12,
              "fractional value equals independent expectation");
  out.Require(std::abs(g1 - g(m1)) <= 1e-12 && std::abs(g2 - g(m2)) <= 1e-12,
              "integral points");
  const char* relation = mid > std::max(g1, g2)   ? "above both"
                         : mid < std::min(g1, g2) ? "below both"
                                                  : "between";
  out.detail << "g(M1) " << g1 << ", g(M2) " << g2 << ", fractional " << mid
             << " (" << relation << ")";
}

// Criterion 10.
void Numerics(Outcome& out) {
  Rng rng(10);
  int lp_fail = 0, flow_fail = 0;
  for (int t = 0; t < 200; ++t) {
    const LpProblem lp = testing::RandomSmallLp(rng);
    const LpSolution sol = SimplexSolve(lp);
    const std::optional<double> ref = testing::VertexEnumerationOptimum(lp);
    const bool ok = ref.has_value()
                        ? sol.status == LpStatus::kOptimal &&
                              std::abs(sol.value - *ref) <= 1e-7
                        : sol.status == LpStatus::kInfeasible;
    lp_fail += ok ? 0 : 1;
  }
  for (int t = 0; t < 200; ++t) {
    const FlowNetwork net = testing::RandomSmallNetwork(rng);
    const MaxFlowResult res = MaxFlow(net);
    if (std::abs(res.value - testing::BruteForceMinCut(net)) > 1e-9) {
      ++flow_fail;
    }
  }
  out.Require(lp_fail == 0, "simplex matches vertex enumeration");
  out.Require(flow_fail == 0, "max flow matches min cut");
  out.detail << "LP mismatches " << lp_fail << "/200, flow mismatches "
             << flow_fail << "/200";
}

}  // namespace
}  // namespace seqsub

int main() {
  using seqsub::Criterion;
  const std::vector<Criterion> criteria = {
      {1, "LP gap golden instance", 1.0, seqsub::LpGapGolden},
      {2, "implementability certification", 10.0, seqsub::Certification},
      {3, "greedy half approximation", 60.0, seqsub::GreedyGuarantee},
      {4, "continuous greedy ranking", 600.0, seqsub::ContinuousGreedyRanking},
      {5, "lifted structure", 60.0, seqsub::LiftedStructure},
      {6, "correlation gap", 60.0, seqsub::CorrelationGap},
      {7, "bi-criteria revenue", 600.0, seqsub::BiCriteria},
      {8, "coverage rounding", 300.0, seqsub::CoverageRoundingCriterion},
      {9, "half matching multilinear values", 1.0, seqsub::HalfMatching},
      {10, "numerics", 30.0, seqsub::Numerics},
  };
  int failed = 0;
  for (const Criterion& c : criteria) {
    seqsub::Outcome out;
    const auto start = std::chrono::steady_clock::now();
    try {
      c.body(out);
    } catch (const std::exception& e) {
      out.Require(false, std::string("exception: ") + e.what());
    }
    const double seconds = std::chrono::duration<double>(
                               std::chrono::steady_clock::now() - start)
                               .count();
    out.Require(seconds < c.limit_seconds, "time limit");
    char timing[64];
    std::snprintf(timing, sizeof(timing), "%.2f s of %.0f s", seconds,
                  c.limit_seconds);
    std::cout << (out.pass ? "PASS" : "FAIL") << " [" << c.id << "] " << c.name
              << ": " << out.detail.str() << " (" << timing << ")"
              << std::endl;
    failed += out.pass ? 0 : 1;
  }
  std::cout << (failed == 0 ? "all criteria passed"
                            : std::to_string(failed) + " criteria failed")
            << std::endl;
  return failed == 0 ? 0 : 1;
}
