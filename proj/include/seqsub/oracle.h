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

// Exhaustive ground truth for small instances.

#ifndef SEQSUB_ORACLE_H_
#define SEQSUB_ORACLE_H_

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "seqsub/core.h"
#include "seqsub/error.h"
#include "seqsub/matroid.h"
#include "seqsub/parallel.h"

namespace seqsub {

inline constexpr int kMaxOracleProducts = 10;
inline constexpr int kMaxVerifyGround = 12;
inline constexpr int kMaxMultilinearSupport = 20;

struct OracleReport {
  double best_value = 0.0;
  Permutation witness;
  std::uint64_t enumerated_count = 0;
  double elapsed_seconds = 0.0;
};

namespace internal_oracle {

inline constexpr double kTieTolerance = 1e-12;

// Best permutation under `score` among those passing `feasible`, enumerated
// in lexicographic order; the first of equal-valued permutations wins.
// Enumeration is split by leading product, and the chunks are merged in that
// order, so the result does not depend on the thread count.
template <typename Score, typename Feasible>
std::optional<OracleReport> Exhaust(int n, const Score& score,
                                    const Feasible& feasible) {
  if (n > kMaxOracleProducts) {
    throw Error(ErrorCode::kTooLarge, "oracle",
                "brute force needs n <= " + std::to_string(kMaxOracleProducts));
  }
  const auto start = std::chrono::steady_clock::now();
  struct Chunk {
    bool found = false;
    double value = 0.0;
    std::vector<int> order;
    std::uint64_t count = 0;
  };
  std::vector<Chunk> chunks(n);
  ParallelFor(
      static_cast<std::size_t>(n),
      [&](std::size_t lead) {
        Chunk& c = chunks[lead];
        std::vector<int> order(n);
        order[0] = static_cast<int>(lead);
        for (int k = 1, p = 0; k < n; ++p) {
          if (p != static_cast<int>(lead)) order[k++] = p;
        }
        do {
          ++c.count;
          const Permutation pi(order);
          if (!feasible(pi)) continue;
          const double v = score(pi);
          if (!c.found || v > c.value + kTieTolerance) {
            c.found = true;
            c.value = v;
            c.order = order;
          }
        } while (std::next_permutation(order.begin() + 1, order.end()));
      },
      /*min_parallel=*/2);
  std::optional<OracleReport> report;
  std::uint64_t total = 0;
  for (const Chunk& c : chunks) {
    total += c.count;
    if (!c.found) continue;
    if (!report || c.value > report->best_value + kTieTolerance) {
      report = OracleReport{c.value, Permutation(c.order), 0, 0.0};
    }
  }
  if (report) {
    report->enumerated_count = total;
    report->elapsed_seconds = std::chrono::duration<double>(
                                  std::chrono::steady_clock::now() - start)
                                  .count();
  }
  return report;
}

}  // namespace internal_oracle

// max over all permutations of F.
inline OracleReport BruteForceEngagementOpt(const Instance& inst) {
  auto report = internal_oracle::Exhaust(
      inst.n(), [&](const Permutation& pi) { return EvalEngagement(inst, pi); },
      [](const Permutation&) { return true; });
  return *report;
}

// max G over permutations with F >= T. Randomized policies can do strictly
// better when T > 0; this is exact only over deterministic rankings.
inline OracleReport BruteForceRevenueOpt(const Instance& inst) {
  const double floor = inst.threshold() - internal_oracle::kTieTolerance;
  auto report = internal_oracle::Exhaust(
      inst.n(), [&](const Permutation& pi) { return EvalRevenue(inst, pi); },
      [&](const Permutation& pi) {
        return inst.threshold() <= 0.0 || EvalEngagement(inst, pi) >= floor;
      });
  if (!report) {
    throw Error(ErrorCode::kInfeasible, "oracle",
                "no permutation reaches the engagement floor");
  }
  return *report;
}

template <typename Fn>
concept MaskFunction = requires(const Fn& f, std::uint64_t s) {
  { f(s) } -> std::convertible_to<double>;
};

struct SubmodularityCheck {
  enum class Violation { kNone, kMonotone, kSubmodular };

  bool passed = true;
  Violation violation = Violation::kNone;
  // Monotone: f(set + x) < f(set). Submodular: the gain of x at `set` is
  // smaller than at `superset` = set + y.
  std::uint64_t set = 0;
  std::uint64_t superset = 0;
  int element = -1;
  double amount = 0.0;

  std::string Describe() const {
    switch (violation) {
      case Violation::kNone:
        return "pass";
      case Violation::kMonotone:
        return "monotonicity fails adding element " + std::to_string(element) +
               " to set mask " + std::to_string(set);
      case Violation::kSubmodular:
        return "submodularity fails for element " + std::to_string(element) +
               " at set mask " + std::to_string(set) + " vs superset mask " +
               std::to_string(superset);
    }
    return "";
  }
};

// Checks f(S + x) >= f(S) and f(S + x) - f(S) >= f(S + y + x) - f(S + y) for
// every S and distinct x, y outside S, which together are equivalent to
// monotonicity and submodularity. Subsets are visited in mask order.
template <MaskFunction Fn>
SubmodularityCheck VerifyMonotoneSubmodular(const Fn& f, int ground,
                                            double slack = 1e-9) {
  if (ground < 0 || ground > kMaxVerifyGround) {
    throw Error(ErrorCode::kTooLarge, "oracle",
                "verification needs a ground set of at most " +
                    std::to_string(kMaxVerifyGround));
  }
  const std::uint64_t count = std::uint64_t{1} << ground;
  std::vector<double> value(count);
  for (std::uint64_t s = 0; s < count; ++s) value[s] = f(s);
  SubmodularityCheck out;
  for (std::uint64_t s = 0; s < count; ++s) {
    for (int x = 0; x < ground; ++x) {
      const std::uint64_t bx = std::uint64_t{1} << x;
      if (s & bx) continue;
      const double gain = value[s | bx] - value[s];
      if (gain < -slack) {
        out = {false, SubmodularityCheck::Violation::kMonotone, s, s, x, -gain};
        return out;
      }
      for (int y = 0; y < ground; ++y) {
        const std::uint64_t by = std::uint64_t{1} << y;
        if (y == x || (s & by)) continue;
        const double later = value[s | by | bx] - value[s | by];
        if (later > gain + slack) {
          out = {false, SubmodularityCheck::Violation::kSubmodular, s, s | by,
                 x, later - gain};
          return out;
        }
      }
    }
  }
  return out;
}

inline SubmodularityCheck VerifyMonotoneSubmodular(const ClickModel& model,
                                                   int n,
                                                   double slack = 1e-9) {
  return VerifyMonotoneSubmodular(
      [&](std::uint64_t s) { return model(s); }, n, slack);
}

// E[f(S)] where element e is in S independently with probability p[e].
// Elements with p = 1 are always present, p = 0 never; at most 20 others.
template <MaskFunction Fn>
double ExactMultilinear(const Fn& f, const std::vector<double>& p) {
  if (p.size() > 64) {
    throw Error(ErrorCode::kTooLarge, "oracle", "ground set above 64");
  }
  std::uint64_t forced = 0;
  std::vector<int> support;
  for (std::size_t e = 0; e < p.size(); ++e) {
    if (!(p[e] >= 0.0 && p[e] <= 1.0)) {
      throw Error(ErrorCode::kInvalidArgument, "oracle",
                  "inclusion probability outside [0, 1]");
    }
    if (p[e] == 1.0) {
      forced |= std::uint64_t{1} << e;
    } else if (p[e] > 0.0) {
      support.push_back(static_cast<int>(e));
    }
  }
  const int k = static_cast<int>(support.size());
  if (k > kMaxMultilinearSupport) {
    throw Error(ErrorCode::kTooLarge, "oracle",
                "fractional support above " +
                    std::to_string(kMaxMultilinearSupport));
  }
  double total = 0.0;
  for (std::uint64_t sub = 0; sub < (std::uint64_t{1} << k); ++sub) {
    std::uint64_t s = forced;
    double prob = 1.0;
    for (int t = 0; t < k; ++t) {
      const double q = p[support[t]];
      if ((sub >> t) & 1u) {
        s |= std::uint64_t{1} << support[t];
        prob *= q;
      } else {
        prob *= 1.0 - q;
      }
    }
    total += prob * f(s);
  }
  return total;
}

// Lifted form: element (i, j) is bit i * n + j; needs n <= 8.
template <typename G>
  requires requires(const G& g, const LiftedSet& r) {
    { g(r) } -> std::convertible_to<double>;
  }
double ExactMultilinear(const G& g, const FractionalPoint& x) {
  const int n = x.n();
  if (n * n > 64) {
    throw Error(ErrorCode::kTooLarge, "oracle", "lifted ground set above 64");
  }
  std::vector<double> p(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) p[i * n + j] = x(i, j);
  }
  return ExactMultilinear(
      [&](std::uint64_t s) {
        LiftedSet r(n);
        for (; s; s &= s - 1) {
          const int e = std::countr_zero(s);
          r.Insert(e / n, e % n);
        }
        return static_cast<double>(g(r));
      },
      p);
}

using SetDistribution = std::vector<std::pair<std::uint64_t, double>>;

// E_{S ~ D^I}[f(S)] / E_{S ~ D}[f(S)], where D^I includes each element
// independently with its marginal under D. +infinity when the denominator is 0.
template <MaskFunction Fn>
double CorrelationGapRatio(const Fn& f, int ground, const SetDistribution& d) {
  if (ground < 0 || ground > kMaxVerifyGround) {
    throw Error(ErrorCode::kTooLarge, "oracle",
                "correlation gap needs a ground set of at most " +
                    std::to_string(kMaxVerifyGround));
  }
  const std::uint64_t universe = (std::uint64_t{1} << ground) - 1;
  double mass = 0.0;
  double correlated = 0.0;
  std::vector<double> marginal(ground, 0.0);
  for (const auto& [s, prob] : d) {
    if (!(prob >= 0.0) || (s & ~universe) != 0) {
      throw Error(ErrorCode::kInvalidDistribution, "oracle",
                  "distribution entries need p >= 0 and sets in the ground set");
    }
    mass += prob;
    correlated += prob * f(s);
    for (int e = 0; e < ground; ++e) {
      if ((s >> e) & 1u) marginal[e] += prob;
    }
  }
  if (std::abs(mass - 1.0) > 1e-9) {
    throw Error(ErrorCode::kInvalidDistribution, "oracle",
                "distribution probabilities must sum to 1");
  }
  for (double& m : marginal) m = std::clamp(m, 0.0, 1.0);
  const double independent = ExactMultilinear(f, marginal);
  if (correlated == 0.0) return std::numeric_limits<double>::infinity();
  return independent / correlated;
}

}  // namespace seqsub

#endif  // SEQSUB_ORACLE_H_
