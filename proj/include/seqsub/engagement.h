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

// Engagement maximization: the greedy ranker and the lift / continuous greedy
// / pipage / extract pipeline.

#ifndef SEQSUB_ENGAGEMENT_H_
#define SEQSUB_ENGAGEMENT_H_

#include <algorithm>
#include <bit>
#include <cstdint>
#include <numeric>
#include <vector>

#include "seqsub/core.h"
#include "seqsub/matrix.h"
#include "seqsub/matroid.h"
#include "seqsub/random.h"
#include "seqsub/submodular.h"

namespace seqsub {

// g(R) = sum_i lambda_i f_i(T_i), where T_i holds every product placed by R at
// some position <= i.
class LiftedObjective {
 public:
  explicit LiftedObjective(Instance inst) : inst_(std::move(inst)) {}

  const Instance& instance() const { return inst_; }

  // T_0, ..., T_{n-1}.
  std::vector<ProductSet> PrefixSets(const LiftedSet& r) const {
    std::vector<ProductSet> t(inst_.n());
    ProductSet acc = 0;
    for (int i = 0; i < inst_.n(); ++i) {
      acc |= r.row(i);
      t[i] = acc;
    }
    return t;
  }

  double operator()(const LiftedSet& r) const {
    double value = 0.0;
    ProductSet acc = 0;
    for (int i = 0; i < inst_.n(); ++i) {
      acc |= r.row(i);
      if (inst_.lambda(i) != 0.0) value += inst_.lambda(i) * inst_.f(i)(acc);
    }
    return value;
  }

  // g(R + e) - g(R - e) per element. Adding (i, j) puts j into T_k for every
  // k >= i, so the gain of an absent element is a suffix sum of per-level
  // gains. Removing a present (i, j) only matters when i is the first position
  // holding j; then j leaves T_k for k below the next such position.
  SquareMatrix MarginalGains(const LiftedSet& r) const {
    const int n = inst_.n();
    const std::vector<ProductSet> t = PrefixSets(r);
    SquareMatrix gains(n);
    for (int j = 0; j < n; ++j) {
      const ProductSet bit = Singleton(j);
      double suffix = 0.0;
      for (int k = n - 1; k >= 0; --k) {
        if (inst_.lambda(k) != 0.0 && !(t[k] & bit)) {
          const ClickModel& f = inst_.f(k);
          suffix += inst_.lambda(k) * (f(t[k] | bit) - f(t[k]));
        }
        if (!r.Contains(k, j)) gains(k, j) = suffix;
      }
      int first = 0;
      while (first < n && !r.Contains(first, j)) ++first;
      if (first == n) continue;
      int next = first + 1;
      while (next < n && !r.Contains(next, j)) ++next;
      double loss = 0.0;
      for (int k = first; k < next; ++k) {
        if (inst_.lambda(k) == 0.0) continue;
        const ClickModel& f = inst_.f(k);
        loss += inst_.lambda(k) * (f(t[k]) - f(t[k] & ~bit));
      }
      gains(first, j) = loss;
    }
    return gains;
  }

 private:
  Instance inst_;
};

inline double LiftedGEval(const LiftedObjective& g, const LiftedSet& r) {
  return g(r);
}

// Fills positions in order, each time with the unused product of largest
// sum_{k >= i} lambda_k f_k(prefix + p); ties go to the smaller index.
inline Permutation GreedyRank(const Instance& inst) {
  const int n = inst.n();
  std::vector<int> order;
  order.reserve(n);
  ProductSet used = 0;
  for (int i = 0; i < n; ++i) {
    int best = -1;
    double best_value = 0.0;
    for (int p = 0; p < n; ++p) {
      if (Contains(used, p)) continue;
      const ProductSet s = used | Singleton(p);
      double value = 0.0;
      for (int k = i; k < n; ++k) {
        if (inst.lambda(k) != 0.0) value += inst.lambda(k) * inst.f(k)(s);
      }
      if (best < 0 || value > best_value + 1e-12) {
        best = p;
        best_value = value;
      }
    }
    order.push_back(best);
    used |= Singleton(best);
  }
  return Permutation(std::move(order));
}

// Products sorted by (first position holding them in R, index); products R
// never places go last.
inline Permutation ExtractPermutation(const LiftedSet& r, int n) {
  if (r.n() != n) {
    throw Error(ErrorCode::kDimensionMismatch, "engagement",
                "lifted set size differs from n");
  }
  std::vector<int> q(n, n);
  for (int i = n - 1; i >= 0; --i) {
    for (ProductSet rest = r.row(i); rest; rest &= rest - 1) {
      q[std::countr_zero(rest)] = i;
    }
  }
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return q[a] < q[b]; });
  return Permutation(std::move(order));
}

struct RankCgOptions {
  int steps = 40;
  int samples = 200;
  std::uint64_t seed = 0;
  PipageMode pipage = PipageMode::kRandomized;
};

struct RankCgResult {
  Permutation permutation;
  FractionalPoint fractional;
  MonteCarloEstimate fractional_value;
  LiftedSet rounded;
  double rounded_value = 0.0;
  double engagement = 0.0;
};

inline RankCgResult RankContinuousGreedy(const Instance& inst,
                                         const RankCgOptions& options = {}) {
  const LiftedObjective g(inst);
  const LaminarMatroid m(inst.n());
  RankCgResult out;
  out.fractional = ContinuousGreedy(
      g, m, {options.steps, options.samples, DeriveSeed(options.seed, {0})});
  out.fractional_value = EstimateMultilinear(g, out.fractional, options.samples,
                                             DeriveSeed(options.seed, {1}));
  out.rounded = PipageRound(
      g, m, out.fractional,
      {options.pipage, options.samples, DeriveSeed(options.seed, {2})});
  out.rounded_value = g(out.rounded);
  out.permutation = ExtractPermutation(out.rounded, inst.n());
  out.engagement = EvalEngagement(inst, out.permutation);
  return out;
}

}  // namespace seqsub

#endif  // SEQSUB_ENGAGEMENT_H_
