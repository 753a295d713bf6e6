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

// Interest-set users: a user of type k (0-based) inspects the first k + 1
// positions and clicks iff one of them shows a product from P_k.
//
// The assignment relaxation
//
//   max  sum_k y_k
//   s.t. x doubly stochastic (x_{i,j}: product j at position i)
//        y_k <= sum_{i <= k} sum_{j in P_k} x_{i,j},  y_k <= 1
//
// is rounded by drawing one product per position from its row, keeping each
// product's first occurrence and filling the vacated positions with the
// unplaced products in ascending order.

#ifndef SEQSUB_COVERAGE_H_
#define SEQSUB_COVERAGE_H_

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "seqsub/core.h"
#include "seqsub/error.h"
#include "seqsub/matrix.h"
#include "seqsub/numerics/simplex.h"
#include "seqsub/parallel.h"
#include "seqsub/random.h"

namespace seqsub {

inline constexpr int kMaxCoverageProducts = 50;

class CoverageInstance {
 public:
  CoverageInstance() = default;
  CoverageInstance(int n, std::vector<ProductSet> interest_sets)
      : n_(n), interest_(std::move(interest_sets)) {
    if (n < 1 || n > kMaxProducts) {
      throw Error(ErrorCode::kInvalidInstance, "coverage",
                  "n must be in [1, 64]");
    }
    if (interest_.size() != static_cast<std::size_t>(n)) {
      throw Error(ErrorCode::kDimensionMismatch, "coverage",
                  "need one interest set per user type");
    }
    for (ProductSet p : interest_) {
      if ((p & ~FullSet(n)) != 0) {
        throw Error(ErrorCode::kInvalidInstance, "coverage",
                    "interest set names an unknown product");
      }
    }
  }

  int n() const { return n_; }
  ProductSet interest(int k) const { return interest_[k]; }
  const std::vector<ProductSet>& interest_sets() const { return interest_; }

 private:
  int n_ = 0;
  std::vector<ProductSet> interest_;
};

// Number of user types that click.
inline int CoverageClicks(const CoverageInstance& ci, const Permutation& pi) {
  if (pi.size() != ci.n()) {
    throw Error(ErrorCode::kDimensionMismatch, "coverage",
                "permutation length differs from n");
  }
  int clicks = 0;
  ProductSet prefix = 0;
  for (int k = 0; k < ci.n(); ++k) {
    prefix |= Singleton(pi[k]);
    if (prefix & ci.interest(k)) ++clicks;
  }
  return clicks;
}

// lambda_k = 1/n and f_k(S) = [S meets P_k], so F = clicks / n.
inline Instance CoverageToInstance(const CoverageInstance& ci) {
  const int n = ci.n();
  std::vector<std::shared_ptr<const ClickModel>> f;
  for (int k = 0; k < n; ++k) {
    std::vector<std::vector<int>> covers(n);
    for (int j = 0; j < n; ++j) {
      if (Contains(ci.interest(k), j)) covers[j] = {0};
    }
    f.push_back(std::make_shared<const ClickModel>(
        CoverageFunction({1.0}, std::move(covers), /*normalized=*/false)));
  }
  return Instance(n, std::vector<double>(n, 1.0 / n), std::move(f),
                  SquareMatrix(n), 0.0, 0.0);
}

struct Lp3Solution {
  SquareMatrix x;
  std::vector<double> y;
  double value = 0.0;
};

inline Lp3Solution SolveLp3(const CoverageInstance& ci,
                            const SimplexOptions& options = {}) {
  const int n = ci.n();
  if (n > kMaxCoverageProducts) {
    throw Error(ErrorCode::kTooLarge, "coverage",
                "relaxation needs n <= " +
                    std::to_string(kMaxCoverageProducts));
  }
  auto xv = [n](int i, int j) { return i * n + j; };
  auto yv = [n](int k) { return n * n + k; };
  LpProblem lp(n * n + n);
  for (int k = 0; k < n; ++k) lp.SetObjective(yv(k), 1.0);
  for (int i = 0; i < n; ++i) {
    std::vector<std::pair<int, double>> row;
    std::vector<std::pair<int, double>> col;
    for (int j = 0; j < n; ++j) {
      row.emplace_back(xv(i, j), 1.0);
      col.emplace_back(xv(j, i), 1.0);
    }
    lp.AddSparseConstraint(row, Relation::kEqual, 1.0);
    lp.AddSparseConstraint(col, Relation::kEqual, 1.0);
  }
  for (int k = 0; k < n; ++k) {
    std::vector<std::pair<int, double>> terms = {{yv(k), 1.0}};
    for (int i = 0; i <= k; ++i) {
      for (int j = 0; j < n; ++j) {
        if (Contains(ci.interest(k), j)) terms.emplace_back(xv(i, j), -1.0);
      }
    }
    lp.AddSparseConstraint(terms, Relation::kLessEqual, 0.0);
    lp.AddSparseConstraint({{yv(k), 1.0}}, Relation::kLessEqual, 1.0);
  }
  const LpSolution sol = SimplexSolve(lp, options);
  if (sol.status != LpStatus::kOptimal) {
    throw Error(ErrorCode::kInternal, "coverage",
                "assignment relaxation did not solve to optimality");
  }
  Lp3Solution out;
  out.x = SquareMatrix(n);
  out.y.resize(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      out.x(i, j) = std::clamp(sol.x[xv(i, j)], 0.0, 1.0);
    }
  }
  for (int k = 0; k < n; ++k) {
    out.y[k] = std::clamp(sol.x[yv(k)], 0.0, 1.0);
    out.value += out.y[k];
  }
  return out;
}

struct CoverageRounding {
  Permutation permutation;
  std::vector<int> draws;   // product drawn for each position, may repeat
  std::vector<int> y_raw;   // from the draws
  std::vector<int> y_repaired;  // from the permutation
  int clicks = 0;

  // Permutation matrix of the repaired assignment.
  SquareMatrix Assignment() const {
    SquareMatrix x(permutation.size());
    for (int i = 0; i < permutation.size(); ++i) x(i, permutation[i]) = 1.0;
    return x;
  }
};

inline CoverageRounding RoundLp3(const CoverageInstance& ci,
                                 const Lp3Solution& sol, Rng& rng) {
  const int n = ci.n();
  CoverageRounding out;
  out.draws.resize(n);
  for (int i = 0; i < n; ++i) {
    out.draws[i] = static_cast<int>(rng.Categorical(sol.x.row(i)));
  }
  std::vector<int> order(n, -1);
  ProductSet placed = 0;
  for (int i = 0; i < n; ++i) {
    if (Contains(placed, out.draws[i])) continue;
    order[i] = out.draws[i];
    placed |= Singleton(out.draws[i]);
  }
  int next = 0;
  for (int i = 0; i < n; ++i) {
    if (order[i] >= 0) continue;
    while (Contains(placed, next)) ++next;
    order[i] = next;
    placed |= Singleton(next);
  }
  out.permutation = Permutation(std::move(order));

  out.y_raw.assign(n, 0);
  out.y_repaired.assign(n, 0);
  ProductSet raw = 0;
  ProductSet repaired = 0;
  for (int k = 0; k < n; ++k) {
    raw |= Singleton(out.draws[k]);
    repaired |= Singleton(out.permutation[k]);
    out.y_raw[k] = (raw & ci.interest(k)) ? 1 : 0;
    out.y_repaired[k] = (repaired & ci.interest(k)) ? 1 : 0;
    out.clicks += out.y_repaired[k];
  }
  return out;
}

inline CoverageRounding RoundLp3(const CoverageInstance& ci,
                                 const Lp3Solution& sol, std::uint64_t seed) {
  Rng rng(seed);
  return RoundLp3(ci, sol, rng);
}

struct CoverageBestOfResult {
  Permutation permutation;
  int clicks = 0;
  double lp3_value = 0.0;
  int best_trial = 0;
};

// Keeps the first of the best roundings; trial t uses DeriveSeed(seed, {t}).
inline CoverageBestOfResult CoverageBestOf(const CoverageInstance& ci,
                                           const Lp3Solution& sol, int trials,
                                           std::uint64_t seed) {
  if (trials < 1) {
    throw Error(ErrorCode::kInvalidArgument, "coverage", "trials must be >= 1");
  }
  std::vector<CoverageRounding> runs(trials);
  ParallelFor(static_cast<std::size_t>(trials), [&](std::size_t t) {
    Rng rng(DeriveSeed(seed, {t}));
    runs[t] = RoundLp3(ci, sol, rng);
  });
  CoverageBestOfResult out;
  out.lp3_value = sol.value;
  out.clicks = -1;
  for (int t = 0; t < trials; ++t) {
    if (runs[t].clicks > out.clicks) {
      out.clicks = runs[t].clicks;
      out.permutation = runs[t].permutation;
      out.best_trial = t;
    }
  }
  return out;
}

inline CoverageBestOfResult CoverageBestOf(const CoverageInstance& ci,
                                           int trials, std::uint64_t seed) {
  return CoverageBestOf(ci, SolveLp3(ci), trials, seed);
}

}  // namespace seqsub

#endif  // SEQSUB_COVERAGE_H_
