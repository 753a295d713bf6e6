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

// Revenue maximization under an engagement floor.
//
// The relaxation has one variable x_{i,S} per position count i and set S of
// that size, plus marginals x_{i,j}:
//
//   max  sum_{i,j} r_{i,j} x_{i,j} + K sum_{i,S} lambda_i f_i(S) x_{i,S}
//   s.t. x_{i,j} <= sum_{S ni j, |S|=i} x_{i,S} - sum_{S ni j, |S|=i-1} x_{i-1,S}
//        sum_{i,S} lambda_i f_i(S) x_{i,S} >= T
//        sum_{|S|=i} x_{i,S} <= 1
//        x >= 0
//
// It is solved exactly with the dense simplex. Rounding samples each element
// (i, j) with probability x_{i,j}, prunes the sample to an independent set of
// the laminar matroid and sorts products by first appearance.

#ifndef SEQSUB_REVENUE_H_
#define SEQSUB_REVENUE_H_

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "seqsub/core.h"
#include "seqsub/engagement.h"
#include "seqsub/error.h"
#include "seqsub/matrix.h"
#include "seqsub/matroid.h"
#include "seqsub/numerics/simplex.h"
#include "seqsub/parallel.h"
#include "seqsub/policy.h"
#include "seqsub/random.h"

namespace seqsub {

inline constexpr int kMaxLp2Products = 12;

class Lp2Model {
 public:
  explicit Lp2Model(const Instance& inst)
      : inst_(inst), problem_(NumVars(inst.n())) {
    const int n = inst.n();
    if (n > kMaxLp2Products) {
      throw Error(ErrorCode::kTooLarge, "revenue",
                  "the explicit relaxation needs n <= " +
                      std::to_string(kMaxLp2Products));
    }
    layer_begin_.assign(n + 2, 0);
    for (int k = 1; k <= n; ++k) {
      layer_begin_[k] = static_cast<int>(sets_.size());
      for (ProductSet s = 1; s <= FullSet(n); ++s) {
        if (SetSize(s) != k) continue;
        index_[s] = static_cast<int>(sets_.size());
        sets_.push_back(s);
      }
    }
    layer_begin_[n + 1] = static_cast<int>(sets_.size());

    engagement_.assign(sets_.size(), 0.0);
    for (std::size_t v = 0; v < sets_.size(); ++v) {
      const int k = SetSize(sets_[v]);
      engagement_[v] = inst.lambda(k - 1) * inst.f(k - 1)(sets_[v]);
      problem_.SetObjective(static_cast<int>(v),
                            inst.per_click() * engagement_[v]);
    }
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        problem_.SetObjective(MarginalVar(i, j), inst.r(i, j));
      }
    }

    // (a) one row per position i (0-based, layer i + 1) and product j.
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        std::vector<std::pair<int, double>> terms = {{MarginalVar(i, j), 1.0}};
        for (int v = layer_begin_[i + 1]; v < layer_begin_[i + 2]; ++v) {
          if (Contains(sets_[v], j)) terms.emplace_back(v, -1.0);
        }
        if (i > 0) {
          for (int v = layer_begin_[i]; v < layer_begin_[i + 1]; ++v) {
            if (Contains(sets_[v], j)) terms.emplace_back(v, 1.0);
          }
        }
        problem_.AddSparseConstraint(terms, Relation::kLessEqual, 0.0);
      }
    }
    // (b)
    std::vector<std::pair<int, double>> floor;
    for (std::size_t v = 0; v < sets_.size(); ++v) {
      if (engagement_[v] != 0.0) {
        floor.emplace_back(static_cast<int>(v), engagement_[v]);
      }
    }
    floor_row_ = problem_.AddSparseConstraint(floor, Relation::kGreaterEqual,
                                              inst.threshold());
    // (c)
    for (int k = 1; k <= n; ++k) {
      std::vector<std::pair<int, double>> terms;
      for (int v = layer_begin_[k]; v < layer_begin_[k + 1]; ++v) {
        terms.emplace_back(v, 1.0);
      }
      problem_.AddSparseConstraint(terms, Relation::kLessEqual, 1.0);
    }
  }

  static int NumVars(int n) {
    if (n < 1 || n > kMaxLp2Products) {
      throw Error(ErrorCode::kTooLarge, "revenue",
                  "the explicit relaxation needs n <= " +
                      std::to_string(kMaxLp2Products));
    }
    return static_cast<int>(FullSet(n)) + n * n;
  }

  const Instance& instance() const { return inst_; }
  const LpProblem& problem() const { return problem_; }
  int n() const { return inst_.n(); }
  int num_subset_vars() const { return static_cast<int>(sets_.size()); }
  int num_vars() const { return problem_.num_vars(); }
  int num_constraints() const { return problem_.num_constraints(); }
  int floor_row() const { return floor_row_; }

  ProductSet subset(int var) const { return sets_[var]; }
  int SubsetVar(ProductSet s) const { return index_.at(s); }
  int MarginalVar(int i, int j) const {
    return static_cast<int>(FullSet(n())) + i * n() + j;
  }

  double Objective(const std::vector<double>& x) const {
    double total = 0.0;
    for (int v = 0; v < num_vars(); ++v) total += problem_.objective()[v] * x[v];
    return total;
  }

  double Engagement(const std::vector<double>& x) const {
    double total = 0.0;
    for (int v = 0; v < num_subset_vars(); ++v) total += engagement_[v] * x[v];
    return total;
  }

 private:
  Instance inst_;
  LpProblem problem_;
  std::vector<ProductSet> sets_;
  std::unordered_map<ProductSet, int> index_;
  std::vector<int> layer_begin_;
  std::vector<double> engagement_;
  int floor_row_ = 0;
};

inline Lp2Model BuildLp2(const Instance& inst) { return Lp2Model(inst); }

struct Lp2Solution {
  double value = 0.0;       // objective at `x`
  double engagement = 0.0;  // sum lambda_i f_i(S) x_{i,S}
  std::vector<double> x;    // indexed like Lp2Model variables
  PolicyVector policy;
  SquareMatrix marginals;
};

namespace internal_revenue {

inline constexpr double kClip = 1e-9;

// Fills policy and marginals from the subset variables, with each marginal
// set to its upper bound under (a).
inline void Derive(const Lp2Model& model, Lp2Solution& sol) {
  const int n = model.n();
  sol.policy = PolicyVector(n);
  for (int v = 0; v < model.num_subset_vars(); ++v) {
    if (sol.x[v] > 0.0) {
      const ProductSet s = model.subset(v);
      sol.policy.Set(SetSize(s), s, std::min(sol.x[v], 1.0));
    }
  }
  sol.marginals = Marginals(sol.policy);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      double& m = sol.marginals(i, j);
      if (m < -kClip) {
        throw Error(ErrorCode::kNumericalInstability, "revenue",
                    "relaxation marginal below zero");
      }
      m = std::clamp(m, 0.0, 1.0);
      sol.x[model.MarginalVar(i, j)] = m;
    }
  }
  sol.value = model.Objective(sol.x);
  sol.engagement = model.Engagement(sol.x);
}

}  // namespace internal_revenue

inline Lp2Solution SolveLp2(const Lp2Model& model,
                            const SimplexOptions& options = {}) {
  const LpSolution lp = SimplexSolve(model.problem(), options);
  if (lp.status == LpStatus::kInfeasible) {
    throw Error(ErrorCode::kInfeasible, "revenue",
                "engagement floor is above what the relaxation can reach");
  }
  if (lp.status == LpStatus::kUnbounded) {
    throw Error(ErrorCode::kInternal, "revenue", "relaxation is unbounded");
  }
  Lp2Solution sol;
  sol.x = lp.x;
  for (int v = 0; v < model.num_subset_vars(); ++v) {
    double& x = sol.x[v];
    if (x < -internal_revenue::kClip) {
      throw Error(ErrorCode::kNumericalInstability, "revenue",
                  "relaxation variable below zero");
    }
    x = std::max(x, 0.0);
  }
  internal_revenue::Derive(model, sol);
  return sol;
}

// Multiplies every variable by `factor`; the floor then holds at factor * T.
inline Lp2Solution ScaleSolution(const Lp2Model& model, const Lp2Solution& sol,
                                 double factor) {
  if (!(factor > 0.0 && factor <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "revenue",
                "scale factor must be in (0, 1]");
  }
  if (factor == 1.0) return sol;
  Lp2Solution out;
  out.x = sol.x;
  for (double& v : out.x) v *= factor;
  internal_revenue::Derive(model, out);
  return out;
}

struct RoundingResult {
  Permutation permutation;
  LiftedSet sampled;  // R(x)
  LiftedSet kept;     // after contention resolution
  double kept_value = 0.0;
};

// Samples R(x), prunes it by random-order greedy and sorts products by first
// appearance. Every kept element (i, j) ends with j at a position <= i, which
// is checked.
inline RoundingResult RoundToPermutation(const Instance& inst,
                                         const SquareMatrix& marginals,
                                         Rng& rng) {
  const int n = inst.n();
  const LaminarMatroid m(n);
  const FractionalPoint x(marginals);
  if (!InMatroidPolytope(m, x)) {
    throw Error(ErrorCode::kNotInPolytope, "revenue",
                "relaxation marginals leave the matroid polytope");
  }
  RoundingResult out;
  out.sampled = SampleIndependentPoint(x, rng);
  out.kept = CrsRound(m, x, out.sampled, rng);
  out.kept_value = LiftedObjective(inst)(out.kept);
  out.permutation = ExtractPermutation(out.kept, n);
  for (const auto& e : out.kept.Elements()) {
    if (out.permutation.PositionOf(e.product) > e.position) {
      throw Error(ErrorCode::kInternal, "revenue",
                  "extracted ranking places a kept product too late");
    }
  }
  return out;
}

inline RoundingResult RoundToPermutation(const Instance& inst,
                                         const SquareMatrix& marginals,
                                         std::uint64_t seed) {
  Rng rng(seed);
  return RoundToPermutation(inst, marginals, rng);
}

struct BiCriteriaOptions {
  int trials = 200;
  double factor = 1.0;
  std::uint64_t seed = 0;
  // Guarantee checked against the means, less 3 standard errors.
  double bound = 0.25;
};

struct BiCriteriaTrial {
  Permutation permutation;
  double engagement = 0.0;
  double revenue = 0.0;
};

struct BiCriteriaReport {
  double lp2_value = 0.0;
  double lp2_engagement = 0.0;
  double scaled_value = 0.0;
  double threshold = 0.0;
  std::vector<BiCriteriaTrial> trials;
  double mean_revenue = 0.0;
  double revenue_stderr = 0.0;
  double worst_revenue = 0.0;
  double mean_engagement = 0.0;
  double engagement_stderr = 0.0;
  double worst_engagement = 0.0;
  double alpha_mean = 0.0;
  double alpha_worst = 0.0;
  double beta_mean = 0.0;  // +infinity when T = 0
  double beta_worst = 0.0;
  bool revenue_bound_met = true;
  bool engagement_bound_met = true;  // vacuous when T = 0
};

namespace internal_revenue {

inline void MeanAndStderr(const std::vector<double>& v, double& mean,
                          double& stderr_out) {
  double sum = 0.0;
  for (double a : v) sum += a;
  mean = sum / v.size();
  stderr_out = 0.0;
  if (v.size() > 1) {
    double ss = 0.0;
    for (double a : v) ss += (a - mean) * (a - mean);
    stderr_out = std::sqrt(ss / (v.size() - 1) / v.size());
  }
}

inline double Ratio(double num, double den) {
  if (den == 0.0) {
    return num >= 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
  }
  return num / den;
}

}  // namespace internal_revenue

// Solve, scale, and round `trials` times with seeds DeriveSeed(seed, {t}).
inline BiCriteriaReport RunBiCriteria(const Instance& inst,
                                      const BiCriteriaOptions& options = {}) {
  if (options.trials < 1) {
    throw Error(ErrorCode::kInvalidArgument, "revenue", "trials must be >= 1");
  }
  const Lp2Model model(inst);
  const Lp2Solution solved = SolveLp2(model);
  const Lp2Solution scaled = ScaleSolution(model, solved, options.factor);

  BiCriteriaReport report;
  report.lp2_value = solved.value;
  report.lp2_engagement = solved.engagement;
  report.scaled_value = scaled.value;
  report.threshold = inst.threshold();
  report.trials.resize(options.trials);
  ParallelFor(
      static_cast<std::size_t>(options.trials),
      [&](std::size_t t) {
        Rng rng(DeriveSeed(options.seed, {t}));
        const RoundingResult r =
            RoundToPermutation(inst, scaled.marginals, rng);
        report.trials[t] = {r.permutation,
                            EvalEngagement(inst, r.permutation),
                            EvalRevenue(inst, r.permutation)};
      },
      /*min_parallel=*/32);

  std::vector<double> revenue;
  std::vector<double> engagement;
  for (const auto& t : report.trials) {
    revenue.push_back(t.revenue);
    engagement.push_back(t.engagement);
  }
  internal_revenue::MeanAndStderr(revenue, report.mean_revenue,
                                  report.revenue_stderr);
  internal_revenue::MeanAndStderr(engagement, report.mean_engagement,
                                  report.engagement_stderr);
  report.worst_revenue = *std::min_element(revenue.begin(), revenue.end());
  report.worst_engagement =
      *std::min_element(engagement.begin(), engagement.end());
  using internal_revenue::Ratio;
  report.alpha_mean = Ratio(report.mean_revenue, report.lp2_value);
  report.alpha_worst = Ratio(report.worst_revenue, report.lp2_value);
  report.beta_mean = Ratio(report.mean_engagement, inst.threshold());
  report.beta_worst = Ratio(report.worst_engagement, inst.threshold());
  report.revenue_bound_met =
      report.mean_revenue >=
      options.bound * report.lp2_value - 3.0 * report.revenue_stderr - 1e-9;
  if (inst.threshold() > 0.0) {
    report.engagement_bound_met =
        report.mean_engagement >= options.bound * inst.threshold() -
                                      3.0 * report.engagement_stderr - 1e-9;
  }
  return report;
}

}  // namespace seqsub

#endif  // SEQSUB_REVENUE_H_
