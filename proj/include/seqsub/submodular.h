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

// Monotone submodular maximization over the laminar matroid: Monte Carlo
// multilinear estimation, continuous greedy and randomized pipage rounding.
//
// Objectives are callables double(const LiftedSet&). An objective may also
// provide MarginalGains(const LiftedSet&) returning the n x n matrix of
// g(R + e) - g(R - e); continuous greedy then uses it instead of n^2 separate
// evaluations per sample.

#ifndef SEQSUB_SUBMODULAR_H_
#define SEQSUB_SUBMODULAR_H_

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <vector>

#include "seqsub/error.h"
#include "seqsub/matrix.h"
#include "seqsub/matroid.h"
#include "seqsub/parallel.h"
#include "seqsub/random.h"

namespace seqsub {

template <typename G>
concept LiftedObjectiveFn = requires(const G& g, const LiftedSet& r) {
  { g(r) } -> std::convertible_to<double>;
};

template <typename G>
concept HasMarginalGains = requires(const G& g, const LiftedSet& r) {
  { g.MarginalGains(r) } -> std::same_as<SquareMatrix>;
};

struct MonteCarloEstimate {
  double mean = 0.0;
  double std_error = 0.0;
};

// Sample mean of g(R(x)) over independent draws with its standard error.
// Sample s uses the stream DeriveSeed(seed, {s}).
template <LiftedObjectiveFn G>
MonteCarloEstimate EstimateMultilinear(const G& g, const FractionalPoint& x,
                                       int samples, std::uint64_t seed) {
  if (samples < 1) {
    throw Error(ErrorCode::kInvalidArgument, "matroid", "samples must be >= 1");
  }
  std::vector<double> values(samples);
  ParallelFor(static_cast<std::size_t>(samples), [&](std::size_t s) {
    Rng rng(DeriveSeed(seed, {s}));
    values[s] = g(SampleIndependentPoint(x, rng));
  });
  double sum = 0.0;
  for (double v : values) sum += v;
  MonteCarloEstimate est;
  est.mean = sum / samples;
  if (samples > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - est.mean) * (v - est.mean);
    est.std_error = std::sqrt(ss / (samples - 1) / samples);
  }
  return est;
}

template <LiftedObjectiveFn G>
SquareMatrix MarginalGainsOf(const G& g, const LiftedSet& r) {
  if constexpr (HasMarginalGains<G>) {
    return g.MarginalGains(r);
  } else {
    const int n = r.n();
    SquareMatrix gains(n);
    const double base = g(r);
    LiftedSet probe = r;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (r.Contains(i, j)) {
          probe.Erase(i, j);
          gains(i, j) = base - g(probe);
          probe.Insert(i, j);
        } else {
          probe.Insert(i, j);
          gains(i, j) = g(probe) - base;
          probe.Erase(i, j);
        }
      }
    }
    return gains;
  }
}

struct ContinuousGreedyOptions {
  int steps = 40;
  int samples_per_step = 200;
  std::uint64_t seed = 0;
};

// y <- 0; each step estimates the gradient of the multilinear extension,
// E[g(R(y) + e) - g(R(y) - e)] per element, from common random samples and
// moves y by 1/steps toward the max-weight base for those weights. The output is an average of bases, hence in the polytope.
template <LiftedObjectiveFn G>
FractionalPoint ContinuousGreedy(const G& g, const LaminarMatroid& m,
                                 const ContinuousGreedyOptions& options = {}) {
  if (options.steps < 1 || options.samples_per_step < 1) {
    throw Error(ErrorCode::kInvalidArgument, "matroid",
                "steps and samples must be >= 1");
  }
  const int n = m.n();
  const double delta = 1.0 / options.steps;
  SquareMatrix y(n);
  for (int t = 0; t < options.steps; ++t) {
    const FractionalPoint point(y);
    std::vector<SquareMatrix> gains(options.samples_per_step);
    ParallelFor(
        static_cast<std::size_t>(options.samples_per_step),
        [&](std::size_t s) {
          Rng rng(DeriveSeed(options.seed,
                             {static_cast<std::uint64_t>(t), s}));
          gains[s] = MarginalGainsOf(g, SampleIndependentPoint(point, rng));
        },
        /*min_parallel=*/16);
    SquareMatrix weights(n);
    for (const auto& sample : gains) {
      for (std::size_t k = 0; k < weights.flat().size(); ++k) {
        weights.flat()[k] += sample.flat()[k];
      }
    }
    const LiftedSet base = MaxWeightBase(m, weights);
    for (const auto& e : base.Elements()) {
      y(e.position, e.product) =
          std::min(1.0, y(e.position, e.product) + delta);
    }
  }
  return FractionalPoint(std::move(y));
}

enum class PipageMode {
  // Direction drawn so the expected point is unchanged.
  kRandomized,
  // Both candidate endpoints estimated; the better one is kept.
  kValueComparing,
};

struct PipageOptions {
  PipageMode mode = PipageMode::kRandomized;
  int samples = 200;  // per estimate, kValueComparing only
  std::uint64_t seed = 0;
};

namespace internal_pipage {

inline constexpr double kSnap = 1e-9;

inline void Snap(double& v) {
  if (v < kSnap) v = 0.0;
  if (v > 1.0 - kSnap) v = 1.0;
}

inline bool IsFractional(double v) { return v > 0.0 && v < 1.0; }

}  // namespace internal_pipage

// Rounds a point of the matroid polytope to an independent set.
//
// Each move shifts mass between two fractional coordinates a, b along
// e_a - e_b until one of them becomes integral. Two fractional coordinates in
// the same position are paired first; otherwise the first two fractional
// coordinates in position order are paired. In the second case every prefix
// that separates them holds a single fractional coordinate, so no capacity
// can bind before a coordinate does. A lone fractional coordinate is moved on
// its own to 0 or 1. The result is padded to a base in (position, product)
// order when it is not already one.
template <LiftedObjectiveFn G>
LiftedSet PipageRound(const G& g, const LaminarMatroid& m,
                      const FractionalPoint& x,
                      const PipageOptions& options = {}) {
  using internal_pipage::IsFractional;
  using internal_pipage::Snap;
  CheckSameSize(m, x.n(), "fractional point");
  if (!InMatroidPolytope(m, x)) {
    throw Error(ErrorCode::kNotInPolytope, "matroid",
                "pipage rounding needs a point in the matroid polytope");
  }
  const int n = m.n();
  SquareMatrix y = x.matrix();
  for (double& v : y.flat()) Snap(v);
  Rng rng(options.seed);
  std::uint64_t estimate_round = 0;

  // Chooses between the two endpoints y + up*(e_a - e_b) and
  // y - down*(e_a - e_b); b may be absent for a lone coordinate.
  auto move = [&](LiftedElement a, const LiftedElement* b, double up,
                  double down) {
    auto apply = [&](SquareMatrix& z, double step) {
      z(a.position, a.product) += step;
      Snap(z(a.position, a.product));
      if (b != nullptr) {
        z(b->position, b->product) -= step;
        Snap(z(b->position, b->product));
      }
    };
    bool go_up;
    if (options.mode == PipageMode::kRandomized) {
      go_up = rng.Uniform() * (up + down) < down;
    } else {
      SquareMatrix hi = y;
      SquareMatrix lo = y;
      apply(hi, up);
      apply(lo, -down);
      const std::uint64_t s = DeriveSeed(options.seed, {++estimate_round});
      const double v_hi =
          EstimateMultilinear(g, FractionalPoint(hi), options.samples, s).mean;
      const double v_lo =
          EstimateMultilinear(g, FractionalPoint(lo), options.samples, s).mean;
      go_up = v_hi >= v_lo;
    }
    apply(y, go_up ? up : -down);
  };

  for (int guard = 0; guard <= n * n + 1; ++guard) {
    std::vector<LiftedElement> fractional;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (IsFractional(y(i, j))) fractional.push_back({i, j});
      }
    }
    if (fractional.empty()) break;

    if (fractional.size() == 1) {
      const LiftedElement a = fractional[0];
      double slack = 1.0;
      double prefix = 0.0;
      for (int k = 0; k < n; ++k) {
        prefix += y.RowSum(k);
        if (k >= a.position) slack = std::min(slack, m.capacity(k) - prefix);
      }
      const double va = y(a.position, a.product);
      const double up = std::max(0.0, std::min(1.0 - va, slack));
      move(a, nullptr, up, va);
      continue;
    }

    LiftedElement a = fractional[0];
    LiftedElement b = fractional[1];
    for (std::size_t t = 0; t + 1 < fractional.size(); ++t) {
      if (fractional[t].position == fractional[t + 1].position) {
        a = fractional[t];
        b = fractional[t + 1];
        break;
      }
    }
    const double va = y(a.position, a.product);
    const double vb = y(b.position, b.product);
    double up = std::min(1.0 - va, vb);
    if (a.position < b.position) {
      double prefix = 0.0;
      for (int k = 0; k < b.position; ++k) {
        prefix += y.RowSum(k);
        if (k >= a.position) up = std::min(up, m.capacity(k) - prefix);
      }
      up = std::max(0.0, up);
    }
    const double down = std::min(va, 1.0 - vb);
    move(a, &b, up, down);
  }

  LiftedSet out(n);
  PrefixCounter counter(m);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (y(i, j) == 1.0) {
        out.Insert(i, j);
        counter.Add(i);
      } else if (y(i, j) != 0.0) {
        throw Error(ErrorCode::kInternal, "matroid",
                    "pipage rounding left a fractional coordinate");
      }
    }
  }
  if (!IsIndependent(m, out)) {
    throw Error(ErrorCode::kInternal, "matroid",
                "pipage rounding produced a dependent set");
  }
  for (int i = 0; i < n && counter.total() < n; ++i) {
    for (int j = 0; j < n && counter.total() < n; ++j) {
      if (out.Contains(i, j) || !counter.CanAdd(i)) continue;
      counter.Add(i);
      out.Insert(i, j);
    }
  }
  return out;
}

}  // namespace seqsub

#endif  // SEQSUB_SUBMODULAR_H_
