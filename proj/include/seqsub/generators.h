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

// Seeded random instances.

#ifndef SEQSUB_GENERATORS_H_
#define SEQSUB_GENERATORS_H_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "seqsub/core.h"
#include "seqsub/coverage.h"
#include "seqsub/error.h"
#include "seqsub/matrix.h"
#include "seqsub/oracle.h"
#include "seqsub/random.h"

namespace seqsub {

enum class ClickKind { kExplicit, kCoverage, kMnl };

inline ClickKind ParseClickKind(std::string_view name) {
  if (name == "explicit") return ClickKind::kExplicit;
  if (name == "coverage") return ClickKind::kCoverage;
  if (name == "mnl") return ClickKind::kMnl;
  throw Error(ErrorCode::kInvalidArgument, "generators",
              "unknown click model kind: " + std::string(name));
}

inline std::string_view ClickKindName(ClickKind kind) {
  switch (kind) {
    case ClickKind::kExplicit: return "explicit";
    case ClickKind::kCoverage: return "coverage";
    case ClickKind::kMnl: return "mnl";
  }
  return "";
}

inline constexpr int kMaxGenerateAttempts = 20;

// Weighted coverage over 2n elements; each product covers each element with
// probability 1/4 and at least one element.
inline CoverageFunction RandomCoverageModel(int n, Rng& rng,
                                            bool normalized = true) {
  const int m = 2 * n;
  std::vector<double> weights(m);
  for (double& w : weights) w = rng.Uniform(0.1, 1.0);
  std::vector<std::vector<int>> covers(n);
  for (auto& c : covers) {
    for (int e = 0; e < m; ++e) {
      if (rng.Bernoulli(0.25)) c.push_back(e);
    }
    if (c.empty()) c.push_back(rng.UniformInt(0, m - 1));
  }
  return CoverageFunction(std::move(weights), std::move(covers), normalized);
}

inline MnlFunction RandomMnlModel(int n, Rng& rng) {
  std::vector<double> weights(n);
  for (double& w : weights) w = rng.Uniform(0.05, 2.0);
  return MnlFunction(std::move(weights), rng.Uniform(0.5, 3.0));
}

// A random mixture of normalized coverage, a saturating budget-additive term
// and a concave function of a modular weight, scaled into [0, 1]. Each draw
// is checked by the oracle and re-drawn if the check fails.
inline ExplicitTable RandomExplicitModel(int n, Rng& rng) {
  if (n > kMaxVerifyGround) {
    throw Error(ErrorCode::kTooLarge, "generators",
                "explicit generation verifies tables, so n <= " +
                    std::to_string(kMaxVerifyGround));
  }
  for (int attempt = 0; attempt < kMaxGenerateAttempts; ++attempt) {
    const CoverageFunction cov = RandomCoverageModel(n, rng);
    std::vector<double> w(n);
    double total = 0.0;
    for (double& v : w) {
      v = rng.Uniform(0.0, 1.0);
      total += v;
    }
    const double cap = rng.Uniform(0.2, 1.0) * total;
    const double rate = rng.Uniform(0.5, 3.0);
    double mix[3] = {rng.Uniform(), rng.Uniform(), rng.Uniform()};
    const double mix_total = mix[0] + mix[1] + mix[2];
    const double scale = rng.Uniform(0.5, 1.0);
    const double base = rng.Bernoulli(0.5) ? rng.Uniform(0.0, 0.1) : 0.0;

    std::vector<double> values(std::size_t{1} << n);
    for (ProductSet s = 0; s < values.size(); ++s) {
      double ws = 0.0;
      for (int j = 0; j < n; ++j) {
        if (Contains(s, j)) ws += w[j];
      }
      const double budget = cap > 0.0 ? std::min(1.0, ws / cap) : 0.0;
      const double concave =
          total > 0.0 ? (1.0 - std::exp(-rate * ws / total)) /
                            (1.0 - std::exp(-rate))
                      : 0.0;
      const double mixed =
          (mix[0] * cov.Value(s) + mix[1] * budget + mix[2] * concave) /
          mix_total;
      values[s] = std::clamp(base + (1.0 - base) * scale * mixed, 0.0, 1.0);
    }
    ExplicitTable table = ExplicitTable::FromDense(n, values);
    if (VerifyMonotoneSubmodular(ClickModel(table), n).passed) return table;
  }
  throw Error(ErrorCode::kGenerationRetryExhausted, "generators",
              "no submodular explicit table after " +
                  std::to_string(kMaxGenerateAttempts) + " attempts");
}

struct GeneratorOptions {
  // Random placement payments (nonincreasing per product) and K; otherwise
  // r = 0 and K = 0.
  bool revenue = true;
  // One click model per patience level (explicit and coverage kinds).
  bool per_patience = true;
};

inline Instance RandomInstance(ClickKind kind, int n, std::uint64_t seed,
                               const GeneratorOptions& options = {}) {
  if (n < 1) {
    throw Error(ErrorCode::kInvalidArgument, "generators", "n must be >= 1");
  }
  Rng rng(seed);
  std::vector<double> lambda(n);
  double total = 0.0;
  for (double& l : lambda) {
    l = rng.Uniform(0.05, 1.0);
    total += l;
  }
  for (double& l : lambda) l /= total;

  auto draw = [&]() -> ClickModel {
    switch (kind) {
      case ClickKind::kExplicit: return RandomExplicitModel(n, rng);
      case ClickKind::kCoverage: return RandomCoverageModel(n, rng);
      case ClickKind::kMnl: return RandomMnlModel(n, rng);
    }
    return RandomMnlModel(n, rng);
  };
  std::vector<std::shared_ptr<const ClickModel>> f;
  if (options.per_patience && kind != ClickKind::kMnl) {
    for (int i = 0; i < n; ++i) f.push_back(std::make_shared<ClickModel>(draw()));
  } else {
    f.assign(n, std::make_shared<ClickModel>(draw()));
  }

  SquareMatrix r(n);
  double per_click = 0.0;
  if (options.revenue) {
    for (int j = 0; j < n; ++j) {
      const double scale = rng.Uniform();
      std::vector<double> col(n);
      for (double& v : col) v = scale * rng.Uniform();
      std::sort(col.begin(), col.end(), std::greater<>());
      for (int i = 0; i < n; ++i) r(i, j) = col[i];
    }
    per_click = n * rng.Uniform(0.5, 2.0);
  }
  return Instance(n, std::move(lambda), std::move(f), std::move(r), per_click,
                  0.0);
}

// Each type's interest set holds each product with a per-type probability
// in [0.1, 0.4] and is never empty.
inline CoverageInstance RandomCoverageInstance(int n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<ProductSet> sets(n);
  for (auto& s : sets) {
    const double p = rng.Uniform(0.1, 0.4);
    for (int j = 0; j < n; ++j) {
      if (rng.Bernoulli(p)) s |= Singleton(j);
    }
    if (s == 0) s = Singleton(rng.UniformInt(0, n - 1));
  }
  return CoverageInstance(n, std::move(sets));
}

}  // namespace seqsub

#endif  // SEQSUB_GENERATORS_H_
