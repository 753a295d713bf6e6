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

// The lifted ground set and its laminar matroid.
//
// Element (i, j) means "product j at position i"; there are n^2 of them. The
// laminar family is the chain of position prefixes A_k = {(i, j) : i <= k},
// each with capacity k + 1 (0-based positions). A set is independent iff
// every prefix holds at most its capacity. Every permutation, read as
// {(i, pi_i)}, is a base.

#ifndef SEQSUB_MATROID_H_
#define SEQSUB_MATROID_H_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "seqsub/core.h"
#include "seqsub/error.h"
#include "seqsub/matrix.h"
#include "seqsub/random.h"

namespace seqsub {

struct LiftedElement {
  int position;
  int product;
  auto operator<=>(const LiftedElement&) const = default;
};

// Subset of the lifted ground set, stored as one product mask per position.
class LiftedSet {
 public:
  LiftedSet() = default;
  explicit LiftedSet(int n) : rows_(n, 0) {}

  static LiftedSet FromPermutation(const Permutation& pi) {
    LiftedSet r(pi.size());
    for (int i = 0; i < pi.size(); ++i) r.Insert(i, pi[i]);
    return r;
  }

  static LiftedSet FromElements(int n, const std::vector<LiftedElement>& es) {
    LiftedSet r(n);
    for (const auto& e : es) r.Insert(e.position, e.product);
    return r;
  }

  int n() const { return static_cast<int>(rows_.size()); }
  ProductSet row(int position) const { return rows_[position]; }

  bool Contains(int position, int product) const {
    return seqsub::Contains(rows_[position], product);
  }
  void Insert(int position, int product) {
    rows_[position] |= Singleton(product);
  }
  void Erase(int position, int product) {
    rows_[position] &= ~Singleton(product);
  }

  int size() const {
    int total = 0;
    for (ProductSet row : rows_) total += SetSize(row);
    return total;
  }
  bool empty() const { return size() == 0; }

  // Elements in (position, product) order.
  std::vector<LiftedElement> Elements() const {
    std::vector<LiftedElement> out;
    for (int i = 0; i < n(); ++i) {
      for (ProductSet rest = rows_[i]; rest; rest &= rest - 1) {
        out.push_back({i, std::countr_zero(rest)});
      }
    }
    return out;
  }

  bool operator==(const LiftedSet&) const = default;

 private:
  std::vector<ProductSet> rows_;
};

// n x n matrix of per-element masses in [0, 1].
class FractionalPoint {
 public:
  FractionalPoint() = default;
  explicit FractionalPoint(int n) : x_(n) {}
  explicit FractionalPoint(SquareMatrix x) : x_(std::move(x)) {
    for (double& v : x_.flat()) {
      if (!(v >= -1e-9 && v <= 1.0 + 1e-9)) {
        throw Error(ErrorCode::kInvalidArgument, "matroid",
                    "fractional point entry outside [0, 1]");
      }
      v = std::clamp(v, 0.0, 1.0);
    }
  }

  static FractionalPoint Indicator(const LiftedSet& r) {
    SquareMatrix x(r.n());
    for (const auto& e : r.Elements()) x(e.position, e.product) = 1.0;
    return FractionalPoint(std::move(x));
  }

  int n() const { return x_.n(); }
  double operator()(int i, int j) const { return x_(i, j); }
  const SquareMatrix& matrix() const { return x_; }

  // Elements with positive mass, in (position, product) order.
  std::vector<LiftedElement> Support() const {
    std::vector<LiftedElement> out;
    for (int i = 0; i < n(); ++i) {
      for (int j = 0; j < n(); ++j) {
        if (x_(i, j) > 0.0) out.push_back({i, j});
      }
    }
    return out;
  }

 private:
  SquareMatrix x_;
};

class LaminarMatroid {
 public:
  explicit LaminarMatroid(int n) : n_(n) {
    if (n < 1 || n > kMaxProducts) {
      throw Error(ErrorCode::kInvalidArgument, "matroid",
                  "laminar matroid size must be in [1, 64]");
    }
  }

  int n() const { return n_; }
  int ground_size() const { return n_ * n_; }
  int rank() const { return n_; }
  // Capacity of the prefix holding positions 0..k.
  int capacity(int k) const { return k + 1; }

 private:
  int n_;
};

inline void CheckSameSize(const LaminarMatroid& m, int n,
                          const char* what) {
  if (m.n() != n) {
    throw Error(ErrorCode::kDimensionMismatch, "matroid",
                std::string(what) + " size differs from the matroid");
  }
}

inline bool IsIndependent(const LaminarMatroid& m, const LiftedSet& r) {
  CheckSameSize(m, r.n(), "lifted set");
  int count = 0;
  for (int k = 0; k < m.n(); ++k) {
    count += SetSize(r.row(k));
    if (count > m.capacity(k)) return false;
  }
  return true;
}

// Prefix sums of the per-position element counts of an independent set under
// construction, with an O(n) feasibility check for one more element.
class PrefixCounter {
 public:
  explicit PrefixCounter(const LaminarMatroid& m) : m_(m), prefix_(m.n(), 0) {}

  bool CanAdd(int position) const {
    for (int k = position; k < m_.n(); ++k) {
      if (prefix_[k] + 1 > m_.capacity(k)) return false;
    }
    return true;
  }

  void Add(int position) {
    for (int k = position; k < m_.n(); ++k) ++prefix_[k];
  }

  int total() const { return prefix_.back(); }

 private:
  const LaminarMatroid& m_;
  std::vector<int> prefix_;
};

// Maximum-weight base by the matroid greedy: elements in descending weight
// (ties by (position, product)), each kept when it preserves independence,
// until n elements are held. Negative weights are taken only when needed to
// complete the base.
inline LiftedSet MaxWeightBase(const LaminarMatroid& m,
                               const SquareMatrix& weights) {
  CheckSameSize(m, weights.n(), "weight matrix");
  const int n = m.n();
  std::vector<LiftedElement> order;
  order.reserve(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) order.push_back({i, j});
  }
  std::stable_sort(order.begin(), order.end(),
                   [&](const LiftedElement& a, const LiftedElement& b) {
                     return weights(a.position, a.product) >
                            weights(b.position, b.product);
                   });
  LiftedSet base(n);
  PrefixCounter counter(m);
  for (const auto& e : order) {
    if (counter.total() == n) break;
    if (!counter.CanAdd(e.position)) continue;
    counter.Add(e.position);
    base.Insert(e.position, e.product);
  }
  return base;
}

inline constexpr double kPolytopeTolerance = 1e-9;

inline bool InMatroidPolytope(const LaminarMatroid& m,
                              const FractionalPoint& x) {
  CheckSameSize(m, x.n(), "fractional point");
  double prefix = 0.0;
  for (int k = 0; k < m.n(); ++k) {
    prefix += x.matrix().RowSum(k);
    if (prefix > m.capacity(k) + kPolytopeTolerance) return false;
  }
  return true;
}

// Independent per-element inclusion; the result need not be independent in
// the matroid.
inline LiftedSet SampleIndependentPoint(const FractionalPoint& x, Rng& rng) {
  LiftedSet r(x.n());
  for (int i = 0; i < x.n(); ++i) {
    for (int j = 0; j < x.n(); ++j) {
      const double p = x(i, j);
      if (p >= 1.0 || (p > 0.0 && rng.Uniform() < p)) r.Insert(i, j);
    }
  }
  return r;
}

inline LiftedSet SampleIndependentPoint(const FractionalPoint& x,
                                        std::uint64_t seed) {
  Rng rng(seed);
  return SampleIndependentPoint(x, rng);
}

// Contention resolution by random-order greedy: the elements of
// A intersect support(x) are visited in uniformly random order and kept while
// the kept set stays independent. Monotone, and always independent.
inline LiftedSet CrsRound(const LaminarMatroid& m, const FractionalPoint& x,
                          const LiftedSet& a, Rng& rng) {
  CheckSameSize(m, a.n(), "candidate set");
  if (!InMatroidPolytope(m, x)) {
    throw Error(ErrorCode::kNotInPolytope, "matroid",
                "contention resolution needs a point in the matroid polytope");
  }
  std::vector<LiftedElement> candidates;
  for (const auto& e : a.Elements()) {
    if (x(e.position, e.product) > 0.0) candidates.push_back(e);
  }
  rng.Shuffle(std::span<LiftedElement>(candidates));
  LiftedSet kept(m.n());
  PrefixCounter counter(m);
  for (const auto& e : candidates) {
    if (!counter.CanAdd(e.position)) continue;
    counter.Add(e.position);
    kept.Insert(e.position, e.product);
  }
  if (!IsIndependent(m, kept)) {
    throw Error(ErrorCode::kInternal, "matroid",
                "contention resolution produced a dependent set");
  }
  return kept;
}

inline LiftedSet CrsRound(const LaminarMatroid& m, const FractionalPoint& x,
                          const LiftedSet& a, std::uint64_t seed) {
  Rng rng(seed);
  return CrsRound(m, x, a, rng);
}

}  // namespace seqsub

#endif  // SEQSUB_MATROID_H_
