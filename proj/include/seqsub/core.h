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

// Domain types for sequential product ranking.
//
// A user with patience i looks at the first i products of a ranking and
// clicks with probability f_i(prefix). With lambda_i the probability of
// patience i, the engagement of a permutation pi is
//
//   F(pi) = sum_i lambda_i * f_i({pi_1, ..., pi_i})
//
// and the platform revenue adds placement payments r(i, pi_i) and a per-click
// payment K:
//
//   G(pi) = sum_i r(i, pi_i) + K * F(pi).
//
// Products are 0-based internally; bit j of a ProductSet is product j + 1 in
// every external format.

#ifndef SEQSUB_CORE_H_
#define SEQSUB_CORE_H_

#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "seqsub/error.h"
#include "seqsub/matrix.h"

namespace seqsub {

using ProductSet = std::uint64_t;

inline constexpr int kMaxProducts = 64;
inline constexpr int kMaxExplicitProducts = 20;

inline int SetSize(ProductSet s) { return std::popcount(s); }
inline bool Contains(ProductSet s, int j) { return (s >> j) & 1u; }
inline ProductSet Singleton(int j) { return ProductSet{1} << j; }
inline ProductSet FullSet(int n) {
  return n >= 64 ? ~ProductSet{0} : (ProductSet{1} << n) - 1;
}

// Set function given as a value per subset bitmask. Entries may be missing;
// evaluating a missing subset is an error.
class ExplicitTable {
 public:
  ExplicitTable(int n, std::vector<std::pair<ProductSet, double>> entries)
      : n_(n) {
    if (n < 0 || n > kMaxExplicitProducts) {
      throw Error(ErrorCode::kTooLarge, "core",
                  "explicit tables support at most 20 products");
    }
    values_.assign(std::size_t{1} << n,
                   std::numeric_limits<double>::quiet_NaN());
    for (const auto& [mask, value] : entries) {
      if (mask >> n) {
        throw Error(ErrorCode::kInvalidArgument, "core",
                    "explicit table mask outside the product range");
      }
      values_[mask] = value;
    }
    Validate();
  }

  static ExplicitTable FromDense(int n, const std::vector<double>& values) {
    std::vector<std::pair<ProductSet, double>> entries;
    entries.reserve(values.size());
    for (std::size_t m = 0; m < values.size(); ++m) {
      entries.emplace_back(static_cast<ProductSet>(m), values[m]);
    }
    return ExplicitTable(n, std::move(entries));
  }

  int num_products() const { return n_; }

  bool Has(ProductSet s) const {
    return (s >> n_) == 0 && !std::isnan(values_[s]);
  }

  double Value(ProductSet s) const {
    if (!Has(s)) {
      throw Error(ErrorCode::kUnknownSubset, "core",
                  "explicit table has no entry for mask " + std::to_string(s));
    }
    return values_[s];
  }

  // Present entries in mask order.
  std::vector<std::pair<ProductSet, double>> Entries() const {
    std::vector<std::pair<ProductSet, double>> out;
    for (std::size_t m = 0; m < values_.size(); ++m) {
      if (!std::isnan(values_[m])) out.emplace_back(m, values_[m]);
    }
    return out;
  }

 private:
  // Values lie in [0, 1] and never decrease along single-element extensions
  // whose endpoints are both present.
  void Validate() const {
    for (std::size_t m = 0; m < values_.size(); ++m) {
      const double v = values_[m];
      if (std::isnan(v)) continue;
      if (v < 0.0 || v > 1.0 + 1e-12) {
        throw Error(ErrorCode::kInvalidArgument, "core",
                    "explicit table value outside [0, 1] at mask " +
                        std::to_string(m));
      }
      for (int j = 0; j < n_; ++j) {
        const std::size_t up = m | (std::size_t{1} << j);
        if (up == m || std::isnan(values_[up])) continue;
        if (values_[up] < v - 1e-12) {
          throw Error(ErrorCode::kInvalidArgument, "core",
                      "explicit table is not monotone at mask " +
                          std::to_string(m));
        }
      }
    }
  }

  int n_;
  std::vector<double> values_;
};

// Weighted coverage: value(S) = total weight of universe elements covered by
// some product of S, optionally divided by the total weight.
class CoverageFunction {
 public:
  CoverageFunction(std::vector<double> weights,
                   std::vector<std::vector<int>> covers, bool normalized)
      : weights_(std::move(weights)),
        covers_(std::move(covers)),
        normalized_(normalized) {
    for (double w : weights_) {
      if (!(w >= 0.0)) {
        throw Error(ErrorCode::kNegativeWeight, "core",
                    "coverage weights must be nonnegative");
      }
      total_ += w;
    }
    if (covers_.size() > static_cast<std::size_t>(kMaxProducts)) {
      throw Error(ErrorCode::kTooLarge, "core", "too many products");
    }
    words_ = (weights_.size() + 63) / 64;
    masks_.assign(covers_.size() * words_, 0);
    for (std::size_t j = 0; j < covers_.size(); ++j) {
      for (int e : covers_[j]) {
        if (e < 0 || static_cast<std::size_t>(e) >= weights_.size()) {
          throw Error(ErrorCode::kInvalidArgument, "core",
                      "coverage element index out of range");
        }
        masks_[j * words_ + e / 64] |= std::uint64_t{1} << (e % 64);
      }
    }
  }

  int num_products() const { return static_cast<int>(covers_.size()); }
  const std::vector<double>& weights() const { return weights_; }
  const std::vector<std::vector<int>>& covers() const { return covers_; }
  bool normalized() const { return normalized_; }

  double Value(ProductSet s) const {
    if (words_ == 0) return 0.0;
    std::vector<std::uint64_t> covered(words_, 0);
    for (ProductSet rest = s; rest; rest &= rest - 1) {
      const int j = std::countr_zero(rest);
      if (j >= num_products()) break;
      for (std::size_t w = 0; w < words_; ++w) {
        covered[w] |= masks_[j * words_ + w];
      }
    }
    double value = 0.0;
    for (std::size_t w = 0; w < words_; ++w) {
      for (std::uint64_t bits = covered[w]; bits; bits &= bits - 1) {
        value += weights_[w * 64 + std::countr_zero(bits)];
      }
    }
    if (normalized_) return total_ > 0.0 ? value / total_ : 0.0;
    return value;
  }

 private:
  std::vector<double> weights_;
  std::vector<std::vector<int>> covers_;
  bool normalized_;
  double total_ = 0.0;
  std::size_t words_ = 0;
  std::vector<std::uint64_t> masks_;
};

// Multinomial logit click probability w(S) / (w(S) + w_0).
class MnlFunction {
 public:
  MnlFunction(std::vector<double> weights, double outside_weight)
      : weights_(std::move(weights)), outside_weight_(outside_weight) {
    for (double w : weights_) {
      if (!(w >= 0.0)) {
        throw Error(ErrorCode::kNegativeWeight, "core",
                    "mnl weights must be nonnegative");
      }
    }
    if (!(outside_weight_ > 0.0)) {
      throw Error(ErrorCode::kNegativeWeight, "core",
                  "mnl outside-option weight must be positive");
    }
    if (weights_.size() > static_cast<std::size_t>(kMaxProducts)) {
      throw Error(ErrorCode::kTooLarge, "core", "too many products");
    }
  }

  int num_products() const { return static_cast<int>(weights_.size()); }
  const std::vector<double>& weights() const { return weights_; }
  double outside_weight() const { return outside_weight_; }

  double Value(ProductSet s) const {
    double w = 0.0;
    for (ProductSet rest = s; rest; rest &= rest - 1) {
      const int j = std::countr_zero(rest);
      if (j < num_products()) w += weights_[j];
    }
    return w / (w + outside_weight_);
  }

 private:
  std::vector<double> weights_;
  double outside_weight_;
};

class ClickModel {
 public:
  using Variant = std::variant<ExplicitTable, CoverageFunction, MnlFunction>;

  ClickModel(ExplicitTable t) : model_(std::move(t)) {}      // NOLINT
  ClickModel(CoverageFunction c) : model_(std::move(c)) {}   // NOLINT
  ClickModel(MnlFunction m) : model_(std::move(m)) {}        // NOLINT

  double Value(ProductSet s) const {
    return std::visit([s](const auto& m) { return m.Value(s); }, model_);
  }
  double operator()(ProductSet s) const { return Value(s); }

  int num_products() const {
    return std::visit([](const auto& m) { return m.num_products(); }, model_);
  }

  std::string_view kind() const {
    switch (model_.index()) {
      case 0: return "explicit";
      case 1: return "coverage";
      default: return "mnl";
    }
  }

  const Variant& variant() const { return model_; }

 private:
  Variant model_;
};

inline double EvalSetFunction(const ClickModel& model, ProductSet s) {
  return model.Value(s);
}

// A ranking: order[i] is the product shown at position i.
class Permutation {
 public:
  Permutation() = default;
  explicit Permutation(std::vector<int> order) : order_(std::move(order)) {
    const int n = size();
    std::vector<bool> seen(n, false);
    for (int p : order_) {
      if (p < 0 || p >= n || seen[p]) {
        throw Error(ErrorCode::kInvalidArgument, "core",
                    "permutation is not a bijection");
      }
      seen[p] = true;
    }
  }

  static Permutation Identity(int n) {
    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    return Permutation(std::move(order));
  }

  // From 1-based product labels.
  static Permutation FromOneBased(const std::vector<int>& labels) {
    std::vector<int> order;
    order.reserve(labels.size());
    for (int p : labels) order.push_back(p - 1);
    return Permutation(std::move(order));
  }

  int size() const { return static_cast<int>(order_.size()); }
  int operator[](int position) const { return order_[position]; }
  const std::vector<int>& order() const { return order_; }

  std::vector<int> OneBased() const {
    std::vector<int> out(order_);
    for (int& p : out) ++p;
    return out;
  }

  // Products at positions 0..count-1.
  ProductSet Prefix(int count) const {
    ProductSet s = 0;
    for (int i = 0; i < count; ++i) s |= Singleton(order_[i]);
    return s;
  }

  int PositionOf(int product) const {
    for (int i = 0; i < size(); ++i) {
      if (order_[i] == product) return i;
    }
    return -1;
  }

  auto operator<=>(const Permutation&) const = default;

 private:
  std::vector<int> order_;
};

// Immutable problem data. Patience levels are 0-based: lambda(i) is the
// probability that a user inspects the first i + 1 positions and f(i) is that
// user's click function. Click models may be shared between levels.
class Instance {
 public:
  Instance(int n, std::vector<double> lambda,
           std::vector<std::shared_ptr<const ClickModel>> f, SquareMatrix r,
           double per_click, double threshold)
      : n_(n),
        lambda_(std::move(lambda)),
        f_(std::move(f)),
        r_(std::move(r)),
        per_click_(per_click),
        threshold_(threshold) {
    Validate();
  }

  // Every patience level uses the same click model; r = 0.
  static Instance Shared(int n, std::vector<double> lambda, ClickModel model,
                         double per_click = 0.0, double threshold = 0.0) {
    auto shared = std::make_shared<const ClickModel>(std::move(model));
    return Instance(n, std::move(lambda),
                    std::vector<std::shared_ptr<const ClickModel>>(n, shared),
                    SquareMatrix(n), per_click, threshold);
  }

  int n() const { return n_; }
  double lambda(int i) const { return lambda_[i]; }
  const std::vector<double>& lambdas() const { return lambda_; }
  const ClickModel& f(int i) const { return *f_[i]; }
  const std::shared_ptr<const ClickModel>& f_ptr(int i) const { return f_[i]; }
  double r(int position, int product) const { return r_(position, product); }
  const SquareMatrix& placement() const { return r_; }
  double per_click() const { return per_click_; }
  double threshold() const { return threshold_; }

  Instance WithThreshold(double threshold) const {
    Instance copy = *this;
    copy.threshold_ = threshold;
    copy.Validate();
    return copy;
  }

  Instance WithPlacement(SquareMatrix r, double per_click) const {
    Instance copy = *this;
    copy.r_ = std::move(r);
    copy.per_click_ = per_click;
    copy.Validate();
    return copy;
  }

 private:
  void Validate() const {
    auto bad = [](ErrorCode code, const std::string& what) {
      return Error(code, "core", what);
    };
    if (n_ < 1 || n_ > kMaxProducts) {
      throw bad(ErrorCode::kInvalidInstance, "n must be in [1, 64]");
    }
    if (lambda_.size() != static_cast<std::size_t>(n_) ||
        f_.size() != static_cast<std::size_t>(n_) || r_.n() != n_) {
      throw bad(ErrorCode::kDimensionMismatch,
                "lambda, click models and r must all have n entries");
    }
    double total = 0.0;
    for (double l : lambda_) {
      if (!(l >= 0.0)) throw bad(ErrorCode::kInvalidInstance, "lambda < 0");
      total += l;
    }
    if (total > 1.0 + 1e-9) {
      throw bad(ErrorCode::kInvalidInstance, "lambda sums to more than 1");
    }
    for (int i = 0; i < n_; ++i) {
      if (!f_[i]) throw bad(ErrorCode::kInvalidInstance, "missing click model");
      if (f_[i]->num_products() != n_) {
        throw bad(ErrorCode::kDimensionMismatch,
                  "click model product count differs from n");
      }
    }
    for (int j = 0; j < n_; ++j) {
      for (int i = 0; i < n_; ++i) {
        if (!(r_(i, j) >= 0.0)) {
          throw bad(ErrorCode::kInvalidInstance, "placement payment < 0");
        }
        if (i + 1 < n_ && r_(i + 1, j) > r_(i, j) + 1e-12) {
          throw bad(ErrorCode::kInvalidInstance,
                    "placement payments must be nonincreasing in position");
        }
      }
    }
    if (!(per_click_ >= 0.0)) {
      throw bad(ErrorCode::kInvalidInstance, "K < 0");
    }
    if (!(threshold_ >= 0.0)) {
      throw bad(ErrorCode::kInvalidInstance, "T < 0");
    }
  }

  int n_;
  std::vector<double> lambda_;
  std::vector<std::shared_ptr<const ClickModel>> f_;
  SquareMatrix r_;
  double per_click_;
  double threshold_;
};

inline void CheckDimensions(const Instance& inst, const Permutation& pi) {
  if (pi.size() != inst.n()) {
    throw Error(ErrorCode::kDimensionMismatch, "core",
                "permutation length differs from n");
  }
}

// F(pi).
inline double EvalEngagement(const Instance& inst, const Permutation& pi) {
  CheckDimensions(inst, pi);
  double value = 0.0;
  ProductSet prefix = 0;
  for (int i = 0; i < inst.n(); ++i) {
    prefix |= Singleton(pi[i]);
    if (inst.lambda(i) != 0.0) value += inst.lambda(i) * inst.f(i)(prefix);
  }
  return value;
}

// sum_i r(i, pi_i).
inline double EvalPlacement(const Instance& inst, const Permutation& pi) {
  CheckDimensions(inst, pi);
  double value = 0.0;
  for (int i = 0; i < inst.n(); ++i) value += inst.r(i, pi[i]);
  return value;
}

// G(pi).
inline double EvalRevenue(const Instance& inst, const Permutation& pi) {
  return EvalPlacement(inst, pi) + inst.per_click() * EvalEngagement(inst, pi);
}

}  // namespace seqsub

#endif  // SEQSUB_CORE_H_
