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

// Randomized ranking policies described by layer probabilities x_{i,S}: the
// probability that the first i positions hold exactly S.
//
// A vector is implementable by some policy iff every layer sums to 1 and,
// for each consecutive pair of layers, the network
//
//   source -> S (capacity x_{i,S}) -> S + p (capacity 1) -> sink
//                                      (capacity x_{i+1,S+p})
//
// carries a flow of 1. The flows then say how to extend a prefix S, which is
// what SamplePolicy does.

#ifndef SEQSUB_POLICY_H_
#define SEQSUB_POLICY_H_

#include <bit>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "seqsub/core.h"
#include "seqsub/error.h"
#include "seqsub/matrix.h"
#include "seqsub/numerics/max_flow.h"
#include "seqsub/parallel.h"
#include "seqsub/random.h"

namespace seqsub {

inline constexpr int kMaxPolicyProducts = 12;
inline constexpr double kPolicyTolerance = 1e-9;
inline constexpr double kPruneMass = 1e-12;

class PolicyVector {
 public:
  using Layer = std::map<ProductSet, double>;

  PolicyVector() = default;
  explicit PolicyVector(int n) : n_(n), layers_(n) {
    if (n < 1 || n > kMaxProducts) {
      throw Error(ErrorCode::kInvalidArgument, "policy",
                  "policy size must be in [1, 64]");
    }
  }

  static PolicyVector PointMass(const Permutation& pi) {
    PolicyVector pv(pi.size());
    for (int k = 1; k <= pi.size(); ++k) pv.Set(k, pi.Prefix(k), 1.0);
    return pv;
  }

  // Weights must be nonnegative and sum to 1.
  static PolicyVector Mixture(
      const std::vector<std::pair<Permutation, double>>& parts) {
    if (parts.empty()) {
      throw Error(ErrorCode::kInvalidDistribution, "policy", "empty mixture");
    }
    PolicyVector pv(parts.front().first.size());
    double total = 0.0;
    for (const auto& [pi, w] : parts) {
      if (!(w >= 0.0) || pi.size() != pv.n()) {
        throw Error(ErrorCode::kInvalidDistribution, "policy",
                    "mixture weights must be >= 0 over same-size rankings");
      }
      total += w;
      for (int k = 1; k <= pi.size(); ++k) pv.Add(k, pi.Prefix(k), w);
    }
    if (std::abs(total - 1.0) > kPolicyTolerance) {
      throw Error(ErrorCode::kInvalidDistribution, "policy",
                  "mixture weights must sum to 1");
    }
    return pv;
  }

  int n() const { return n_; }

  // Layer k (1..n) holds sets of size k.
  const Layer& layer(int k) const {
    CheckLayer(k);
    return layers_[k - 1];
  }

  double Get(int k, ProductSet s) const {
    if (k == 0) return s == 0 ? 1.0 : 0.0;
    const Layer& l = layer(k);
    auto it = l.find(s);
    return it == l.end() ? 0.0 : it->second;
  }

  // Values in [-1e-9, 0) are treated as 0; anything lower is rejected.
  void Set(int k, ProductSet s, double p) {
    CheckEntry(k, s);
    if (p < 0.0 && p >= -kPolicyTolerance) p = 0.0;
    if (!(p >= 0.0 && p <= 1.0 + kPolicyTolerance)) {
      throw Error(ErrorCode::kInvalidArgument, "policy",
                  "layer probability outside [0, 1]");
    }
    if (p == 0.0) {
      layers_[k - 1].erase(s);
    } else {
      layers_[k - 1][s] = p;
    }
  }

  void Add(int k, ProductSet s, double p) { Set(k, s, Get(k, s) + p); }

  double LayerMass(int k) const {
    double total = 0.0;
    for (const auto& [s, p] : layer(k)) total += p;
    return total;
  }

  bool IsNormalized(double tol = kPolicyTolerance) const {
    for (int k = 1; k <= n_; ++k) {
      if (std::abs(LayerMass(k) - 1.0) > tol) return false;
    }
    return true;
  }

 private:
  void CheckLayer(int k) const {
    if (k < 1 || k > n_) {
      throw Error(ErrorCode::kInvalidArgument, "policy",
                  "layer index out of range: " + std::to_string(k));
    }
  }

  void CheckEntry(int k, ProductSet s) const {
    CheckLayer(k);
    if (SetSize(s) != k || (s & ~FullSet(n_)) != 0) {
      throw Error(ErrorCode::kInvalidArgument, "policy",
                  "layer " + std::to_string(k) + " needs a set of that size");
    }
  }

  int n_ = 0;
  std::vector<Layer> layers_;
};

// x_{i,j} = sum_{S ni j, |S| = i} x_{i,S} - sum_{S ni j, |S| = i-1} x_{i-1,S},
// with 0-based position i - 1. Entries are negative when the vector is not
// implementable.
inline SquareMatrix Marginals(const PolicyVector& pv) {
  const int n = pv.n();
  SquareMatrix x(n);
  for (int k = 1; k <= n; ++k) {
    for (const auto& [s, p] : pv.layer(k)) {
      for (ProductSet rest = s; rest; rest &= rest - 1) {
        x(k - 1, std::countr_zero(rest)) += p;
      }
    }
    if (k == 1) continue;
    for (const auto& [s, p] : pv.layer(k - 1)) {
      for (ProductSet rest = s; rest; rest &= rest - 1) {
        x(k - 1, std::countr_zero(rest)) -= p;
      }
    }
  }
  return x;
}

struct LayerFlowCert {
  struct Edge {
    ProductSet from;
    ProductSet to;
    double flow;
  };
  struct Node {
    int layer;
    ProductSet set;
  };

  int layer = 0;  // certifies layer - 1 -> layer
  double flow = 0.0;
  std::vector<Edge> edges;
  // Set nodes on the source side of the minimum cut.
  std::vector<Node> cut_source_side;
  bool feasible = false;
};

struct ImplementabilityReport {
  bool feasible = true;
  std::vector<LayerFlowCert> certs;  // certs[k - 1] certifies layer k
  int violating_layer = 0;           // first failing layer, 0 if none
};

inline LayerFlowCert CertifyLayer(const PolicyVector& pv, int k) {
  const int n = pv.n();
  std::vector<std::pair<ProductSet, double>> from;
  if (k == 1) {
    from.emplace_back(0, 1.0);
  } else {
    for (const auto& [s, p] : pv.layer(k - 1)) {
      if (p >= kPruneMass) from.emplace_back(s, p);
    }
  }
  std::vector<std::pair<ProductSet, double>> to;
  std::unordered_map<ProductSet, int> to_index;
  for (const auto& [s, p] : pv.layer(k)) {
    if (p < kPruneMass) continue;
    to_index[s] = static_cast<int>(to.size());
    to.emplace_back(s, p);
  }
  const int num_from = static_cast<int>(from.size());
  const int source = 0;
  const int sink = 1;
  FlowNetwork net(2 + num_from + static_cast<int>(to.size()), source, sink);
  for (int a = 0; a < num_from; ++a) net.AddEdge(source, 2 + a, from[a].second);
  struct Link {
    int edge;
    ProductSet from;
    ProductSet to;
  };
  std::vector<Link> links;
  for (int a = 0; a < num_from; ++a) {
    for (int p = 0; p < n; ++p) {
      if (Contains(from[a].first, p)) continue;
      const ProductSet next = from[a].first | Singleton(p);
      auto it = to_index.find(next);
      if (it == to_index.end()) continue;
      links.push_back(
          {net.AddEdge(2 + a, 2 + num_from + it->second, 1.0), from[a].first,
           next});
    }
  }
  for (std::size_t b = 0; b < to.size(); ++b) {
    net.AddEdge(2 + num_from + static_cast<int>(b), sink, to[b].second);
  }
  const MaxFlowResult flow = MaxFlow(net);

  LayerFlowCert cert;
  cert.layer = k;
  cert.flow = flow.value;
  cert.feasible = flow.value >= 1.0 - kPolicyTolerance;
  for (const Link& l : links) {
    if (flow.edge_flow[l.edge] > 0.0) {
      cert.edges.push_back({l.from, l.to, flow.edge_flow[l.edge]});
    }
  }
  for (int a = 0; a < num_from; ++a) {
    if (flow.source_side[2 + a]) {
      cert.cut_source_side.push_back({k - 1, from[a].first});
    }
  }
  for (std::size_t b = 0; b < to.size(); ++b) {
    if (flow.source_side[2 + num_from + b]) {
      cert.cut_source_side.push_back({k, to[b].first});
    }
  }
  return cert;
}

// Throws kLayerUnnormalized, naming the layer, when some layer does not sum
// to 1; otherwise certifies every layer pair.
inline ImplementabilityReport CheckImplementable(const PolicyVector& pv) {
  if (pv.n() > kMaxPolicyProducts) {
    throw Error(ErrorCode::kTooLarge, "policy",
                "certification needs n <= " +
                    std::to_string(kMaxPolicyProducts));
  }
  for (int k = 1; k <= pv.n(); ++k) {
    const double mass = pv.LayerMass(k);
    if (std::abs(mass - 1.0) > kPolicyTolerance) {
      throw Error(ErrorCode::kLayerUnnormalized, "policy",
                  "layer " + std::to_string(k) + " sums to " +
                      std::to_string(mass));
    }
  }
  ImplementabilityReport report;
  report.certs.resize(pv.n());
  ParallelFor(
      static_cast<std::size_t>(pv.n()),
      [&](std::size_t k) {
        report.certs[k] = CertifyLayer(pv, static_cast<int>(k) + 1);
      },
      /*min_parallel=*/4);
  for (const auto& cert : report.certs) {
    if (!cert.feasible) {
      report.feasible = false;
      report.violating_layer = cert.layer;
      break;
    }
  }
  return report;
}

// Draws rankings from an implementable vector: from prefix S at layer k the
// next product is p with probability flow(S, S + p) / x_{k,S}.
class PolicySampler {
 public:
  PolicySampler(const PolicyVector& pv,
                const std::vector<LayerFlowCert>& certs)
      : n_(pv.n()), steps_(pv.n()) {
    if (static_cast<int>(certs.size()) != n_) {
      throw Error(ErrorCode::kCertMismatch, "policy",
                  "need one certificate per layer");
    }
    for (int k = 1; k <= n_; ++k) {
      const LayerFlowCert& cert = certs[k - 1];
      if (cert.layer != k || !cert.feasible) {
        throw Error(ErrorCode::kCertMismatch, "policy",
                    "certificate for layer " + std::to_string(k) +
                        " is missing or infeasible");
      }
      auto& step = steps_[k - 1];
      for (const auto& e : cert.edges) {
        if (SetSize(e.from) != k - 1 || SetSize(e.to ^ e.from) != 1 ||
            (e.from & ~e.to) != 0) {
          throw Error(ErrorCode::kCertMismatch, "policy",
                      "certificate edge does not add one product");
        }
        auto& choice = step[e.from];
        choice.products.push_back(std::countr_zero(e.to ^ e.from));
        choice.weights.push_back(e.flow);
      }
      for (const auto& [from, choice] : step) {
        double total = 0.0;
        for (double w : choice.weights) total += w;
        const double mass = pv.Get(k - 1, from);
        if (std::abs(total - mass) > 1e-7) {
          throw Error(ErrorCode::kCertMismatch, "policy",
                      "certificate flows out of a prefix differ from its "
                      "probability at layer " +
                          std::to_string(k));
        }
      }
    }
  }

  Permutation Sample(Rng& rng) const {
    std::vector<int> order;
    order.reserve(n_);
    ProductSet s = 0;
    for (int k = 1; k <= n_; ++k) {
      auto it = steps_[k - 1].find(s);
      if (it == steps_[k - 1].end()) {
        throw Error(ErrorCode::kCertMismatch, "policy",
                    "no certified extension of a reachable prefix");
      }
      const Choice& c = it->second;
      const int p = c.products[rng.Categorical(c.weights)];
      order.push_back(p);
      s |= Singleton(p);
    }
    return Permutation(std::move(order));
  }

 private:
  struct Choice {
    std::vector<int> products;
    std::vector<double> weights;
  };

  int n_;
  std::vector<std::map<ProductSet, Choice>> steps_;
};

inline Permutation SamplePolicy(const PolicyVector& pv,
                                const std::vector<LayerFlowCert>& certs,
                                std::uint64_t seed) {
  Rng rng(seed);
  return PolicySampler(pv, certs).Sample(rng);
}

// Tops up each layer whose mass is below 1 by giving the deficit to
// completion(k), a set of size k. Layers above 1 are left alone.
inline PolicyVector CompleteLayers(
    const PolicyVector& pv, const std::function<ProductSet(int)>& completion) {
  PolicyVector out = pv;
  for (int k = 1; k <= pv.n(); ++k) {
    const double deficit = 1.0 - pv.LayerMass(k);
    if (deficit > 0.0) out.Add(k, completion(k), deficit);
  }
  return out;
}

// Deficits go to the prefixes of `filler`.
inline PolicyVector CompleteLayers(const PolicyVector& pv,
                                   const Permutation& filler) {
  return CompleteLayers(pv, [&](int k) { return filler.Prefix(k); });
}

}  // namespace seqsub

#endif  // SEQSUB_POLICY_H_
