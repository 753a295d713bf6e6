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

// Fixtures and independent reference implementations shared by the tests.
// Nothing here calls the code paths it is used to check.

#ifndef SEQSUB_TESTS_TEST_UTIL_H_
#define SEQSUB_TESTS_TEST_UTIL_H_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "seqsub/io.h"
#include "seqsub/seqsub.h"

namespace seqsub::testing {

inline std::string FixturePath(const std::string& name) {
  return std::string(SEQSUB_FIXTURE_DIR) + "/" + name;
}

inline Instance LoadFixture(const std::string& name) {
  return InstanceFromJson(ReadJsonFile(FixturePath(name)));
}

// Two products, lambda = (1/2, 1/2); level 1 clicks only on product 1 (value
// 1), level 2 only on product 2 (value 1 + eps).
inline Instance GreedyTight(double eps = 0.1) {
  auto f1 = std::make_shared<const ClickModel>(
      CoverageFunction({1.0}, {{0}, {}}, false));
  auto f2 = std::make_shared<const ClickModel>(
      CoverageFunction({1.0 + eps}, {{}, {0}}, false));
  return Instance(2, {0.5, 0.5}, {f1, f2}, SquareMatrix(2), 1.0, 0.0);
}

inline std::vector<Permutation> AllPermutations(int n) {
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::vector<Permutation> out;
  do {
    out.emplace_back(order);
  } while (std::next_permutation(order.begin(), order.end()));
  return out;
}

// F by walking prefixes held in a std::set.
inline double ReferenceEngagement(const Instance& inst, const Permutation& pi) {
  std::set<int> seen;
  double total = 0.0;
  for (int i = 0; i < inst.n(); ++i) {
    seen.insert(pi.order()[i]);
    ProductSet mask = 0;
    for (int p : seen) mask += ProductSet{1} << p;
    total += inst.lambdas()[i] * inst.f(i).Value(mask);
  }
  return total;
}

inline double ReferencePlacement(const Instance& inst, const Permutation& pi) {
  double total = 0.0;
  for (int i = 0; i < inst.n(); ++i) total += inst.placement()(i, pi.order()[i]);
  return total;
}

// g from an element list: T_i = products of elements at positions <= i.
inline double ReferenceLiftedG(const Instance& inst,
                               const std::vector<LiftedElement>& elements) {
  double total = 0.0;
  for (int i = 0; i < inst.n(); ++i) {
    std::set<int> t;
    for (const auto& e : elements) {
      if (e.position <= i) t.insert(e.product);
    }
    ProductSet mask = 0;
    for (int p : t) mask += ProductSet{1} << p;
    total += inst.lambdas()[i] * inst.f(i).Value(mask);
  }
  return total;
}

// E[g(R(x))] by summing over every subset of the support of x.
template <typename G>
double ReferenceMultilinear(const G& g, const FractionalPoint& x) {
  const std::vector<LiftedElement> support = x.Support();
  const int s = static_cast<int>(support.size());
  double total = 0.0;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << s); ++mask) {
    double p = 1.0;
    LiftedSet r(x.n());
    for (int e = 0; e < s; ++e) {
      const double q = x(support[e].position, support[e].product);
      if ((mask >> e) & 1u) {
        p *= q;
        r.Insert(support[e].position, support[e].product);
      } else {
        p *= 1.0 - q;
      }
    }
    if (p > 0.0) total += p * g(r);
  }
  return total;
}

// Random point of the matroid polytope: a convex combination of a few
// permutation indicators, scaled by a factor in [scale_lo, 1].
inline FractionalPoint RandomPolytopePoint(int n, Rng& rng,
                                           double scale_lo = 1.0) {
  const int parts = rng.UniformInt(1, 4);
  std::vector<double> w(parts);
  double total = 0.0;
  for (double& v : w) total += (v = rng.Uniform(0.1, 1.0));
  const double scale = rng.Uniform(scale_lo, 1.0);
  SquareMatrix x(n);
  for (int p = 0; p < parts; ++p) {
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    rng.Shuffle(std::span<int>(order));
    for (int i = 0; i < n; ++i) x(i, order[i]) += scale * w[p] / total;
  }
  for (double& v : x.flat()) v = std::min(v, 1.0);
  return FractionalPoint(x);
}

// Lifted set from a bitmask over the n^2 elements, bit i * n + j.
inline LiftedSet LiftedFromMask(int n, std::uint64_t mask) {
  LiftedSet r(n);
  for (int e = 0; e < n * n; ++e) {
    if ((mask >> e) & 1u) r.Insert(e / n, e % n);
  }
  return r;
}

// |R n A_k| <= k + 1 for every prefix, counted element by element.
inline bool ReferenceIndependent(int n, std::uint64_t mask) {
  for (int k = 0; k < n; ++k) {
    int count = 0;
    for (int e = 0; e < n * n; ++e) {
      if (((mask >> e) & 1u) && e / n <= k) ++count;
    }
    if (count > k + 1) return false;
  }
  return true;
}

// Dense Gaussian elimination with partial pivoting; nullopt when singular.
inline std::optional<std::vector<double>> SolveSquare(
    std::vector<std::vector<double>> a, std::vector<double> b) {
  const int n = static_cast<int>(b.size());
  for (int c = 0; c < n; ++c) {
    int piv = c;
    for (int r = c + 1; r < n; ++r) {
      if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
    }
    if (std::abs(a[piv][c]) < 1e-10) return std::nullopt;
    std::swap(a[piv], a[c]);
    std::swap(b[piv], b[c]);
    for (int r = 0; r < n; ++r) {
      if (r == c) continue;
      const double f = a[r][c] / a[c][c];
      for (int k = c; k < n; ++k) a[r][k] -= f * a[c][k];
      b[r] -= f * b[c];
    }
  }
  std::vector<double> x(n);
  for (int i = 0; i < n; ++i) x[i] = b[i] / a[i][i];
  return x;
}

// Optimum of a bounded LP by enumerating every basic solution: choose n of
// the constraint rows and bounds x >= 0 as equalities, solve, keep the best
// feasible one. nullopt when no vertex is feasible.
inline std::optional<double> VertexEnumerationOptimum(const LpProblem& lp) {
  const int n = lp.num_vars();
  struct Row {
    std::vector<double> a;
    double b;
    Relation rel;
  };
  std::vector<Row> rows;
  for (const auto& c : lp.constraints()) {
    rows.push_back({c.coefficients, c.rhs, c.relation});
  }
  for (int v = 0; v < n; ++v) {
    std::vector<double> a(n, 0.0);
    a[v] = 1.0;
    rows.push_back({a, 0.0, Relation::kGreaterEqual});
  }
  const int m = static_cast<int>(rows.size());
  std::optional<double> best;
  // Every n-subset of rows, lexicographically.
  std::vector<bool> chosen(m, false);
  std::fill(chosen.begin(), chosen.begin() + std::min(n, m), true);
  do {
    std::vector<std::vector<double>> a;
    std::vector<double> b;
    for (int r = 0; r < m; ++r) {
      if (chosen[r]) {
        a.push_back(rows[r].a);
        b.push_back(rows[r].b);
      }
    }
    if (static_cast<int>(a.size()) != n) break;
    const auto x = SolveSquare(a, b);
    if (!x) continue;
    bool ok = true;
    for (const Row& row : rows) {
      double lhs = 0.0;
      for (int v = 0; v < n; ++v) lhs += row.a[v] * (*x)[v];
      const double tol = 1e-8 * (1.0 + std::abs(row.b));
      if (row.rel == Relation::kLessEqual && lhs > row.b + tol) ok = false;
      if (row.rel == Relation::kGreaterEqual && lhs < row.b - tol) ok = false;
      if (row.rel == Relation::kEqual && std::abs(lhs - row.b) > tol) ok = false;
    }
    if (!ok) continue;
    double value = 0.0;
    for (int v = 0; v < n; ++v) value += lp.objective()[v] * (*x)[v];
    if (!best || value > *best) best = value;
  } while (std::prev_permutation(chosen.begin(), chosen.end()));
  return best;
}

// Minimum s-t cut by enumerating every node subset holding s but not t.
inline double BruteForceMinCut(const FlowNetwork& net) {
  const int n = net.num_nodes();
  double best = std::numeric_limits<double>::infinity();
  for (std::uint32_t side = 0; side < (1u << n); ++side) {
    if (!((side >> net.source()) & 1u) || ((side >> net.sink()) & 1u)) continue;
    double cut = 0.0;
    for (const auto& e : net.edges()) {
      if (((side >> e.from) & 1u) && !((side >> e.to) & 1u)) cut += e.capacity;
    }
    best = std::min(best, cut);
  }
  return best;
}

// Random monotone submodular function on `ground` elements, tabulated: a
// nonnegative mix of a weighted coverage, a concave function of a modular
// weight, and a budget-additive term.
inline std::vector<double> RandomSubmodularTable(int ground, Rng& rng) {
  const int items = rng.UniformInt(1, 2 * ground);
  std::vector<double> item_w(items);
  for (double& w : item_w) w = rng.Uniform();
  std::vector<std::uint64_t> covers(ground, 0);
  for (int e = 0; e < ground; ++e) {
    for (int t = 0; t < items; ++t) {
      if (rng.Bernoulli(0.3)) covers[e] |= std::uint64_t{1} << t;
    }
  }
  std::vector<double> mod(ground);
  for (double& w : mod) w = rng.Uniform();
  const double budget = rng.Uniform(0.5, 2.0);
  const double a = rng.Uniform(), b = rng.Uniform(), c = rng.Uniform();
  std::vector<double> table(std::size_t{1} << ground);
  for (std::uint64_t s = 0; s < table.size(); ++s) {
    std::uint64_t covered = 0;
    double m = 0.0;
    for (int e = 0; e < ground; ++e) {
      if ((s >> e) & 1u) {
        covered |= covers[e];
        m += mod[e];
      }
    }
    double cov = 0.0;
    for (int t = 0; t < items; ++t) {
      if ((covered >> t) & 1u) cov += item_w[t];
    }
    table[s] = a * cov + b * std::sqrt(m) + c * std::min(budget, m);
  }
  return table;
}

// Random distribution over up to 10 subsets of the ground set.
inline std::vector<std::pair<std::uint64_t, double>> RandomSetDistribution(
    int ground, Rng& rng) {
  const int k = rng.UniformInt(1, 10);
  std::vector<std::pair<std::uint64_t, double>> d;
  double total = 0.0;
  for (int i = 0; i < k; ++i) {
    const double w = rng.Uniform(0.05, 1.0);
    d.emplace_back(rng.Below(std::uint64_t{1} << ground), w);
    total += w;
  }
  for (auto& [s, p] : d) p /= total;
  return d;
}

// Expectation of a tabulated f when each element is drawn independently.
inline double IndependentExpectation(const std::vector<double>& table,
                                     const std::vector<double>& p) {
  const int ground = static_cast<int>(p.size());
  double total = 0.0;
  for (std::uint64_t s = 0; s < table.size(); ++s) {
    double prob = 1.0;
    for (int e = 0; e < ground; ++e) prob *= ((s >> e) & 1u) ? p[e] : 1 - p[e];
    total += prob * table[s];
  }
  return total;
}

// Random bounded LP: at most 6 variables and 6 constraints. The first row
// caps a positive combination of every variable so the region is bounded;
// the rest mix relations and may make it infeasible.
inline LpProblem RandomSmallLp(Rng& rng) {
  const int n = rng.UniformInt(1, 6);
  const int m = rng.UniformInt(1, 6);
  LpProblem lp(n);
  for (int v = 0; v < n; ++v) {
    lp.SetObjective(v, std::round(rng.Uniform(-1.0, 3.0) * 4.0) / 4.0);
  }
  std::vector<double> cap(n);
  for (double& a : cap) a = rng.Uniform(0.2, 2.0);
  lp.AddConstraint(cap, Relation::kLessEqual, rng.Uniform(1.0, 5.0));
  for (int c = 1; c < m; ++c) {
    std::vector<double> a(n);
    for (double& v : a) v = std::round(rng.Uniform(-1.0, 2.0) * 4.0) / 4.0;
    const double u = rng.Uniform();
    const Relation rel = u < 0.6   ? Relation::kLessEqual
                         : u < 0.85 ? Relation::kGreaterEqual
                                    : Relation::kEqual;
    lp.AddConstraint(a, rel, std::round(rng.Uniform(-0.5, 3.0) * 4.0) / 4.0);
  }
  return lp;
}

// Random directed network on 2 to 8 nodes; node 0 is the source and the last
// node the sink.
inline FlowNetwork RandomSmallNetwork(Rng& rng) {
  const int n = rng.UniformInt(2, 8);
  FlowNetwork net(n, 0, n - 1);
  for (int u = 0; u < n; ++u) {
    for (int v = 0; v < n; ++v) {
      if (u != v && rng.Bernoulli(0.35)) {
        net.AddEdge(u, v, rng.Bernoulli(0.1) ? 0.0 : rng.Uniform(0.0, 1.0));
      }
    }
  }
  return net;
}

inline double Mean(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / v.size();
}

inline double StdErr(const std::vector<double>& v) {
  const double m = Mean(v);
  double ss = 0.0;
  for (double a : v) ss += (a - m) * (a - m);
  return std::sqrt(ss / (v.size() - 1) / v.size());
}

}  // namespace seqsub::testing

#endif  // SEQSUB_TESTS_TEST_UTIL_H_
