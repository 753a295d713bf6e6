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

// Dense two-phase tableau simplex: Dantzig pricing, lexicographic ratio test.
//
// Solves   maximize c.x   subject to   A x {<=, >=, =} b,  x >= 0.
//
// Rows with negative right-hand side are negated on entry. Phase one
// minimizes the sum of artificial variables; artificials left in the basis at
// zero level are pivoted out, or the row is marked redundant when no
// structural column can replace them. Phase two optimizes the true objective
// with artificial columns barred from entering. Pivots are deterministic.

#ifndef SEQSUB_NUMERICS_SIMPLEX_H_
#define SEQSUB_NUMERICS_SIMPLEX_H_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "seqsub/error.h"

namespace seqsub {

enum class Relation { kLessEqual, kGreaterEqual, kEqual };

struct LpConstraint {
  std::vector<double> coefficients;  // dense, one per variable
  Relation relation;
  double rhs;
};

class LpProblem {
 public:
  explicit LpProblem(int num_vars) : objective_(num_vars, 0.0) {}

  int num_vars() const { return static_cast<int>(objective_.size()); }
  int num_constraints() const { return static_cast<int>(constraints_.size()); }

  void SetObjective(int var, double coefficient) {
    objective_.at(var) = coefficient;
  }

  int AddConstraint(std::vector<double> coefficients, Relation relation,
                    double rhs) {
    if (coefficients.size() != objective_.size()) {
      throw Error(ErrorCode::kDimensionMismatch, "numerics",
                  "constraint width differs from variable count");
    }
    for (double a : coefficients) CheckFinite(a);
    CheckFinite(rhs);
    constraints_.push_back({std::move(coefficients), relation, rhs});
    return num_constraints() - 1;
  }

  int AddSparseConstraint(const std::vector<std::pair<int, double>>& terms,
                          Relation relation, double rhs) {
    std::vector<double> row(objective_.size(), 0.0);
    for (const auto& [var, a] : terms) row.at(var) += a;
    return AddConstraint(std::move(row), relation, rhs);
  }

  const std::vector<double>& objective() const { return objective_; }
  const std::vector<LpConstraint>& constraints() const { return constraints_; }

 private:
  static void CheckFinite(double v) {
    if (!std::isfinite(v)) {
      throw Error(ErrorCode::kInvalidArgument, "numerics",
                  "LP coefficients must be finite");
    }
  }

  std::vector<double> objective_;
  std::vector<LpConstraint> constraints_;
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded };

struct LpSolution {
  LpStatus status = LpStatus::kInfeasible;
  double value = 0.0;
  std::vector<double> x;
  // Shadow price per original constraint (change of the optimum per unit
  // increase of that row's right-hand side).
  std::vector<double> duals;
  int pivots = 0;
};

struct SimplexOptions {
  double tolerance = 1e-9;
  // Smallest entry accepted as a pivot.
  double pivot_tolerance = 1e-7;
  double feasibility_tolerance = 1e-7;
  long max_pivots = 5'000'000;
};

namespace internal_simplex {

class Tableau {
 public:
  Tableau(const LpProblem& problem, const SimplexOptions& options)
      : problem_(problem), options_(options) {
    const auto& rows = problem.constraints();
    m_ = static_cast<int>(rows.size());
    n_ = problem.num_vars();
    sign_.assign(m_, 1.0);
    std::vector<Relation> rel(m_);
    int slack_count = 0;
    int art_count = 0;
    for (int r = 0; r < m_; ++r) {
      rel[r] = rows[r].relation;
      double scale = 0.0;
      for (double a : rows[r].coefficients) scale = std::max(scale, std::abs(a));
      if (scale > 0.0) sign_[r] = 1.0 / scale;
      if (rows[r].rhs < 0.0) {
        sign_[r] = -sign_[r];
        if (rel[r] == Relation::kLessEqual) {
          rel[r] = Relation::kGreaterEqual;
        } else if (rel[r] == Relation::kGreaterEqual) {
          rel[r] = Relation::kLessEqual;
        }
      }
      if (rel[r] != Relation::kEqual) ++slack_count;
      if (rel[r] != Relation::kLessEqual) ++art_count;
    }
    art_begin_ = n_ + slack_count;
    width_ = art_begin_ + art_count;
    a_.assign(static_cast<std::size_t>(m_) * width_, 0.0);
    rhs_.assign(m_, 0.0);
    basis_.assign(m_, -1);
    unit_col_.assign(m_, -1);
    int next_slack = n_;
    int next_art = art_begin_;
    for (int r = 0; r < m_; ++r) {
      for (int j = 0; j < n_; ++j) At(r, j) = sign_[r] * rows[r].coefficients[j];
      rhs_[r] = sign_[r] * rows[r].rhs;
      if (rel[r] == Relation::kLessEqual) {
        At(r, next_slack) = 1.0;
        basis_[r] = unit_col_[r] = next_slack++;
      } else {
        if (rel[r] == Relation::kGreaterEqual) At(r, next_slack++) = -1.0;
        At(r, next_art) = 1.0;
        basis_[r] = unit_col_[r] = next_art++;
      }
    }
    cost_.assign(width_, 0.0);
    obj_.assign(width_, 0.0);
    dead_col_.assign(width_, false);
    a0_ = a_;
    rhs0_ = rhs_;
  }

  LpSolution Solve() {
    LpSolution out;
    // Phase one: maximize -(sum of artificials).
    if (width_ > art_begin_) {
      std::fill(cost_.begin(), cost_.end(), 0.0);
      for (int j = art_begin_; j < width_; ++j) cost_[j] = -1.0;
      PriceOut();
      if (!Iterate(/*allow_artificial=*/true)) {
        throw Error(ErrorCode::kInternal, "numerics",
                    "phase one reported unbounded");
      }
      if (obj_value_ < -options_.feasibility_tolerance) {
        out.status = LpStatus::kInfeasible;
        out.pivots = pivots_;
        return out;
      }
      DriveOutArtificials();
    }
    std::fill(cost_.begin(), cost_.end(), 0.0);
    for (int j = 0; j < n_; ++j) cost_[j] = problem_.objective()[j];
    PriceOut();
    if (!Iterate(/*allow_artificial=*/false)) {
      out.status = LpStatus::kUnbounded;
      out.pivots = pivots_;
      return out;
    }
    out.status = LpStatus::kOptimal;
    out.x.assign(n_, 0.0);
    for (int r = 0; r < m_; ++r) {
      if (basis_[r] < n_) out.x[basis_[r]] = std::max(0.0, rhs_[r]);
    }
    out.value = 0.0;
    for (int j = 0; j < n_; ++j) out.value += problem_.objective()[j] * out.x[j];
    out.duals.assign(m_, 0.0);
    for (int r = 0; r < m_; ++r) {
      out.duals[r] = sign_[r] * (obj_[unit_col_[r]] + cost_[unit_col_[r]]);
    }
    out.pivots = pivots_;
    VerifyPrimal(out.x);
    return out;
  }

 private:
  static constexpr int kReinvertEvery = 50;
  static constexpr double kDriftTolerance = 1e-11;
  // Pivots below this are recomputed from a fresh factorization first.
  static constexpr double kSmallPivot = 1e-5;

  double& At(int r, int j) {
    return a_[static_cast<std::size_t>(r) * width_ + j];
  }
  double At(int r, int j) const {
    return a_[static_cast<std::size_t>(r) * width_ + j];
  }

  // obj_[j] = c_B B^-1 A_j - c_j; obj_value_ = c_B B^-1 b.
  void PriceOut() {
    for (int j = 0; j < width_; ++j) obj_[j] = -cost_[j];
    obj_value_ = 0.0;
    for (int r = 0; r < m_; ++r) {
      const double cb = cost_[basis_[r]];
      if (cb == 0.0) continue;
      const double* row = &a_[static_cast<std::size_t>(r) * width_];
      for (int j = 0; j < width_; ++j) obj_[j] += cb * row[j];
      obj_value_ += cb * rhs_[r];
    }
  }

  // Returns false when the objective is unbounded. Dantzig pricing with the
  // lexicographic ratio test, which rules out cycling.
  bool Iterate(bool allow_artificial) {
    const double tol = options_.tolerance;
    const double piv = options_.pivot_tolerance;
    const int limit = allow_artificial ? width_ : art_begin_;
    std::vector<int> ties;
    while (true) {
      int enter = -1;
      double most_negative = -tol;
      for (int j = 0; j < limit; ++j) {
        if (obj_[j] < most_negative) {
          enter = j;
          most_negative = obj_[j];
        }
      }
      if (enter < 0) return true;
      double best_ratio = std::numeric_limits<double>::infinity();
      for (int r = 0; r < m_; ++r) {
        if (dead_col_[basis_[r]]) continue;
        const double a = At(r, enter);
        if (a > piv) best_ratio = std::min(best_ratio, std::max(0.0, rhs_[r]) / a);
      }
      ties.clear();
      for (int r = 0; r < m_; ++r) {
        if (dead_col_[basis_[r]]) continue;
        const double a = At(r, enter);
        if (a <= piv) continue;
        const double ratio = std::max(0.0, rhs_[r]) / a;
        if (ratio <= best_ratio + 1e-12 * std::max(1.0, best_ratio)) {
          ties.push_back(r);
        }
      }
      if (ties.empty()) {
        if (fresh_) return false;
        Reinvert();
        continue;
      }
      const int leave = LexMinRow(ties, enter);
      if (At(leave, enter) < kSmallPivot && !fresh_) {
        Reinvert();
        continue;
      }
      Pivot(leave, enter);
      ++pivots_;
      if (drifted_ || pivots_ % kReinvertEvery == 0) Reinvert();
      if (pivots_ > options_.max_pivots) {
        throw Error(ErrorCode::kNumericalInstability, "numerics",
                    "pivot limit exceeded");
      }
    }
  }

  // Row whose (B^-1 row) / pivot is lexicographically smallest, reading B^-1
  // from the columns that formed the starting identity basis.
  int LexMinRow(const std::vector<int>& rows, int enter) const {
    int best = rows[0];
    for (std::size_t t = 1; t < rows.size(); ++t) {
      const int r = rows[t];
      const double ar = At(r, enter);
      const double ab = At(best, enter);
      for (int k = 0; k < m_; ++k) {
        const double vr = At(r, unit_col_[k]) / ar;
        const double vb = At(best, unit_col_[k]) / ab;
        if (std::abs(vr - vb) <= 1e-12 * std::max(1.0, std::abs(vb))) continue;
        if (vr < vb) best = r;
        break;
      }
    }
    return best;
  }

  void Pivot(int pr, int pc) {
    const double p = At(pr, pc);
    if (std::abs(p) < options_.tolerance) {
      throw Error(ErrorCode::kNumericalInstability, "numerics",
                  "pivot element below tolerance");
    }
    double* prow = &a_[static_cast<std::size_t>(pr) * width_];
    const double inv = 1.0 / p;
    for (int j = 0; j < width_; ++j) prow[j] *= inv;
    rhs_[pr] *= inv;
    prow[pc] = 1.0;
    std::vector<int> nz;
    nz.reserve(width_);
    for (int j = 0; j < width_; ++j) {
      if (prow[j] != 0.0) nz.push_back(j);
    }
    for (int r = 0; r < m_; ++r) {
      if (r == pr) continue;
      double* row = &a_[static_cast<std::size_t>(r) * width_];
      const double factor = row[pc];
      if (factor == 0.0) continue;
      for (int j : nz) row[j] -= factor * prow[j];
      row[pc] = 0.0;
      rhs_[r] -= factor * rhs_[pr];
      if (rhs_[r] < 0.0) {
        if (rhs_[r] < -kDriftTolerance) drifted_ = true;
        rhs_[r] = 0.0;
      }
    }
    const double factor = obj_[pc];
    if (factor != 0.0) {
      for (int j : nz) obj_[j] -= factor * prow[j];
      obj_[pc] = 0.0;
      obj_value_ -= factor * rhs_[pr];
    }
    basis_[pr] = pc;
    fresh_ = false;
  }

  void DriveOutArtificials() {
    for (int r = 0; r < m_; ++r) {
      if (basis_[r] < art_begin_) continue;
      int col = -1;
      for (int j = 0; j < art_begin_; ++j) {
        if (std::abs(At(r, j)) > options_.pivot_tolerance) {
          col = j;
          break;
        }
      }
      if (col >= 0) {
        rhs_[r] = 0.0;
        Pivot(r, col);
      } else {
        dead_col_[basis_[r]] = true;
        for (int j = 0; j < art_begin_; ++j) At(r, j) = 0.0;
        rhs_[r] = 0.0;
      }
    }
  }

  // Rebuilds the tableau for the current basis from the original rows by
  // Gauss-Jordan elimination with partial pivoting, discarding the rounding
  // error accumulated by successive pivots.
  void Reinvert() {
    drifted_ = false;
    std::vector<double> a = a0_;
    std::vector<double> rhs = rhs0_;
    std::vector<int> basis(m_, -1);
    std::vector<int> columns = basis_;
    for (int c : columns) {
      int best = -1;
      double best_abs = 0.0;
      for (int r = 0; r < m_; ++r) {
        if (basis[r] >= 0) continue;
        const double v = std::abs(a[static_cast<std::size_t>(r) * width_ + c]);
        if (v > best_abs) {
          best = r;
          best_abs = v;
        }
      }
      if (best < 0 || best_abs < 1e-12) {
        throw Error(ErrorCode::kNumericalInstability, "numerics",
                    "basis became singular");
      }
      double* prow = &a[static_cast<std::size_t>(best) * width_];
      const double inv = 1.0 / prow[c];
      for (int j = 0; j < width_; ++j) prow[j] *= inv;
      rhs[best] *= inv;
      prow[c] = 1.0;
      for (int r = 0; r < m_; ++r) {
        if (r == best) continue;
        double* row = &a[static_cast<std::size_t>(r) * width_];
        const double factor = row[c];
        if (factor == 0.0) continue;
        for (int j = 0; j < width_; ++j) row[j] -= factor * prow[j];
        row[c] = 0.0;
        rhs[r] -= factor * rhs[best];
      }
      basis[best] = c;
    }
    a_ = std::move(a);
    rhs_ = std::move(rhs);
    basis_ = std::move(basis);
    for (int r = 0; r < m_; ++r) {
      if (dead_col_[basis_[r]]) {
        for (int j = 0; j < art_begin_; ++j) At(r, j) = 0.0;
        rhs_[r] = 0.0;
      }
      if (rhs_[r] < 0.0) {
        if (rhs_[r] < -options_.feasibility_tolerance) {
          throw Error(ErrorCode::kNumericalInstability, "numerics",
                      "basic variable negative after reinversion");
        }
        rhs_[r] = 0.0;
      }
    }
    PriceOut();
    fresh_ = true;
  }

  void VerifyPrimal(const std::vector<double>& x) const {
    for (const auto& row : problem_.constraints()) {
      double lhs = 0.0;
      double scale = std::max(1.0, std::abs(row.rhs));
      for (int j = 0; j < n_; ++j) {
        lhs += row.coefficients[j] * x[j];
        scale = std::max(scale, std::abs(row.coefficients[j] * x[j]));
      }
      const double slack = 1e-6 * scale;
      const bool ok =
          (row.relation == Relation::kLessEqual && lhs <= row.rhs + slack) ||
          (row.relation == Relation::kGreaterEqual && lhs >= row.rhs - slack) ||
          (row.relation == Relation::kEqual &&
           std::abs(lhs - row.rhs) <= slack);
      if (!ok) {
        throw Error(ErrorCode::kNumericalInstability, "numerics",
                    "optimal point violates a constraint by " +
                        std::to_string(std::abs(lhs - row.rhs)));
      }
    }
  }

  const LpProblem& problem_;
  SimplexOptions options_;
  int m_ = 0;
  int n_ = 0;
  int art_begin_ = 0;
  int width_ = 0;
  std::vector<double> a_;
  std::vector<double> rhs_;
  std::vector<int> basis_;
  std::vector<int> unit_col_;
  // Artificial columns left basic on redundant rows after phase one.
  std::vector<bool> dead_col_;
  std::vector<double> a0_;
  std::vector<double> rhs0_;
  bool drifted_ = false;
  bool fresh_ = true;
  std::vector<double> sign_;
  std::vector<double> cost_;
  std::vector<double> obj_;
  double obj_value_ = 0.0;
  int pivots_ = 0;
};

}  // namespace internal_simplex

inline LpSolution SimplexSolve(const LpProblem& problem,
                               const SimplexOptions& options = {}) {
  internal_simplex::Tableau tableau(problem, options);
  return tableau.Solve();
}

}  // namespace seqsub

#endif  // SEQSUB_NUMERICS_SIMPLEX_H_
