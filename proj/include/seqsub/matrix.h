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

#ifndef SEQSUB_MATRIX_H_
#define SEQSUB_MATRIX_H_

#include <cstddef>
#include <span>
#include <vector>

namespace seqsub {

// Row-major n x n matrix of doubles. Row index = position, column = product
// wherever it holds position/product data.
class SquareMatrix {
 public:
  SquareMatrix() = default;
  explicit SquareMatrix(int n, double fill = 0.0)
      : n_(n), data_(static_cast<std::size_t>(n) * n, fill) {}

  int n() const { return n_; }

  double& operator()(int i, int j) { return data_[Index(i, j)]; }
  double operator()(int i, int j) const { return data_[Index(i, j)]; }

  std::span<const double> row(int i) const {
    return {data_.data() + static_cast<std::size_t>(i) * n_,
            static_cast<std::size_t>(n_)};
  }

  std::span<const double> flat() const { return data_; }
  std::span<double> flat() { return data_; }

  double RowSum(int i) const {
    double s = 0.0;
    for (double v : row(i)) s += v;
    return s;
  }

  double ColumnSum(int j) const {
    double s = 0.0;
    for (int i = 0; i < n_; ++i) s += (*this)(i, j);
    return s;
  }

  bool operator==(const SquareMatrix&) const = default;

 private:
  std::size_t Index(int i, int j) const {
    return static_cast<std::size_t>(i) * n_ + j;
  }

  int n_ = 0;
  std::vector<double> data_;
};

}  // namespace seqsub

#endif  // SEQSUB_MATRIX_H_
