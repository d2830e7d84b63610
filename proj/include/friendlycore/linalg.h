//
// Copyright 2026 The FriendlyCore Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#ifndef FRIENDLYCORE_LINALG_H_
#define FRIENDLYCORE_LINALG_H_

#include <cstddef>
#include <vector>

#include "absl/status/statusor.h"

namespace friendlycore {

// Dense square matrix, row-major.
class Matrix {
 public:
  Matrix() = default;
  explicit Matrix(size_t dim) : dim_(dim), data_(dim * dim, 0.0) {}

  static Matrix Identity(size_t dim);
  static absl::StatusOr<Matrix> FromRows(
      const std::vector<std::vector<double>>& rows);

  size_t dim() const { return dim_; }
  double& operator()(size_t i, size_t j) { return data_[i * dim_ + j]; }
  double operator()(size_t i, size_t j) const { return data_[i * dim_ + j]; }
  const std::vector<double>& data() const { return data_; }

  std::vector<std::vector<double>> ToRows() const;
  double MaxAbs() const;
  double FrobeniusNorm() const;

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.dim_ == b.dim_ && a.data_ == b.data_;
  }

 private:
  size_t dim_ = 0;
  std::vector<double> data_;
};

// Symmetric matrices share the representation; operations that need
// symmetry check it.
using SymMatrix = Matrix;

Matrix Multiply(const Matrix& a, const Matrix& b);
Matrix Transpose(const Matrix& a);
Matrix Add(const Matrix& a, const Matrix& b);
Matrix Subtract(const Matrix& a, const Matrix& b);
Matrix Scale(const Matrix& a, double s);
// (A + A^T) / 2.
Matrix Symmetrize(const Matrix& a);

// ||M - M^T||_max <= 1e-12 ||M||_max.
bool IsSymmetric(const Matrix& m);

struct EigenDecomposition {
  std::vector<double> values;  // descending
  Matrix vectors;              // column i is the eigenvector of values[i]
};

// Cyclic Jacobi eigendecomposition of a symmetric matrix.
absl::StatusOr<EigenDecomposition> SymEigen(const Matrix& m);

// Q diag(f(lambda)) Q^T for the decomposition of a symmetric matrix.
Matrix Reconstruct(const EigenDecomposition& eig);
Matrix ApplySpectral(const EigenDecomposition& eig, double (*f)(double));

// Principal square root; eigenvalues below zero are clamped to zero.
absl::StatusOr<Matrix> SqrtPsd(const Matrix& m);

}  // namespace friendlycore

#endif  // FRIENDLYCORE_LINALG_H_
