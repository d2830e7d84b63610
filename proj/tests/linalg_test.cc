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

#include "friendlycore/linalg.h"

#include <cmath>

#include "friendlycore/random_source.h"
#include "gtest/gtest.h"

namespace friendlycore {
namespace {

Matrix RandomSymmetric(size_t d, RandomSource& rng) {
  Matrix m(d);
  for (size_t i = 0; i < d; ++i) {
    for (size_t j = i; j < d; ++j) m(i, j) = m(j, i) = rng.StandardNormal();
  }
  return m;
}

TEST(SymEigenTest, Identity) {
  const EigenDecomposition eig = *SymEigen(Matrix::Identity(4));
  for (double v : eig.values) EXPECT_DOUBLE_EQ(v, 1.0);
}

TEST(SymEigenTest, DiagonalAxes) {
  const Matrix m = *Matrix::FromRows({{1.0, 0.0}, {0.0, 3.0}});
  const EigenDecomposition eig = *SymEigen(m);
  EXPECT_DOUBLE_EQ(eig.values[0], 3.0);
  EXPECT_DOUBLE_EQ(eig.values[1], 1.0);
  EXPECT_DOUBLE_EQ(std::abs(eig.vectors(1, 0)), 1.0);
  EXPECT_DOUBLE_EQ(eig.vectors(0, 0), 0.0);
  EXPECT_DOUBLE_EQ(std::abs(eig.vectors(0, 1)), 1.0);
}

TEST(SymEigenTest, RandomReconstruction) {
  RandomSource rng(1);
  for (size_t d : {1, 2, 5, 5, 5, 12, 30}) {
    const Matrix m = RandomSymmetric(d, rng);
    const EigenDecomposition eig = *SymEigen(m);
    for (size_t i = 1; i < d; ++i) EXPECT_GE(eig.values[i - 1], eig.values[i]);
    const double err = Subtract(Reconstruct(eig), m).FrobeniusNorm();
    EXPECT_LE(err, 1e-8 * (1.0 + m.FrobeniusNorm()));
    const Matrix gram = Multiply(Transpose(eig.vectors), eig.vectors);
    EXPECT_LE(Subtract(gram, Matrix::Identity(d)).MaxAbs(), 1e-10);
  }
}

TEST(SymEigenTest, RejectsNonSymmetric) {
  const Matrix m = *Matrix::FromRows({{1.0, 2.0}, {0.0, 1.0}});
  EXPECT_FALSE(IsSymmetric(m));
  EXPECT_FALSE(SymEigen(m).ok());
  EXPECT_FALSE(Matrix::FromRows({{1.0, 2.0}}).ok());
}

TEST(SqrtPsdTest, SquaresBack) {
  RandomSource rng(2);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix a = RandomSymmetric(6, rng);
    const Matrix psd = Multiply(a, Transpose(a));
    const Matrix root = *SqrtPsd(psd);
    EXPECT_TRUE(IsSymmetric(root));
    EXPECT_LE(Subtract(Multiply(root, root), psd).FrobeniusNorm(),
              1e-8 * (1.0 + psd.FrobeniusNorm()));
  }
}

TEST(SqrtPsdTest, ClampsTinyNegativeEigenvalues) {
  const Matrix m = *Matrix::FromRows({{4.0, 0.0}, {0.0, -1e-14}});
  const Matrix root = *SqrtPsd(m);
  EXPECT_DOUBLE_EQ(root(0, 0), 2.0);
  EXPECT_DOUBLE_EQ(root(1, 1), 0.0);
}

TEST(MatrixTest, Arithmetic) {
  const Matrix a = *Matrix::FromRows({{1.0, 2.0}, {3.0, 4.0}});
  const Matrix b = *Matrix::FromRows({{0.0, 1.0}, {1.0, 0.0}});
  EXPECT_EQ(Multiply(a, b), *Matrix::FromRows({{2.0, 1.0}, {4.0, 3.0}}));
  EXPECT_EQ(Transpose(a), *Matrix::FromRows({{1.0, 3.0}, {2.0, 4.0}}));
  EXPECT_EQ(Symmetrize(a), *Matrix::FromRows({{1.0, 2.5}, {2.5, 4.0}}));
  EXPECT_EQ(Scale(b, 2.0), Add(b, b));
  EXPECT_DOUBLE_EQ(a.FrobeniusNorm(), std::sqrt(30.0));
  EXPECT_DOUBLE_EQ(a.MaxAbs(), 4.0);
  EXPECT_EQ(a.ToRows()[1][0], 3.0);
}

}  // namespace
}  // namespace friendlycore
