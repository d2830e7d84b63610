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

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"

namespace friendlycore {
namespace {

constexpr int kMaxSweeps = 100;

double ClampedSqrt(double x) { return std::sqrt(std::max(0.0, x)); }

}  // namespace

Matrix Matrix::Identity(size_t dim) {
  Matrix m(dim);
  for (size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
  return m;
}

absl::StatusOr<Matrix> Matrix::FromRows(
    const std::vector<std::vector<double>>& rows) {
  Matrix m(rows.size());
  for (size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows.size()) {
      return absl::InvalidArgumentError("matrix must be square");
    }
    for (size_t j = 0; j < rows.size(); ++j) {
      if (!std::isfinite(rows[i][j])) {
        return absl::InvalidArgumentError("matrix has a non-finite entry");
      }
      m(i, j) = rows[i][j];
    }
  }
  return m;
}

std::vector<std::vector<double>> Matrix::ToRows() const {
  std::vector<std::vector<double>> rows(dim_, std::vector<double>(dim_));
  for (size_t i = 0; i < dim_; ++i) {
    for (size_t j = 0; j < dim_; ++j) rows[i][j] = (*this)(i, j);
  }
  return rows;
}

double Matrix::MaxAbs() const {
  double m = 0.0;
  for (double v : data_) m = std::max(m, std::fabs(v));
  return m;
}

double Matrix::FrobeniusNorm() const {
  double s = 0.0;
  for (double v : data_) s += v * v;
  return std::sqrt(s);
}

Matrix Multiply(const Matrix& a, const Matrix& b) {
  const size_t d = a.dim();
  Matrix out(d);
  for (size_t i = 0; i < d; ++i) {
    for (size_t l = 0; l < d; ++l) {
      const double ail = a(i, l);
      if (ail == 0.0) continue;
      for (size_t j = 0; j < d; ++j) out(i, j) += ail * b(l, j);
    }
  }
  return out;
}

Matrix Transpose(const Matrix& a) {
  Matrix out(a.dim());
  for (size_t i = 0; i < a.dim(); ++i) {
    for (size_t j = 0; j < a.dim(); ++j) out(j, i) = a(i, j);
  }
  return out;
}

Matrix Add(const Matrix& a, const Matrix& b) {
  Matrix out(a.dim());
  for (size_t i = 0; i < a.dim(); ++i) {
    for (size_t j = 0; j < a.dim(); ++j) out(i, j) = a(i, j) + b(i, j);
  }
  return out;
}

Matrix Subtract(const Matrix& a, const Matrix& b) {
  Matrix out(a.dim());
  for (size_t i = 0; i < a.dim(); ++i) {
    for (size_t j = 0; j < a.dim(); ++j) out(i, j) = a(i, j) - b(i, j);
  }
  return out;
}

Matrix Scale(const Matrix& a, double s) {
  Matrix out(a.dim());
  for (size_t i = 0; i < a.dim(); ++i) {
    for (size_t j = 0; j < a.dim(); ++j) out(i, j) = a(i, j) * s;
  }
  return out;
}

Matrix Symmetrize(const Matrix& a) {
  Matrix out(a.dim());
  for (size_t i = 0; i < a.dim(); ++i) {
    for (size_t j = 0; j < a.dim(); ++j) {
      out(i, j) = 0.5 * (a(i, j) + a(j, i));
    }
  }
  return out;
}

bool IsSymmetric(const Matrix& m) {
  double asym = 0.0;
  for (size_t i = 0; i < m.dim(); ++i) {
    for (size_t j = i + 1; j < m.dim(); ++j) {
      asym = std::max(asym, std::fabs(m(i, j) - m(j, i)));
    }
  }
  return asym <= 1e-12 * m.MaxAbs();
}

absl::StatusOr<EigenDecomposition> SymEigen(const Matrix& m) {
  if (!IsSymmetric(m))
    return absl::InvalidArgumentError("matrix not symmetric");
  const size_t d = m.dim();
  Matrix a = Symmetrize(m);
  Matrix v = Matrix::Identity(d);
  const double scale = std::max(a.FrobeniusNorm(), 1e-300);
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    double off = 0.0;
    for (size_t p = 0; p < d; ++p) {
      for (size_t q = p + 1; q < d; ++q) off += a(p, q) * a(p, q);
    }
    if (std::sqrt(off) <= 1e-15 * scale) break;
    for (size_t p = 0; p < d; ++p) {
      for (size_t q = p + 1; q < d; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (size_t k = 0; k < d; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (size_t k = 0; k < d; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        for (size_t k = 0; k < d; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }
  std::vector<size_t> order(d);
  std::iota(order.begin(), order.end(), size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&a](size_t x, size_t y) { return a(x, x) > a(y, y); });
  EigenDecomposition eig;
  eig.values.resize(d);
  eig.vectors = Matrix(d);
  for (size_t c = 0; c < d; ++c) {
    eig.values[c] = a(order[c], order[c]);
    for (size_t r = 0; r < d; ++r) eig.vectors(r, c) = v(r, order[c]);
  }
  return eig;
}

Matrix ApplySpectral(const EigenDecomposition& eig, double (*f)(double)) {
  const size_t d = eig.values.size();
  Matrix out(d);
  for (size_t c = 0; c < d; ++c) {
    const double fv = f(eig.values[c]);
    for (size_t i = 0; i < d; ++i) {
      const double vi = eig.vectors(i, c) * fv;
      for (size_t j = 0; j < d; ++j) out(i, j) += vi * eig.vectors(j, c);
    }
  }
  return Symmetrize(out);
}

Matrix Reconstruct(const EigenDecomposition& eig) {
  return ApplySpectral(eig, [](double x) { return x; });
}

absl::StatusOr<Matrix> SqrtPsd(const Matrix& m) {
  absl::StatusOr<EigenDecomposition> eig = SymEigen(m);
  if (!eig.ok()) return eig.status();
  return ApplySpectral(*eig, ClampedSqrt);
}

}  // namespace friendlycore
