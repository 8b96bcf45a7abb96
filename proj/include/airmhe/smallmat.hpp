// Copyright 2026 The airmhe Authors
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

#pragma once

// Fixed-size dense linear algebra sized for the estimator: 3- and 6-
// dimensional vectors and matrices, analytic adjugate 3x3 inversion and
// the 2x2-block inversion of 6x6 matrices built on top of it. All storage
// is row-major std::array; no kernel allocates.

#include <array>
#include <cstddef>

#include "airmhe/kernels.hpp"

namespace airmhe {

template <int N>
struct Vec {
  std::array<double, N> a{};

  double& operator[](int i) { return a[static_cast<size_t>(i)]; }
  double operator[](int i) const { return a[static_cast<size_t>(i)]; }
  double* data() { return a.data(); }
  const double* data() const { return a.data(); }
  static constexpr int size() { return N; }

  Vec& operator+=(const Vec& o) {
    for (int i = 0; i < N; ++i) a[i] += o.a[i];
    return *this;
  }
  Vec& operator-=(const Vec& o) {
    for (int i = 0; i < N; ++i) a[i] -= o.a[i];
    return *this;
  }
  Vec& operator*=(double s) {
    for (int i = 0; i < N; ++i) a[i] *= s;
    return *this;
  }
  friend Vec operator+(Vec x, const Vec& y) { return x += y; }
  friend Vec operator-(Vec x, const Vec& y) { return x -= y; }
  friend Vec operator*(double s, Vec x) { return x *= s; }
  friend Vec operator-(Vec x) {
    for (int i = 0; i < N; ++i) x.a[i] = -x.a[i];
    return x;
  }
};

using Vec3 = Vec<3>;
using Vec6 = Vec<6>;

template <int R, int C>
struct Mat {
  std::array<double, static_cast<size_t>(R) * C> a{};

  double& operator()(int r, int c) { return a[static_cast<size_t>(r) * C + c]; }
  double operator()(int r, int c) const {
    return a[static_cast<size_t>(r) * C + c];
  }
  double* data() { return a.data(); }
  const double* data() const { return a.data(); }
  static constexpr int rows() { return R; }
  static constexpr int cols() { return C; }

  static Mat zero() { return Mat{}; }
  static Mat identity() {
    static_assert(R == C);
    Mat m{};
    for (int i = 0; i < R; ++i) m(i, i) = 1.0;
    return m;
  }
  static Mat diag(const Vec<R>& d) {
    static_assert(R == C);
    Mat m{};
    for (int i = 0; i < R; ++i) m(i, i) = d[i];
    return m;
  }

  Mat<C, R> transposed() const {
    Mat<C, R> t;
    for (int r = 0; r < R; ++r)
      for (int c = 0; c < C; ++c) t(c, r) = (*this)(r, c);
    return t;
  }

  Mat& operator+=(const Mat& o) {
    for (size_t i = 0; i < a.size(); ++i) a[i] += o.a[i];
    return *this;
  }
  Mat& operator-=(const Mat& o) {
    for (size_t i = 0; i < a.size(); ++i) a[i] -= o.a[i];
    return *this;
  }
  Mat& operator*=(double s) {
    for (size_t i = 0; i < a.size(); ++i) a[i] *= s;
    return *this;
  }
  friend Mat operator+(Mat x, const Mat& y) { return x += y; }
  friend Mat operator-(Mat x, const Mat& y) { return x -= y; }
  friend Mat operator*(double s, Mat x) { return x *= s; }
};

using Mat3 = Mat<3, 3>;
using Mat6 = Mat<6, 6>;
using Mat63 = Mat<6, 3>;
using Mat36 = Mat<3, 6>;

// ---------------------------------------------------------------------------
// Multiplies. Hot shapes route through the dispatched kernel table; anything
// else falls back to the generic triple loop.
// ---------------------------------------------------------------------------

template <int R, int K, int C>
Mat<R, C> matmul_generic(const Mat<R, K>& x, const Mat<K, C>& y) {
  Mat<R, C> out;
  for (int r = 0; r < R; ++r) {
    for (int c = 0; c < C; ++c) {
      double s = 0.0;
      for (int k = 0; k < K; ++k) s += x(r, k) * y(k, c);
      out(r, c) = s;
    }
  }
  return out;
}

template <int R, int K, int C>
Mat<R, C> operator*(const Mat<R, K>& x, const Mat<K, C>& y) {
  Mat<R, C> out;
  if constexpr (R == 3 && K == 3 && C == 3) {
    kernels::active().mul_33(x.data(), y.data(), out.data());
  } else if constexpr (R == 3 && K == 3 && C == 6) {
    kernels::active().mul_33_36(x.data(), y.data(), out.data());
  } else if constexpr (R == 6 && K == 3 && C == 3) {
    kernels::active().mul_63_33(x.data(), y.data(), out.data());
  } else if constexpr (R == 3 && K == 6 && C == 3) {
    kernels::active().mul_36_63(x.data(), y.data(), out.data());
  } else {
    out = matmul_generic(x, y);
  }
  return out;
}

// C(6x6) = A(6x3) * B(6x3)^T
inline Mat6 mul_nt(const Mat63& x, const Mat63& y) {
  Mat6 out;
  kernels::active().mul_63_63t(x.data(), y.data(), out.data());
  return out;
}

// C(3x6) = A(6x3)^T * B(6x6)
inline Mat36 mul_tn(const Mat63& x, const Mat6& y) {
  Mat36 out;
  kernels::active().mul_63t_66(x.data(), y.data(), out.data());
  return out;
}

template <int R, int C>
Vec<R> operator*(const Mat<R, C>& m, const Vec<C>& v) {
  Vec<R> out;
  for (int r = 0; r < R; ++r) {
    double s = 0.0;
    for (int c = 0; c < C; ++c) s += m(r, c) * v[c];
    out[r] = s;
  }
  return out;
}

// y = M^T v without forming the transpose
template <int R, int C>
Vec<C> mulv_t(const Mat<R, C>& m, const Vec<R>& v) {
  Vec<C> out;
  for (int c = 0; c < C; ++c) {
    double s = 0.0;
    for (int r = 0; r < R; ++r) s += m(r, c) * v[r];
    out[c] = s;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Inversion and symmetric products
// ---------------------------------------------------------------------------

double det3(const Mat3& m);

/// Analytic adjugate inverse. Throws SingularMatrixError when |det| falls
/// below delta_det scaled by the cube of the max-row norm.
Mat3 inv3(const Mat3& m, double delta_det = 1e-12);

/// 6x6 inverse through the 2x2-grid-of-3x3-blocks formula: two inv3 calls
/// (leading block and its Schur complement) plus 3x3 multiplies.
Mat6 inv6_block(const Mat6& m, double delta_det = 1e-12);

/// A * P * A^T for symmetric P; the result is symmetric by construction
/// (lower triangle computed, upper mirrored).
Mat3 sym_sandwich(const Mat3& a, const Mat3& p);

}  // namespace airmhe
