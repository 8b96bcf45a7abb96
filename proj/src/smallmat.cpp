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

#include "airmhe/smallmat.hpp"

#include <cmath>

#include "airmhe/errors.hpp"

namespace airmhe {
namespace {

// Unit-free determinant scale: the product of row inf-norms. By Hadamard's
// bound |det| never exceeds the product of row 2-norms, so det/scale is a
// conditioning measure that stays meaningful when rows carry different
// units or magnitudes.
double det_scale(const Mat3& m) {
  double prod = 1.0;
  for (int r = 0; r < 3; ++r) {
    double row = 0.0;
    for (int c = 0; c < 3; ++c) row = std::max(row, std::abs(m(r, c)));
    prod *= row;
  }
  return prod;
}

}  // namespace

double det3(const Mat3& m) {
  return m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) -
         m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
         m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
}

Mat3 inv3(const Mat3& m, double delta_det) {
  const double d = det3(m);
  if (std::abs(d) <= delta_det * det_scale(m) || d == 0.0)
    throw SingularMatrixError("inv3: matrix is numerically singular", d);

  const double r = 1.0 / d;
  Mat3 out;
  out(0, 0) = r * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1));
  out(0, 1) = r * (m(0, 2) * m(2, 1) - m(0, 1) * m(2, 2));
  out(0, 2) = r * (m(0, 1) * m(1, 2) - m(0, 2) * m(1, 1));
  out(1, 0) = r * (m(1, 2) * m(2, 0) - m(1, 0) * m(2, 2));
  out(1, 1) = r * (m(0, 0) * m(2, 2) - m(0, 2) * m(2, 0));
  out(1, 2) = r * (m(0, 2) * m(1, 0) - m(0, 0) * m(1, 2));
  out(2, 0) = r * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
  out(2, 1) = r * (m(0, 1) * m(2, 0) - m(0, 0) * m(2, 1));
  out(2, 2) = r * (m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0));
  return out;
}

namespace {

Mat3 block_of(const Mat6& m, int r0, int c0) {
  Mat3 b;
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) b(r, c) = m(r0 + r, c0 + c);
  return b;
}

void put_block(Mat6& m, int r0, int c0, const Mat3& b) {
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) m(r0 + r, c0 + c) = b(r, c);
}

}  // namespace

Mat6 inv6_block(const Mat6& m, double delta_det) {
  const Mat3 a = block_of(m, 0, 0);
  const Mat3 b = block_of(m, 0, 3);
  const Mat3 c = block_of(m, 3, 0);
  const Mat3 d = block_of(m, 3, 3);

  Mat3 a_inv;
  try {
    a_inv = inv3(a, delta_det);
  } catch (const SingularMatrixError& e) {
    throw SingularMatrixError("inv6_block: leading 3x3 block singular",
                              e.det());
  }

  const Mat3 t1 = a_inv * b;       // A^-1 B
  const Mat3 t2 = c * a_inv;       // C A^-1
  const Mat3 schur = d - c * t1;   // D - C A^-1 B

  Mat3 s_inv;
  try {
    s_inv = inv3(schur, delta_det);
  } catch (const SingularMatrixError& e) {
    throw SingularMatrixError("inv6_block: Schur complement singular",
                              e.det());
  }

  Mat6 out;
  const Mat3 t1_sinv = t1 * s_inv;
  put_block(out, 0, 0, a_inv + t1_sinv * t2);
  put_block(out, 0, 3, -1.0 * t1_sinv);
  put_block(out, 3, 0, -1.0 * (s_inv * t2));
  put_block(out, 3, 3, s_inv);
  return out;
}

Mat3 sym_sandwich(const Mat3& a, const Mat3& p) {
  Mat3 out;
  kernels::active().sandwich_33(a.data(), p.data(), out.data());
  return out;
}

}  // namespace airmhe
