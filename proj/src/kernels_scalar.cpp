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

// Scalar reference kernels. These define the semantics; the AVX2 variants
// must agree with them to rounding error.

#include "airmhe/kernels.hpp"

namespace airmhe::kernels {
namespace {

void mul_33(const double* a, const double* b, double* c) {
  for (int i = 0; i < 3; ++i) {
    const double a0 = a[3 * i], a1 = a[3 * i + 1], a2 = a[3 * i + 2];
    c[3 * i + 0] = a0 * b[0] + a1 * b[3] + a2 * b[6];
    c[3 * i + 1] = a0 * b[1] + a1 * b[4] + a2 * b[7];
    c[3 * i + 2] = a0 * b[2] + a1 * b[5] + a2 * b[8];
  }
}

void mul_33_36(const double* a, const double* b, double* c) {
  for (int i = 0; i < 3; ++i) {
    const double a0 = a[3 * i], a1 = a[3 * i + 1], a2 = a[3 * i + 2];
    for (int j = 0; j < 6; ++j)
      c[6 * i + j] = a0 * b[j] + a1 * b[6 + j] + a2 * b[12 + j];
  }
}

void mul_63_33(const double* a, const double* b, double* c) {
  for (int i = 0; i < 6; ++i) {
    const double a0 = a[3 * i], a1 = a[3 * i + 1], a2 = a[3 * i + 2];
    c[3 * i + 0] = a0 * b[0] + a1 * b[3] + a2 * b[6];
    c[3 * i + 1] = a0 * b[1] + a1 * b[4] + a2 * b[7];
    c[3 * i + 2] = a0 * b[2] + a1 * b[5] + a2 * b[8];
  }
}

void mul_63_63t(const double* a, const double* b, double* c) {
  for (int i = 0; i < 6; ++i) {
    for (int j = 0; j < 6; ++j) {
      c[6 * i + j] = a[3 * i] * b[3 * j] + a[3 * i + 1] * b[3 * j + 1] +
                     a[3 * i + 2] * b[3 * j + 2];
    }
  }
}

void mul_63t_66(const double* a, const double* b, double* c) {
  // C(3x6) = A(6x3)^T * B(6x6): row i of C accumulates A(k,i) * row k of B.
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 6; ++j) c[6 * i + j] = 0.0;
  for (int k = 0; k < 6; ++k) {
    for (int i = 0; i < 3; ++i) {
      const double aki = a[3 * k + i];
      for (int j = 0; j < 6; ++j) c[6 * i + j] += aki * b[6 * k + j];
    }
  }
}

void mul_36_63(const double* a, const double* b, double* c) {
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      double s = 0.0;
      for (int k = 0; k < 6; ++k) s += a[6 * i + k] * b[3 * k + j];
      c[3 * i + j] = s;
    }
  }
}

void sandwich_33(const double* a, const double* p, double* s) {
  // T = A * P, then S = T * A^T computing the lower triangle and mirroring.
  double t[9];
  mul_33(a, p, t);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j <= i; ++j) {
      const double v =
          t[3 * i] * a[3 * j] + t[3 * i + 1] * a[3 * j + 1] + t[3 * i + 2] * a[3 * j + 2];
      s[3 * i + j] = v;
      s[3 * j + i] = v;
    }
  }
}

}  // namespace

const KernelTable& scalar_table() {
  static const KernelTable table{mul_33,     mul_33_36, mul_63_33,
                                 mul_63_63t, mul_63t_66, mul_36_63,
                                 sandwich_33, "scalar"};
  return table;
}

}  // namespace airmhe::kernels
