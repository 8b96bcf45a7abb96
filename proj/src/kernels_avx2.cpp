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

// AVX2/FMA kernel variants. This translation unit is compiled with
// -mavx2 -mfma on x86-64; callers must consult avx2_table() (which checks
// cpuid) before dispatching here. Output arrays must not alias inputs.

#include "airmhe/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)
#define AIRMHE_HAVE_AVX2_BUILD 1
#include <immintrin.h>
#else
#define AIRMHE_HAVE_AVX2_BUILD 0
#endif

namespace airmhe::kernels {

#if AIRMHE_HAVE_AVX2_BUILD

namespace {

// Load/store masks for 3-wide rows (last lane dead).
inline __m256i mask3() { return _mm256_set_epi64x(0, -1, -1, -1); }

// Reads a 3-double row. Rows that are followed by in-bounds memory use a
// plain unaligned 4-wide load; the final row of an array must use the
// masked form to stay in bounds.
inline __m256d load3_over(const double* p) { return _mm256_loadu_pd(p); }
inline __m256d load3_masked(const double* p) {
  return _mm256_maskload_pd(p, mask3());
}

void mul_33(const double* a, const double* b, double* c) {
  const __m256d b0 = load3_over(b);
  const __m256d b1 = load3_over(b + 3);
  const __m256d b2 = load3_masked(b + 6);
  for (int i = 0; i < 3; ++i) {
    __m256d acc = _mm256_mul_pd(_mm256_set1_pd(a[3 * i]), b0);
    acc = _mm256_fmadd_pd(_mm256_set1_pd(a[3 * i + 1]), b1, acc);
    acc = _mm256_fmadd_pd(_mm256_set1_pd(a[3 * i + 2]), b2, acc);
    _mm256_maskstore_pd(c + 3 * i, mask3(), acc);
  }
}

void mul_63_33(const double* a, const double* b, double* c) {
  const __m256d b0 = load3_over(b);
  const __m256d b1 = load3_over(b + 3);
  const __m256d b2 = load3_masked(b + 6);
  for (int i = 0; i < 6; ++i) {
    __m256d acc = _mm256_mul_pd(_mm256_set1_pd(a[3 * i]), b0);
    acc = _mm256_fmadd_pd(_mm256_set1_pd(a[3 * i + 1]), b1, acc);
    acc = _mm256_fmadd_pd(_mm256_set1_pd(a[3 * i + 2]), b2, acc);
    _mm256_maskstore_pd(c + 3 * i, mask3(), acc);
  }
}

void mul_33_36(const double* a, const double* b, double* c) {
  __m256d blo[3];
  __m128d bhi[3];
  for (int k = 0; k < 3; ++k) {
    blo[k] = _mm256_loadu_pd(b + 6 * k);
    bhi[k] = _mm_loadu_pd(b + 6 * k + 4);
  }
  for (int i = 0; i < 3; ++i) {
    __m256d lo = _mm256_mul_pd(_mm256_set1_pd(a[3 * i]), blo[0]);
    __m128d hi = _mm_mul_pd(_mm_set1_pd(a[3 * i]), bhi[0]);
    for (int k = 1; k < 3; ++k) {
      lo = _mm256_fmadd_pd(_mm256_set1_pd(a[3 * i + k]), blo[k], lo);
      hi = _mm_fmadd_pd(_mm_set1_pd(a[3 * i + k]), bhi[k], hi);
    }
    _mm256_storeu_pd(c + 6 * i, lo);
    _mm_storeu_pd(c + 6 * i + 4, hi);
  }
}

void mul_63_63t(const double* a, const double* b, double* c) {
  // Transpose B into a 3x6 scratch, then accumulate 6-wide rows.
  double bt[18];
  for (int r = 0; r < 6; ++r)
    for (int k = 0; k < 3; ++k) bt[6 * k + r] = b[3 * r + k];
  __m256d blo[3];
  __m128d bhi[3];
  for (int k = 0; k < 3; ++k) {
    blo[k] = _mm256_loadu_pd(bt + 6 * k);
    bhi[k] = _mm_loadu_pd(bt + 6 * k + 4);
  }
  for (int i = 0; i < 6; ++i) {
    __m256d lo = _mm256_mul_pd(_mm256_set1_pd(a[3 * i]), blo[0]);
    __m128d hi = _mm_mul_pd(_mm_set1_pd(a[3 * i]), bhi[0]);
    for (int k = 1; k < 3; ++k) {
      lo = _mm256_fmadd_pd(_mm256_set1_pd(a[3 * i + k]), blo[k], lo);
      hi = _mm_fmadd_pd(_mm_set1_pd(a[3 * i + k]), bhi[k], hi);
    }
    _mm256_storeu_pd(c + 6 * i, lo);
    _mm_storeu_pd(c + 6 * i + 4, hi);
  }
}

void mul_63t_66(const double* a, const double* b, double* c) {
  __m256d lo[3];
  __m128d hi[3];
  for (int i = 0; i < 3; ++i) {
    lo[i] = _mm256_setzero_pd();
    hi[i] = _mm_setzero_pd();
  }
  for (int k = 0; k < 6; ++k) {
    const __m256d bk_lo = _mm256_loadu_pd(b + 6 * k);
    const __m128d bk_hi = _mm_loadu_pd(b + 6 * k + 4);
    for (int i = 0; i < 3; ++i) {
      lo[i] = _mm256_fmadd_pd(_mm256_set1_pd(a[3 * k + i]), bk_lo, lo[i]);
      hi[i] = _mm_fmadd_pd(_mm_set1_pd(a[3 * k + i]), bk_hi, hi[i]);
    }
  }
  for (int i = 0; i < 3; ++i) {
    _mm256_storeu_pd(c + 6 * i, lo[i]);
    _mm_storeu_pd(c + 6 * i + 4, hi[i]);
  }
}

void mul_36_63(const double* a, const double* b, double* c) {
  __m256d brow[6];
  for (int k = 0; k < 5; ++k) brow[k] = load3_over(b + 3 * k);
  brow[5] = load3_masked(b + 15);
  for (int i = 0; i < 3; ++i) {
    __m256d acc = _mm256_mul_pd(_mm256_set1_pd(a[6 * i]), brow[0]);
    for (int k = 1; k < 6; ++k)
      acc = _mm256_fmadd_pd(_mm256_set1_pd(a[6 * i + k]), brow[k], acc);
    _mm256_maskstore_pd(c + 3 * i, mask3(), acc);
  }
}

void sandwich_33(const double* a, const double* p, double* s) {
  double t[9];
  mul_33(a, p, t);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j <= i; ++j) {
      const double v = t[3 * i] * a[3 * j] + t[3 * i + 1] * a[3 * j + 1] +
                       t[3 * i + 2] * a[3 * j + 2];
      s[3 * i + j] = v;
      s[3 * j + i] = v;
    }
  }
}

bool cpu_has_avx2_fma() {
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
}

}  // namespace

const KernelTable* avx2_table() {
  if (!cpu_has_avx2_fma()) return nullptr;
  static const KernelTable table{mul_33,     mul_33_36,  mul_63_33,
                                 mul_63_63t, mul_63t_66, mul_36_63,
                                 sandwich_33, "avx2"};
  return &table;
}

#else  // !AIRMHE_HAVE_AVX2_BUILD

const KernelTable* avx2_table() { return nullptr; }

#endif

}  // namespace airmhe::kernels
