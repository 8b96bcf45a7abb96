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

// Dense fixed-size multiply kernels for the shapes the estimator actually
// uses (3x3, 6x3, 3x6, 6x6, row-major, tightly packed doubles).
//
// Two backends: a scalar reference implementation, always present, and an
// AVX2/FMA variant on x86-64 selected at runtime via cpuid. The scalar
// kernels are the semantic reference; the AVX2 kernels are equivalence-
// tested against them. Set AIRMHE_FORCE_SCALAR=1 in the environment (or
// call set_backend) to pin the scalar path.

namespace airmhe::kernels {

enum class Backend { kScalar, kAvx2 };

struct KernelTable {
  // C(3x3) = A(3x3) * B(3x3)
  void (*mul_33)(const double* a, const double* b, double* c);
  // C(3x6) = A(3x3) * B(3x6)
  void (*mul_33_36)(const double* a, const double* b, double* c);
  // C(6x3) = A(6x3) * B(3x3)
  void (*mul_63_33)(const double* a, const double* b, double* c);
  // C(6x6) = A(6x3) * B(6x3)^T
  void (*mul_63_63t)(const double* a, const double* b, double* c);
  // C(3x6) = A(6x3)^T * B(6x6)
  void (*mul_63t_66)(const double* a, const double* b, double* c);
  // C(3x3) = A(3x6) * B(6x3)
  void (*mul_36_63)(const double* a, const double* b, double* c);
  // S(3x3) = A(3x3) * P(3x3, symmetric) * A^T, symmetric by construction
  void (*sandwich_33)(const double* a, const double* p, double* s);
  const char* name;
};

const KernelTable& scalar_table();

// Null when the build or the running CPU lacks AVX2+FMA.
const KernelTable* avx2_table();

// Active table. Resolved once (cpuid + AIRMHE_FORCE_SCALAR) on first use.
const KernelTable& active();

Backend backend();
void set_backend(Backend b);  // throws if the backend is unavailable

}  // namespace airmhe::kernels
