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

#include <doctest.h>

#include <cmath>

#include "airmhe/errors.hpp"
#include "airmhe/smallmat.hpp"
#include "dense_oracle.hpp"
#include "test_helpers.hpp"

using namespace airmhe;
using testutil::Rng;

namespace {

double residual_inf(const Mat3& m, const Mat3& m_inv) {
  return testutil::max_abs_diff(m * m_inv, Mat3::identity());
}

Mat6 mul6(const Mat6& x, const Mat6& y) { return matmul_generic(x, y); }

}  // namespace

TEST_CASE("inv3 identity and diagonal") {
  CHECK(testutil::max_abs_diff(inv3(Mat3::identity()), Mat3::identity()) ==
        0.0);
  const Mat3 d = Mat3::diag(Vec3{{2.0, 4.0, 5.0}});
  const Mat3 expect = Mat3::diag(Vec3{{0.5, 0.25, 0.2}});
  CHECK(testutil::max_abs_diff(inv3(d), expect) < 1e-15);
}

TEST_CASE("inv3 residual on random well-conditioned matrices") {
  Rng rng(11);
  for (int t = 0; t < 2000; ++t) {
    Mat3 m = testutil::random_mat<3, 3>(rng);
    for (int i = 0; i < 3; ++i) m(i, i) += 3.0;  // diagonal dominance
    const Mat3 inv = inv3(m);
    CHECK(residual_inf(m, inv) <= 1e-10);
    // Involution within 1e-9 relative.
    const Mat3 twice = inv3(inv);
    CHECK(testutil::max_abs_diff(twice, m) <=
          1e-9 * (1.0 + testutil::inf_norm(m)));
  }
}

TEST_CASE("inv3 rejects singular input and reports the determinant") {
  Mat3 m;
  m(0, 0) = 1.0;
  m(0, 1) = 2.0;
  m(1, 0) = 2.0;
  m(1, 1) = 4.0;  // rank deficient
  m(2, 2) = 1.0;
  CHECK_THROWS_AS(inv3(m), SingularMatrixError);
  try {
    inv3(m);
  } catch (const SingularMatrixError& e) {
    CHECK(e.det() == doctest::Approx(0.0));
  }
}

TEST_CASE("inv6_block on block-diagonal input equals blockwise inv3") {
  Rng rng(12);
  const Mat3 a = testutil::random_spd<3>(rng, 0.5);
  const Mat3 d = testutil::random_spd<3>(rng, 0.5);
  Mat6 m;
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) {
      m(r, c) = a(r, c);
      m(3 + r, 3 + c) = d(r, c);
    }
  const Mat6 inv = inv6_block(m);
  const Mat3 ia = inv3(a), id = inv3(d);
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) {
      CHECK(inv(r, c) == doctest::Approx(ia(r, c)).epsilon(1e-12));
      CHECK(inv(3 + r, 3 + c) == doctest::Approx(id(r, c)).epsilon(1e-12));
      CHECK(inv(r, 3 + c) == 0.0);
      CHECK(inv(3 + r, c) == 0.0);
    }
  CHECK(testutil::max_abs_diff(inv6_block(Mat6::identity()),
                               Mat6::identity()) == 0.0);
}

TEST_CASE("inv6_block equals dense Gaussian elimination on random SPD") {
  Rng rng(13);
  for (int t = 0; t < 1200; ++t) {
    const Mat6 m = testutil::random_spd<6>(rng, 0.2);
    const Mat6 inv = inv6_block(m);

    const Mat6 res = mul6(m, inv);
    CHECK(testutil::max_abs_diff(res, Mat6::identity()) <= 1e-9);

    const oracle::DMat ge = oracle::gauss_inverse(oracle::to_dmat(m));
    double rel = 0.0, scale = 0.0;
    for (int r = 0; r < 6; ++r)
      for (int c = 0; c < 6; ++c) {
        rel = std::max(rel, std::abs(inv(r, c) - ge(r, c)));
        scale = std::max(scale, std::abs(ge(r, c)));
      }
    CHECK(rel <= 1e-9 * scale);
  }
}

TEST_CASE("inv6_block identifies the singular block") {
  Mat6 m = Mat6::identity();
  for (int c = 0; c < 6; ++c) {
    m(0, c) = 0.0;
    m(c, 0) = 0.0;
  }
  // leading block singular
  try {
    inv6_block(m);
    FAIL("expected SingularMatrixError");
  } catch (const SingularMatrixError& e) {
    CHECK(std::string(e.what()).find("leading") != std::string::npos);
  }
  // healthy leading block, singular Schur complement
  Mat6 s = Mat6::identity();
  s(3, 3) = 0.0;
  try {
    inv6_block(s);
    FAIL("expected SingularMatrixError");
  } catch (const SingularMatrixError& e) {
    CHECK(std::string(e.what()).find("Schur") != std::string::npos);
  }
}

TEST_CASE("sym_sandwich matches the dense triple product and is symmetric") {
  CHECK(testutil::max_abs_diff(
            sym_sandwich(Mat3::identity(), Mat3::diag(Vec3{{1, 2, 3}})),
            Mat3::diag(Vec3{{1, 2, 3}})) == 0.0);
  const Mat3 a2 = Mat3::diag(Vec3{{2, 1, 1}});
  CHECK(testutil::max_abs_diff(sym_sandwich(a2, Mat3::identity()),
                               Mat3::diag(Vec3{{4, 1, 1}})) == 0.0);

  Rng rng(14);
  for (int t = 0; t < 1000; ++t) {
    const Mat3 a = testutil::random_mat<3, 3>(rng, -2.0, 2.0);
    const Mat3 p = testutil::random_spd<3>(rng);
    const Mat3 s = sym_sandwich(a, p);
    const Mat3 full = a * p * a.transposed();
    CHECK(testutil::max_abs_diff(s, full) <= 1e-12 * (1.0 + testutil::inf_norm(full)));
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) CHECK(s(r, c) == s(c, r));  // bitwise
  }
}

TEST_CASE("kernel smoke test: one million mixed calls, fixed storage") {
  Rng rng(15);
  Mat3 acc = Mat3::identity();
  Mat3 m = testutil::random_spd<3>(rng, 1.0);
  double checksum = 0.0;
  for (int t = 0; t < 1000000; ++t) {
    acc = sym_sandwich(acc, m);
    // renormalize so values stay finite over a million iterations
    const double n = testutil::inf_norm(acc);
    acc *= 1.0 / n;
    checksum += acc(0, 0);
  }
  CHECK(std::isfinite(checksum));
  CHECK(std::isfinite(testutil::inf_norm(acc)));
}

// ---------------------------------------------------------------------------
// Backend equivalence: every dispatched kernel, AVX2 vs scalar reference.
// ---------------------------------------------------------------------------

TEST_CASE("simd kernels match the scalar reference") {
  const kernels::KernelTable* avx2 = kernels::avx2_table();
  if (avx2 == nullptr) {
    MESSAGE("avx2 unavailable on this cpu; skipping equivalence checks");
    return;
  }
  const kernels::KernelTable& ref = kernels::scalar_table();
  Rng rng(16);
  const double tol = 1e-12;

  for (int t = 0; t < 5000; ++t) {
    const auto a33 = testutil::random_mat<3, 3>(rng, -5.0, 5.0);
    const auto b33 = testutil::random_mat<3, 3>(rng, -5.0, 5.0);
    const auto a36 = testutil::random_mat<3, 6>(rng, -5.0, 5.0);
    const auto a63 = testutil::random_mat<6, 3>(rng, -5.0, 5.0);
    const auto b63 = testutil::random_mat<6, 3>(rng, -5.0, 5.0);
    const auto b66 = testutil::random_mat<6, 6>(rng, -5.0, 5.0);
    const auto p = testutil::random_spd<3>(rng);

    Mat3 r33a, r33b;
    ref.mul_33(a33.data(), b33.data(), r33a.data());
    avx2->mul_33(a33.data(), b33.data(), r33b.data());
    CHECK(testutil::max_abs_diff(r33a, r33b) <= tol);

    Mat36 r36a, r36b;
    ref.mul_33_36(a33.data(), a36.data(), r36a.data());
    avx2->mul_33_36(a33.data(), a36.data(), r36b.data());
    CHECK(testutil::max_abs_diff(r36a, r36b) <= tol);

    Mat63 r63a, r63b;
    ref.mul_63_33(a63.data(), b33.data(), r63a.data());
    avx2->mul_63_33(a63.data(), b33.data(), r63b.data());
    CHECK(testutil::max_abs_diff(r63a, r63b) <= tol);

    Mat6 r66a, r66b;
    ref.mul_63_63t(a63.data(), b63.data(), r66a.data());
    avx2->mul_63_63t(a63.data(), b63.data(), r66b.data());
    CHECK(testutil::max_abs_diff(r66a, r66b) <= tol);

    Mat36 rt36a, rt36b;
    ref.mul_63t_66(a63.data(), b66.data(), rt36a.data());
    avx2->mul_63t_66(a63.data(), b66.data(), rt36b.data());
    CHECK(testutil::max_abs_diff(rt36a, rt36b) <= tol);

    Mat3 rr33a, rr33b;
    ref.mul_36_63(a36.data(), b63.data(), rr33a.data());
    avx2->mul_36_63(a36.data(), b63.data(), rr33b.data());
    CHECK(testutil::max_abs_diff(rr33a, rr33b) <= tol);

    Mat3 sa, sb;
    ref.sandwich_33(a33.data(), p.data(), sa.data());
    avx2->sandwich_33(a33.data(), p.data(), sb.data());
    CHECK(testutil::max_abs_diff(sa, sb) <= tol);
  }
}

TEST_CASE("backend selection is sticky and reversible") {
  const kernels::Backend original = kernels::backend();
  kernels::set_backend(kernels::Backend::kScalar);
  CHECK(kernels::backend() == kernels::Backend::kScalar);
  if (kernels::avx2_table() != nullptr) {
    kernels::set_backend(kernels::Backend::kAvx2);
    CHECK(kernels::backend() == kernels::Backend::kAvx2);
  }
  kernels::set_backend(original);
}
