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

#include "airmhe/constants.hpp"
#include "airmhe/ctr_rng.hpp"
#include "airmhe/errors.hpp"
#include "airmhe/fdi.hpp"
#include "test_helpers.hpp"

using namespace airmhe;
namespace cn = airmhe::constants;
using testutil::Rng;

namespace {

SensorReadings readings(double alpha, double vc, double vz = 0.0) {
  SensorReadings r;
  for (int i = 0; i < 3; ++i) {
    r.alpha[i] = alpha;
    r.vc[i] = vc;
  }
  r.vz = vz;
  return r;
}

}  // namespace

TEST_CASE("sensor bank rejects out-of-range detector settings") {
  DetectorConfig bad;
  bad.n_confirm = 11;  // exceeds n_eval = 10
  CHECK_THROWS_AS(SensorBank{bad}, ConfigError);
  bad = DetectorConfig{};
  bad.j_vc_th = 0.0;
  CHECK_THROWS_AS(SensorBank{bad}, ConfigError);
}

TEST_CASE("residual RMS over the sliding window") {
  DetectorConfig cfg;
  cfg.n_eval = 2;
  cfg.n_confirm = 1;
  SensorBank bank(cfg);
  const OutputVec zero{};

  // residuals {3, 4} on the alpha channels -> J = sqrt(12.5)
  bank.update_residuals(readings(3.0, 0.0), zero);
  bank.update_residuals(readings(4.0, 0.0), zero);
  CHECK(bank.rms(ChannelFamily::kAoa, 0) ==
        doctest::Approx(std::sqrt(12.5)).epsilon(1e-12));
  CHECK(bank.rms(ChannelFamily::kVcas, 0) == doctest::Approx(0.0));

  // constant residual c for >= n_eval samples -> J = |c|
  DetectorConfig cfg10;
  SensorBank b2(cfg10);
  for (int k = 0; k < 25; ++k) b2.update_residuals(readings(-0.02, 5.0), zero);
  CHECK(b2.rms(ChannelFamily::kAoa, 1) == doctest::Approx(0.02).epsilon(1e-12));
  CHECK(b2.rms(ChannelFamily::kVcas, 2) == doctest::Approx(5.0).epsilon(1e-12));
}

TEST_CASE("detection needs n_confirm exceedances and is inhibited cold") {
  DetectorConfig cfg;  // n_eval 10, n_confirm 5
  SensorBank bank(cfg);
  const OutputVec zero{};
  const double big = 5.0 * cn::kDegToRad;  // way over the 2.3 deg threshold

  int flagged_at = -1;
  for (int k = 1; k <= 20; ++k) {
    bank.update_residuals(readings(big, 0.0), zero);
    const auto newly = bank.detect();
    if (!newly.empty() && flagged_at < 0) flagged_at = k;
    if (k < 14) CHECK(bank.healthy(ChannelFamily::kAoa, 0));
  }
  // armed after 10 samples, confirmed after 5 more exceedances
  CHECK(flagged_at == 14);
  CHECK_FALSE(bank.healthy(ChannelFamily::kAoa, 0));
  CHECK(bank.healthy(ChannelFamily::kVcas, 0));
}

TEST_CASE("n_confirm-1 exceedances within the window do not isolate") {
  // n_eval = 2 makes the RMS sequence controllable: a lone spike exceeds
  // the threshold for exactly two samples, so spikes separated by two
  // clean samples never accumulate two exceedances in one trailing window.
  DetectorConfig cfg;
  cfg.n_eval = 2;
  cfg.n_confirm = 2;
  SensorBank bank(cfg);
  const OutputVec zero{};
  // Sized so J = r/sqrt(2) stays under the threshold (lone spike in the
  // window) but J = r exceeds it (two overlapping spikes): a double spike
  // yields exactly one exceedance, a triple yields two.
  const double spike = 1.2 * cfg.j_alpha_th;

  auto push = [&](double r) {
    bank.update_residuals(readings(r, 0.0), zero);
    bank.detect();
  };

  for (int burst = 0; burst < 6; ++burst) {
    push(spike);
    push(spike);  // one exceedance = n_confirm - 1
    for (int k = 0; k < 3; ++k) push(0.0);
    CHECK(bank.healthy(ChannelFamily::kAoa, 0));
  }

  // a triple spike produces two consecutive exceedances and isolates
  push(spike);
  push(spike);
  push(spike);
  CHECK_FALSE(bank.healthy(ChannelFamily::kAoa, 0));
}

TEST_CASE("latched channels stay isolated after the RMS recovers") {
  DetectorConfig cfg;
  SensorBank bank(cfg);
  const OutputVec zero{};
  const double big = 30.0 * cn::kKtsToMs;

  for (int k = 0; k < 25; ++k) {
    bank.update_residuals(readings(0.0, big), zero);
    bank.detect();
  }
  CHECK_FALSE(bank.healthy(ChannelFamily::kVcas, 0));
  for (int k = 0; k < 50; ++k) {
    bank.update_residuals(readings(0.0, 0.0), zero);
    bank.detect();
  }
  CHECK_FALSE(bank.healthy(ChannelFamily::kVcas, 0));  // latched
  CHECK(bank.rms(ChannelFamily::kVcas, 0) == doctest::Approx(0.0));
}

TEST_CASE("fusion weights: symmetric, inverse-RMS^2, single-survivor") {
  DetectorConfig cfg;
  SensorBank bank(cfg);
  const OutputVec zero{};
  Weights w;

  // equal RMS on all channels -> beta = 1/3, fused = mean, R_eff = R/3
  for (int k = 0; k < 15; ++k)
    bank.update_residuals(readings(0.01, 1.0), zero);
  SensorReadings m;
  m.alpha = {0.02, 0.03, 0.04};
  m.vc = {100.0, 101.0, 105.0};
  m.vz = 2.0;
  FusedMeasurement f = bank.fuse(m, w);
  CHECK(f.alpha_m == doctest::Approx(0.03).epsilon(1e-12));
  CHECK(f.vc_m == doctest::Approx(102.0).epsilon(1e-12));
  CHECK(f.vz_m == 2.0);
  for (int i = 0; i < 3; ++i) {
    CHECK(f.beta_alpha[i] == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    CHECK(f.beta_vc[i] == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  }
  CHECK(f.r_alpha_eff == doctest::Approx(w.r_alpha / 3.0).epsilon(1e-12));
  CHECK(f.r_vc_eff == doctest::Approx(w.r_vc / 3.0).epsilon(1e-12));
  CHECK(f.aoa_available);
  CHECK(f.vcas_available);
}

TEST_CASE("fusion with unequal RMS: J=(1,2) gives beta=(0.8,0.2)") {
  DetectorConfig cfg;
  cfg.n_eval = 1;  // RMS equals |last residual|
  cfg.n_confirm = 1;
  SensorBank bank(cfg);
  Weights w;

  SensorReadings res{};
  res.alpha = {1.0, 2.0, 5.0 * cn::kDegToRad};
  res.vc = {0.0, 0.0, 0.0};
  bank.update_residuals(res, OutputVec{});
  // isolate the third AOA channel by hand via detect() latching: instead,
  // emulate two healthy channels by marking the third faulty through a
  // long exceedance run is overkill here; use all three and check the
  // two-channel ratio on the first two weights directly.
  SensorReadings m;
  m.alpha = {10.0, 20.0, 0.0};
  const FusedMeasurement f = bank.fuse(m, w);
  // weights prop. to 1/J^2 = (1, 1/4, ...): beta_1/beta_2 = 4
  CHECK(f.beta_alpha[0] / f.beta_alpha[1] == doctest::Approx(4.0));

  // pure two-channel case via the family helper semantics: third channel
  // RMS enormous, so its weight is negligible
  SensorReadings res2{};
  res2.alpha = {1.0, 2.0, 1e9};
  SensorBank bank2(cfg);
  bank2.update_residuals(res2, OutputVec{});
  const FusedMeasurement f2 = bank2.fuse(m, w);
  CHECK(f2.beta_alpha[0] == doctest::Approx(0.8).epsilon(1e-6));
  CHECK(f2.beta_alpha[1] == doctest::Approx(0.2).epsilon(1e-6));
}

TEST_CASE("fusion properties on random RMS tuples") {
  DetectorConfig cfg;
  Weights w;
  Rng rng(51);
  for (int t = 0; t < 10000; ++t) {
    // emulate arbitrary RMS values via direct residual pushes
    SensorBank bank(DetectorConfig{.j_alpha_th = 1e9,
                                   .j_vc_th = 1e9,
                                   .n_confirm = 1,
                                   .n_eval = 1,
                                   .latch = true});
    SensorReadings res{};
    for (int i = 0; i < 3; ++i) {
      res.alpha[i] = testutil::uniform(rng, 1e-8, 2.0);
      res.vc[i] = testutil::uniform(rng, 1e-8, 30.0);
    }
    bank.update_residuals(res, OutputVec{});
    SensorReadings m;
    for (int i = 0; i < 3; ++i) {
      m.alpha[i] = testutil::uniform(rng, -0.1, 0.3);
      m.vc[i] = testutil::uniform(rng, 60.0, 200.0);
    }
    const FusedMeasurement f = bank.fuse(m, w);

    // normalization to 1e-12
    double sa = 0.0, sv = 0.0;
    for (int i = 0; i < 3; ++i) {
      sa += f.beta_alpha[i];
      sv += f.beta_vc[i];
    }
    CHECK(std::abs(sa - 1.0) <= 1e-12);
    CHECK(std::abs(sv - 1.0) <= 1e-12);

    // monotone down-weighting: larger RMS -> strictly smaller weight
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        if (std::abs(res.alpha[i]) < std::abs(res.alpha[j]))
          CHECK(f.beta_alpha[i] > f.beta_alpha[j]);
        if (std::abs(res.vc[i]) < std::abs(res.vc[j]))
          CHECK(f.beta_vc[i] > f.beta_vc[j]);
      }

    // R_eff <= R_base (Cauchy-Schwarz on the normalized weights)
    CHECK(f.r_alpha_eff <= w.r_alpha * (1.0 + 1e-12));
    CHECK(f.r_vc_eff <= w.r_vc * (1.0 + 1e-12));
  }

  // equality iff a single healthy channel
  SensorBank bank(cfg);
  Weights w2;
  const FusedMeasurement f = bank.fuse(readings(0.0, 0.0), w2);
  CHECK(f.r_alpha_eff == doctest::Approx(w2.r_alpha / 3.0));
}

TEST_CASE("sensor mask transitions and fallback flags") {
  DetectorConfig cfg;
  cfg.n_eval = 2;
  cfg.n_confirm = 1;
  SensorBank bank(cfg);
  const OutputVec zero{};

  CHECK(bank.sensor_mask().mask == SensorMask::kAllAvailable);
  CHECK_FALSE(bank.sensor_mask().wx_discard);
  CHECK_FALSE(bank.sensor_mask().unreliable);

  // lose all three VCAS channels
  SensorReadings r{};
  r.vc = {100.0, 100.0, 100.0};
  for (int k = 0; k < 6; ++k) {
    bank.update_residuals(r, zero);
    bank.detect();
  }
  const IsolationState vcas_lost = bank.sensor_mask();
  CHECK(vcas_lost.mask == SensorMask::kVcasLost);
  CHECK(vcas_lost.wx_discard);
  CHECK_FALSE(vcas_lost.unreliable);

  // now lose the AOA channels too
  r.alpha = {1.0, 1.0, 1.0};
  for (int k = 0; k < 6; ++k) {
    bank.update_residuals(r, zero);
    bank.detect();
  }
  const IsolationState both = bank.sensor_mask();
  CHECK(both.mask == SensorMask::kBothLost);
  CHECK(both.wx_discard);
  CHECK(both.unreliable);

  // AOA-only loss raises the unreliable flag
  SensorBank bank2(cfg);
  SensorReadings r2{};
  r2.alpha = {1.0, 1.0, 1.0};
  for (int k = 0; k < 6; ++k) {
    bank2.update_residuals(r2, zero);
    bank2.detect();
  }
  const IsolationState aoa_lost = bank2.sensor_mask();
  CHECK(aoa_lost.mask == SensorMask::kAoaLost);
  CHECK(aoa_lost.unreliable);
  CHECK_FALSE(aoa_lost.wx_discard);
}

TEST_CASE("false-alarm probability at nominal noise is negligible") {
  // Analytic check: J > th requires chi^2_10 > 10 (th/sigma)^2 with
  // th/sigma = 40 for AOA at default settings. The Chernoff bound
  // exp(-x/2 + 5 ln(x e/10)) is astronomically below 1e-6.
  DetectorConfig cfg;
  const double sigma_alpha = 1.0e-3;  // rad
  const double ratio = cfg.j_alpha_th / sigma_alpha;
  const double x = 10.0 * ratio * ratio;
  const double log_bound = -0.5 * x + 5.0 * (std::log(x / 10.0) + 1.0);
  CHECK(log_bound < std::log(1e-6));

  // Monte Carlo: a million independent windows, zero exceedances.
  int alarms = 0;
  for (int w = 0; w < 1000000; ++w) {
    double ss = 0.0;
    for (int j = 0; j < 10; ++j) {
      const double r = sigma_alpha * rng::gaussian(99, 7777, 10 * w + j);
      ss += r * r;
    }
    if (std::sqrt(ss / 10.0) > cfg.j_alpha_th) ++alarms;
  }
  CHECK(alarms == 0);
}
