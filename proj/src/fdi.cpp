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

#include "airmhe/fdi.hpp"

#include <algorithm>
#include <cmath>

#include "airmhe/errors.hpp"

namespace airmhe {

SensorBank::SensorBank(const DetectorConfig& cfg) : cfg_(cfg) {
  if (cfg_.n_eval < 1 || cfg_.n_confirm < 1 || cfg_.n_confirm > cfg_.n_eval)
    throw ConfigError("detector window/confirmation counts out of range");
  if (!(cfg_.j_alpha_th > 0.0) || !(cfg_.j_vc_th > 0.0))
    throw ConfigError("detector thresholds must be positive");
  auto init = [&](Channel& ch) {
    ch.residuals.assign(static_cast<size_t>(cfg_.n_eval), 0.0);
    ch.exceed.assign(static_cast<size_t>(cfg_.n_eval), 0);
  };
  for (auto& ch : alpha_) init(ch);
  for (auto& ch : vc_) init(ch);
  init(vz_);
}

void SensorBank::Channel::push_residual(double r, int n_eval) {
  residuals[static_cast<size_t>(head)] = r;
  head = (head + 1) % n_eval;
  filled = std::min(filled + 1, n_eval);
  // Until the ring wraps once, the valid slots are exactly 0..filled-1.
  double ss = 0.0;
  for (int i = 0; i < filled; ++i)
    ss += residuals[static_cast<size_t>(i)] * residuals[static_cast<size_t>(i)];
  rms = std::sqrt(ss / filled);
}

void SensorBank::Channel::push_exceed(bool e, int n_eval) {
  exceed_count += (e ? 1 : 0) - exceed[static_cast<size_t>(exceed_head)];
  exceed[static_cast<size_t>(exceed_head)] = static_cast<char>(e);
  exceed_head = (exceed_head + 1) % n_eval;
}

void SensorBank::update_residuals(const SensorReadings& meas,
                                  const OutputVec& pred) {
  for (int i = 0; i < 3; ++i) {
    alpha_[i].push_residual(meas.alpha[i] - pred.alpha, cfg_.n_eval);
    vc_[i].push_residual(meas.vc[i] - pred.vc, cfg_.n_eval);
  }
  vz_.push_residual(meas.vz - pred.vz, cfg_.n_eval);
  ++samples_;
}

std::vector<ChannelId> SensorBank::detect() {
  std::vector<ChannelId> newly;
  const bool armed = samples_ >= cfg_.n_eval;  // cold-start inhibition
  auto run = [&](Channel& ch, ChannelFamily fam, int idx, double th) {
    const bool exceed = armed && ch.rms > th;
    ch.push_exceed(exceed, cfg_.n_eval);
    const bool was_healthy = ch.healthy;
    if (cfg_.latch) {
      if (ch.healthy && ch.exceed_count >= cfg_.n_confirm) ch.healthy = false;
    } else {
      ch.healthy = ch.exceed_count < cfg_.n_confirm;
    }
    if (was_healthy && !ch.healthy) newly.push_back({fam, idx});
  };
  for (int i = 0; i < 3; ++i)
    run(alpha_[i], ChannelFamily::kAoa, i, cfg_.j_alpha_th);
  for (int i = 0; i < 3; ++i)
    run(vc_[i], ChannelFamily::kVcas, i, cfg_.j_vc_th);
  return newly;
}

namespace {

struct FamilyFusion {
  double value = 0.0;
  double r_eff = 0.0;
  std::array<double, 3> beta{};
  bool available = false;
};

FamilyFusion fuse_family(const std::array<double, 3>& readings,
                         const std::array<double, 3>& rms,
                         const std::array<bool, 3>& healthy, double r_base) {
  FamilyFusion out;
  double denom = 0.0;
  for (int i = 0; i < 3; ++i) {
    if (!healthy[i]) continue;
    const double j = std::max(rms[i], kRmsFloor);
    denom += 1.0 / (j * j);
  }
  if (denom == 0.0) {
    // No healthy channel left. Report the plain mean and flag the family
    // unavailable; the estimator zeroes the corresponding output row.
    out.value = (readings[0] + readings[1] + readings[2]) / 3.0;
    out.r_eff = r_base;
    out.available = false;
    return out;
  }
  out.available = true;
  for (int i = 0; i < 3; ++i) {
    if (!healthy[i]) continue;
    const double j = std::max(rms[i], kRmsFloor);
    out.beta[i] = (1.0 / (j * j)) / denom;
    out.value += out.beta[i] * readings[i];
    out.r_eff += out.beta[i] * out.beta[i] * r_base;
  }
  return out;
}

}  // namespace

FusedMeasurement SensorBank::fuse(const SensorReadings& meas,
                                  const Weights& w) const {
  std::array<double, 3> a_rms, v_rms;
  std::array<bool, 3> a_ok, v_ok;
  for (int i = 0; i < 3; ++i) {
    a_rms[i] = alpha_[i].rms;
    a_ok[i] = alpha_[i].healthy;
    v_rms[i] = vc_[i].rms;
    v_ok[i] = vc_[i].healthy;
  }
  const FamilyFusion fa = fuse_family(meas.alpha, a_rms, a_ok, w.r_alpha);
  const FamilyFusion fv = fuse_family(meas.vc, v_rms, v_ok, w.r_vc);

  FusedMeasurement out;
  out.alpha_m = fa.value;
  out.vc_m = fv.value;
  out.vz_m = meas.vz;
  out.beta_alpha = fa.beta;
  out.beta_vc = fv.beta;
  out.r_alpha_eff = fa.r_eff;
  out.r_vc_eff = fv.r_eff;
  out.aoa_available = fa.available;
  out.vcas_available = fv.available;
  return out;
}

IsolationState SensorBank::sensor_mask() const {
  const bool aoa_lost =
      !alpha_[0].healthy && !alpha_[1].healthy && !alpha_[2].healthy;
  const bool vcas_lost = !vc_[0].healthy && !vc_[1].healthy && !vc_[2].healthy;
  IsolationState s;
  if (aoa_lost && vcas_lost)
    s.mask = SensorMask::kBothLost;
  else if (aoa_lost)
    s.mask = SensorMask::kAoaLost;
  else if (vcas_lost)
    s.mask = SensorMask::kVcasLost;
  s.wx_discard = vcas_lost;
  s.unreliable = aoa_lost;
  return s;
}

}  // namespace airmhe
