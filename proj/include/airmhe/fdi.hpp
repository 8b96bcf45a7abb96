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

// Fault detection, isolation and fusion for the triplex AOA and VCAS
// sensors. Residuals against the one-step-ahead prediction are evaluated by
// their RMS over a sliding window; a channel is isolated once its RMS
// exceeds the threshold n_confirm times within the trailing window. Healthy
// channels are fused by inverse-RMS^2 weights, which also soft-rejects a
// faulty channel during the detection delay.

#include <array>
#include <vector>

#include "airmhe/airmodel.hpp"
#include "airmhe/constants.hpp"
#include "airmhe/mhe.hpp"

namespace airmhe {

struct DetectorConfig {
  double j_alpha_th = 2.3 * constants::kDegToRad;   // rad
  double j_vc_th = 12.0 * constants::kKtsToMs;      // m/s
  int n_confirm = 5;   // exceedances within the window required to isolate
  int n_eval = 10;     // residual evaluation window length
  bool latch = true;   // isolated channels never return
};

enum class ChannelFamily { kAoa, kVcas };

struct ChannelId {
  ChannelFamily family;
  int index;  // 0..2
};

/// Raw redundant readings for one sample.
struct SensorReadings {
  std::array<double, 3> alpha{};  // rad
  std::array<double, 3> vc{};     // m/s
  double vz = 0.0;                // m/s
};

/// Detection event emitted when a channel is first isolated.
struct FdiEvent {
  ChannelId channel;
  long sample = 0;
  double time_s = 0.0;
  double rms_at_detection = 0.0;
};

struct FusedMeasurement {
  double alpha_m = 0.0;  // rad
  double vz_m = 0.0;     // m/s
  double vc_m = 0.0;     // m/s
  std::array<double, 3> beta_alpha{};
  std::array<double, 3> beta_vc{};
  double r_alpha_eff = 0.0;
  double r_vc_eff = 0.0;
  bool aoa_available = true;
  bool vcas_available = true;

  MeasSample to_meas_sample(const Weights& w) const {
    MeasSample m;
    m.y = Vec3{{alpha_m, vz_m, vc_m}};
    m.r_diag = Vec3{{r_alpha_eff, w.r_vz, r_vc_eff}};
    return m;
  }
};

/// Summary of the isolation state for the estimator.
struct IsolationState {
  SensorMask mask = SensorMask::kAllAvailable;
  bool wx_discard = false;    // all VCAS lost: horizontal wind unobservable
  bool unreliable = false;    // all AOA lost: estimates unreliable
};

// RMS floor used in the fusion weights so noise-free startup samples do not
// divide by zero.
inline constexpr double kRmsFloor = 1e-6;

class SensorBank {
 public:
  explicit SensorBank(const DetectorConfig& cfg);

  /// Pushes measurement - prediction residuals for every channel and
  /// recomputes the windowed RMS values.
  void update_residuals(const SensorReadings& meas, const OutputVec& pred);

  /// Threshold-with-confirmation detection. Detection is inhibited until
  /// the residual window has filled once. Returns channels isolated at this
  /// sample (with latch=false a channel may also recover silently).
  std::vector<ChannelId> detect();

  /// Inverse-RMS^2 weighted fusion of the channels currently marked
  /// healthy. A family with no healthy channel is flagged unavailable and
  /// reports the plain mean (the estimator masks the row anyway).
  FusedMeasurement fuse(const SensorReadings& meas, const Weights& w) const;

  IsolationState sensor_mask() const;

  bool healthy(ChannelFamily fam, int idx) const {
    return channel(fam, idx).healthy;
  }
  double rms(ChannelFamily fam, int idx) const { return channel(fam, idx).rms; }
  long samples_seen() const { return samples_; }
  const DetectorConfig& config() const { return cfg_; }

 private:
  struct Channel {
    std::vector<double> residuals;  // ring, length n_eval
    std::vector<char> exceed;       // ring, length n_eval
    int head = 0;
    int exceed_head = 0;
    int filled = 0;
    double rms = 0.0;
    int exceed_count = 0;
    bool healthy = true;

    void push_residual(double r, int n_eval);
    void push_exceed(bool e, int n_eval);
  };

  const Channel& channel(ChannelFamily fam, int idx) const {
    return fam == ChannelFamily::kAoa ? alpha_[idx] : vc_[idx];
  }

  DetectorConfig cfg_;
  std::array<Channel, 3> alpha_;
  std::array<Channel, 3> vc_;
  Channel vz_;  // single channel, never isolated
  long samples_ = 0;
};

}  // namespace airmhe
