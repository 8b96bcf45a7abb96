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

// Synthetic scenario generator: truth kinematics for four maneuver
// archetypes, wind profiles, triplex sensor noise, and the five fault
// injectors. Truth AOA is integrated with sub-stepped RK4 while the
// estimator uses forward Euler, so a small model mismatch is always present
// for the input noise channel to absorb. The full trace is a pure function
// of the scenario config, seed included.

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "airmhe/airmodel.hpp"
#include "airmhe/constants.hpp"
#include "airmhe/fdi.hpp"
#include "airmhe/mhe.hpp"

namespace airmhe {

struct FaultProfile {
  enum class Kind { kBias, kOscillation, kJamming, kRunaway, kNrz };
  Kind kind = Kind::kBias;
  ChannelId target{ChannelFamily::kAoa, 0};
  double t_on = 0.0;
  double t_off = std::numeric_limits<double>::infinity();

  double bias = 0.0;            // bias level (rad or m/s)
  double amplitude = 0.0;       // oscillation / NRZ amplitude
  double freq_hz = 0.0;         // oscillation frequency
  double slope = 0.0;           // runaway rate (rad/s or m/s per s)
  double limit = std::numeric_limits<double>::infinity();  // runaway cap
  double dwell_min_s = 0.2;     // NRZ dwell bounds
  double dwell_max_s = 1.0;

  bool active(double t) const { return t >= t_on && t < t_off; }
};

struct WindProfile {
  enum class Kind { kNone, kConstant, kShearRamp, kGustSine, kFilteredNoise };
  Kind kind = Kind::kNone;
  double level = 0.0;      // m/s: constant value, ramp target, or gust peak
  double t_start = 0.0;
  double ramp_s = 5.0;     // shear ramp duration
  double freq_hz = 0.1;    // gust sine frequency
  double sigma = 0.0;      // filtered-noise stationary std, m/s
  double bandwidth_hz = 0.2;
};

enum class Maneuver {
  kLoadFactor,
  kFlightPathAngle,
  kVerticalSpeed,
  kAoaProtection,
};

struct NoiseConfig {
  double alpha_std = 1.0e-3;                       // rad
  double vz_std = 0.3;                             // m/s
  double vc_std = 0.5 * constants::kKtsToMs;       // m/s
};

/// Optional acceptance predicates evaluated by the runner.
struct AcceptSpec {
  std::optional<int> max_false_alarms;
  std::optional<double> aee_alpha_mean_max_deg;
  std::optional<double> aee_alpha_max_max_deg;
  std::optional<double> aee_vcas_mean_max_kts;
  std::optional<double> aee_vcas_max_max_kts;
  std::optional<double> detect_delay_max_s;
  bool require_all_faults_detected = false;
  // When specified, only these channels must be detected (within the delay
  // bound); other faulted channels may legitimately stay undetected.
  // "none" in the config yields an empty list with the flag set.
  bool expect_detected_set = false;
  std::vector<ChannelId> expect_detected;

  bool any() const {
    return max_false_alarms || aee_alpha_mean_max_deg ||
           aee_alpha_max_max_deg || aee_vcas_mean_max_kts ||
           aee_vcas_max_max_kts || detect_delay_max_s ||
           require_all_faults_detected || expect_detected_set;
  }
};

/// Complete reproducible experiment description.
struct ScenarioConfig {
  std::string name = "scenario";
  double duration_s = 120.0;
  double ts = 0.04;
  uint64_t seed = 0;
  double event_time_s = -1.0;  // main maneuver event; default duration/2

  Maneuver maneuver = Maneuver::kLoadFactor;
  double altitude_ft = 10000.0;
  double speed_kts = 250.0;

  WindProfile wind_x, wind_z;
  double wind_envelope_kts = 120.0;
  NoiseConfig noise;
  double mismatch_amp = 0.0;     // extra alpha-rate mismatch, rad/s
  double mismatch_freq_hz = 0.05;

  std::vector<FaultProfile> faults;

  MheConfig solver;
  Weights weights;
  DetectorConfig detector;
  AcceptSpec accept;

  int sample_count() const { return static_cast<int>(duration_s / ts + 0.5); }
  double event_time() const {
    return event_time_s >= 0.0 ? event_time_s : 0.5 * duration_s;
  }
};

/// Truth trajectory and all measurement streams, sample by sample.
struct TruthTrace {
  double ts = 0.04;
  std::vector<double> t;
  std::vector<EstimState> x;        // truth state (alpha, Wx, Wz)
  std::vector<FlightParams> theta;  // parameter trajectory
  std::vector<OutputVec> y;         // clean outputs h(x, theta)
  std::vector<double> v_tas;

  // Per-channel additive decomposition: corrupted = clean + fault + noise.
  std::vector<SensorReadings> clean;
  std::vector<SensorReadings> fault;
  std::vector<SensorReadings> noise;
  std::vector<SensorReadings> corrupted;

  int size() const { return static_cast<int>(t.size()); }
};

/// Truth kinematics and clean outputs (no faults, no noise).
TruthTrace generate_truth(const ScenarioConfig& cfg);

/// Additive fault value for one channel at time t. `held` is the clean
/// value at the jamming onset (unused by other kinds); `seed` feeds the NRZ
/// dwell stream.
double inject_fault(const FaultProfile& profile, double t, double clean,
                    double held, uint64_t seed);

/// Adds seeded Gaussian noise streams to clean+fault. Channels frozen by an
/// active jamming fault get zero noise so the reading stays constant.
void corrupt(TruthTrace& trace, const NoiseConfig& noise, uint64_t seed,
             const std::vector<FaultProfile>& faults);

/// generate_truth + fault injection + corruption in one call.
TruthTrace simulate_scenario(const ScenarioConfig& cfg);

/// Encodes a channel for RNG streams and event reporting ("a1".."v3").
int channel_code(const ChannelId& id);
std::string channel_name(const ChannelId& id);
std::optional<ChannelId> parse_channel(const std::string& name);

}  // namespace airmhe
