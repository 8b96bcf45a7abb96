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

// Longitudinal kinematic aircraft model with wind states.
//
// State x = [alpha, Wx, Wz]: angle of attack plus horizontal/vertical wind.
// Parameter vector Theta = [Vg, theta, q, nx, nz, z] comes from inertial
// sensors and is treated as known. Outputs are AOA, vertical speed (positive
// up) and calibrated airspeed through the two-layer standard atmosphere.
// All units SI (rad, m, s); conversions happen at the config/output boundary.
// Every function here is pure.

#include "airmhe/smallmat.hpp"

namespace airmhe {

/// Measured flight parameters driving the model.
struct FlightParams {
  double vg = 0.0;     // horizontal ground speed, m/s (> 0)
  double theta = 0.0;  // pitch angle, rad (|theta| < pi/2)
  double q = 0.0;      // pitch rate, rad/s
  double nx = 0.0;     // horizontal load factor
  double nz = 1.0;     // vertical load factor
  double z = 0.0;      // altitude, m (>= 0)
};

/// Estimated state.
struct EstimState {
  double alpha = 0.0;  // angle of attack, rad
  double wx = 0.0;     // horizontal wind, m/s
  double wz = 0.0;     // vertical wind, m/s (positive up)

  Vec3 vec() const { return Vec3{{alpha, wx, wz}}; }
  static EstimState from_vec(const Vec3& v) { return {v[0], v[1], v[2]}; }
};

/// Process inputs: AOA model-mismatch rate and wind accelerations.
struct ProcessInput {
  double u_alpha = 0.0;  // rad/s
  double u_wx = 0.0;     // m/s^2
  double u_wz = 0.0;     // m/s^2

  Vec3 vec() const { return Vec3{{u_alpha, u_wx, u_wz}}; }
  static ProcessInput from_vec(const Vec3& v) { return {v[0], v[1], v[2]}; }
};

/// Model outputs y = [alpha, Vz, Vc].
struct OutputVec {
  double alpha = 0.0;  // rad
  double vz = 0.0;     // m/s, positive up
  double vc = 0.0;     // m/s calibrated airspeed

  Vec3 vec() const { return Vec3{{alpha, vz, vc}}; }
};

/// Standard-atmosphere state at a given altitude.
struct AtmoState {
  double p = 0.0;    // Pa
  double t = 0.0;    // K
  double rho = 0.0;  // kg/m^3
  double a = 0.0;    // m/s, speed of sound
};

/// Which redundant sensor families are still usable.
enum class SensorMask {
  kAllAvailable,
  kAoaLost,   // all three AOA channels flagged faulty
  kVcasLost,  // all three VCAS channels flagged faulty
  kBothLost,
};

inline bool aoa_available(SensorMask m) {
  return m == SensorMask::kAllAvailable || m == SensorMask::kVcasLost;
}
inline bool vcas_available(SensorMask m) {
  return m == SensorMask::kAllAvailable || m == SensorMask::kAoaLost;
}

// Guard against grazing flight geometry: |theta - alpha| must stay away
// from pi/2 by acos(eps).
inline constexpr double kEpsCos = 1e-3;
// Ground-speed floor for the AOA rate equation, m/s.
inline constexpr double kVgFloor = 30.0;

/// Two-layer ICAO standard atmosphere (linear lapse below 11 km, isothermal
/// above). Valid for 0 <= z <= 20000 m.
AtmoState isa_atmosphere(double z_m);

/// Calibrated airspeed from true airspeed at altitude, via compressible
/// impact pressure. Requires subsonic flight (M < 1).
double cas_from_tas(double v_tas, double z_m);

/// True airspeed from the vertical-plane wind triangle:
/// V_TAS = (Vg - Wx) / cos(theta - alpha).
double tas_from_state(const EstimState& x, const FlightParams& th);

/// Output function h(x, Theta) = [alpha, Vz, Vc].
OutputVec h_output(const EstimState& x, const FlightParams& th);

/// AOA rate from pitch rate and specific forces:
/// f = q + (g/Vg) * (cos(theta-alpha) - nz cos(alpha) - nx sin(alpha)).
double f_alpha(double alpha, const FlightParams& th);

/// d f_alpha / d alpha (analytic).
double f_alpha_dalpha(double alpha, const FlightParams& th);

/// Forward-Euler discrete step of the full state over ts seconds.
EstimState discrete_step(const EstimState& x, const ProcessInput& u,
                         const FlightParams& th, double ts);

/// State-transition Jacobian of discrete_step: diag(1 + ts*df/dalpha, 1, 1).
Mat3 jacobian_A(const EstimState& x, const FlightParams& th, double ts);

/// Output Jacobian dh/dx with the two envelope-negligible entries (2,2) and
/// (3,3) forced to zero, and rows zeroed for lost sensor families.
Mat3 jacobian_C(const EstimState& x, const FlightParams& th,
                SensorMask mask = SensorMask::kAllAvailable);

}  // namespace airmhe
