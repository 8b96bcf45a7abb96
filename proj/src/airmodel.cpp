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

#include "airmhe/airmodel.hpp"

#include <cmath>
#include <string>

#include "airmhe/constants.hpp"
#include "airmhe/errors.hpp"

namespace airmhe {

namespace {
namespace cn = constants;

// Exponent g/(L*R) of the troposphere pressure law.
const double kTropoExp = cn::kGravity / (cn::kLapseRate * cn::kRAir);

// Exact sea-level speed of sound for the CAS relations. The published
// 340.294 constant is rounded; using it would break the CAS==TAS identity
// at z=0 in the tenth digit.
const double kA0Exact = std::sqrt(cn::kGammaAir * cn::kRAir * cn::kT0);

// Pressure at the tropopause, from the troposphere law evaluated at 11 km.
double tropopause_pressure() {
  static const double p11 =
      cn::kP0 * std::pow(cn::kTStratosphere / cn::kT0, kTropoExp);
  return p11;
}

}  // namespace

AtmoState isa_atmosphere(double z_m) {
  if (!(z_m >= 0.0 && z_m <= 20000.0))
    throw DomainError("isa_atmosphere: altitude " + std::to_string(z_m) +
                      " m outside [0, 20000]");
  AtmoState s;
  if (z_m <= cn::kTropopauseAlt) {
    s.t = cn::kT0 - cn::kLapseRate * z_m;
    s.p = cn::kP0 * std::pow(s.t / cn::kT0, kTropoExp);
  } else {
    s.t = cn::kTStratosphere;
    s.p = tropopause_pressure() *
          std::exp(-cn::kGravity * (z_m - cn::kTropopauseAlt) /
                   (cn::kRAir * cn::kTStratosphere));
  }
  s.rho = s.p / (cn::kRAir * s.t);
  s.a = std::sqrt(cn::kGammaAir * cn::kRAir * s.t);
  return s;
}

double cas_from_tas(double v_tas, double z_m) {
  const AtmoState atm = isa_atmosphere(z_m);
  const double mach = v_tas / atm.a;
  if (mach >= 1.0)
    throw DomainError("cas_from_tas: supersonic (M=" + std::to_string(mach) +
                      ")");
  // Impact pressure at altitude, then the same relation inverted at
  // sea-level conditions.
  const double qc = atm.p * (std::pow(1.0 + 0.2 * mach * mach, 3.5) - 1.0);
  return kA0Exact *
         std::sqrt(5.0 * (std::pow(qc / cn::kP0 + 1.0, 2.0 / 7.0) - 1.0));
}

namespace {

// d(CAS)/d(TAS) by chaining through impact pressure.
double dcas_dtas(double v_tas, double z_m) {
  const AtmoState atm = isa_atmosphere(z_m);
  const double mach = v_tas / atm.a;
  const double base = 1.0 + 0.2 * mach * mach;
  const double qc = atm.p * (std::pow(base, 3.5) - 1.0);
  const double dqc_dv = 1.4 * atm.p * mach * std::pow(base, 2.5) / atm.a;
  const double vc =
      kA0Exact *
      std::sqrt(5.0 * (std::pow(qc / cn::kP0 + 1.0, 2.0 / 7.0) - 1.0));
  const double dvc_dqc = (5.0 * kA0Exact * kA0Exact / (7.0 * cn::kP0 * vc)) *
                         std::pow(qc / cn::kP0 + 1.0, -5.0 / 7.0);
  return dvc_dqc * dqc_dv;
}

double checked_cos_gamma(const EstimState& x, const FlightParams& th) {
  const double c = std::cos(th.theta - x.alpha);
  if (c <= kEpsCos)
    throw DomainError("air-path angle too close to vertical (cos=" +
                      std::to_string(c) + ")");
  return c;
}

}  // namespace

double tas_from_state(const EstimState& x, const FlightParams& th) {
  const double c = checked_cos_gamma(x, th);
  const double v_rel = th.vg - x.wx;
  if (v_rel <= 0.0)
    throw DomainError("tas_from_state: Vg - Wx = " + std::to_string(v_rel) +
                      " <= 0");
  return v_rel / c;
}

OutputVec h_output(const EstimState& x, const FlightParams& th) {
  const double v_tas = tas_from_state(x, th);
  OutputVec y;
  y.alpha = x.alpha;
  y.vz = (th.vg - x.wx) * std::tan(th.theta - x.alpha) + x.wz;
  y.vc = cas_from_tas(v_tas, th.z);
  return y;
}

double f_alpha(double alpha, const FlightParams& th) {
  if (th.vg <= kVgFloor)
    throw DomainError("f_alpha: ground speed " + std::to_string(th.vg) +
                      " m/s at or below the " + std::to_string(kVgFloor) +
                      " m/s floor");
  const double g_over_v = constants::kGravity / th.vg;
  return th.q + g_over_v * (std::cos(th.theta - alpha) -
                            th.nz * std::cos(alpha) - th.nx * std::sin(alpha));
}

double f_alpha_dalpha(double alpha, const FlightParams& th) {
  if (th.vg <= kVgFloor)
    throw DomainError("f_alpha_dalpha: ground speed below floor");
  const double g_over_v = constants::kGravity / th.vg;
  return g_over_v * (std::sin(th.theta - alpha) + th.nz * std::sin(alpha) -
                     th.nx * std::cos(alpha));
}

EstimState discrete_step(const EstimState& x, const ProcessInput& u,
                         const FlightParams& th, double ts) {
  EstimState next;
  next.alpha = x.alpha + ts * f_alpha(x.alpha, th) + ts * u.u_alpha;
  next.wx = x.wx + ts * u.u_wx;
  next.wz = x.wz + ts * u.u_wz;
  return next;
}

Mat3 jacobian_A(const EstimState& x, const FlightParams& th, double ts) {
  Mat3 a = Mat3::identity();
  a(0, 0) = 1.0 + ts * f_alpha_dalpha(x.alpha, th);
  return a;
}

Mat3 jacobian_C(const EstimState& x, const FlightParams& th, SensorMask mask) {
  const double c = checked_cos_gamma(x, th);
  const double tg = std::tan(th.theta - x.alpha);
  const double v_rel = th.vg - x.wx;
  const double v_tas = tas_from_state(x, th);
  const double dvc = dcas_dtas(v_tas, th.z);

  Mat3 j = Mat3::zero();
  // Row 1: h_alpha = alpha.
  j(0, 0) = 1.0;
  // Row 2: h_vz = (Vg - Wx) tan(theta - alpha) + Wz. The (2,2) entry
  // (-tan(theta-alpha)) is negligible over the envelope and forced to zero.
  j(1, 0) = -v_rel / (c * c);
  j(1, 1) = 0.0;
  j(1, 2) = 1.0;
  // Row 3: h_vc = CAS((Vg - Wx)/cos(theta - alpha), z). There is no Wz
  // dependence, so the forced-zero (3,3) entry is exact.
  j(2, 0) = dvc * (-v_tas * tg);
  j(2, 1) = dvc * (-1.0 / c);
  j(2, 2) = 0.0;

  if (!aoa_available(mask))
    for (int k = 0; k < 3; ++k) j(0, k) = 0.0;
  if (!vcas_available(mask))
    for (int k = 0; k < 3; ++k) j(2, k) = 0.0;
  return j;
}

}  // namespace airmhe
