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

#include "airmhe/sim.hpp"

#include <cmath>
#include <string>

#include "airmhe/constants.hpp"
#include "airmhe/ctr_rng.hpp"
#include "airmhe/errors.hpp"

namespace airmhe {

namespace cn = constants;

int channel_code(const ChannelId& id) {
  return (id.family == ChannelFamily::kAoa ? 0 : 3) + id.index;
}

std::string channel_name(const ChannelId& id) {
  return (id.family == ChannelFamily::kAoa ? "a" : "v") +
         std::to_string(id.index + 1);
}

std::optional<ChannelId> parse_channel(const std::string& name) {
  if (name.size() != 2) return std::nullopt;
  const int idx = name[1] - '1';
  if (idx < 0 || idx > 2) return std::nullopt;
  if (name[0] == 'a') return ChannelId{ChannelFamily::kAoa, idx};
  if (name[0] == 'v') return ChannelId{ChannelFamily::kVcas, idx};
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Maneuver parameter trajectories
// ---------------------------------------------------------------------------

namespace {

// C1 smoothstep from 0 at t0 to 1 at t1, and its time derivative.
double sstep(double t, double t0, double t1) {
  if (t <= t0) return 0.0;
  if (t >= t1) return 1.0;
  const double u = (t - t0) / (t1 - t0);
  return u * u * (3.0 - 2.0 * u);
}

double dsstep(double t, double t0, double t1) {
  if (t <= t0 || t >= t1) return 0.0;
  const double u = (t - t0) / (t1 - t0);
  return 6.0 * u * (1.0 - u) / (t1 - t0);
}

// Desired AOA / pitch / speed trajectory sample (everything except altitude
// and the balancing load factor).
struct ManeuverPoint {
  double alpha_des = 0.0;   // rad
  double dalpha_des = 0.0;  // rad/s
  double theta = 0.0;       // rad
  double q = 0.0;           // rad/s
  double vg = 0.0;          // m/s
  double dvg = 0.0;         // m/s^2
};

ManeuverPoint maneuver_point(const ScenarioConfig& cfg, double t) {
  const double te = cfg.event_time();
  const double vg0 = cfg.speed_kts * cn::kKtsToMs;
  ManeuverPoint p;
  p.vg = vg0;

  switch (cfg.maneuver) {
    case Maneuver::kLoadFactor: {
      // Pitch held; AOA pulses up then back, driven by a load-factor demand.
      const double a0 = 0.045, da = 0.022;
      p.alpha_des = a0 + da * (sstep(t, te - 8, te - 4) - sstep(t, te + 6, te + 10));
      p.dalpha_des = da * (dsstep(t, te - 8, te - 4) - dsstep(t, te + 6, te + 10));
      p.theta = a0 + 0.008;
      p.q = 0.0;
      break;
    }
    case Maneuver::kFlightPathAngle: {
      // Climb capture and release at constant AOA.
      const double a0 = 0.04, g1 = 0.05;
      const double gam = g1 * (sstep(t, te - 12, te - 5) - sstep(t, te + 10, te + 17));
      const double dgam =
          g1 * (dsstep(t, te - 12, te - 5) - dsstep(t, te + 10, te + 17));
      p.alpha_des = a0;
      p.dalpha_des = 0.0;
      p.theta = a0 + gam;
      p.q = dgam;
      break;
    }
    case Maneuver::kVerticalSpeed: {
      // Descent capture with an energetic level-off deceleration.
      const double a0 = 0.038, g1 = -0.035, dv = 15.0;
      const double gam = g1 * (sstep(t, te - 10, te - 3) - sstep(t, te + 12, te + 19));
      const double dgam =
          g1 * (dsstep(t, te - 10, te - 3) - dsstep(t, te + 12, te + 19));
      p.alpha_des = a0;
      p.dalpha_des = 0.0;
      p.theta = a0 + gam;
      p.q = dgam;
      p.vg = vg0 - dv * sstep(t, te - 4, te + 4);
      p.dvg = -dv * dsstep(t, te - 4, te + 4);
      break;
    }
    case Maneuver::kAoaProtection: {
      // Aggressive pull toward high AOA, hold, release.
      const double a0 = 0.07, a1 = 0.18;
      const double pull = sstep(t, te, te + 1.0) - sstep(t, te + 7, te + 11);
      const double dpull = dsstep(t, te, te + 1.0) - dsstep(t, te + 7, te + 11);
      p.alpha_des = a0 + (a1 - a0) * pull;
      p.dalpha_des = (a1 - a0) * dpull;
      p.theta = 0.2 * a0 + 0.6 * p.alpha_des;
      p.q = 0.6 * p.dalpha_des;
      p.vg = vg0 - 9.0 * (sstep(t, te, te + 6) - sstep(t, te + 9, te + 16));
      p.dvg = -9.0 * (dsstep(t, te, te + 6) - dsstep(t, te + 9, te + 16));
      break;
    }
  }
  return p;
}

// Balancing vertical load factor making alpha_des(t) an exact solution of
// the AOA rate equation.
double balancing_nz(const ManeuverPoint& p, double nx) {
  const double gam = p.theta - p.alpha_des;
  return (std::cos(gam) - nx * std::sin(p.alpha_des) -
          (p.vg / cn::kGravity) * (p.dalpha_des - p.q)) /
         std::cos(p.alpha_des);
}

FlightParams params_at(const ScenarioConfig& cfg, double t, double z) {
  const ManeuverPoint p = maneuver_point(cfg, t);
  FlightParams th;
  th.vg = p.vg;
  th.theta = p.theta;
  th.q = p.q;
  th.nx = p.dvg / cn::kGravity;
  th.nz = balancing_nz(p, th.nx);
  th.z = z;
  return th;
}

double mismatch_rate(const ScenarioConfig& cfg, double t) {
  if (cfg.mismatch_amp == 0.0) return 0.0;
  return cfg.mismatch_amp * std::sin(rng::kTwoPi * cfg.mismatch_freq_hz * t);
}

// Wind component value at a sample index (filtered noise is generated
// sequentially; other kinds are closed-form in t).
std::vector<double> wind_series(const WindProfile& p, const ScenarioConfig& cfg,
                                uint64_t stream) {
  const int n = cfg.sample_count();
  std::vector<double> w(n + 1, 0.0);
  switch (p.kind) {
    case WindProfile::Kind::kNone:
      break;
    case WindProfile::Kind::kConstant:
      for (int k = 0; k <= n; ++k) w[k] = p.level;
      break;
    case WindProfile::Kind::kShearRamp:
      for (int k = 0; k <= n; ++k)
        w[k] = p.level * sstep(k * cfg.ts, p.t_start, p.t_start + p.ramp_s);
      break;
    case WindProfile::Kind::kGustSine:
      for (int k = 0; k <= n; ++k) {
        const double t = k * cfg.ts;
        w[k] = t < p.t_start ? 0.0
                             : p.level * std::sin(rng::kTwoPi * p.freq_hz *
                                                  (t - p.t_start));
      }
      break;
    case WindProfile::Kind::kFilteredNoise: {
      const double a = std::exp(-rng::kTwoPi * p.bandwidth_hz * cfg.ts);
      const double s = p.sigma * std::sqrt(1.0 - a * a);
      double state = p.sigma * rng::gaussian(cfg.seed, stream, 0);
      w[0] = state;
      for (int k = 1; k <= n; ++k) {
        state = a * state + s * rng::gaussian(cfg.seed, stream, k);
        w[k] = state;
      }
      break;
    }
  }
  return w;
}

}  // namespace

// ---------------------------------------------------------------------------
// Truth generation
// ---------------------------------------------------------------------------

TruthTrace generate_truth(const ScenarioConfig& cfg) {
  const int n = cfg.sample_count();
  if (n < 1 || cfg.ts <= 0.0)
    throw ScenarioError("generate_truth: empty scenario");

  TruthTrace tr;
  tr.ts = cfg.ts;
  tr.t.resize(n);
  tr.x.resize(n);
  tr.theta.resize(n);
  tr.y.resize(n);
  tr.v_tas.resize(n);
  tr.clean.resize(n);
  tr.fault.resize(n);
  tr.noise.resize(n);
  tr.corrupted.resize(n);

  const std::vector<double> wx =
      wind_series(cfg.wind_x, cfg, rng::stream::kWindX);
  const std::vector<double> wz =
      wind_series(cfg.wind_z, cfg, rng::stream::kWindZ);
  const double envelope = cfg.wind_envelope_kts * cn::kKtsToMs;
  for (int k = 0; k < n; ++k) {
    if (std::abs(wx[k]) > envelope || std::abs(wz[k]) > envelope)
      throw ScenarioError("generate_truth: wind exceeds the declared " +
                          std::to_string(cfg.wind_envelope_kts) +
                          " kts envelope at sample " + std::to_string(k));
  }

  double alpha = maneuver_point(cfg, 0.0).alpha_des;
  double z = cfg.altitude_ft * cn::kFtToM;
  const int substeps = 10;
  const double dt = cfg.ts / substeps;

  for (int k = 0; k < n; ++k) {
    const double t = k * cfg.ts;
    tr.t[k] = t;

    EstimState x;
    x.alpha = alpha;
    x.wx = wx[k];
    x.wz = wz[k];
    FlightParams th = params_at(cfg, t, z);

    try {
      tr.y[k] = h_output(x, th);
      tr.v_tas[k] = tas_from_state(x, th);
    } catch (const DomainError& e) {
      throw ScenarioError("generate_truth: model out of domain at sample " +
                          std::to_string(k) + ": " + e.what());
    }
    tr.x[k] = x;
    tr.theta[k] = th;

    SensorReadings clean;
    for (int i = 0; i < 3; ++i) {
      clean.alpha[i] = tr.y[k].alpha;
      clean.vc[i] = tr.y[k].vc;
    }
    clean.vz = tr.y[k].vz;
    tr.clean[k] = clean;

    // Advance truth AOA with sub-stepped RK4 (the estimator uses Euler, so
    // a small integration mismatch remains for u_alpha to absorb).
    try {
      for (int s = 0; s < substeps; ++s) {
        const double ts0 = t + s * dt;
        auto rate = [&](double a, double tt) {
          return f_alpha(a, params_at(cfg, tt, z)) + mismatch_rate(cfg, tt);
        };
        const double k1 = rate(alpha, ts0);
        const double k2 = rate(alpha + 0.5 * dt * k1, ts0 + 0.5 * dt);
        const double k3 = rate(alpha + 0.5 * dt * k2, ts0 + 0.5 * dt);
        const double k4 = rate(alpha + dt * k3, ts0 + dt);
        alpha += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      }
    } catch (const DomainError& e) {
      throw ScenarioError("generate_truth: AOA integration failed after "
                          "sample " +
                          std::to_string(k) + ": " + e.what());
    }
    z += cfg.ts * tr.y[k].vz;  // altitude follows the true vertical speed
  }
  return tr;
}

// ---------------------------------------------------------------------------
// Fault injection
// ---------------------------------------------------------------------------

double inject_fault(const FaultProfile& p, double t, double clean, double held,
                    uint64_t seed) {
  if (!p.active(t)) return 0.0;
  const double dt = t - p.t_on;
  switch (p.kind) {
    case FaultProfile::Kind::kBias:
      return p.bias;
    case FaultProfile::Kind::kOscillation:
      return p.amplitude * std::sin(rng::kTwoPi * p.freq_hz * dt);
    case FaultProfile::Kind::kJamming:
      return held - clean;
    case FaultProfile::Kind::kRunaway: {
      const double drift = p.slope * dt;
      return std::clamp(drift, -p.limit, p.limit);
    }
    case FaultProfile::Kind::kNrz: {
      // Alternating telegraph signal with seeded dwell times.
      const uint64_t stream = rng::stream::kNrzBase +
                              static_cast<uint64_t>(channel_code(p.target));
      double edge = 0.0;
      uint64_t i = 0;
      while (true) {
        const double dwell =
            p.dwell_min_s +
            rng::uniform01(seed, stream, i) * (p.dwell_max_s - p.dwell_min_s);
        if (edge + dwell > dt) break;
        edge += dwell;
        ++i;
      }
      return (i % 2 == 0 ? 1.0 : -1.0) * p.amplitude;
    }
  }
  return 0.0;
}

namespace {

double& channel_ref(SensorReadings& r, const ChannelId& id) {
  return id.family == ChannelFamily::kAoa ? r.alpha[id.index]
                                          : r.vc[id.index];
}

double channel_val(const SensorReadings& r, const ChannelId& id) {
  return id.family == ChannelFamily::kAoa ? r.alpha[id.index]
                                          : r.vc[id.index];
}

bool frozen_by_jam(const std::vector<FaultProfile>& faults,
                   const ChannelId& id, double t) {
  for (const auto& f : faults) {
    if (f.kind == FaultProfile::Kind::kJamming && f.active(t) &&
        channel_code(f.target) == channel_code(id))
      return true;
  }
  return false;
}

}  // namespace

void corrupt(TruthTrace& tr, const NoiseConfig& noise, uint64_t seed,
             const std::vector<FaultProfile>& faults) {
  const int n = tr.size();
  for (int k = 0; k < n; ++k) {
    SensorReadings nz{};
    for (int i = 0; i < 3; ++i) {
      nz.alpha[i] = noise.alpha_std *
                    rng::gaussian(seed, rng::stream::kNoiseAlpha0 + i, k);
      nz.vc[i] =
          noise.vc_std * rng::gaussian(seed, rng::stream::kNoiseVc0 + i, k);
    }
    nz.vz = noise.vz_std * rng::gaussian(seed, rng::stream::kNoiseVz, k);

    // A jammed sensor outputs a constant: no noise while frozen.
    for (int i = 0; i < 3; ++i) {
      if (frozen_by_jam(faults, {ChannelFamily::kAoa, i}, tr.t[k]))
        nz.alpha[i] = 0.0;
      if (frozen_by_jam(faults, {ChannelFamily::kVcas, i}, tr.t[k]))
        nz.vc[i] = 0.0;
    }
    tr.noise[k] = nz;

    SensorReadings c;
    for (int i = 0; i < 3; ++i) {
      c.alpha[i] = tr.clean[k].alpha[i] + tr.fault[k].alpha[i] + nz.alpha[i];
      c.vc[i] = tr.clean[k].vc[i] + tr.fault[k].vc[i] + nz.vc[i];
    }
    c.vz = tr.clean[k].vz + tr.fault[k].vz + nz.vz;
    tr.corrupted[k] = c;
  }
}

TruthTrace simulate_scenario(const ScenarioConfig& cfg) {
  TruthTrace tr = generate_truth(cfg);
  const int n = tr.size();

  for (const auto& f : cfg.faults) {
    // Jamming holds the clean value at the onset sample.
    double held = 0.0;
    if (f.kind == FaultProfile::Kind::kJamming) {
      const int k_on =
          std::clamp(static_cast<int>(std::ceil(f.t_on / cfg.ts)), 0, n - 1);
      held = channel_val(tr.clean[k_on], f.target);
    }
    for (int k = 0; k < n; ++k) {
      const double clean = channel_val(tr.clean[k], f.target);
      channel_ref(tr.fault[k], f.target) +=
          inject_fault(f, tr.t[k], clean, held, cfg.seed);
    }
  }

  corrupt(tr, cfg.noise, cfg.seed, cfg.faults);
  return tr;
}

}  // namespace airmhe
