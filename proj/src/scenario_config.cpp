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

#include "airmhe/scenario_config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "airmhe/constants.hpp"
#include "airmhe/errors.hpp"

namespace airmhe {

namespace cn = constants;

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

struct Parser {
  std::string origin;
  int line = 0;

  [[noreturn]] void fail(const std::string& msg) const {
    throw ConfigError(origin + ":" + std::to_string(line) + ": " + msg);
  }

  double num(const std::string& v) const {
    size_t used = 0;
    double d = 0.0;
    try {
      d = std::stod(v, &used);
    } catch (const std::exception&) {
      fail("expected a number, got '" + v + "'");
    }
    if (used != v.size()) fail("trailing characters in number '" + v + "'");
    return d;
  }

  long integer(const std::string& v) const {
    const double d = num(v);
    if (d != std::floor(d)) fail("expected an integer, got '" + v + "'");
    return static_cast<long>(d);
  }

  uint64_t unsigned64(const std::string& v) const {
    size_t used = 0;
    uint64_t u = 0;
    try {
      u = std::stoull(v, &used);
    } catch (const std::exception&) {
      fail("expected an unsigned integer, got '" + v + "'");
    }
    if (used != v.size()) fail("trailing characters in '" + v + "'");
    return u;
  }

  bool boolean(const std::string& v) const {
    if (v == "1" || v == "true" || v == "yes") return true;
    if (v == "0" || v == "false" || v == "no") return false;
    fail("expected a boolean (0/1/true/false), got '" + v + "'");
  }
};

bool wind_key(Parser& p, WindProfile& w, const std::string& key,
              const std::string& val) {
  if (key == "kind") {
    if (val == "none")
      w.kind = WindProfile::Kind::kNone;
    else if (val == "constant")
      w.kind = WindProfile::Kind::kConstant;
    else if (val == "shear_ramp")
      w.kind = WindProfile::Kind::kShearRamp;
    else if (val == "gust_sine")
      w.kind = WindProfile::Kind::kGustSine;
    else if (val == "filtered_noise")
      w.kind = WindProfile::Kind::kFilteredNoise;
    else
      p.fail("unknown wind kind '" + val + "'");
    return true;
  }
  if (key == "level_kts") {
    w.level = p.num(val) * cn::kKtsToMs;
    return true;
  }
  if (key == "t_start_s") {
    w.t_start = p.num(val);
    return true;
  }
  if (key == "ramp_s") {
    w.ramp_s = p.num(val);
    return true;
  }
  if (key == "freq_hz") {
    w.freq_hz = p.num(val);
    return true;
  }
  if (key == "sigma_kts") {
    w.sigma = p.num(val) * cn::kKtsToMs;
    return true;
  }
  if (key == "bandwidth_hz") {
    w.bandwidth_hz = p.num(val);
    return true;
  }
  return false;
}

}  // namespace

ScenarioConfig parse_scenario_text(const std::string& text,
                                   const std::string& origin) {
  ScenarioConfig cfg;
  Parser p{origin, 0};
  std::istringstream in(text);
  std::string raw;
  std::string section;
  bool seen_seed = false;

  // Bound half-widths are configured through [solver]; stash as physical
  // values and rebuild the box at the end.
  double alpha_lb = -10.0 * cn::kDegToRad, alpha_ub = 30.0 * cn::kDegToRad;
  double wind_bound = 120.0 * cn::kKtsToMs;
  double u_alpha_max = 10.0 * cn::kDegToRad;
  double u_wind_max = 30.0 * cn::kKtsToMs;
  // Weight standard deviations (converted to variances at the end).
  double p_alpha_std = std::sqrt(Weights{}.p_alpha);
  double p_w_std = std::sqrt(Weights{}.p_w);
  double q_alpha_std = std::sqrt(Weights{}.q_alpha);
  double q_w_std = std::sqrt(Weights{}.q_w);
  double r_alpha_std = std::sqrt(Weights{}.r_alpha);
  double r_vz_std = std::sqrt(Weights{}.r_vz);
  double r_vc_std = std::sqrt(Weights{}.r_vc);

  while (std::getline(in, raw)) {
    ++p.line;
    std::string line = raw;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') p.fail("malformed section header '" + line + "'");
      section = line.substr(1, line.size() - 2);
      if (section == "fault") {
        cfg.faults.emplace_back();
      } else if (section != "scenario" && section != "flight" &&
                 section != "wind" && section != "noise" &&
                 section != "mismatch" && section != "solver" &&
                 section != "weights" && section != "detector" &&
                 section != "accept") {
        p.fail("unknown section [" + section + "]");
      }
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string::npos) p.fail("expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (key.empty() || val.empty()) p.fail("empty key or value");
    if (section.empty()) p.fail("key outside any section");

    if (section == "scenario") {
      if (key == "name")
        cfg.name = val;
      else if (key == "duration_s")
        cfg.duration_s = p.num(val);
      else if (key == "ts_s")
        cfg.ts = p.num(val);
      else if (key == "seed") {
        cfg.seed = p.unsigned64(val);
        seen_seed = true;
      } else if (key == "event_time_s")
        cfg.event_time_s = p.num(val);
      else
        p.fail("unknown key '" + key + "' in [scenario]");
    } else if (section == "flight") {
      if (key == "maneuver") {
        if (val == "load_factor")
          cfg.maneuver = Maneuver::kLoadFactor;
        else if (val == "flight_path_angle")
          cfg.maneuver = Maneuver::kFlightPathAngle;
        else if (val == "vertical_speed")
          cfg.maneuver = Maneuver::kVerticalSpeed;
        else if (val == "aoa_protection")
          cfg.maneuver = Maneuver::kAoaProtection;
        else
          p.fail("unknown maneuver '" + val + "'");
      } else if (key == "altitude_ft")
        cfg.altitude_ft = p.num(val);
      else if (key == "speed_kts")
        cfg.speed_kts = p.num(val);
      else
        p.fail("unknown key '" + key + "' in [flight]");
    } else if (section == "wind") {
      if (key == "envelope_kts") {
        cfg.wind_envelope_kts = p.num(val);
      } else if (key.rfind("x.", 0) == 0 || key == "x") {
        const std::string sub = key == "x" ? "kind" : key.substr(2);
        if (!wind_key(p, cfg.wind_x, sub, val))
          p.fail("unknown key '" + key + "' in [wind]");
      } else if (key.rfind("z.", 0) == 0 || key == "z") {
        const std::string sub = key == "z" ? "kind" : key.substr(2);
        if (!wind_key(p, cfg.wind_z, sub, val))
          p.fail("unknown key '" + key + "' in [wind]");
      } else {
        p.fail("unknown key '" + key + "' in [wind]");
      }
    } else if (section == "noise") {
      if (key == "alpha_std_deg")
        cfg.noise.alpha_std = p.num(val) * cn::kDegToRad;
      else if (key == "vz_std_ms")
        cfg.noise.vz_std = p.num(val);
      else if (key == "vc_std_kts")
        cfg.noise.vc_std = p.num(val) * cn::kKtsToMs;
      else
        p.fail("unknown key '" + key + "' in [noise]");
    } else if (section == "mismatch") {
      if (key == "amplitude_deg_s")
        cfg.mismatch_amp = p.num(val) * cn::kDegToRad;
      else if (key == "freq_hz")
        cfg.mismatch_freq_hz = p.num(val);
      else
        p.fail("unknown key '" + key + "' in [mismatch]");
    } else if (section == "fault") {
      if (cfg.faults.empty()) p.fail("internal: no open fault profile");
      FaultProfile& f = cfg.faults.back();
      if (key == "kind") {
        if (val == "bias")
          f.kind = FaultProfile::Kind::kBias;
        else if (val == "oscillation")
          f.kind = FaultProfile::Kind::kOscillation;
        else if (val == "jamming")
          f.kind = FaultProfile::Kind::kJamming;
        else if (val == "runaway")
          f.kind = FaultProfile::Kind::kRunaway;
        else if (val == "nrz")
          f.kind = FaultProfile::Kind::kNrz;
        else
          p.fail("unknown fault kind '" + val + "'");
      } else if (key == "target") {
        const auto id = parse_channel(val);
        if (!id) p.fail("unknown channel '" + val + "' (use a1..a3, v1..v3)");
        f.target = *id;
      } else if (key == "t_on_s")
        f.t_on = p.num(val);
      else if (key == "t_off_s")
        f.t_off = p.num(val);
      else if (key == "bias_deg")
        f.bias = p.num(val) * cn::kDegToRad;
      else if (key == "bias_kts")
        f.bias = p.num(val) * cn::kKtsToMs;
      else if (key == "amplitude_deg")
        f.amplitude = p.num(val) * cn::kDegToRad;
      else if (key == "amplitude_kts")
        f.amplitude = p.num(val) * cn::kKtsToMs;
      else if (key == "freq_hz")
        f.freq_hz = p.num(val);
      else if (key == "slope_deg_s")
        f.slope = p.num(val) * cn::kDegToRad;
      else if (key == "slope_kts_s")
        f.slope = p.num(val) * cn::kKtsToMs;
      else if (key == "limit_deg")
        f.limit = p.num(val) * cn::kDegToRad;
      else if (key == "limit_kts")
        f.limit = p.num(val) * cn::kKtsToMs;
      else if (key == "dwell_min_s")
        f.dwell_min_s = p.num(val);
      else if (key == "dwell_max_s")
        f.dwell_max_s = p.num(val);
      else
        p.fail("unknown key '" + key + "' in [fault]");
    } else if (section == "solver") {
      if (key == "horizon")
        cfg.solver.horizon = static_cast<int>(p.integer(val));
      else if (key == "kappa_init")
        cfg.solver.barrier.kappa_init = p.num(val);
      else if (key == "n_kappa")
        cfg.solver.barrier.n_kappa = static_cast<int>(p.integer(val));
      else if (key == "n_qp")
        cfg.solver.barrier.n_qp = static_cast<int>(p.integer(val));
      else if (key == "ns_max")
        cfg.solver.barrier.ns_max = static_cast<int>(p.integer(val));
      else if (key == "kappa_decay")
        cfg.solver.barrier.kappa_decay = p.num(val);
      else if (key == "alpha_lb_deg")
        alpha_lb = p.num(val) * cn::kDegToRad;
      else if (key == "alpha_ub_deg")
        alpha_ub = p.num(val) * cn::kDegToRad;
      else if (key == "wind_bound_kts")
        wind_bound = p.num(val) * cn::kKtsToMs;
      else if (key == "u_alpha_max_deg_s")
        u_alpha_max = p.num(val) * cn::kDegToRad;
      else if (key == "u_wind_max_kts_s")
        u_wind_max = p.num(val) * cn::kKtsToMs;
      else
        p.fail("unknown key '" + key + "' in [solver]");
    } else if (section == "weights") {
      if (key == "p_alpha_std_deg")
        p_alpha_std = p.num(val) * cn::kDegToRad;
      else if (key == "p_wind_std_kts")
        p_w_std = p.num(val) * cn::kKtsToMs;
      else if (key == "q_alpha_std_deg_s")
        q_alpha_std = p.num(val) * cn::kDegToRad;
      else if (key == "q_wind_std_kts_s")
        q_w_std = p.num(val) * cn::kKtsToMs;
      else if (key == "r_alpha_std_deg")
        r_alpha_std = p.num(val) * cn::kDegToRad;
      else if (key == "r_vz_std_ms")
        r_vz_std = p.num(val);
      else if (key == "r_vc_std_kts")
        r_vc_std = p.num(val) * cn::kKtsToMs;
      else
        p.fail("unknown key '" + key + "' in [weights]");
    } else if (section == "detector") {
      if (key == "j_alpha_th_deg")
        cfg.detector.j_alpha_th = p.num(val) * cn::kDegToRad;
      else if (key == "j_vc_th_kts")
        cfg.detector.j_vc_th = p.num(val) * cn::kKtsToMs;
      else if (key == "n_confirm")
        cfg.detector.n_confirm = static_cast<int>(p.integer(val));
      else if (key == "n_eval")
        cfg.detector.n_eval = static_cast<int>(p.integer(val));
      else if (key == "latch")
        cfg.detector.latch = p.boolean(val);
      else
        p.fail("unknown key '" + key + "' in [detector]");
    } else if (section == "accept") {
      if (key == "max_false_alarms")
        cfg.accept.max_false_alarms = static_cast<int>(p.integer(val));
      else if (key == "aee_alpha_mean_max_deg")
        cfg.accept.aee_alpha_mean_max_deg = p.num(val);
      else if (key == "aee_alpha_max_max_deg")
        cfg.accept.aee_alpha_max_max_deg = p.num(val);
      else if (key == "aee_vcas_mean_max_kts")
        cfg.accept.aee_vcas_mean_max_kts = p.num(val);
      else if (key == "aee_vcas_max_max_kts")
        cfg.accept.aee_vcas_max_max_kts = p.num(val);
      else if (key == "detect_delay_max_s")
        cfg.accept.detect_delay_max_s = p.num(val);
      else if (key == "require_all_faults_detected")
        cfg.accept.require_all_faults_detected = p.boolean(val);
      else if (key == "expect_detected") {
        cfg.accept.expect_detected_set = true;
        if (val != "none") {
          std::string item;
          std::istringstream list(val);
          while (std::getline(list, item, ',')) {
            item = trim(item);
            const auto id = parse_channel(item);
            if (!id)
              p.fail("unknown channel '" + item + "' in expect_detected");
            cfg.accept.expect_detected.push_back(*id);
          }
        }
      } else
        p.fail("unknown key '" + key + "' in [accept]");
    }
  }

  p.line = 0;  // validation errors refer to the whole file
  if (!seen_seed) p.fail("missing mandatory scenario.seed");
  if (cfg.duration_s <= 0.0 || cfg.ts <= 0.0)
    p.fail("duration_s and ts_s must be positive");
  const double count = cfg.duration_s / cfg.ts;
  if (std::abs(count - std::round(count)) > 1e-9 * count)
    p.fail("duration_s must be an integer multiple of ts_s");
  for (const auto& f : cfg.faults) {
    if (!(f.t_on < f.t_off)) p.fail("fault t_on_s must precede t_off_s");
    if (f.kind == FaultProfile::Kind::kNrz && f.dwell_min_s > f.dwell_max_s)
      p.fail("nrz dwell_min_s must not exceed dwell_max_s");
  }
  if (!(alpha_lb < alpha_ub)) p.fail("alpha bounds must satisfy lb < ub");
  if (!(wind_bound > 0.0) || !(u_alpha_max > 0.0) || !(u_wind_max > 0.0))
    p.fail("bound half-widths must be positive");
  if (cfg.detector.n_confirm < 1 || cfg.detector.n_confirm > cfg.detector.n_eval)
    p.fail("detector n_confirm must lie in [1, n_eval]");
  if (cfg.solver.horizon < 1) p.fail("solver horizon must be >= 1");
  if (!(cfg.solver.barrier.kappa_init > 0.0) ||
      cfg.solver.barrier.n_kappa < 1 || cfg.solver.barrier.n_qp < 1 ||
      cfg.solver.barrier.ns_max < 1 ||
      !(cfg.solver.barrier.kappa_decay > 0.0))
    p.fail("barrier parameters out of range");
  for (const double std_val : {p_alpha_std, p_w_std, q_alpha_std, q_w_std,
                               r_alpha_std, r_vz_std, r_vc_std})
    if (!(std_val > 0.0)) p.fail("weight standard deviations must be positive");
  if (cfg.noise.alpha_std < 0.0 || cfg.noise.vz_std < 0.0 ||
      cfg.noise.vc_std < 0.0)
    p.fail("noise standard deviations must be non-negative");

  cfg.solver.ts = cfg.ts;
  cfg.solver.bounds.x_lb = Vec3{{alpha_lb, -wind_bound, -wind_bound}};
  cfg.solver.bounds.x_ub = Vec3{{alpha_ub, wind_bound, wind_bound}};
  cfg.solver.bounds.u_lb = Vec3{{-u_alpha_max, -u_wind_max, -u_wind_max}};
  cfg.solver.bounds.u_ub = Vec3{{u_alpha_max, u_wind_max, u_wind_max}};
  cfg.weights.p_alpha = p_alpha_std * p_alpha_std;
  cfg.weights.p_w = p_w_std * p_w_std;
  cfg.weights.q_alpha = q_alpha_std * q_alpha_std;
  cfg.weights.q_w = q_w_std * q_w_std;
  cfg.weights.r_alpha = r_alpha_std * r_alpha_std;
  cfg.weights.r_vz = r_vz_std * r_vz_std;
  cfg.weights.r_vc = r_vc_std * r_vc_std;
  return cfg;
}

ScenarioConfig load_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_scenario_text(ss.str(), path);
}

}  // namespace airmhe
