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

#include "airmhe/runner.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <thread>

#include "airmhe/constants.hpp"
#include "airmhe/errors.hpp"
#include "airmhe/fdi.hpp"
#include "airmhe/scenario_config.hpp"

namespace airmhe {

namespace cn = constants;
namespace fs = std::filesystem;

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

struct TraceRow {
  double t;
  double truth_alpha_deg, truth_wx_kts, truth_wz_kts, truth_vz_ms,
      truth_vc_kts;
  std::array<double, 3> meas_alpha_deg, meas_vc_kts;
  double meas_vz_ms;
  double fused_alpha_deg, fused_vc_kts;
  double est_alpha_deg, est_wx_kts, est_wz_kts, est_vc_kts;
  std::array<double, 3> j_alpha_deg, j_vc_kts;
  std::array<int, 3> h_a, h_v;
  double solver_ms;
};

const char* kTraceHeader =
    "t_s,truth_alpha_deg,truth_Wx_kts,truth_Wz_kts,truth_Vz_ms,truth_Vc_kts,"
    "meas_alpha1_deg,meas_alpha2_deg,meas_alpha3_deg,"
    "meas_vc1_kts,meas_vc2_kts,meas_vc3_kts,meas_vz_ms,"
    "fused_alpha_deg,fused_vc_kts,"
    "est_alpha_deg,est_Wx_kts,est_Wz_kts,est_vc_kts,"
    "J_alpha1_deg,J_alpha2_deg,J_alpha3_deg,J_vc1_kts,J_vc2_kts,J_vc3_kts,"
    "h_a1,h_a2,h_a3,h_v1,h_v2,h_v3,solver_ms";

void write_trace(const std::string& path, const std::vector<TraceRow>& rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write trace file " + path);
  out << kTraceHeader << "\n";
  for (const auto& r : rows) {
    out << fmt(r.t) << ',' << fmt(r.truth_alpha_deg) << ','
        << fmt(r.truth_wx_kts) << ',' << fmt(r.truth_wz_kts) << ','
        << fmt(r.truth_vz_ms) << ',' << fmt(r.truth_vc_kts);
    for (int i = 0; i < 3; ++i) out << ',' << fmt(r.meas_alpha_deg[i]);
    for (int i = 0; i < 3; ++i) out << ',' << fmt(r.meas_vc_kts[i]);
    out << ',' << fmt(r.meas_vz_ms) << ',' << fmt(r.fused_alpha_deg) << ','
        << fmt(r.fused_vc_kts) << ',' << fmt(r.est_alpha_deg) << ','
        << fmt(r.est_wx_kts) << ',' << fmt(r.est_wz_kts) << ','
        << fmt(r.est_vc_kts);
    for (int i = 0; i < 3; ++i) out << ',' << fmt(r.j_alpha_deg[i]);
    for (int i = 0; i < 3; ++i) out << ',' << fmt(r.j_vc_kts[i]);
    for (int i = 0; i < 3; ++i) out << ',' << r.h_a[i];
    for (int i = 0; i < 3; ++i) out << ',' << r.h_v[i];
    out << ',' << fmt(r.solver_ms) << '\n';
  }
}

struct EventRecord {
  ChannelId channel;
  long sample;
  double t;
  double rms;
};

void write_events(const std::string& path,
                  const std::vector<EventRecord>& events) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write events file " + path);
  out << "channel,sample,t_s,rms\n";
  for (const auto& e : events) {
    const bool aoa = e.channel.family == ChannelFamily::kAoa;
    const double rms = aoa ? e.rms * cn::kRadToDeg : e.rms * cn::kMsToKts;
    out << channel_name(e.channel) << ',' << e.sample << ',' << fmt(e.t)
        << ',' << fmt(rms) << '\n';
  }
}

void write_solver_log(const std::string& path,
                      const std::vector<SolveTrace>& traces, double ts) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write solver file " + path);
  out << "t_s,kkt_solves";
  for (int j = 0; j < 4; ++j)
    out << ",kappa" << j << ",step" << j << ",dir_norm" << j;
  out << "\n";
  for (size_t k = 0; k < traces.size(); ++k) {
    out << fmt(static_cast<double>(k + 1) * ts) << ','
        << traces[k].kkt_solves;
    for (size_t j = 0; j < 4; ++j) {
      if (j < traces[k].iters.size()) {
        const auto& it = traces[k].iters[j];
        out << ',' << fmt(it.kappa) << ',' << fmt(it.step) << ','
            << fmt(it.dir_inf_norm);
      } else {
        out << ",,,";
      }
    }
    out << '\n';
  }
}

void evaluate_accept(const ScenarioConfig& cfg, RunMetrics& m) {
  if (!cfg.accept.any()) return;
  m.accept_evaluated = true;
  auto fail = [&](const std::string& what) {
    m.accept_pass = false;
    m.accept_failures.push_back(what);
  };
  const AcceptSpec& a = cfg.accept;
  if (a.max_false_alarms && m.false_alarms > *a.max_false_alarms)
    fail("false_alarms " + std::to_string(m.false_alarms) + " > " +
         std::to_string(*a.max_false_alarms));
  if (a.aee_alpha_mean_max_deg && m.aee_alpha_mean_deg > *a.aee_alpha_mean_max_deg)
    fail("aee_alpha_mean " + fmt(m.aee_alpha_mean_deg) + " deg > " +
         fmt(*a.aee_alpha_mean_max_deg));
  if (a.aee_alpha_max_max_deg && m.aee_alpha_max_deg > *a.aee_alpha_max_max_deg)
    fail("aee_alpha_max " + fmt(m.aee_alpha_max_deg) + " deg > " +
         fmt(*a.aee_alpha_max_max_deg));
  if (a.aee_vcas_mean_max_kts && m.aee_vcas_mean_kts > *a.aee_vcas_mean_max_kts)
    fail("aee_vcas_mean " + fmt(m.aee_vcas_mean_kts) + " kts > " +
         fmt(*a.aee_vcas_mean_max_kts));
  if (a.aee_vcas_max_max_kts && m.aee_vcas_max_kts > *a.aee_vcas_max_max_kts)
    fail("aee_vcas_max " + fmt(m.aee_vcas_max_kts) + " kts > " +
         fmt(*a.aee_vcas_max_max_kts));
  if (a.detect_delay_max_s || a.require_all_faults_detected ||
      a.expect_detected_set) {
    auto must_detect = [&](int c) {
      if (a.expect_detected_set) {
        for (const auto& id : a.expect_detected)
          if (channel_code(id) == c) return true;
        return false;
      }
      return m.channels[c].has_fault;
    };
    for (int c = 0; c < 6; ++c) {
      const ChannelMetrics& ch = m.channels[c];
      if (!must_detect(c)) continue;
      const ChannelId id = c < 3 ? ChannelId{ChannelFamily::kAoa, c}
                                 : ChannelId{ChannelFamily::kVcas, c - 3};
      if (!ch.detect_delay_s) {
        fail("channel " + channel_name(id) + " never detected");
      } else if (a.detect_delay_max_s &&
                 *ch.detect_delay_s > *a.detect_delay_max_s) {
        fail("channel " + channel_name(id) + " delay " +
             fmt(*ch.detect_delay_s) + " s > " + fmt(*a.detect_delay_max_s));
      }
    }
  }
}

}  // namespace

RunMetrics run_scenario(const ScenarioConfig& cfg, const std::string& out_dir) {
  const TruthTrace trace = simulate_scenario(cfg);
  const int n = trace.size();

  MheConfig solver_cfg = cfg.solver;
  solver_cfg.ts = cfg.ts;
  MheEstimator est(solver_cfg, cfg.weights);
  SensorBank bank(cfg.detector);

  RunMetrics m;
  m.scenario = cfg.name;
  m.samples = n;
  for (const auto& f : cfg.faults) {
    ChannelMetrics& ch = m.channels[static_cast<size_t>(channel_code(f.target))];
    if (!ch.has_fault || f.t_on < ch.fault_onset_s) ch.fault_onset_s = f.t_on;
    ch.has_fault = true;
  }

  std::vector<TraceRow> rows;
  rows.reserve(static_cast<size_t>(n));
  std::vector<EventRecord> events;
  std::vector<SolveTrace> solver_traces;
  solver_traces.reserve(static_cast<size_t>(n));

  double aee_a_sum = 0.0, aee_v_sum = 0.0;
  double solver_ms_sum = 0.0;
  int timed_steps = 0;

  // Cold start: fuse the first readings with equal weights and seed the
  // estimator with the fused AOA and zero wind.
  FusedMeasurement fused = bank.fuse(trace.corrupted[0], cfg.weights);
  EstimState x0;
  x0.alpha = fused.alpha_m;
  OutputVec pred = est.initialize(x0, trace.theta[0],
                                  fused.to_meas_sample(cfg.weights));
  EstimState est_state = est.window().states.back();

  auto vc_estimate = [&](const EstimState& x, const FlightParams& th,
                         double fallback) {
    try {
      return h_output(x, th).vc;
    } catch (const DomainError&) {
      return fallback;
    }
  };
  double est_vc = vc_estimate(est_state, trace.theta[0], trace.y[0].vc);

  for (int k = 0; k < n; ++k) {
    double solver_ms = 0.0;
    SolveTrace step_trace;
    if (k > 0) {
      bank.update_residuals(trace.corrupted[k], pred);
      const std::vector<ChannelId> newly = bank.detect();
      for (const auto& id : newly) {
        events.push_back({id, k, trace.t[k], bank.rms(id.family, id.index)});
        ChannelMetrics& ch = m.channels[static_cast<size_t>(channel_code(id))];
        if (!ch.has_fault || trace.t[k] < ch.fault_onset_s) {
          ++ch.false_alarms;
          ++m.false_alarms;
        } else if (!ch.detect_delay_s) {
          ch.detect_delay_s = trace.t[k] - ch.fault_onset_s;
        }
      }
      fused = bank.fuse(trace.corrupted[k], cfg.weights);
      const IsolationState iso = bank.sensor_mask();
      m.wx_discard_seen = m.wx_discard_seen || iso.wx_discard;
      m.unreliable_seen = m.unreliable_seen || iso.unreliable;

      const auto t0 = std::chrono::steady_clock::now();
      const StepResult res = est.step(fused.to_meas_sample(cfg.weights),
                                      trace.theta[k], iso.mask);
      const auto t1 = std::chrono::steady_clock::now();
      solver_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
      solver_ms_sum += solver_ms;
      m.solver_ms_max = std::max(m.solver_ms_max, solver_ms);
      ++timed_steps;

      if (res.degraded) {
        ++m.degraded_steps;
      } else {
        if (m.kkt_solves_per_step == 0)
          m.kkt_solves_per_step = res.trace.kkt_solves;
        else if (m.kkt_solves_per_step != res.trace.kkt_solves)
          m.kkt_solves_per_step = -1;
      }
      step_trace = res.trace;
      pred = res.prediction;
      est_state = res.estimate;
      est_vc = vc_estimate(est_state, trace.theta[k], est_vc);
      solver_traces.push_back(step_trace);
    }

    const double aee_a =
        std::abs(est_state.alpha - trace.x[k].alpha) * cn::kRadToDeg;
    const double aee_v = std::abs(est_vc - trace.y[k].vc) * cn::kMsToKts;
    aee_a_sum += aee_a;
    aee_v_sum += aee_v;
    m.aee_alpha_max_deg = std::max(m.aee_alpha_max_deg, aee_a);
    m.aee_vcas_max_kts = std::max(m.aee_vcas_max_kts, aee_v);

    TraceRow r;
    r.t = trace.t[k];
    r.truth_alpha_deg = trace.x[k].alpha * cn::kRadToDeg;
    r.truth_wx_kts = trace.x[k].wx * cn::kMsToKts;
    r.truth_wz_kts = trace.x[k].wz * cn::kMsToKts;
    r.truth_vz_ms = trace.y[k].vz;
    r.truth_vc_kts = trace.y[k].vc * cn::kMsToKts;
    for (int i = 0; i < 3; ++i) {
      r.meas_alpha_deg[i] = trace.corrupted[k].alpha[i] * cn::kRadToDeg;
      r.meas_vc_kts[i] = trace.corrupted[k].vc[i] * cn::kMsToKts;
      r.j_alpha_deg[i] = bank.rms(ChannelFamily::kAoa, i) * cn::kRadToDeg;
      r.j_vc_kts[i] = bank.rms(ChannelFamily::kVcas, i) * cn::kMsToKts;
      r.h_a[i] = bank.healthy(ChannelFamily::kAoa, i) ? 1 : 0;
      r.h_v[i] = bank.healthy(ChannelFamily::kVcas, i) ? 1 : 0;
    }
    r.meas_vz_ms = trace.corrupted[k].vz;
    r.fused_alpha_deg = fused.alpha_m * cn::kRadToDeg;
    r.fused_vc_kts = fused.vc_m * cn::kMsToKts;
    r.est_alpha_deg = est_state.alpha * cn::kRadToDeg;
    r.est_wx_kts = est_state.wx * cn::kMsToKts;
    r.est_wz_kts = est_state.wz * cn::kMsToKts;
    r.est_vc_kts = est_vc * cn::kMsToKts;
    r.solver_ms = solver_ms;
    rows.push_back(r);
  }

  m.aee_alpha_mean_deg = aee_a_sum / n;
  m.aee_vcas_mean_kts = aee_v_sum / n;
  m.solver_ms_mean = timed_steps > 0 ? solver_ms_sum / timed_steps : 0.0;
  for (const auto& ch : m.channels)
    if (ch.has_fault && !ch.detect_delay_s) ++m.missed_detections;

  evaluate_accept(cfg, m);

  if (!out_dir.empty()) {
    fs::create_directories(out_dir);
    const std::string base = (fs::path(out_dir) / cfg.name).string();
    write_trace(base + ".csv", rows);
    write_events(base + "_events.csv", events);
    write_solver_log(base + "_solver.csv", solver_traces, cfg.ts);
  }
  return m;
}

// ---------------------------------------------------------------------------
// Suite driver
// ---------------------------------------------------------------------------

std::string metrics_csv_header() {
  std::string h =
      "scenario,samples,aee_alpha_max_deg,aee_alpha_mean_deg,"
      "aee_vcas_max_kts,aee_vcas_mean_kts";
  const char* names[6] = {"a1", "a2", "a3", "v1", "v2", "v3"};
  for (const char* c : names) h += std::string(",delay_") + c + "_s";
  h += ",false_alarms,missed_detections,degraded_steps,solver_ms_mean,"
       "solver_ms_max,kkt_solves_per_step,wx_discard,unreliable,accept";
  return h;
}

std::string metrics_csv_row(const RunMetrics& m) {
  std::ostringstream o;
  o << m.scenario << ',' << m.samples << ',' << fmt(m.aee_alpha_max_deg) << ','
    << fmt(m.aee_alpha_mean_deg) << ',' << fmt(m.aee_vcas_max_kts) << ','
    << fmt(m.aee_vcas_mean_kts);
  for (const auto& ch : m.channels) {
    o << ',';
    if (ch.detect_delay_s) o << fmt(*ch.detect_delay_s);
  }
  o << ',' << m.false_alarms << ',' << m.missed_detections << ','
    << m.degraded_steps << ',' << fmt(m.solver_ms_mean) << ','
    << fmt(m.solver_ms_max) << ',' << m.kkt_solves_per_step << ','
    << (m.wx_discard_seen ? 1 : 0) << ',' << (m.unreliable_seen ? 1 : 0) << ','
    << (m.accept_evaluated ? (m.accept_pass ? "pass" : "FAIL") : "-");
  return o.str();
}

std::vector<RunMetrics> run_suite(std::vector<std::string> config_paths,
                                  int jobs, const std::string& out_dir,
                                  std::ostream& log) {
  std::sort(config_paths.begin(), config_paths.end());
  const int count = static_cast<int>(config_paths.size());
  std::vector<RunMetrics> results(static_cast<size_t>(count));
  std::atomic<int> next{0};

  auto worker = [&]() {
    while (true) {
      const int i = next.fetch_add(1);
      if (i >= count) return;
      RunMetrics& m = results[static_cast<size_t>(i)];
      try {
        const ScenarioConfig cfg = load_scenario_file(config_paths[i]);
        m = run_scenario(cfg, out_dir);
      } catch (const std::exception& e) {
        m.scenario = fs::path(config_paths[i]).stem().string();
        m.accept_evaluated = true;
        m.accept_pass = false;
        m.accept_failures.push_back(e.what());
      }
    }
  };

  jobs = std::max(1, jobs);
  std::vector<std::thread> pool;
  pool.reserve(static_cast<size_t>(jobs));
  for (int i = 0; i < jobs; ++i) pool.emplace_back(worker);
  for (auto& th : pool) th.join();

  log << std::left << std::setw(16) << "scenario" << std::right
      << std::setw(10) << "aee_a_mean" << std::setw(10) << "aee_a_max"
      << std::setw(11) << "aee_vc_mean" << std::setw(11) << "aee_vc_max"
      << std::setw(10) << "max_delay" << std::setw(5) << "FA" << std::setw(7)
      << "missed" << std::setw(9) << "slv_ms" << std::setw(8) << "status"
      << "\n";
  for (const auto& m : results) {
    std::ostringstream delay;
    if (const auto d = m.max_detect_delay_s())
      delay << std::fixed << std::setprecision(2) << *d;
    else
      delay << "-";
    log << std::left << std::setw(16) << m.scenario << std::right
        << std::setw(10) << std::fixed << std::setprecision(4)
        << m.aee_alpha_mean_deg << std::setw(10) << m.aee_alpha_max_deg
        << std::setw(11) << m.aee_vcas_mean_kts << std::setw(11)
        << m.aee_vcas_max_kts << std::setw(10) << delay.str() << std::setw(5)
        << m.false_alarms << std::setw(7) << m.missed_detections
        << std::setw(9) << std::setprecision(3) << m.solver_ms_mean
        << std::setw(8)
        << (m.accept_evaluated ? (m.accept_pass ? "pass" : "FAIL") : "-")
        << "\n";
    for (const auto& f : m.accept_failures)
      log << "    ! " << m.scenario << ": " << f << "\n";
  }

  if (!out_dir.empty()) {
    fs::create_directories(out_dir);
    std::ofstream out(fs::path(out_dir) / "summary.csv", std::ios::binary);
    out << metrics_csv_header() << "\n";
    for (const auto& m : results) out << metrics_csv_row(m) << "\n";
  }
  return results;
}

}  // namespace airmhe
