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

// Scenario runner: wires simulator -> FDI -> estimator sample by sample,
// scores estimation errors and detection delays against the truth trace,
// and serializes traces, events and solver instrumentation as CSV.

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "airmhe/sim.hpp"

namespace airmhe {

struct ChannelMetrics {
  bool has_fault = false;
  double fault_onset_s = 0.0;
  std::optional<double> detect_delay_s;  // absent: never detected
  int false_alarms = 0;
};

struct RunMetrics {
  std::string scenario;
  int samples = 0;

  double aee_alpha_max_deg = 0.0;
  double aee_alpha_mean_deg = 0.0;
  double aee_vcas_max_kts = 0.0;
  double aee_vcas_mean_kts = 0.0;

  std::array<ChannelMetrics, 6> channels{};  // a1 a2 a3 v1 v2 v3
  int false_alarms = 0;
  int missed_detections = 0;
  int degraded_steps = 0;

  double solver_ms_mean = 0.0;
  double solver_ms_max = 0.0;
  int kkt_solves_per_step = 0;  // -1 when not constant across samples

  bool wx_discard_seen = false;
  bool unreliable_seen = false;

  bool accept_evaluated = false;
  bool accept_pass = true;
  std::vector<std::string> accept_failures;

  std::optional<double> max_detect_delay_s() const {
    std::optional<double> d;
    for (const auto& ch : channels)
      if (ch.detect_delay_s) d = std::max(d.value_or(0.0), *ch.detect_delay_s);
    return d;
  }
};

/// Runs one scenario end to end. When out_dir is non-empty, writes
/// <name>.csv (per-sample trace), <name>_events.csv (detections) and
/// <name>_solver.csv (per-sample solver instrumentation) into it.
RunMetrics run_scenario(const ScenarioConfig& cfg,
                        const std::string& out_dir = "");

/// Runs every config (alphabetical by path) with `jobs` worker threads,
/// prints a summary table to `log`, writes summary.csv when out_dir given.
/// Returns one metrics row per scenario in the same order as the paths.
std::vector<RunMetrics> run_suite(std::vector<std::string> config_paths,
                                  int jobs, const std::string& out_dir,
                                  std::ostream& log);

/// One summary line per scenario, fixed column order (also used for
/// summary.csv).
std::string metrics_csv_header();
std::string metrics_csv_row(const RunMetrics& m);

}  // namespace airmhe
