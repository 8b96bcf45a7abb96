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

#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <thread>

#include "airmhe/errors.hpp"
#include "airmhe/kernels.hpp"
#include "airmhe/runner.hpp"
#include "airmhe/scenario_config.hpp"

namespace fs = std::filesystem;

namespace {

constexpr const char* kVersion = "0.1.0";

std::string default_out_dir(const std::string& flag_value) {
  if (!flag_value.empty()) return flag_value;
  if (const char* env = std::getenv("AIRMHE_OUT_DIR")) return env;
  return "";
}

int cmd_run(const std::string& config_path, const std::string& out_flag,
            bool has_seed, uint64_t seed_override, bool quiet) {
  airmhe::ScenarioConfig cfg = airmhe::load_scenario_file(config_path);
  if (has_seed) cfg.seed = seed_override;
  const airmhe::RunMetrics m =
      airmhe::run_scenario(cfg, default_out_dir(out_flag));
  if (!quiet) {
    std::cout << "scenario " << m.scenario << " (" << m.samples
              << " samples)\n"
              << "  AEE alpha  mean " << m.aee_alpha_mean_deg << " deg, max "
              << m.aee_alpha_max_deg << " deg\n"
              << "  AEE vcas   mean " << m.aee_vcas_mean_kts << " kts, max "
              << m.aee_vcas_max_kts << " kts\n"
              << "  false alarms " << m.false_alarms << ", missed "
              << m.missed_detections << ", degraded steps "
              << m.degraded_steps << "\n"
              << "  solver mean " << m.solver_ms_mean << " ms, max "
              << m.solver_ms_max << " ms, kkt solves/step "
              << m.kkt_solves_per_step << "\n";
    for (size_t c = 0; c < m.channels.size(); ++c) {
      const auto& ch = m.channels[c];
      if (!ch.has_fault) continue;
      const airmhe::ChannelId id =
          c < 3 ? airmhe::ChannelId{airmhe::ChannelFamily::kAoa,
                                    static_cast<int>(c)}
                : airmhe::ChannelId{airmhe::ChannelFamily::kVcas,
                                    static_cast<int>(c) - 3};
      std::cout << "  fault on " << airmhe::channel_name(id) << " at "
                << ch.fault_onset_s << " s: ";
      if (ch.detect_delay_s)
        std::cout << "detected after " << *ch.detect_delay_s << " s\n";
      else
        std::cout << "not detected\n";
    }
    if (m.accept_evaluated) {
      std::cout << "  acceptance: " << (m.accept_pass ? "pass" : "FAIL")
                << "\n";
      for (const auto& f : m.accept_failures) std::cout << "    ! " << f << "\n";
    }
  }
  return m.accept_evaluated && !m.accept_pass ? 1 : 0;
}

int cmd_suite(const std::string& dir, int jobs, const std::string& out_flag) {
  std::vector<std::string> configs;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".cfg")
      configs.push_back(entry.path().string());
  }
  if (configs.empty())
    throw airmhe::ConfigError("no .cfg files in '" + dir + "'");
  const auto results = airmhe::run_suite(configs, jobs,
                                         default_out_dir(out_flag), std::cout);
  for (const auto& m : results)
    if (m.accept_evaluated && !m.accept_pass) return 1;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"constrained moving-horizon air-data estimator harness"};
  app.require_subcommand(1);

  std::string config_path, suite_dir, out_dir;
  uint64_t seed_override = 0;
  bool quiet = false;
  int jobs = static_cast<int>(std::thread::hardware_concurrency());
  if (jobs < 1) jobs = 1;

  CLI::App* run = app.add_subcommand("run", "run one scenario config");
  run->add_option("config", config_path, "scenario .cfg file")->required();
  run->add_option("--out", out_dir, "output directory for trace/event CSVs");
  CLI::Option* seed_opt =
      run->add_option("--seed", seed_override, "override the scenario seed");
  run->add_flag("--quiet", quiet, "suppress the summary printout");

  CLI::App* suite = app.add_subcommand("suite", "run every scenario in a dir");
  suite->add_option("dir", suite_dir, "directory of .cfg files")->required();
  suite->add_option("--jobs", jobs, "worker threads");
  suite->add_option("--out", out_dir, "output directory");

  CLI::App* version = app.add_subcommand("version", "print version info");

  CLI11_PARSE(app, argc, argv);

  try {
    if (version->parsed()) {
      std::cout << "airmhe " << kVersion << " (kernels: "
                << airmhe::kernels::active().name << ")\n";
      return 0;
    }
    if (run->parsed())
      return cmd_run(config_path, out_dir, seed_opt->count() > 0,
                     seed_override, quiet);
    if (suite->parsed()) return cmd_suite(suite_dir, jobs, out_dir);
  } catch (const airmhe::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
