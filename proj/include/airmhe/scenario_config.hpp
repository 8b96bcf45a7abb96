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

// Line-oriented scenario config files: `[section]` headers and `key = value`
// pairs, `#` comments. Keys carry their unit in the name (alpha_std_deg,
// wind x.level_kts, ...); unknown keys or sections are rejected outright.
// Each `[fault]` section opens a new fault profile. The seed is mandatory.

#include <string>

#include "airmhe/sim.hpp"

namespace airmhe {

ScenarioConfig parse_scenario_text(const std::string& text,
                                   const std::string& origin = "<string>");

ScenarioConfig load_scenario_file(const std::string& path);

}  // namespace airmhe
