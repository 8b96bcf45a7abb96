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

#include <stdexcept>
#include <string>

namespace airmhe {

/// Model evaluated outside its validity region (altitude range, singular
/// flight geometry, supersonic CAS, speed floor).
class DomainError : public std::runtime_error {
 public:
  explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

/// A 3x3 determinant or a Schur complement fell below the scaled threshold.
class SingularMatrixError : public std::runtime_error {
 public:
  SingularMatrixError(const std::string& what, double det)
      : std::runtime_error(what + " (det=" + std::to_string(det) + ")"),
        det_(det) {}
  double det() const { return det_; }

 private:
  double det_;
};

/// Barrier evaluation requested at a point on or outside the box.
class InfeasiblePointError : public std::runtime_error {
 public:
  explicit InfeasiblePointError(const std::string& what)
      : std::runtime_error(what) {}
};

/// Scenario/config file rejected (unknown key, bad value, missing section).
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Scenario generation drove the model out of its domain.
class ScenarioError : public std::runtime_error {
 public:
  explicit ScenarioError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace airmhe
