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

namespace airmhe::constants {

// Physical constants (SI)
inline constexpr double kGravity = 9.80665;     // m/s^2
inline constexpr double kRAir = 287.053;        // J/(kg K)
inline constexpr double kGammaAir = 1.4;        // cp/cv

// Sea-level standard atmosphere
inline constexpr double kP0 = 101325.0;         // Pa
inline constexpr double kT0 = 288.15;           // K
inline constexpr double kA0 = 340.294;          // m/s, speed of sound at SL
inline constexpr double kLapseRate = 6.5e-3;    // K/m, troposphere
inline constexpr double kTropopauseAlt = 11000.0;  // m
inline constexpr double kTStratosphere = 216.65;   // K

// Unit conversions
inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kDegToRad = kPi / 180.0;
inline constexpr double kRadToDeg = 180.0 / kPi;
inline constexpr double kKtsToMs = 0.514444;    // knots -> m/s
inline constexpr double kMsToKts = 1.0 / kKtsToMs;
inline constexpr double kFtToM = 0.3048;

}  // namespace airmhe::constants
