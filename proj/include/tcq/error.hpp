// Copyright 2026 The tcq Authors
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

namespace tcq {

// Numeric values are part of the C API (tcq_status) and must stay stable.
enum class ErrorCode : int {
  InvalidDimension = 10,
  Shape = 11,
  Index = 12,
  InvalidState = 13,
  OutOfBranch = 20,
  UnreachableFrequency = 21,
  Configuration = 22,
  SingularDetuning = 30,
  Resonance = 31,
  StateIdentification = 32,
  NoOffPoint = 33,
  InvalidPulse = 40,
  TooFastRamp = 41,
  IncompatibleGrid = 42,
  DdrInfeasible = 43,
  InvalidTrajectory = 44,
  IntegratorFailure = 50,
  LowContrast = 51,
  Infeasible = 60,
  Calibration = 61,
  Nonadiabatic = 62,
  Inversion = 70,
  Tomography = 71,
  BasisMismatch = 72,
  Benchmarking = 73,
  Usage = 80,
  Io = 81,
};

const char* to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace tcq
