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

#include <array>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "tcq/error.hpp"
#include "tcq/qspace.hpp"

namespace tcq {

struct ModeParams {
  double omega_max_ghz = 0.0;
  double eta_mhz = 0.0;
  double t1_us = 0.0;
  double t2_us = 0.0;
};

struct ReadoutFidelity {
  double fg = 1.0;
  double fe = 1.0;
};

/// Static circuit constants. Mode order Q1, C, Q2 as in ModeLayout.
struct DeviceParams {
  std::array<ModeParams, 3> modes;
  double g1c_mhz = 0.0;
  double g2c_mhz = 0.0;
  double g12_mhz = 0.0;
  // Flux-line orthogonalization matrix; rows/cols in channel order (Q1, Q2, C).
  Eigen::Matrix3d crosstalk_inv = Eigen::Matrix3d::Identity();
  std::array<ReadoutFidelity, 2> readout;
  std::array<int, 3> levels{3, 3, 3};
  // Scale g_ic by sqrt(wc / wc_max).
  bool scale_coupling_with_flux = false;

  const ModeParams& mode(Mode m) const { return modes[static_cast<int>(m)]; }
  ModeLayout layout() const { return {levels[0], levels[1], levels[2]}; }
};

/// Reference device. Coupler T1/T2 default to 5 us and readout to (0.95, 0.90).
DeviceParams paper_device();

/// Every invariant violation as a human-readable line. Empty means valid.
std::vector<std::string> validation_errors(const DeviceParams& p);
/// Throws Configuration on the first violation.
void validate(const DeviceParams& p);

double freq_from_flux(double phi, double omega_max_ghz, double eta_mhz);
double flux_from_freq(double target_ghz, double omega_max_ghz, double eta_mhz);

/// physical = crosstalk_inv * desired
Eigen::Vector3d apply_crosstalk_correction(const Eigen::Vector3d& desired, const Eigen::Matrix3d& crosstalk_inv);
/// The raw crosstalk matrix, i.e. the inverse of crosstalk_inv.
Eigen::Matrix3d crosstalk_matrix(const Eigen::Matrix3d& crosstalk_inv);

// Configuration file (YAML). Keys are dotted paths, e.g. "q2.t2_us".
DeviceParams load_device(const std::string& preset_or_path);
DeviceParams device_from_yaml(const std::string& text);
std::string device_to_yaml(const DeviceParams& p);
void save_device(const DeviceParams& p, const std::string& path);

const std::vector<std::string>& device_keys();
/// Applies "key=value". Unknown keys raise Configuration with a suggestion.
void apply_override(DeviceParams& p, const std::string& assignment);
std::string nearest_key(const std::string& key);

}  // namespace tcq
