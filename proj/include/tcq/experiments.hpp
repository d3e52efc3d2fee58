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

#include <cstdint>
#include <string>
#include <vector>

#include "tcq/device.hpp"

namespace tcq {

struct ExperimentSpec {
  std::string name;
  std::string device = "paper_device";
  std::vector<std::string> overrides;
  std::string output = "tcq-out";
  std::uint64_t seed = 1;
  /// 0 means all available cores.
  int jobs = 0;
};

const std::vector<std::string>& experiment_names();

/// Reads name/device/overrides/output/seed/jobs from a YAML file.
ExperimentSpec experiment_from_yaml(const std::string& text);

/// Schema and physics-range problems; empty means runnable.
std::vector<std::string> validate_experiment(const ExperimentSpec& spec);

/// Device after the preset/file and all overrides.
DeviceParams resolve_device(const ExperimentSpec& spec);

struct ExperimentReport {
  std::vector<std::string> artifacts;
  /// Short JSON object with the headline numbers.
  std::string summary;
  double wall_seconds = 0.0;
};

/// Runs one experiment and writes its artifacts plus manifest.json into
/// spec.output. Unknown names raise Usage.
ExperimentReport run_experiment(const ExperimentSpec& spec);

/// Plotting script template for an experiment's CSV output.
std::string plot_template(const std::string& name);

}  // namespace tcq
