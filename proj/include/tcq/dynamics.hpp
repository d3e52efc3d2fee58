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
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "tcq/device.hpp"
#include "tcq/model.hpp"
#include "tcq/pulse.hpp"
#include "tcq/qspace.hpp"

namespace tcq {

/// Per-mode Lindblad rates in 1/ns. Relaxation sqrt(gamma1) a, dephasing sqrt(2 gamma_phi) n.
struct CollapseSet {
  std::array<double, 3> gamma1{};
  std::array<double, 3> gamma_phi{};

  static CollapseSet from_device(const DeviceParams& p);
  bool empty() const;
};

struct EvolveOptions {
  /// Rotating-frame frequency applied to every mode; default is the mean idle qubit frequency.
  std::optional<double> frame_ghz;
  /// Upper bound on 2*pi*||H'||*h per RK4 step.
  double max_step_phase = 0.05;
  /// Fixed RK4 steps per sample interval; overrides max_step_phase when > 0.
  int substeps = 0;
  std::vector<Labels> record;
  int record_every = 1;
};

double default_frame(const FrequencyConfig& idle);

struct TrajectoryRecord {
  std::vector<double> times_ns;
  std::vector<Labels> labels;
  std::vector<std::vector<double>> populations;  // [time][label]
  SystemState final_state = SystemState::pure(Vector::Ones(1));
  double frame_ghz = 0.0;
  std::uint64_t schedule_hash = 0;
  std::uint64_t params_hash = 0;

  std::string to_csv() const;
  std::string to_json() const;
};

std::uint64_t params_hash(const DeviceParams& p);

/// Fixed-step RK4 propagation of state batches under a schedule. Without XY
/// drive the dynamics is restricted to the excitation-number sector reached
/// by the initial states, which is exact for this Hamiltonian.
class Propagator {
 public:
  using Observer = std::function<void(int sample, const Matrix& states)>;
  using DensityObserver = std::function<void(int sample, const std::vector<Matrix>& rhos)>;

  Propagator(const DeviceParams& p, const ModeLayout& layout);

  const ModeLayout& layout() const { return layout_; }
  const HamiltonianTerms& terms() const { return terms_; }

  /// Columns are full-dimension state vectors.
  Matrix run_pure(const PulseSchedule& s, const Matrix& columns, const EvolveOptions& opt,
                  const Observer& observer = {}) const;
  /// Works on arbitrary (also non-Hermitian) operators, so channels can be
  /// propagated on a matrix-unit basis.
  std::vector<Matrix> run_density(const PulseSchedule& s, const std::vector<Matrix>& rhos, const CollapseSet& c,
                                  const EvolveOptions& opt, const DensityObserver& observer = {}) const;

 struct Sector;

 private:
  Sector sector(const PulseSchedule& s, int max_excitation, double frame) const;

  DeviceParams params_;
  ModeLayout layout_;
  HamiltonianTerms terms_;
};

TrajectoryRecord evolve(const PulseSchedule& s, const SystemState& initial, const DeviceParams& p,
                        const ModeLayout& layout, const CollapseSet* collapse = nullptr,
                        const EvolveOptions& opt = {});

/// Dressed eigenbasis of the idle Hamiltonian in a given rotating frame.
class IdleFrame {
 public:
  IdleFrame(const DeviceParams& p, const ModeLayout& layout, const FrequencyConfig& idle, double frame_ghz);

  const ModeLayout& layout() const { return layout_; }
  const DressedBasis& basis() const { return basis_; }
  double frame_ghz() const { return frame_; }
  /// E_j - frame * N_j for every dressed state.
  const Eigen::VectorXd& frame_energies() const { return frame_energies_; }

  Vector dressed_state(const Labels& l) const;
  /// Dressed |q1 q2> with index 2*q1 + q2, coupler in its ground state.
  Matrix computational_states() const;
  static std::array<Labels, 4> computational_labels();

  /// exp(i 2 pi E' T) V^dagger psi: dressed interaction-picture amplitudes.
  Matrix to_interaction(const Matrix& states, double t_ns) const;
  Matrix density_to_interaction(const Matrix& rho, double t_ns) const;
  /// 4x4 two-qubit state from a dressed-basis density matrix: traces out the
  /// coupler and folds qubit levels >= 2 onto |1>.
  Matrix reduce_to_qubits(const Matrix& rho_dressed) const;

 private:
  ModeLayout layout_;
  DressedBasis basis_;
  double frame_;
  Eigen::VectorXd frame_energies_;
};

struct ChevronMap {
  std::vector<double> coupler_ghz;
  std::vector<double> times_ns;
  std::vector<std::vector<double>> population;  // [coupler][time]

  std::string to_csv() const;
};

/// Q2 starts excited with Q1 tuned onto it; population of the dressed |001>
/// versus time for each coupler frequency.
ChevronMap swap_chevron(const DeviceParams& p, const ModeLayout& layout, const std::vector<double>& coupler_ghz,
                        double t_max_ns, int n_times, double dt = 0.1, int jobs = 1);

/// Dominant oscillation frequency (GHz) of a uniformly sampled series.
double oscillation_frequency(const std::vector<double>& y, double dt_ns, double f_max_ghz);
/// Peak-to-peak amplitude of a series.
double oscillation_amplitude(const std::vector<double>& y);

struct RamseyResult {
  double phase = 0.0;  // |1> -> exp(i phase)|1>
  double contrast = 0.0;
};

/// Ideal pi/2 pulses on the dressed target qubit around the schedule, second
/// pulse phase swept over [0, 2 pi), sinusoid fitted. target is 1 or 2.
RamseyResult ramsey_phase(const PulseSchedule& s, const DeviceParams& p, const ModeLayout& layout, int target,
                          int control_state, const EvolveOptions& opt = {});

}  // namespace tcq
