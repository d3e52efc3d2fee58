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

#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "tcq/device.hpp"
#include "tcq/qspace.hpp"

namespace tcq {

/// Instantaneous mode frequencies in GHz.
struct FrequencyConfig {
  double q1 = 0.0;
  double c = 0.0;
  double q2 = 0.0;

  double operator[](int mode) const { return mode == 0 ? q1 : (mode == 1 ? c : q2); }
  double& operator[](int mode) { return mode == 0 ? q1 : (mode == 1 ? c : q2); }
  friend bool operator==(const FrequencyConfig&, const FrequencyConfig&) = default;
};

struct DetuningSet {
  double delta_1c = 0.0;
  double delta_2c = 0.0;
  double delta_12 = 0.0;

  static DetuningSet of(const FrequencyConfig& f) { return {f.q1 - f.c, f.q2 - f.c, f.q1 - f.q2}; }
};

/// Coupling constants in GHz at a given coupler frequency.
struct Couplings {
  double g1c = 0.0;
  double g2c = 0.0;
  double g12 = 0.0;
};
Couplings couplings_at(const DeviceParams& p, double coupler_ghz);

/// Static pieces of H so that H(freqs) can be rebuilt cheaply. Everything in GHz.
class HamiltonianTerms {
 public:
  HamiltonianTerms(const DeviceParams& p, const ModeLayout& layout);

  const ModeLayout& layout() const { return layout_; }
  int dim() const { return layout_.total(); }
  /// Real symmetric H(freqs).
  Eigen::MatrixXd at(const FrequencyConfig& f) const;
  void fill(const FrequencyConfig& f, Eigen::MatrixXd& out) const;
  /// Occupation of `mode` on each basis state.
  const Eigen::VectorXd& number(int mode) const { return number_[mode]; }
  Eigen::VectorXd total_number() const { return number_[0] + number_[1] + number_[2]; }
  /// a_mode as a real matrix on the composite space.
  const Eigen::MatrixXd& lowering(int mode) const { return lowering_[mode]; }

 private:
  DeviceParams params_;
  ModeLayout layout_;
  std::array<Eigen::VectorXd, 3> number_;
  std::array<Eigen::MatrixXd, 3> lowering_;
  Eigen::VectorXd anharmonic_;
  Eigen::MatrixXd hop_1c_, hop_2c_, hop_12_;
};

Matrix build_hamiltonian(const DeviceParams& p, const FrequencyConfig& f, const ModeLayout& layout);

double effective_coupling_mhz(const DeviceParams& p, const FrequencyConfig& f);

struct EffectiveTwoQubit {
  double dressed_q1_ghz = 0.0;
  double dressed_q2_ghz = 0.0;
  double g_eff_mhz = 0.0;
};
std::pair<double, double> dressed_frequencies(const DeviceParams& p, const FrequencyConfig& f);
EffectiveTwoQubit effective_two_qubit(const DeviceParams& p, const FrequencyConfig& f);

struct ZzOrders {
  double second = 0.0;
  double third = 0.0;
  double fourth = 0.0;
  double total = 0.0;
};
ZzOrders zz_perturbative(const DeviceParams& p, const FrequencyConfig& f);

/// Eigenbasis of a static H with each eigenvector assigned to one bare label.
/// Column k of `vectors` is the dressed state labelled by bare index k, with
/// its bare-k component real and positive; `overlap[k]` is |<k|k~>|^2.
struct DressedBasis {
  Eigen::VectorXd energies;
  Eigen::MatrixXd vectors;
  Eigen::VectorXd overlap;

  double energy(const Labels& l, const ModeLayout& layout) const { return energies(layout.index(l)); }
};
DressedBasis dressed_basis(const Eigen::MatrixXd& h);

double zz_exact_mhz(const DeviceParams& p, const FrequencyConfig& f, const ModeLayout& layout);
/// Effective two-level Hamiltonian (GHz) for bare states a, b from the two
/// eigenvectors that carry most of their weight, plus the dressed states.
struct PairBlock {
  Eigen::Matrix2d heff;
  Eigen::VectorXd state_a;
  Eigen::VectorXd state_b;
};
PairBlock effective_pair(const Eigen::MatrixXd& h, int ia, int ib);

/// Signed |100>-|001> exchange from the exact single-excitation block.
double exact_swap_coupling_mhz(const DeviceParams& p, const FrequencyConfig& f, const ModeLayout& layout);

/// qubit is 1 or 2.
double dispersive_shift_mhz(const DeviceParams& p, const FrequencyConfig& f, int qubit);

enum class OffCriterion { SwapCoupling, ZzExact, SwapExact };

double find_coupler_off(const DeviceParams& p, double q1_ghz, double q2_ghz, OffCriterion criterion,
                        const ModeLayout& layout, std::optional<std::pair<double, double>> bracket = std::nullopt);

/// Coupler frequency where the exact ZZ vanishes with both qubits at their sweet spots.
double idle_coupler_frequency(const DeviceParams& p, const ModeLayout& layout);

}  // namespace tcq
