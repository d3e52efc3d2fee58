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
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "tcq/device.hpp"
#include "tcq/qspace.hpp"

namespace tcq {

/// Two-qubit operator basis {I, X, -iY, Z} (x) {I, X, -iY, Z}; element 4a+b
/// acts as E_a on Q1 and E_b on Q2 (state index 2*q1 + q2).
const std::array<Matrix, 16>& process_basis();
inline constexpr const char* kProcessBasisOrder = "E[4a+b] = E_a (x) E_b, E = {I, X, -iY, Z}, state |q1 q2>";

struct ProcessMatrix {
  Matrix chi = Matrix::Zero(16, 16);

  double hermiticity_residual() const { return (chi - chi.adjoint()).norm(); }
  /// || sum chi_mn E_n^dagger E_m - I ||
  double trace_preservation_residual() const;
  /// Smallest eigenvalue of the Hermitian part of chi.
  double min_eigenvalue() const;
  std::string to_json() const;
};

using TwoQubitChannel = std::function<Matrix(const Matrix&)>;

ProcessMatrix chi_from_unitary(const Matrix& u);
/// The 16 inputs {|g>, |e>, (|g>+|e>)/sqrt2, (|g>-i|e>)/sqrt2}^(x)2, index 4i+j.
std::vector<Matrix> qpt_input_states();
ProcessMatrix process_tomography(const std::vector<Matrix>& inputs, const std::vector<Matrix>& outputs);
ProcessMatrix process_tomography(const TwoQubitChannel& channel, const std::vector<Matrix>* measured_inputs = nullptr);
double process_fidelity(const ProcessMatrix& exp, const ProcessMatrix& ideal);

struct ReadoutModel {
  std::array<ReadoutFidelity, 2> qubits{};

  static ReadoutModel ideal() { return {}; }
  static ReadoutModel from_device(const DeviceParams& p) { return {p.readout}; }
  /// [[Fg, 1-Fe], [1-Fg, Fe]]
  Eigen::Matrix2d matrix(int qubit) const;
  /// Joint 4x4 assignment matrix on outcomes 2*o1 + o2.
  Eigen::Matrix4d joint() const;
};

struct BayesResult {
  Eigen::VectorXd probabilities;
  double clipped = 0.0;  // total magnitude removed by clipping to [0, 1]
};
/// raw has 2 entries (single qubit, `qubit` selects the matrix) or 4 (joint outcomes).
BayesResult bayes_correct(const Eigen::VectorXd& raw, const ReadoutModel& readout, int qubit = 0);
Eigen::VectorXd readout_forward(const Eigen::VectorXd& ideal, const ReadoutModel& readout, int qubit = 0);

/// 16 prerotations {I, X/2, Y/2, X}^(x)2, index 4i+j.
const std::array<Matrix, 16>& tomography_prerotations();
/// Computational populations after each prerotation, 16 x 4 (row = prerotation).
Eigen::MatrixXd simulate_populations(const Matrix& rho, const ReadoutModel* readout = nullptr);
/// Linear inversion; when `readout` is given the rows are Bayes-corrected first.
/// The estimate is Hermitized, negative eigenvalues clipped, trace renormalized.
Matrix state_tomography(const Eigen::MatrixXd& populations, const ReadoutModel* readout = nullptr);

enum class RbMode { Individual, Simultaneous };

struct RbOptions {
  RbMode mode = RbMode::Individual;
  double zz_mhz = 0.0;
  double clifford_ns = 80.0;
  bool decoherence = true;
  std::vector<int> lengths{1, 5, 10, 20, 40, 70, 100, 150, 200, 300};
  int sequences = 30;
  std::uint64_t seed = 1;
};

struct RbQubitResult {
  double p = 1.0;
  double amplitude = 0.0;
  double offset = 0.0;
  double fidelity = 1.0;  // per Clifford, 1 - (1 - p)/2
  std::vector<double> survival;  // mean per length
};

struct RbResult {
  std::vector<int> lengths;
  std::array<RbQubitResult, 2> qubits;
  std::string to_csv() const;
};

/// Single-qubit Clifford group (24 elements) generated by H and S; phases are
/// irrelevant to the resulting channels.
std::vector<Eigen::Matrix2cd> clifford_group(const Eigen::Matrix2cd& h, const Eigen::Matrix2cd& s);
std::vector<Eigen::Matrix2cd> clifford_group();

RbResult randomized_benchmarking(const DeviceParams& p, const RbOptions& opt);

struct DecayFit {
  double p, a, b;
};
/// Least-squares fit of A p^m + B.
DecayFit fit_decay(const std::vector<int>& m, const std::vector<double>& y);

}  // namespace tcq
