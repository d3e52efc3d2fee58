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
#include <optional>
#include <string>
#include <vector>

#include "tcq/device.hpp"
#include "tcq/dynamics.hpp"
#include "tcq/model.hpp"
#include "tcq/pulse.hpp"
#include "tcq/qspace.hpp"
#include "tcq/tomo.hpp"

namespace tcq {

/// |101>-|200> two-level picture: hx is the coupling, hz the detuning of
/// |101> from the crossing (half the splitting of the diagonal), both MHz.
struct AvoidedCrossingFrame {
  double hx_mhz = 0.0;
  double hz_mhz = 0.0;
};
AvoidedCrossingFrame avoided_crossing(const DeviceParams& p, const FrequencyConfig& f, const ModeLayout& layout);

/// Qubits at their sweet spots, coupler where the static ZZ vanishes.
FrequencyConfig idle_point(const DeviceParams& p, const ModeLayout& layout);

struct GateResult {
  std::string name;
  PulseSchedule schedule{0.1, FrequencyConfig{}};
  /// Phases of |01> and |10> relative to |00>, rad.
  std::array<double, 2> single_qubit_phases{};
  double conditional_phase = 0.0;
  double leakage = 0.0;
  std::optional<double> unitary_fidelity;
  std::optional<double> process_fidelity;
  /// Computational block in the idle dressed interaction frame, index 2*q1 + q2.
  Matrix unitary = Matrix::Identity(4, 4);
  /// Extra single-qubit Z angles (pre Q1, pre Q2, post Q1, post Q2) for gates
  /// whose target is not diagonal.
  std::array<double, 4> z_angles{};

  std::string to_json() const;
};

double wrap_phase(double x);

/// 4x4 block plus leakage from propagating the dressed computational states.
struct BlockEvolution {
  Matrix block = Matrix::Identity(4, 4);
  double leakage = 0.0;
};
BlockEvolution computational_block(const PulseSchedule& s, const DeviceParams& p, const ModeLayout& layout,
                                   const EvolveOptions& opt = {});

/// Phases, conditional phase and CZ fidelity read from a computational block.
GateResult analyze_block(const Matrix& u, double leakage);

/// diag(1, e^{-i phi01}, e^{-i phi10}, e^{-i(phi01+phi10)}) applied on the left.
Matrix virtual_z(const Matrix& u, double phi01, double phi10);
Matrix virtual_z(const GateResult& r);
Matrix cz_target();
/// |Tr(target^dag u)|^2 / 16.
double unitary_fidelity(const Matrix& u, const Matrix& target);

struct CalibratedPhases {
  double phi01 = 0.0;
  double phi10 = 0.0;
  double phi11 = 0.0;
  double conditional = 0.0;
};
/// Ramsey calibration: target Q2 with Q1 in |0> and |1>, target Q1 with Q2 in |0>.
CalibratedPhases calibrate_phases(const PulseSchedule& s, const DeviceParams& p, const ModeLayout& layout,
                                  const EvolveOptions& opt = {});
/// Same protocol on an ideal 4x4 unitary standing in for a schedule.
CalibratedPhases calibrate_phases(const Matrix& u);

/// Two-qubit channel of a schedule under Lindblad dynamics, read out in the
/// idle interaction frame with the given Z corrections applied before and
/// after (angles as in GateResult::z_angles, virtual-Z phases in post).
TwoQubitChannel gate_channel(const PulseSchedule& s, const DeviceParams& p, const ModeLayout& layout,
                             const CollapseSet& collapse, const std::array<double, 4>& z_angles,
                             const EvolveOptions& opt = {});
/// QPT fidelity of the channel against a target unitary.
double qpt_fidelity(const PulseSchedule& s, const DeviceParams& p, const ModeLayout& layout,
                    const CollapseSet& collapse, const std::array<double, 4>& z_angles, const Matrix& target,
                    const EvolveOptions& opt = {});

/// diag(e^{-i a}, ...) style local Z rotation exp(-i (a Z1 + b Z2)/2) with
/// the |00> phase removed: diag(1, e^{ib}, e^{ia}, e^{i(a+b)}).
Matrix local_z(double q1_angle, double q2_angle);

enum class IswapKind { Full, Half };
Matrix iswap_target(IswapKind kind);

struct IswapOptions {
  double coupling_mhz = -2.0;  // target exchange at the hold
  double ramp_ns = 10.0;
  double dt = 0.1;
};
/// Q1 is brought onto Q2's idle frequency and the coupler to the level
/// giving the target exchange; the hold is calibrated on the transfer.
PulseSchedule iswap_schedule(const DeviceParams& p, const ModeLayout& layout, IswapKind kind,
                             const IswapOptions& o = {});
/// Hold time 1/(4|g|) for the full swap, half of it for the square root.
double iswap_hold_ns(double coupling_mhz, IswapKind kind);
GateResult iswap_gate(const DeviceParams& p, const ModeLayout& layout, IswapKind kind, const IswapOptions& o = {},
                      const CollapseSet* collapse = nullptr);

enum class CouplingSign { Positive, Negative };
struct RectCzParams {
  double coupler_ghz = 5.329;
  double hold_ns = 96.0;
  double detune_ghz = 4.37e-3;  // Q2 offset from omega1 + eta1
  double dt = 0.1;

  static RectCzParams defaults(CouplingSign sign);
};
PulseSchedule cz_rectangular_schedule(const DeviceParams& p, const ModeLayout& layout, const RectCzParams& r);
/// Positive sign keeps the hold fixed and bisects the coupler level for a pi
/// conditional phase; negative sign simulates the given parameters.
GateResult cz_rectangular(const DeviceParams& p, const ModeLayout& layout, CouplingSign sign,
                          std::optional<RectCzParams> r = std::nullopt, const CollapseSet* collapse = nullptr);

struct DdrCzParams {
  double coupler_on_ghz = 5.26491;
  double hold_ns = 66.32;
  double detune_ghz = 5.345e-3;
  double dip_ns = 9.52;
  double ramp_ns = 20.0;
  double dt = 0.1;
  DdrManifold manifold = DdrManifold::SingleExcitation;
  /// Spline knots (MHz) added to the DDR track during the ramps.
  std::vector<double> knots;

  double duration_ns() const { return 2.0 * ramp_ns + 2.0 * dip_ns + hold_ns; }
};
PulseSchedule ddr_cz_schedule(const DeviceParams& p, const ModeLayout& layout, const DdrCzParams& d);
/// With solve_hold the hold is bisected until the conditional phase is pi.
GateResult cz_ddr(const DeviceParams& p, const ModeLayout& layout, DdrCzParams d, bool solve_hold = false,
                  const CollapseSet* collapse = nullptr);
/// Only the DDR ramps (no coupler dip or hold), for checking that they carry no two-qubit phase.
PulseSchedule ddr_ramp_schedule(const DeviceParams& p, const ModeLayout& layout, const DdrCzParams& d);

struct GeometricSplit {
  double conditional = 0.0;
  double dynamical = 0.0;
  double geometric = 0.0;
  double fraction = 0.0;
};
/// Dynamical phase from the energy expectation along the evolved states,
/// referenced to the idle frame energies; the rest of the conditional phase
/// is geometric.
GeometricSplit geometric_fraction(const PulseSchedule& s, const DeviceParams& p, const ModeLayout& layout,
                                  const EvolveOptions& opt = {});

struct LeakageScan {
  std::vector<double> coupler_ghz;
  std::vector<double> retained;   // |101> population at the end of the hold
  std::vector<double> deviation;  // 1 - hold-averaged |101> population
  std::optional<double> threshold_ghz;

  std::string to_csv() const;
};
LeakageScan leakage_scan(const DeviceParams& p, const ModeLayout& layout, const std::vector<double>& coupler_ghz,
                         double hold_ns, double dt = 0.1, int jobs = 1, double tolerance = 0.03);

/// Direct-coupling comparison device: couplers detached, fixed qubit-qubit coupling.
DeviceParams direct_coupling_device(const DeviceParams& p, double coupling_mhz);
GateResult fast_adiabatic_gate(const DeviceParams& direct, const ModeLayout& layout,
                               const std::vector<double>& coefficients, const FastAdiabaticSpec& spec);

}  // namespace tcq
