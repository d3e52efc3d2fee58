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

#include <functional>
#include <string>
#include <vector>

#include "tcq/gates.hpp"

namespace tcq {

struct ObjectiveSpec {
  std::vector<std::string> names;
  std::vector<double> lower;
  std::vector<double> upper;
  /// Initial simplex offsets; empty means 5% of each range.
  std::vector<double> step;
  int max_evaluations = 500;
  double x_tol = 1e-8;
  double f_tol = 1e-12;

  void validate(int dim) const;
};

struct TracePoint {
  int evaluation = 0;
  std::vector<double> x;
  double value = 0.0;
  double best = 0.0;
};

struct OptimizeResult {
  std::vector<double> x;
  double value = 0.0;
  bool converged = false;
  int evaluations = 0;
  std::vector<TracePoint> trace;

  std::string trace_csv(const std::vector<std::string>& names) const;
};

using Objective = std::function<double(const std::vector<double>&)>;

/// Reflection 1, expansion 2, contraction 0.5, shrink 0.5. Points are
/// projected onto the bounds before evaluation.
OptimizeResult nelder_mead(const Objective& f, std::vector<double> x0, const ObjectiveSpec& spec);

/// Which DDR parameters the optimizer may move.
struct DdrFreeSet {
  bool coupler_on = true;
  bool hold = true;
  bool detune = true;
  bool dip = true;
  bool ramp = false;
  bool knots = false;
};

struct DdrOptimization {
  DdrCzParams params;
  GateResult gate;
  double start_objective = 0.0;
  OptimizeResult search;
};
/// Minimizes 1 - F + 10 * leakage of the decoherence-free gate.
double ddr_objective(const GateResult& g);
DdrOptimization optimize_cz_ddr(const DeviceParams& p, const ModeLayout& layout, const DdrCzParams& start,
                                const DdrFreeSet& free = {}, int budget = 400);

struct RectOptimization {
  RectCzParams params;
  GateResult gate;
  OptimizeResult search;
};
/// Coupler level, hold and detuning of the negative-coupling rectangular gate.
RectOptimization optimize_cz_rectangular(const DeviceParams& p, const ModeLayout& layout, const RectCzParams& start,
                                         int budget = 300);

struct FastAdiabaticOptimization {
  std::vector<double> coefficients;
  double fidelity = 0.0;
  GateResult gate;
  OptimizeResult search;
};
/// Coupling that makes one |11>-|20> cycle last the gate time: 1/(2 sqrt2 T).
double fast_adiabatic_coupling_mhz(double duration_ns);
/// Coarse scan of the first coefficient, then Nelder-Mead over n_fourier
/// coefficients; objective 1 - F.
FastAdiabaticOptimization optimize_fast_adiabatic(const DeviceParams& direct, const ModeLayout& layout,
                                                  const FastAdiabaticSpec& spec, int n_fourier = 3,
                                                  int budget = 400);

}  // namespace tcq
