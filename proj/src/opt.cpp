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

#include "tcq/opt.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numeric>
#include <sstream>

namespace tcq {

void ObjectiveSpec::validate(int dim) const {
  if (dim < 1) fail(ErrorCode::InvalidDimension, "optimization needs at least one parameter");
  if (static_cast<int>(lower.size()) != dim || static_cast<int>(upper.size()) != dim) {
    fail(ErrorCode::Configuration, "bounds must match the parameter count");
  }
  if (!names.empty() && static_cast<int>(names.size()) != dim) {
    fail(ErrorCode::Configuration, "names must match the parameter count");
  }
  if (!step.empty() && static_cast<int>(step.size()) != dim) {
    fail(ErrorCode::Configuration, "initial steps must match the parameter count");
  }
  for (int i = 0; i < dim; ++i) {
    if (!std::isfinite(lower[i]) || !std::isfinite(upper[i]) || lower[i] > upper[i]) {
      fail(ErrorCode::Configuration, "bounds must be finite and ordered");
    }
  }
  if (max_evaluations < dim + 1) fail(ErrorCode::Configuration, "budget smaller than the simplex");
}

std::string OptimizeResult::trace_csv(const std::vector<std::string>& names) const {
  std::ostringstream os;
  os << std::setprecision(15) << "evaluation";
  const std::size_t dim = x.size();
  for (std::size_t i = 0; i < dim; ++i) os << "," << (i < names.size() ? names[i] : "x" + std::to_string(i));
  os << ",value,best\n";
  for (const auto& t : trace) {
    os << t.evaluation;
    for (double v : t.x) os << "," << v;
    os << "," << t.value << "," << t.best << "\n";
  }
  return os.str();
}

OptimizeResult nelder_mead(const Objective& f, std::vector<double> x0, const ObjectiveSpec& spec) {
  const int n = static_cast<int>(x0.size());
  spec.validate(n);
  constexpr double kReflect = 1.0, kExpand = 2.0, kContract = 0.5, kShrink = 0.5;

  OptimizeResult res;
  double best = std::numeric_limits<double>::infinity();
  auto project = [&](std::vector<double> x) {
    for (int i = 0; i < n; ++i) x[i] = std::clamp(x[i], spec.lower[i], spec.upper[i]);
    return x;
  };
  auto eval = [&](const std::vector<double>& x) {
    double v = f(x);
    if (!std::isfinite(v)) v = std::numeric_limits<double>::max();
    ++res.evaluations;
    if (v < best) {
      best = v;
      res.x = x;
      res.value = v;
    }
    res.trace.push_back({res.evaluations, x, v, best});
    return v;
  };

  std::vector<std::vector<double>> pts{project(x0)};
  for (int i = 0; i < n; ++i) {
    std::vector<double> x = pts[0];
    const double range = spec.upper[i] - spec.lower[i];
    const double h = spec.step.empty() ? 0.05 * range : spec.step[i];
    x[i] = x[i] + h <= spec.upper[i] ? x[i] + h : x[i] - h;
    pts.push_back(project(x));
  }
  std::vector<double> fv;
  for (const auto& p : pts) fv.push_back(eval(p));
  if (fv[0] == std::numeric_limits<double>::max()) fail(ErrorCode::Infeasible, "objective is not finite at the start");

  std::vector<int> order(n + 1);
  auto combine = [&](const std::vector<double>& a, const std::vector<double>& b, double t) {
    std::vector<double> x(n);
    for (int i = 0; i < n; ++i) x[i] = a[i] + t * (b[i] - a[i]);
    return project(x);
  };
  while (res.evaluations < spec.max_evaluations) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return fv[a] < fv[b]; });
    std::vector<std::vector<double>> sp;
    std::vector<double> sf;
    for (int k : order) {
      sp.push_back(pts[k]);
      sf.push_back(fv[k]);
    }
    pts = std::move(sp);
    fv = std::move(sf);

    double fspread = 0.0, xspread = 0.0;
    for (int k = 1; k <= n; ++k) {
      fspread = std::max(fspread, std::abs(fv[k] - fv[0]));
      for (int i = 0; i < n; ++i) xspread = std::max(xspread, std::abs(pts[k][i] - pts[0][i]));
    }
    if (fspread <= spec.f_tol && xspread <= spec.x_tol) {
      res.converged = true;
      break;
    }

    std::vector<double> c(n, 0.0);
    for (int k = 0; k < n; ++k) {
      for (int i = 0; i < n; ++i) c[i] += pts[k][i] / n;
    }
    const std::vector<double> xr = combine(c, pts[n], -kReflect);
    const double fr = eval(xr);
    if (fr < fv[0]) {
      if (res.evaluations >= spec.max_evaluations) {
        pts[n] = xr;
        fv[n] = fr;
        break;
      }
      const std::vector<double> xe = combine(c, xr, kExpand);
      const double fe = eval(xe);
      if (fe < fr) {
        pts[n] = xe;
        fv[n] = fe;
      } else {
        pts[n] = xr;
        fv[n] = fr;
      }
      continue;
    }
    if (fr < fv[n - 1]) {
      pts[n] = xr;
      fv[n] = fr;
      continue;
    }
    if (res.evaluations >= spec.max_evaluations) break;
    bool accepted = false;
    if (fr < fv[n]) {
      const std::vector<double> xc = combine(c, xr, kContract);
      const double fc = eval(xc);
      if (fc <= fr) {
        pts[n] = xc;
        fv[n] = fc;
        accepted = true;
      }
    } else {
      const std::vector<double> xc = combine(c, pts[n], kContract);
      const double fc = eval(xc);
      if (fc < fv[n]) {
        pts[n] = xc;
        fv[n] = fc;
        accepted = true;
      }
    }
    if (accepted) continue;
    for (int k = 1; k <= n && res.evaluations < spec.max_evaluations; ++k) {
      pts[k] = combine(pts[0], pts[k], kShrink);
      fv[k] = eval(pts[k]);
    }
  }
  return res;
}

// ---------------------------------------------------------------- DDR CZ

double ddr_objective(const GateResult& g) { return 1.0 - g.unitary_fidelity.value_or(0.0) + 10.0 * g.leakage; }

DdrOptimization optimize_cz_ddr(const DeviceParams& p, const ModeLayout& layout, const DdrCzParams& start,
                                const DdrFreeSet& free, int budget) {
  const FrequencyConfig idle = idle_point(p, layout);
  ObjectiveSpec spec;
  std::vector<double> x0;
  auto add = [&](const char* name, double v, double lo, double hi, double step) {
    spec.names.push_back(name);
    x0.push_back(v);
    spec.lower.push_back(lo);
    spec.upper.push_back(hi);
    spec.step.push_back(step);
  };
  if (free.coupler_on) add("coupler_on_ghz", start.coupler_on_ghz, idle.q1 + 0.15, idle.c - 0.05, 0.01);
  if (free.hold) add("hold_ns", start.hold_ns, 0.0, 300.0, 2.0);
  if (free.detune) add("detune_ghz", start.detune_ghz, -0.02, 0.02, 1e-3);
  if (free.dip) add("dip_ns", start.dip_ns, 2.0 * start.dt, 40.0, 1.0);
  if (free.ramp) add("ramp_ns", start.ramp_ns, 2.0 * start.dt, 60.0, 2.0);
  if (free.knots) {
    std::vector<double> k = start.knots.empty() ? std::vector<double>(5, 0.0) : start.knots;
    const char* names[5] = {"knot1_mhz", "knot2_mhz", "knot3_mhz", "knot4_mhz", "knot5_mhz"};
    for (int i = 0; i < 5; ++i) add(names[i], k[i], -50.0, 50.0, 1.0);
  }
  if (x0.empty()) fail(ErrorCode::Configuration, "no free DDR parameters");
  spec.max_evaluations = budget;
  spec.x_tol = 1e-6;
  spec.f_tol = 1e-10;

  auto unpack = [&](const std::vector<double>& x) {
    DdrCzParams d = start;
    std::size_t i = 0;
    if (free.coupler_on) d.coupler_on_ghz = x[i++];
    if (free.hold) d.hold_ns = x[i++];
    if (free.detune) d.detune_ghz = x[i++];
    if (free.dip) d.dip_ns = x[i++];
    if (free.ramp) d.ramp_ns = x[i++];
    if (free.knots) d.knots.assign(x.begin() + i, x.begin() + i + 5);
    return d;
  };
  auto objective = [&](const std::vector<double>& x) {
    try {
      return ddr_objective(cz_ddr(p, layout, unpack(x)));
    } catch (const Error&) {
      return 10.0;
    }
  };
  DdrOptimization out;
  out.start_objective = ddr_objective(cz_ddr(p, layout, start));
  out.search = nelder_mead(objective, x0, spec);
  out.params = unpack(out.search.x);
  out.gate = cz_ddr(p, layout, out.params);
  return out;
}

// ---------------------------------------------------------------- rectangular CZ

RectOptimization optimize_cz_rectangular(const DeviceParams& p, const ModeLayout& layout, const RectCzParams& start,
                                         int budget) {
  ObjectiveSpec spec;
  spec.names = {"coupler_ghz", "hold_ns", "detune_ghz"};
  const FrequencyConfig idle = idle_point(p, layout);
  spec.lower = {idle.q1 + 0.15, 10.0, -0.02};
  spec.upper = {idle.c - 0.05, 300.0, 0.02};
  spec.step = {0.01, 2.0, 1e-3};
  spec.max_evaluations = budget;
  spec.x_tol = 1e-6;
  spec.f_tol = 1e-10;
  auto unpack = [&](const std::vector<double>& x) {
    RectCzParams r = start;
    r.coupler_ghz = x[0];
    r.hold_ns = x[1];
    r.detune_ghz = x[2];
    return r;
  };
  auto objective = [&](const std::vector<double>& x) {
    try {
      return 1.0 - cz_rectangular(p, layout, CouplingSign::Negative, unpack(x)).unitary_fidelity.value_or(0.0);
    } catch (const Error&) {
      return 1.0;
    }
  };
  RectOptimization out;
  out.search = nelder_mead(objective, {start.coupler_ghz, start.hold_ns, start.detune_ghz}, spec);
  out.params = unpack(out.search.x);
  out.gate = cz_rectangular(p, layout, CouplingSign::Negative, out.params);
  return out;
}

// ---------------------------------------------------------------- fast adiabatic

double fast_adiabatic_coupling_mhz(double duration_ns) {
  if (!(duration_ns > 0.0)) fail(ErrorCode::InvalidPulse, "gate time must be positive");
  return 1e3 / (2.0 * std::sqrt(2.0) * duration_ns);
}

FastAdiabaticOptimization optimize_fast_adiabatic(const DeviceParams& direct, const ModeLayout& layout,
                                                  const FastAdiabaticSpec& spec, int n_fourier, int budget) {
  if (n_fourier < 1) fail(ErrorCode::Configuration, "need at least one Fourier coefficient");
  auto fidelity = [&](const std::vector<double>& c) {
    try {
      return fast_adiabatic_gate(direct, layout, c, spec).unitary_fidelity.value_or(0.0);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::InvalidTrajectory) throw;
      return 0.0;
    }
  };
  std::vector<double> x0(n_fourier, 0.0);
  double best = -1.0;
  for (int i = 0; i <= 12; ++i) {
    std::vector<double> x(n_fourier, 0.0);
    x[0] = 0.3 + 0.1 * i;
    const double v = fidelity(x);
    if (v > best) {
      best = v;
      x0 = x;
    }
  }
  ObjectiveSpec os;
  for (int i = 0; i < n_fourier; ++i) os.names.push_back("lambda" + std::to_string(i + 1));
  os.lower.assign(n_fourier, -M_PI);
  os.upper.assign(n_fourier, M_PI);
  os.step.assign(n_fourier, 0.05);
  os.max_evaluations = budget;
  os.x_tol = 1e-7;
  os.f_tol = 1e-10;
  FastAdiabaticOptimization out;
  out.search = nelder_mead([&](const std::vector<double>& x) { return 1.0 - fidelity(x); }, x0, os);
  out.coefficients = out.search.x;
  out.gate = fast_adiabatic_gate(direct, layout, out.coefficients, spec);
  out.fidelity = out.gate.unitary_fidelity.value_or(0.0);
  return out;
}

}  // namespace tcq
