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

// Acceptance report: one PASS/FAIL line per criterion. Pass criterion numbers
// as arguments to run a subset.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "tcq/gates.hpp"
#include "tcq/opt.hpp"
#include "tcq/tomo.hpp"

using namespace tcq;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Verdict {
  bool pass = true;
  std::string detail;

  void check(bool ok, const std::string& what) {
    pass = pass && ok;
    if (!detail.empty()) detail += "; ";
    detail += (ok ? "" : "[x] ") + what;
  }
};

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::string fmt(const char* f, double a, double b) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

std::string fmt(const char* f, double a, double b, double c) {
  char buf[192];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = a + (b - a) * i / (n - 1);
  return v;
}

const DeviceParams kDevice = paper_device();
const ModeLayout kLayout = kDevice.layout();

// ---------------------------------------------------------------- 1
Verdict check_coupling_tunability() {
  Verdict v;
  const auto t0 = Clock::now();
  const double q = 4.926;
  const auto grid = linspace(5.2, kDevice.modes[1].omega_max_ghz, 2000);
  int changes = 0;
  double jump = 0.0, prev = effective_coupling_mhz(kDevice, {q, grid[0], q});
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const double g = effective_coupling_mhz(kDevice, {q, grid[i], q});
    if ((g > 0) != (prev > 0)) ++changes;
    jump = std::max(jump, std::abs(g - prev));
    prev = g;
  }
  v.check(changes == 1, fmt("sign changes %.0f", changes));
  v.check(jump < 0.1, fmt("largest step on a 2000-point grid %.4f MHz", jump));
  const double off = find_coupler_off(kDevice, q, q, OffCriterion::SwapCoupling, kLayout);
  v.check(std::abs(off - 5.80339) < 1e-6, fmt("off point %.7f GHz", off));
  const double t = seconds_since(t0);
  v.check(t < 1.0, fmt("%.3f s", t));
  return v;
}

// ---------------------------------------------------------------- 2
Verdict check_zz_cancellation() {
  Verdict v;
  const auto t0 = Clock::now();
  const double q1 = kDevice.modes[0].omega_max_ghz, q2 = kDevice.modes[2].omega_max_ghz;
  const double zero = find_coupler_off(kDevice, q1, q2, OffCriterion::ZzExact, kLayout);
  v.check(zero >= 5.805 && zero <= 6.005, fmt("exact zero %.4f GHz", zero));
  double worst = 0.0, at = 0.0, least = 1e300;
  int counted = 0;
  for (double wc : linspace(5.2, kDevice.modes[1].omega_max_ghz, 100)) {
    if (std::min(std::abs(q1 - wc), std::abs(q2 - wc)) < 0.5) continue;
    const FrequencyConfig f{q1, wc, q2};
    const double exact = zz_exact_mhz(kDevice, f, kLayout);
    const double pert = zz_perturbative(kDevice, f).total;
    const double rel = std::abs(pert - exact) / std::abs(exact);
    ++counted;
    least = std::min(least, rel);
    if (rel > worst) worst = rel, at = wc;
  }
  v.check(worst <= 0.2, fmt("perturbative vs exact worst %.1f%% at %.4f GHz over %.0f points", 100 * worst, at,
                            counted) +
                            fmt(", smallest %.1f%%", 100 * least));
  const double t = seconds_since(t0);
  v.check(t < 30.0, fmt("%.2f s", t));
  return v;
}

// ---------------------------------------------------------------- 3
Verdict check_chevron() {
  Verdict v;
  const auto t0 = Clock::now();
  const double q = kDevice.modes[2].omega_max_ghz;
  const auto grid = linspace(5.35, 5.75, 50);
  const auto map = swap_chevron(kDevice, kLayout, grid, 398.0, 200, 0.1, 0);
  const double step = map.times_ns[1] - map.times_ns[0];
  double worst = 0.0, at = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double want = 2.0 * std::abs(effective_coupling_mhz(kDevice, {q, grid[i], q})) * 1e-3;
    const double got = oscillation_frequency(map.population[i], step, 0.05);
    const double rel = std::abs(got - want) / want;
    if (rel > worst) worst = rel, at = grid[i];
  }
  v.check(worst <= 0.15, fmt("oscillation vs 2|g| worst %.1f%% at %.4f GHz", 100 * worst, at));
  const double off = find_coupler_off(kDevice, q, q, OffCriterion::SwapExact, kLayout);
  const auto still = swap_chevron(kDevice, kLayout, {off}, 398.0, 200, 0.1, 1);
  const double amp = oscillation_amplitude(still.population[0]);
  v.check(amp < 1e-3, fmt("amplitude at off point %.4f GHz: %.2e", off, amp));
  const double t = seconds_since(t0);
  v.check(t < 300.0, fmt("%.1f s", t));
  return v;
}

// ---------------------------------------------------------------- 4
Verdict check_ddr_null() {
  Verdict v;
  const DdrCzParams d;
  const auto ramps = ddr_ramp_schedule(kDevice, kLayout, d);
  const double q1 = ramps.idle().q1;
  const auto w2 = ramps.find(Channel::FreqQ2)->real_samples();
  const auto track = ddr_coupler_track(kDevice, q1, w2, ramps.dt());
  double worst = 0.0;
  for (int k = 0; k < track.size(); ++k) {
    worst = std::max(worst, std::abs(effective_coupling_mhz(kDevice, {q1, track.real(k), w2[k]})));
  }
  v.check(worst < 1e-3, fmt("max |g| along the track %.2e MHz", worst));
  const auto b = computational_block(ramps, kDevice, kLayout);
  const double cond = analyze_block(b.block, b.leakage).conditional_phase;
  v.check(std::abs(cond) < 0.01, fmt("ramp conditional phase %.2e rad", cond));
  return v;
}

// ---------------------------------------------------------------- 5
Verdict check_cz_numbers() {
  Verdict v;
  const CollapseSet col = CollapseSet::from_device(kDevice);

  auto t0 = Clock::now();
  DdrCzParams start;
  start.ramp_ns = 17.0;
  const auto opt = optimize_cz_ddr(kDevice, kLayout, start, {}, 300);
  const double topt = seconds_since(t0);
  const double f_ddr = *opt.gate.unitary_fidelity;
  const double dur = opt.gate.schedule.duration();
  v.check(f_ddr >= 0.999 && std::abs(dur - 120.0) <= 12.0,
          fmt("(a) optimized DDR F=%.5f at %.1f ns, %.0f s", f_ddr, dur, topt));

  t0 = Clock::now();
  const double f_qpt = qpt_fidelity(opt.gate.schedule, kDevice, kLayout, col, opt.gate.z_angles, cz_target());
  const double tq = seconds_since(t0);
  v.check(std::abs(f_qpt - 0.981) <= 0.005 && tq < 30.0, fmt("(b) QPT with decoherence F=%.4f, %.1f s", f_qpt, tq));

  t0 = Clock::now();
  const auto rect = optimize_cz_rectangular(kDevice, kLayout, RectCzParams::defaults(CouplingSign::Negative),
                                            300);
  const double tr = seconds_since(t0);
  const double f_rect = *rect.gate.unitary_fidelity;
  const double dr = rect.gate.schedule.duration();
  v.check(std::abs(f_rect - 0.9875) <= 0.005 && std::abs(dr - 90.0) <= 15.0,
          fmt("(c) negative rectangular F=%.5f at %.1f ns, %.0f s", f_rect, dr, tr));

  t0 = Clock::now();
  const auto pos = cz_rectangular(kDevice, kLayout, CouplingSign::Positive);
  const auto cp = calibrate_phases(pos.schedule, kDevice, kLayout);
  const double err = std::abs(wrap_phase(cp.conditional - M_PI));
  const double tp = seconds_since(t0);
  v.check(err <= 2.0 * M_PI / 180.0 && tp < 30.0,
          fmt("(d) 222 ns positive rectangular |cond-pi|=%.3f deg, %.1f s", err * 180.0 / M_PI, tp));
  return v;
}

// ---------------------------------------------------------------- 6
Verdict check_geometric() {
  Verdict v;
  const auto g = cz_ddr(kDevice, kLayout, DdrCzParams{});
  const auto s = geometric_fraction(g.schedule, kDevice, kLayout);
  const double dyn_deg = std::abs(s.dynamical) * 180.0 / M_PI;
  v.check(std::abs(s.fraction - 0.983) <= 0.01, fmt("fraction %.4f", s.fraction));
  v.check(std::abs(dyn_deg - 3.0) <= 1.5, fmt("dynamical part %.2f deg", dyn_deg));
  return v;
}

// ---------------------------------------------------------------- 7
Verdict check_fast_adiabatic() {
  Verdict v;
  FastAdiabaticSpec spec;
  spec.q1_ghz = kDevice.modes[0].omega_max_ghz;
  spec.q2_idle_ghz = spec.q2_max_ghz = kDevice.modes[2].omega_max_ghz;
  spec.eta1_mhz = kDevice.modes[0].eta_mhz;
  spec.duration_ns = 120.0;
  spec.coupling_mhz = fast_adiabatic_coupling_mhz(spec.duration_ns);
  const DeviceParams direct = direct_coupling_device(kDevice, spec.coupling_mhz);
  const auto t0 = Clock::now();
  const auto r = optimize_fast_adiabatic(direct, kLayout, spec, 3, 400);
  const double t = seconds_since(t0);
  const double ddr = *cz_ddr(kDevice, kLayout, DdrCzParams{}).unitary_fidelity;
  v.check(std::abs(r.fidelity - 0.996) <= 0.0015,
          fmt("n=3 F=%.5f with g=%.3f MHz, %.0f s", r.fidelity, spec.coupling_mhz, t));
  v.check(r.fidelity < ddr, fmt("DDR decoherence-free F=%.5f", ddr));
  return v;
}

// ---------------------------------------------------------------- 8
Verdict check_iswap_family() {
  Verdict v;
  const CollapseSet col = CollapseSet::from_device(kDevice);
  const auto s = iswap_schedule(kDevice, kLayout, IswapKind::Full);
  const auto b = computational_block(s, kDevice, kLayout);
  const double transfer = std::norm(b.block(1, 2));
  v.check(transfer >= 0.999, fmt("unitary transfer %.5f", transfer));
  for (auto kind : {IswapKind::Full, IswapKind::Half}) {
    const auto g = iswap_gate(kDevice, kLayout, kind, {}, &col);
    const double f = *g.process_fidelity;
    v.check(f >= 0.94 && f <= 0.985,
            fmt(kind == IswapKind::Full ? "iSWAP QPT %.4f (%.0f ns)" : "sqrt-iSWAP QPT %.4f (%.0f ns)", f,
                g.schedule.duration()));
  }
  return v;
}

// ---------------------------------------------------------------- 9
Verdict check_tomography() {
  Verdict v;
  std::mt19937_64 rng(2024);
  std::normal_distribution<double> n;
  auto haar = [&] {
    Matrix a(4, 4);
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) a(i, j) = cplx(n(rng), n(rng));
    }
    Eigen::HouseholderQR<Matrix> qr(a);
    Matrix q = qr.householderQ();
    for (int i = 0; i < 4; ++i) q.col(i) *= std::polar(1.0, -std::arg(qr.matrixQR()(i, i)));
    return q;
  };
  double worst = 0.0;
  for (int k = 0; k < 50; ++k) {
    const Matrix u = haar(), w = haar();
    const auto chi = process_tomography([&](const Matrix& r) -> Matrix { return w * r * w.adjoint(); });
    const double want = std::norm((u.adjoint() * w).trace()) / 16.0;
    worst = std::max(worst, std::abs(process_fidelity(chi, chi_from_unitary(u)) - want));
  }
  v.check(worst < 1e-8, fmt("QPT vs |Tr(U'V)|^2/16 worst %.1e", worst));

  ReadoutModel m;
  m.qubits = {ReadoutFidelity{0.95, 0.90}, ReadoutFidelity{0.93, 0.88}};
  std::uniform_real_distribution<double> u01;
  double rt = 0.0;
  for (int k = 0; k < 100; ++k) {
    Eigen::VectorXd p(4);
    for (int i = 0; i < 4; ++i) p(i) = u01(rng);
    p /= p.sum();
    rt = std::max(rt, (bayes_correct(readout_forward(p, m), m).probabilities - p).cwiseAbs().maxCoeff());
  }
  v.check(rt < 1e-12, fmt("Bayes roundtrip %.1e", rt));
  const double f = process_fidelity(chi_from_unitary(Matrix::Identity(4, 4)), chi_from_unitary(cz_target()));
  v.check(std::abs(f - 0.25) < 1e-15, fmt("F(I, CZ)=%.17g", f));
  return v;
}

// ---------------------------------------------------------------- 10
Verdict check_rb_isolation() {
  Verdict v;
  const double q1 = kDevice.modes[0].omega_max_ghz, q2 = kDevice.modes[2].omega_max_ghz;
  const double zz0 = zz_exact_mhz(kDevice, {q1, idle_coupler_frequency(kDevice, kLayout), q2}, kLayout);
  auto run = [&](RbMode mode, double zz) {
    RbOptions o;
    o.mode = mode;
    o.zz_mhz = zz;
    return randomized_benchmarking(kDevice, o);
  };
  const auto t0 = Clock::now();
  const auto ind = run(RbMode::Individual, zz0);
  const auto sim0 = run(RbMode::Simultaneous, zz0);
  const auto sim45 = run(RbMode::Simultaneous, -0.45);
  for (int q = 0; q < 2; ++q) {
    const double fi = ind.qubits[q].fidelity;
    const double d0 = fi - sim0.qubits[q].fidelity;
    const double d45 = fi - sim45.qubits[q].fidelity;
    v.check(std::abs(d0) <= 1e-3, fmt("Q%.0f individual %.5f, simultaneous at ZZ~0 differs %.3f%%", q + 1, fi,
                                      100 * d0));
    v.check(d45 >= 3e-3, fmt("Q%.0f degradation at -0.45 MHz %.3f%%", q + 1, 100 * d45));
  }
  v.check(true, fmt("%.0f s", seconds_since(t0)));
  return v;
}

// ---------------------------------------------------------------- 11
Verdict check_integrator() {
  Verdict v;
  const FrequencyConfig idle = idle_point(kDevice, kLayout);
  auto swap = [&](double duration, double dt) {
    PulseSchedule s(dt, idle);
    s.set(cosine_flat_top(Channel::FreqC, idle.c, 5.45, 10.0, duration - 20.0, dt));
    return s;
  };
  Vector psi = basis_vector({0, 0, 0}, kLayout) + basis_vector({1, 0, 0}, kLayout) +
               basis_vector({0, 0, 1}, kLayout) + basis_vector({1, 0, 1}, kLayout);
  psi /= 2.0;

  const Propagator prop(kDevice, kLayout);
  const auto conv = swap(40.0, 0.5);
  auto at = [&](int m) {
    EvolveOptions o;
    o.substeps = m;
    return prop.run_pure(conv, psi, o);
  };
  const Matrix ref = at(256);
  const double ratio = (at(16) - ref).norm() / (at(32) - ref).norm();
  v.check(std::abs(ratio - 16.0) <= 4.0, fmt("error ratio on dt halving %.2f", ratio));

  const auto s500 = swap(500.0, 0.1);
  const Matrix out = prop.run_pure(s500, psi, {});
  const double drift = std::abs(out.norm() - 1.0);
  v.check(drift < 1e-8, fmt("norm drift over 500 ns %.1e", drift));

  const CollapseSet col = CollapseSet::from_device(kDevice);
  const Matrix rho = prop.run_density(s500, {psi * psi.adjoint()}, col, {})[0];
  const double tr = std::abs(rho.trace().real() - 1.0);
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (rho + rho.adjoint()));
  v.check(tr < 1e-8 && es.eigenvalues().minCoeff() > -1e-8,
          fmt("Lindblad trace drift %.1e, min eigenvalue %.1e", tr, es.eigenvalues().minCoeff()));

  DeviceParams lone = kDevice;
  lone.g1c_mhz = lone.g2c_mhz = lone.g12_mhz = 0.0;
  CollapseSet t1only;
  t1only.gamma1[0] = col.gamma1[0];
  const ModeLayout small(3, 2, 2);
  const int n = static_cast<int>(std::lround(kDevice.modes[0].t1_us * 1e3));
  const auto idle_s = PulseSchedule::idle_for(1.0, idle, n);
  const auto rec = evolve(idle_s, SystemState::pure(basis_vector({1, 0, 0}, small)), lone, small, &t1only);
  const double pop = rec.final_state.populations()(small.index({1, 0, 0}));
  const double rel = std::abs(pop - std::exp(-1.0)) / std::exp(-1.0);
  v.check(rel < 0.01, fmt("population at T1 %.5f (1/e %.5f)", pop, std::exp(-1.0)));
  return v;
}

struct Criterion {
  int id;
  const char* title;
  std::function<Verdict()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> all{
      {1, "coupling tunability", check_coupling_tunability}, {2, "ZZ cancellation", check_zz_cancellation},
      {3, "chevron oracle", check_chevron},                  {4, "DDR null", check_ddr_null},
      {5, "CZ gate numbers", check_cz_numbers},              {6, "geometric fraction", check_geometric},
      {7, "fast-adiabatic baseline", check_fast_adiabatic},  {8, "iSWAP family", check_iswap_family},
      {9, "tomography self-consistency", check_tomography},  {10, "RB isolation", check_rb_isolation},
      {11, "integrator quality", check_integrator},
  };
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));

  int failed = 0;
  for (const auto& c : all) {
    if (!only.empty() && !only.count(c.id)) continue;
    const auto t0 = Clock::now();
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v.pass = false;
      v.detail = std::string("error: ") + e.what();
    }
    if (!v.pass) ++failed;
    std::printf("%s %2d %s: %s [%.1f s]\n", v.pass ? "PASS" : "FAIL", c.id, c.title, v.detail.c_str(),
                seconds_since(t0));
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
