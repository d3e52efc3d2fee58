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

#include <doctest.h>

#include <cmath>

#include "tcq/dynamics.hpp"
#include "tcq/gates.hpp"

using namespace tcq;

namespace {

DeviceParams uncoupled() {
  auto p = paper_device();
  p.g1c_mhz = p.g2c_mhz = p.g12_mhz = 0.0;
  return p;
}

FrequencyConfig idle_of(const DeviceParams& p) {
  return {p.modes[0].omega_max_ghz, 5.9027, p.modes[2].omega_max_ghz};
}

Vector product_state(const ModeLayout& l) {
  Vector v = basis_vector({0, 0, 0}, l) + basis_vector({1, 0, 0}, l) + basis_vector({0, 0, 1}, l) +
             basis_vector({1, 0, 1}, l);
  return v / 2.0;
}

PulseSchedule swap_schedule(const DeviceParams& p, double duration_ns, double dt) {
  auto idle = idle_of(p);
  PulseSchedule s(dt, idle);
  const double ramp = 10.0;
  s.set(cosine_flat_top(Channel::FreqC, idle.c, 5.45, ramp, duration_ns - 2 * ramp, dt));
  return s;
}

}  // namespace

TEST_SUITE("dynamics") {

TEST_CASE("zero frame hamiltonian leaves the state unchanged") {
  auto p = uncoupled();
  ModeLayout l;
  FrequencyConfig f{4.9, 5.6, 4.9};
  auto s = PulseSchedule::idle_for(0.1, f, 500);
  EvolveOptions o;
  o.frame_ghz = 4.9;
  Vector psi = (basis_vector({1, 0, 0}, l) + basis_vector({0, 0, 1}, l)) / std::sqrt(2.0);
  auto r = evolve(s, SystemState::pure(psi), p, l, nullptr, o);
  CHECK((r.final_state.vector() - psi).norm() < 1e-12);
}

TEST_CASE("unitary evolution preserves the norm") {
  auto p = paper_device();
  ModeLayout l;
  auto s = swap_schedule(p, 500.0, 0.1);
  auto r = evolve(s, SystemState::pure(product_state(l)), p, l);
  CHECK(std::abs(r.final_state.vector().norm() - 1.0) < 1e-8);
}

TEST_CASE("fourth-order convergence") {
  auto p = paper_device();
  ModeLayout l;
  auto s = swap_schedule(p, 40.0, 0.5);
  auto run = [&](int m) {
    EvolveOptions o;
    o.substeps = m;
    return Propagator(p, l).run_pure(s, product_state(l), o);
  };
  Matrix ref = run(256);
  const double e1 = (run(16) - ref).norm();
  const double e2 = (run(32) - ref).norm();
  MESSAGE("error ratio " << e1 / e2);
  CHECK(e1 / e2 == doctest::Approx(16.0).epsilon(0.25));
}

TEST_CASE("lindblad evolution stays a density matrix") {
  auto p = paper_device();
  ModeLayout l;
  auto s = swap_schedule(p, 200.0, 0.1);
  auto c = CollapseSet::from_device(p);
  Vector psi = product_state(l);
  auto r = evolve(s, SystemState::pure(psi), p, l, &c);
  const Matrix& rho = r.final_state.matrix();
  CHECK(std::abs(rho.trace().real() - 1.0) < 1e-8);
  Eigen::SelfAdjointEigenSolver<Matrix> es(rho);
  CHECK(es.eigenvalues().minCoeff() > -1e-8);
}

TEST_CASE("relaxation follows the exponential law") {
  auto p = uncoupled();
  p.modes[0].t2_us = 2.0 * p.modes[0].t1_us;
  ModeLayout l(3, 2, 2);
  auto c = CollapseSet::from_device(p);
  c.gamma1[1] = c.gamma1[2] = 0.0;
  c.gamma_phi = {0.0, 0.0, 0.0};
  FrequencyConfig f{4.961, 5.9, 4.926};
  const int n = static_cast<int>(p.modes[0].t1_us * 1e3);
  auto s = PulseSchedule::idle_for(1.0, f, n);
  EvolveOptions o;
  o.record = {{1, 0, 0}};
  o.record_every = n;
  auto r = evolve(s, SystemState::pure(basis_vector({1, 0, 0}, l)), p, l, &c, o);
  CHECK(r.populations.back()[0] == doctest::Approx(std::exp(-1.0)).epsilon(0.01));
}

TEST_CASE("direct exchange oscillates as a two-level swap") {
  auto p = uncoupled();
  p.g12_mhz = 2.0;
  ModeLayout l;
  FrequencyConfig f{4.926, 5.9, 4.926};
  auto s = PulseSchedule::idle_for(0.1, f, 2000);
  EvolveOptions o;
  o.record = {{0, 0, 1}};
  o.max_step_phase = 0.05;
  auto r = evolve(s, SystemState::pure(basis_vector({1, 0, 0}, l)), p, l, nullptr, o);
  double worst = 0.0;
  for (std::size_t k = 0; k < r.times_ns.size(); ++k) {
    const double want = std::pow(std::sin(kTwoPi * 2e-3 * r.times_ns[k]), 2);
    worst = std::max(worst, std::abs(r.populations[k][0] - want));
  }
  CHECK(worst < 1e-3);
}

TEST_CASE("rotating and lab frame agree for a resonant drive") {
  auto p = uncoupled();
  ModeLayout l(3, 2, 2);
  FrequencyConfig f{4.961, 5.9, 4.926};
  PulseSchedule s(0.05, f);
  DragParams d;
  d.sigma_ns = 5.0;
  d.amplitude = drag_amplitude_for(M_PI, d.sigma_ns, 0.0, 0.05);
  s.set(drag(Channel::XyQ1, d, 0.05));
  EvolveOptions rot, lab;
  lab.frame_ghz = 0.0;
  auto a = evolve(s, SystemState::pure(basis_vector({0, 0, 0}, l)), p, l, nullptr, rot);
  auto b = evolve(s, SystemState::pure(basis_vector({0, 0, 0}, l)), p, l, nullptr, lab);
  CHECK((a.final_state.populations() - b.final_state.populations()).cwiseAbs().maxCoeff() < 1e-4);
  CHECK(a.final_state.populations()(l.index({1, 0, 0})) > 0.9);
}

TEST_CASE("time-independent evolution conserves energy") {
  auto p = paper_device();
  ModeLayout l;
  auto idle = idle_of(p);
  auto s = PulseSchedule::idle_for(0.1, idle, 10000);
  Vector psi = product_state(l);
  EvolveOptions o;
  o.max_step_phase = 0.02;
  auto r = evolve(s, SystemState::pure(psi), p, l, nullptr, o);
  Matrix h = build_hamiltonian(p, idle, l);
  auto energy = [&](const Vector& v) { return (v.adjoint() * h * v)(0, 0).real(); };
  CHECK(std::abs(energy(r.final_state.vector()) - energy(psi)) < 1e-9 * std::abs(energy(psi)));
}

TEST_CASE("ramsey phase") {
  auto p = paper_device();
  ModeLayout l;
  auto idle = idle_of(p);
  auto id = PulseSchedule::idle_for(0.1, idle, 200);
  CHECK(std::abs(ramsey_phase(id, p, l, 1, 0).phase) < 1e-3);
  CHECK(std::abs(ramsey_phase(id, p, l, 2, 1).phase) < 1e-3);

  // |1> -> exp(i phi)|1>, so a positive detuning winds the phase backwards.
  const double delta = 2e-3, t = 50.0;
  PulseSchedule s(0.1, idle);
  s.set(rectangular(Channel::FreqQ2, idle.q2 - delta, t, 0.1));
  auto r = ramsey_phase(s, p, l, 2, 0);
  auto dressed_q2 = [&](const FrequencyConfig& f) {
    auto b = dressed_basis(build_hamiltonian(p, f, l).real());
    return b.energy({0, 0, 1}, l) - b.energy({0, 0, 0}, l);
  };
  FrequencyConfig low = idle;
  low.q2 -= delta;
  const double shift = dressed_q2(idle) - dressed_q2(low);
  CHECK(std::abs(shift - delta) < 1e-4);
  CHECK(std::abs(wrap_phase(r.phase - kTwoPi * shift * t)) < 1e-3);
  CHECK(r.contrast > 0.99);
}

TEST_CASE("trajectory serialization") {
  auto p = paper_device();
  ModeLayout l;
  auto s = PulseSchedule::idle_for(0.1, idle_of(p), 10);
  EvolveOptions o;
  o.record = {{1, 0, 0}, {0, 0, 1}};
  o.record_every = 5;
  auto r = evolve(s, SystemState::pure(basis_vector({1, 0, 0}, l)), p, l, nullptr, o);
  CHECK(r.times_ns.size() == 3);
  const auto csv = r.to_csv();
  CHECK(csv.substr(0, csv.find('\n')) == "time_ns,p100,p001");
  CHECK(r.to_json().find("schedule_hash") != std::string::npos);
}

TEST_CASE("chevron sweep is independent of the job count") {
  auto p = paper_device();
  ModeLayout l;
  std::vector<double> grid{5.5, 5.6, 5.7, 5.8};
  auto a = swap_chevron(p, l, grid, 50.0, 11, 0.1, 1);
  auto b = swap_chevron(p, l, grid, 50.0, 11, 0.1, 3);
  CHECK(a.to_csv() == b.to_csv());
  for (const auto& col : a.population) CHECK(col.front() == doctest::Approx(1.0).epsilon(1e-12));
}

}
