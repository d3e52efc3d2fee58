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

#include "tcq/model.hpp"

using namespace tcq;

namespace {

DeviceParams uncoupled() {
  auto p = paper_device();
  p.g1c_mhz = p.g2c_mhz = p.g12_mhz = 0.0;
  return p;
}

}  // namespace

TEST_SUITE("model") {

TEST_CASE("uncoupled spectrum is the bare ladder") {
  auto p = uncoupled();
  ModeLayout l;
  FrequencyConfig f{4.9, 5.6, 4.8};
  Eigen::MatrixXd h = HamiltonianTerms(p, l).at(f);
  CHECK((h - Eigen::MatrixXd(h.diagonal().asDiagonal())).norm() == 0.0);
  for (int i = 0; i < l.total(); ++i) {
    Labels s = l.labels(i);
    double e = 0.0;
    for (int m = 0; m < 3; ++m) e += f[m] * s[m] + p.modes[m].eta_mhz * 1e-3 / 2.0 * s[m] * (s[m] - 1);
    CHECK(h(i, i) == doctest::Approx(e).epsilon(1e-14));
  }
  CHECK(h(0, 0) == 0.0);
  CHECK(std::abs(zz_exact_mhz(p, f, l)) < 1e-9);
}

TEST_CASE("hamiltonian is hermitian and conserves excitations") {
  auto p = paper_device();
  ModeLayout l(3, 4, 3);
  Matrix h = build_hamiltonian(p, {4.9, 5.7, 4.85}, l);
  CHECK((h - h.adjoint()).norm() < 1e-12 * h.norm());
  HamiltonianTerms t(p, l);
  Matrix n = t.total_number().cast<cplx>().asDiagonal();
  CHECK((h * n - n * h).norm() < 1e-10);
  CHECK_THROWS_AS(build_hamiltonian(p, {4.9, 5.7, 4.85}, ModeLayout(3, 3, 1)), Error);
}

TEST_CASE("effective coupling") {
  auto p = paper_device();
  FrequencyConfig f{4.926, 5.905, 4.926};
  const double d = (4.926 - 5.905) * 1e3;
  CHECK(effective_coupling_mhz(p, f) == doctest::Approx(6.74 + 76.9 * 76.9 / d).epsilon(1e-12));
  CHECK(effective_coupling_mhz(p, f) == doctest::Approx(0.70).epsilon(0.01));
  auto q = uncoupled();
  q.g12_mhz = 6.74;
  CHECK(effective_coupling_mhz(q, f) == 6.74);
  // The mediated term falls off as g1c*g2c/|delta|.
  FrequencyConfig far{4.926, 4.926 + 1000.0 * 0.0769, 4.926};
  CHECK(std::abs(effective_coupling_mhz(p, far) - 6.74) == doctest::Approx(0.0769).epsilon(1e-9));
  FrequencyConfig farther{4.926, 1004.926, 4.926};
  CHECK(std::abs(effective_coupling_mhz(p, farther) - 6.74) < 1e-3 * 6.74);
  CHECK_THROWS_AS(effective_coupling_mhz(p, {4.926, 4.926, 4.8}), Error);
}

TEST_CASE("dressed frequencies and dispersive shift") {
  auto p = paper_device();
  FrequencyConfig f{4.961, 5.977, 4.926};
  auto [w1, w2] = dressed_frequencies(p, f);
  CHECK(w1 == doctest::Approx(4.961 - 0.0769 * 0.0769 / 1.016).epsilon(1e-12));
  CHECK(w1 == doctest::Approx(4.9552).epsilon(1e-5));
  CHECK(w1 < 4.961);
  CHECK(w2 < 4.926);
  auto [u1, u2] = dressed_frequencies(uncoupled(), f);
  CHECK(u1 == 4.961);
  CHECK(u2 == 4.926);

  const double chi = dispersive_shift_mhz(p, f, 1);
  const double d = -1016.0;
  CHECK(chi == doctest::Approx(76.9 * 76.9 * (-460.0) / (2.0 * (d + 254.0) * (d - 206.0))).epsilon(1e-12));
  CHECK(chi == doctest::Approx(-1.46).epsilon(0.005));
  CHECK(dispersive_shift_mhz(uncoupled(), f, 1) == 0.0);
  auto q = p;
  q.modes[0].eta_mhz = 254.0;
  CHECK(dispersive_shift_mhz(q, f, 1) == 0.0);
}

TEST_CASE("perturbative zz orders") {
  auto p = uncoupled();
  FrequencyConfig f{4.961, 5.905, 4.926};
  auto z = zz_perturbative(p, f);
  CHECK(z.total == 0.0);

  p.g12_mhz = 6.74;
  z = zz_perturbative(p, f);
  const double d12 = 35.0;
  const double e1 = -206.0, e2 = -202.0;
  CHECK(z.second == doctest::Approx(2.0 * 6.74 * 6.74 * (e1 + e2) / ((d12 + e1) * (d12 - e2))).epsilon(1e-10));
  CHECK(z.third == 0.0);
  CHECK(z.fourth == 0.0);

  auto q = paper_device();
  CHECK_THROWS_AS(zz_perturbative(q, {4.961, 5.905, 4.961}), Error);
}

TEST_CASE("exact zz crosses zero once inside the expected window") {
  auto p = paper_device();
  ModeLayout l;
  int changes = 0;
  double prev = zz_exact_mhz(p, {4.961, 5.5, 4.926}, l);
  for (int k = 1; k < 50; ++k) {
    const double wc = 5.5 + (5.977 - 5.5) * k / 49.0;
    const double z = zz_exact_mhz(p, {4.961, wc, 4.926}, l);
    if ((z > 0) != (prev > 0)) ++changes;
    prev = z;
  }
  CHECK(changes == 1);
  const double off = find_coupler_off(p, 4.961, 4.926, OffCriterion::ZzExact, l);
  CHECK(off > 5.805);
  CHECK(off < 6.005);
  CHECK(std::abs(zz_exact_mhz(p, {4.961, off, 4.926}, l)) < 1e-3);
  CHECK(idle_coupler_frequency(p, l) == doctest::Approx(off).epsilon(1e-9));
}

TEST_CASE("swap off point matches the symmetric closed form") {
  auto p = paper_device();
  const double off = find_coupler_off(p, 4.926, 4.926, OffCriterion::SwapCoupling, ModeLayout());
  CHECK(std::abs(off - (4.926 + 76.9 * 76.9 / 6.74 * 1e-3)) < 1e-6);
  CHECK(std::abs(effective_coupling_mhz(p, {4.926, off, 4.926})) < 1e-3);
  CHECK_THROWS_AS(find_coupler_off(p, 4.926, 4.926, OffCriterion::SwapCoupling, ModeLayout(), std::pair{5.9, 5.977}),
                  Error);
}

TEST_CASE("exact splitting at resonance equals twice the exchange") {
  auto p = paper_device();
  ModeLayout l;
  FrequencyConfig f{4.926, 5.905, 4.926};
  Eigen::MatrixXd h = HamiltonianTerms(p, l).at(f);
  auto pair = effective_pair(h, l.index({1, 0, 0}), l.index({0, 0, 1}));
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(pair.heff);
  const double gap = (es.eigenvalues()(1) - es.eigenvalues()(0)) * 1e3;
  CHECK(gap == doctest::Approx(2.0 * std::abs(exact_swap_coupling_mhz(p, f, l))).epsilon(1e-6));
  CHECK(gap == doctest::Approx(2.0 * std::abs(effective_coupling_mhz(p, f))).epsilon(0.2));
}

TEST_CASE("two-level truncation reproduces the second-order exchange") {
  auto p = paper_device();
  auto mediated = paper_device();
  mediated.g12_mhz = 0.0;
  ModeLayout l(2, 2, 2);
  for (auto [dev, wc] : {std::pair{p, 5.977}, std::pair{mediated, 5.75}, std::pair{mediated, 5.977}}) {
    p = dev;
    FrequencyConfig f{4.926, wc, 4.926};
    REQUIRE(std::abs(f.q1 - f.c) * 1e3 > 10.0 * p.g1c_mhz);
    const double exact = exact_swap_coupling_mhz(p, f, l);
    const double formula = effective_coupling_mhz(p, f);
    CHECK(std::abs(exact - formula) < 0.1 * std::abs(formula));
  }
}

}
