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
#include <random>

#include "tcq/device.hpp"

using namespace tcq;

TEST_SUITE("device") {

TEST_CASE("built-in preset") {
  auto p = paper_device();
  CHECK(p.mode(Mode::Q1).omega_max_ghz == 4.961);
  CHECK(p.mode(Mode::C).omega_max_ghz == 5.977);
  CHECK(p.mode(Mode::Q2).omega_max_ghz == 4.926);
  CHECK(p.mode(Mode::Q1).eta_mhz == -206.0);
  CHECK(p.mode(Mode::C).eta_mhz == -254.0);
  CHECK(p.mode(Mode::Q2).eta_mhz == -202.0);
  CHECK(p.g1c_mhz == 76.9);
  CHECK(p.g2c_mhz == 76.9);
  CHECK(p.g12_mhz == 6.74);
  CHECK(p.mode(Mode::Q1).t1_us == 14.0);
  CHECK(p.mode(Mode::Q1).t2_us == 8.4);
  CHECK(p.mode(Mode::Q2).t1_us == 13.7);
  CHECK(p.mode(Mode::Q2).t2_us == 4.0);
  CHECK(validation_errors(p).empty());
}

TEST_CASE("flux map") {
  CHECK(freq_from_flux(0.0, 5.977, -254.0) == doctest::Approx(5.977).epsilon(1e-15));
  const double expect = (5.977 + 0.254) * std::sqrt(std::sqrt(0.5)) - 0.254;
  CHECK(freq_from_flux(0.25, 5.977, -254.0) == doctest::Approx(expect).epsilon(1e-14));
  CHECK(freq_from_flux(0.25, 5.977, -254.0) == doctest::Approx(4.985).epsilon(1e-3));
  CHECK(flux_from_freq(5.977, 5.977, -254.0) == doctest::Approx(0.0));
  CHECK(flux_from_freq(expect, 5.977, -254.0) == doctest::Approx(0.25).epsilon(1e-12));
  CHECK_THROWS_AS(freq_from_flux(0.5, 5.977, -254.0), Error);
  CHECK_THROWS_AS(flux_from_freq(5.9771, 5.977, -254.0), Error);
  CHECK_THROWS_AS(flux_from_freq(-0.3, 5.977, -254.0), Error);
}

TEST_CASE("flux roundtrip and monotonicity") {
  for (double x = 0.001; x < 0.45; x += 0.0037) {
    CHECK(std::abs(flux_from_freq(freq_from_flux(x, 4.961, -206.0), 4.961, -206.0) - x) < 1e-9);
  }
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> wmax(4.0, 7.0), eta(-350.0, -100.0);
  for (int trial = 0; trial < 20; ++trial) {
    const double w = wmax(rng), e = eta(rng);
    double prev = freq_from_flux(0.0, w, e);
    for (int k = 1; k <= 90; ++k) {
      const double f = freq_from_flux(0.005 * k, w, e);
      CHECK(f < prev);
      prev = f;
    }
  }
}

TEST_CASE("crosstalk correction") {
  auto p = paper_device();
  Eigen::Vector3d v = apply_crosstalk_correction({1.0, 0.0, 0.0}, p.crosstalk_inv);
  CHECK(v(0) == doctest::Approx(0.9963));
  CHECK(v(1) == doctest::Approx(-0.0798));
  CHECK(v(2) == doctest::Approx(-0.0116));
  Eigen::Vector3d u(0.1, -0.2, 0.3);
  CHECK((apply_crosstalk_correction(u, Eigen::Matrix3d::Identity()) - u).norm() == 0.0);
  std::mt19937_64 rng(3);
  std::normal_distribution<double> n;
  Eigen::Matrix3d mz = crosstalk_matrix(p.crosstalk_inv);
  for (int k = 0; k < 50; ++k) {
    Eigen::Vector3d d(n(rng), n(rng), n(rng));
    CHECK((mz * apply_crosstalk_correction(d, p.crosstalk_inv) - d).norm() < 1e-12);
  }
  CHECK_THROWS_AS(apply_crosstalk_correction(u, Eigen::Matrix3d::Zero()), Error);
}

TEST_CASE("validation flags invariant violations") {
  auto p = paper_device();
  p.modes[2].t2_us = 2.0 * p.modes[2].t1_us + 0.1;
  auto errs = validation_errors(p);
  REQUIRE(errs.size() == 1);
  CHECK(errs[0].find("q2.t2_us") != std::string::npos);
  CHECK_THROWS_AS(validate(p), Error);

  p = paper_device();
  p.modes[0].eta_mhz = 10.0;
  p.g12_mhz = -1.0;
  CHECK(validation_errors(p).size() == 2);

  p = paper_device();
  p.crosstalk_inv.row(2) = p.crosstalk_inv.row(0);
  CHECK(validation_errors(p).size() == 1);
}

TEST_CASE("yaml roundtrip is exact") {
  auto p = paper_device();
  p.modes[1].t1_us = 3.14159;
  p.g12_mhz = 0.000123456;
  p.levels = {3, 4, 3};
  auto q = device_from_yaml(device_to_yaml(p));
  CHECK(q.modes[1].t1_us == p.modes[1].t1_us);
  CHECK(q.g12_mhz == p.g12_mhz);
  CHECK(q.crosstalk_inv == p.crosstalk_inv);
  CHECK(q.levels == p.levels);
  CHECK(device_to_yaml(q) == device_to_yaml(p));
}

TEST_CASE("unknown keys suggest the nearest known key") {
  CHECK(nearest_key("coupling.g12_mz") == "coupling.g12_mhz");
  CHECK(nearest_key("q2.t2_sec") == "q2.t2_us");
  auto p = paper_device();
  try {
    apply_override(p, "q1.omega_mx_ghz=5.0");
    FAIL("override accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Configuration);
    CHECK(std::string(e.what()).find("q1.omega_max_ghz") != std::string::npos);
  }
  CHECK_THROWS_AS(device_from_yaml("q1:\n  omega_max: 5.0\n"), Error);
}

TEST_CASE("overrides and presets") {
  auto p = load_device("paper_device");
  apply_override(p, "q2.t2_us=3.5");
  CHECK(p.modes[2].t2_us == 3.5);
  apply_override(p, "levels.c=4");
  CHECK(p.layout().dim(Mode::C) == 4);
  CHECK_THROWS_AS(apply_override(p, "q2.t2_us"), Error);
  CHECK_THROWS_AS(apply_override(p, "q2.t2_us=abc"), Error);
  CHECK_THROWS_AS(load_device("no_such_preset_or_file"), Error);
}

}
