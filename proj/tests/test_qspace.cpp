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

#include "tcq/qspace.hpp"

using namespace tcq;

TEST_SUITE("qspace") {

TEST_CASE("row-major index") {
  ModeLayout l(3, 3, 3);
  CHECK(l.index({0, 0, 0}) == 0);
  CHECK(l.index({1, 0, 1}) == 10);
  CHECK(l.total() == 27);
  for (int i = 0; i < l.total(); ++i) CHECK(l.index(l.labels(i)) == i);
  CHECK_THROWS_AS(l.index({3, 0, 0}), Error);
  CHECK_THROWS_AS(l.labels(27), Error);
  CHECK(Labels{1, 0, 1}.str() == "101");
}

TEST_CASE("layout rejects single-level modes") {
  CHECK_THROWS_AS(ModeLayout(1, 3, 3), Error);
}

TEST_CASE("ladder operators") {
  auto ops = mode_operators(4);
  CHECK((ops.raising - ops.lowering.adjoint()).norm() == 0.0);
  CHECK((ops.raising * ops.lowering - ops.number).norm() < 1e-14);
  Matrix comm = ops.lowering * ops.raising - ops.raising * ops.lowering;
  for (int n = 0; n < 3; ++n) CHECK(std::abs(comm(n, n) - 1.0) < 1e-14);
}

TEST_CASE("embedded operators on different modes commute") {
  ModeLayout l(3, 4, 2);
  for (int a = 0; a < 3; ++a) {
    for (int b = a + 1; b < 3; ++b) {
      Matrix x = embed(mode_operators(l.dim(a)).lowering, a, l);
      Matrix y = embed(mode_operators(l.dim(b)).raising, b, l);
      CHECK((x * y - y * x).norm() < 1e-12);
    }
  }
}

TEST_CASE("embedding commutes with adjoint") {
  ModeLayout l;
  auto ops = mode_operators(3);
  for (int m = 0; m < 3; ++m) {
    CHECK((embed(ops.lowering, m, l).adjoint() - embed(ops.raising, m, l)).norm() == 0.0);
  }
}

TEST_CASE("trace of embedded number operator") {
  ModeLayout l(3, 4, 2);
  for (int m = 0; m < 3; ++m) {
    const int d = l.dim(m);
    const double sum_n = d * (d - 1) / 2.0;
    Matrix n = embed(mode_operators(d).number, m, l);
    CHECK(n.trace().real() == doctest::Approx(double(l.total()) / d * sum_n));
  }
}

TEST_CASE("embedded number is diagonal in labels") {
  ModeLayout l;
  Matrix n2 = embed(mode_operators(3).number, Mode::Q2, l);
  for (int i = 0; i < l.total(); ++i) CHECK(n2(i, i).real() == doctest::Approx(l.labels(i).q2));
}

TEST_CASE("system state validation") {
  ModeLayout l;
  auto s = SystemState::pure(basis_vector({1, 0, 1}, l));
  s.validate();
  CHECK(s.populations()(10) == 1.0);
  CHECK(s.to_density()(10, 10) == cplx(1.0));
  CHECK_THROWS_AS(SystemState::pure(2.0 * basis_vector({0, 0, 0}, l)).validate(), Error);
  Matrix rho = Matrix::Zero(4, 4);
  rho(0, 1) = 1.0;
  CHECK_THROWS_AS(SystemState::density(rho).validate(), Error);
}

}
