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

#include "tcq/qspace.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

namespace tcq {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidDimension: return "invalid-dimension";
    case ErrorCode::Shape: return "shape";
    case ErrorCode::Index: return "index";
    case ErrorCode::InvalidState: return "invalid-state";
    case ErrorCode::OutOfBranch: return "out-of-branch";
    case ErrorCode::UnreachableFrequency: return "unreachable-frequency";
    case ErrorCode::Configuration: return "configuration";
    case ErrorCode::SingularDetuning: return "singular-detuning";
    case ErrorCode::Resonance: return "resonance";
    case ErrorCode::StateIdentification: return "state-identification";
    case ErrorCode::NoOffPoint: return "no-off-point";
    case ErrorCode::InvalidPulse: return "invalid-pulse";
    case ErrorCode::TooFastRamp: return "too-fast-ramp";
    case ErrorCode::IncompatibleGrid: return "incompatible-grid";
    case ErrorCode::DdrInfeasible: return "ddr-infeasible";
    case ErrorCode::InvalidTrajectory: return "invalid-trajectory";
    case ErrorCode::IntegratorFailure: return "integrator-failure";
    case ErrorCode::LowContrast: return "low-contrast";
    case ErrorCode::Infeasible: return "infeasible";
    case ErrorCode::Calibration: return "calibration";
    case ErrorCode::Nonadiabatic: return "nonadiabatic";
    case ErrorCode::Inversion: return "inversion";
    case ErrorCode::Tomography: return "tomography";
    case ErrorCode::BasisMismatch: return "basis-mismatch";
    case ErrorCode::Benchmarking: return "benchmarking";
    case ErrorCode::Usage: return "usage";
    case ErrorCode::Io: return "io";
  }
  return "unknown";
}

std::string Labels::str() const {
  return std::to_string(q1) + std::to_string(c) + std::to_string(q2);
}

ModeLayout::ModeLayout(int q1, int c, int q2) : dims_{q1, c, q2} {
  for (int d : dims_) {
    if (d < 2) fail(ErrorCode::InvalidDimension, "every mode needs at least 2 levels");
  }
}

bool ModeLayout::contains(const Labels& l) const {
  return l.q1 >= 0 && l.c >= 0 && l.q2 >= 0 && l.q1 < dims_[0] && l.c < dims_[1] &&
         l.q2 < dims_[2];
}

int ModeLayout::index(const Labels& l) const {
  if (!contains(l)) fail(ErrorCode::Index, "label |" + l.str() + "> outside layout");
  return (l.q1 * dims_[1] + l.c) * dims_[2] + l.q2;
}

Labels ModeLayout::labels(int index) const {
  if (index < 0 || index >= total()) fail(ErrorCode::Index, "basis index out of range");
  Labels l;
  l.q2 = index % dims_[2];
  index /= dims_[2];
  l.c = index % dims_[1];
  l.q1 = index / dims_[1];
  return l;
}

LadderOperators mode_operators(int levels) {
  if (levels < 2) fail(ErrorCode::InvalidDimension, "mode_operators needs levels >= 2");
  Matrix a = Matrix::Zero(levels, levels);
  for (int n = 1; n < levels; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  Matrix ad = a.adjoint();
  Matrix num = ad * a;
  return {std::move(a), std::move(ad), std::move(num)};
}

Matrix embed(const Matrix& op, int mode, const ModeLayout& layout) {
  if (mode < 0 || mode >= kNumModes) fail(ErrorCode::Index, "mode index out of range");
  const int d = layout.dim(mode);
  if (op.rows() != d || op.cols() != d) {
    fail(ErrorCode::Shape, "operator dimension does not match mode " + std::to_string(mode));
  }
  const int n = layout.total();
  Matrix out = Matrix::Zero(n, n);
  // Direct assembly: <x|op_k|y> is nonzero only when the other labels agree.
  for (int x = 0; x < n; ++x) {
    const Labels lx = layout.labels(x);
    for (int k = 0; k < d; ++k) {
      const cplx v = op(lx[mode], k);
      if (v == cplx{}) continue;
      Labels ly = lx;
      if (mode == 0) ly.q1 = k;
      else if (mode == 1) ly.c = k;
      else ly.q2 = k;
      out(x, layout.index(ly)) = v;
    }
  }
  return out;
}

Vector basis_vector(const Labels& labels, const ModeLayout& layout) {
  Vector v = Vector::Zero(layout.total());
  v(layout.index(labels)) = 1.0;
  return v;
}

SystemState SystemState::pure(Vector psi) {
  SystemState s(Kind::Pure, std::move(psi), Matrix());
  return s;
}

SystemState SystemState::density(Matrix rho) {
  if (rho.rows() != rho.cols()) fail(ErrorCode::Shape, "density matrix must be square");
  return SystemState(Kind::Density, Vector(), std::move(rho));
}

int SystemState::dim() const {
  return static_cast<int>(is_pure() ? psi_.size() : rho_.rows());
}

const Vector& SystemState::vector() const {
  if (!is_pure()) fail(ErrorCode::InvalidState, "state is a density matrix");
  return psi_;
}

const Matrix& SystemState::matrix() const {
  if (is_pure()) fail(ErrorCode::InvalidState, "state is a pure vector");
  return rho_;
}

Matrix SystemState::to_density() const {
  if (is_pure()) return psi_ * psi_.adjoint();
  return rho_;
}

Eigen::VectorXd SystemState::populations() const {
  if (is_pure()) return psi_.cwiseAbs2();
  return rho_.diagonal().real();
}

void SystemState::validate(double tol) const {
  if (is_pure()) {
    if (std::abs(psi_.norm() - 1.0) > tol) fail(ErrorCode::InvalidState, "state vector is not normalized");
    return;
  }
  if ((rho_ - rho_.adjoint()).norm() > tol) fail(ErrorCode::InvalidState, "density matrix is not Hermitian");
  if (std::abs(rho_.trace() - cplx(1.0)) > tol) fail(ErrorCode::InvalidState, "density matrix trace is not 1");
  Eigen::SelfAdjointEigenSolver<Matrix> es(rho_, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -tol) fail(ErrorCode::InvalidState, "density matrix has negative eigenvalues");
}

}  // namespace tcq
