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
#include <complex>
#include <string>

#include <Eigen/Dense>

#include "tcq/error.hpp"

namespace tcq {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

/// Mode positions in the composite space. The order is fixed: |Q1, C, Q2>.
enum class Mode : int { Q1 = 0, C = 1, Q2 = 2 };

inline constexpr int kNumModes = 3;

/// Occupation numbers (n1, nc, n2).
struct Labels {
  int q1 = 0;
  int c = 0;
  int q2 = 0;

  int operator[](int mode) const { return mode == 0 ? q1 : (mode == 1 ? c : q2); }
  int excitations() const { return q1 + c + q2; }
  std::string str() const;  // "101"
  friend bool operator==(const Labels&, const Labels&) = default;
};

/// Truncation levels per mode. Basis index is row-major in (Q1, C, Q2).
class ModeLayout {
 public:
  ModeLayout() : ModeLayout(3, 3, 3) {}
  ModeLayout(int q1, int c, int q2);
  static ModeLayout uniform(int levels) { return {levels, levels, levels}; }

  int dim(int mode) const { return dims_.at(mode); }
  int dim(Mode mode) const { return dim(static_cast<int>(mode)); }
  const std::array<int, 3>& dims() const { return dims_; }
  int total() const { return dims_[0] * dims_[1] * dims_[2]; }

  int index(const Labels& labels) const;
  Labels labels(int index) const;
  bool contains(const Labels& labels) const;

  friend bool operator==(const ModeLayout&, const ModeLayout&) = default;

 private:
  std::array<int, 3> dims_;
};

struct LadderOperators {
  Matrix lowering;
  Matrix raising;
  Matrix number;
};

/// Truncated a, a^dagger and a^dagger a on `levels` Fock states.
LadderOperators mode_operators(int levels);

/// I x ... x op x ... x I in the fixed mode order.
Matrix embed(const Matrix& op, int mode, const ModeLayout& layout);
inline Matrix embed(const Matrix& op, Mode mode, const ModeLayout& layout) {
  return embed(op, static_cast<int>(mode), layout);
}

/// Basis vector for the given labels.
Vector basis_vector(const Labels& labels, const ModeLayout& layout);

/// A pure state vector or a density matrix on the composite space.
class SystemState {
 public:
  enum class Kind { Pure, Density };

  static SystemState pure(Vector psi);
  static SystemState density(Matrix rho);

  Kind kind() const { return kind_; }
  bool is_pure() const { return kind_ == Kind::Pure; }
  int dim() const;
  const Vector& vector() const;
  const Matrix& matrix() const;

  /// Density matrix regardless of kind.
  Matrix to_density() const;
  /// Population of each basis state.
  Eigen::VectorXd populations() const;

  /// Throws InvalidState unless the invariants hold within `tol`.
  void validate(double tol = 1e-9) const;

 private:
  SystemState(Kind kind, Vector psi, Matrix rho)
      : kind_(kind), psi_(std::move(psi)), rho_(std::move(rho)) {}

  Kind kind_;
  Vector psi_;
  Matrix rho_;
};

}  // namespace tcq
