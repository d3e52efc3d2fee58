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

#include "tcq/tomo.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <map>
#include <random>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

#include "json.hpp"

namespace tcq {

namespace {

Matrix kron(const Matrix& a, const Matrix& b) { return Eigen::kroneckerProduct(a, b).eval(); }

Eigen::Matrix2cd pauli(int k) {
  const cplx i(0, 1);
  Eigen::Matrix2cd m;
  switch (k) {
    case 0: m << 1, 0, 0, 1; break;
    case 1: m << 0, 1, 1, 0; break;
    case 2: m << 0, -i, i, 0; break;
    default: m << 1, 0, 0, -1; break;
  }
  return m;
}

Eigen::Matrix2cd rotation(int axis, double angle) {
  return std::cos(angle / 2) * Eigen::Matrix2cd::Identity() - cplx(0, 1) * std::sin(angle / 2) * pauli(axis);
}

}  // namespace

const std::array<Matrix, 16>& process_basis() {
  static const std::array<Matrix, 16> basis = [] {
    std::array<Matrix, 4> e;
    e[0] = pauli(0);
    e[1] = pauli(1);
    e[2] = cplx(0, -1) * pauli(2);
    e[3] = pauli(3);
    std::array<Matrix, 16> b;
    for (int a = 0; a < 4; ++a) {
      for (int c = 0; c < 4; ++c) b[4 * a + c] = kron(e[a], e[c]);
    }
    return b;
  }();
  return basis;
}

double ProcessMatrix::trace_preservation_residual() const {
  const auto& e = process_basis();
  Matrix s = Matrix::Zero(4, 4);
  for (int m = 0; m < 16; ++m) {
    for (int n = 0; n < 16; ++n) {
      if (chi(m, n) != cplx{}) s += chi(m, n) * e[n].adjoint() * e[m];
    }
  }
  return (s - Matrix::Identity(4, 4)).norm();
}

double ProcessMatrix::min_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (chi + chi.adjoint()), Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

std::string ProcessMatrix::to_json() const {
  nlohmann::json j;
  j["basis"] = kProcessBasisOrder;
  std::vector<std::vector<double>> re(16, std::vector<double>(16)), im(16, std::vector<double>(16));
  for (int m = 0; m < 16; ++m) {
    for (int n = 0; n < 16; ++n) {
      re[m][n] = chi(m, n).real();
      im[m][n] = chi(m, n).imag();
    }
  }
  j["chi_real"] = re;
  j["chi_imag"] = im;
  return j.dump(2);
}

ProcessMatrix chi_from_unitary(const Matrix& u) {
  if (u.rows() != 4 || u.cols() != 4) fail(ErrorCode::Shape, "chi_from_unitary needs a 4x4 matrix");
  const auto& e = process_basis();
  Vector c(16);
  for (int m = 0; m < 16; ++m) c(m) = (e[m].adjoint() * u).trace() / 4.0;
  ProcessMatrix p;
  p.chi = c * c.adjoint();
  return p;
}

std::vector<Matrix> qpt_input_states() {
  const double r = 1.0 / std::sqrt(2.0);
  std::array<Vector, 4> s;
  for (auto& v : s) v = Vector::Zero(2);
  s[0](0) = 1.0;
  s[1](1) = 1.0;
  s[2](0) = r;
  s[2](1) = r;
  s[3](0) = r;
  s[3](1) = cplx(0, -r);
  std::vector<Matrix> out;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      Vector v = kron(s[i], s[j]);
      out.push_back(v * v.adjoint());
    }
  }
  return out;
}

ProcessMatrix process_tomography(const std::vector<Matrix>& inputs, const std::vector<Matrix>& outputs) {
  if (inputs.size() != outputs.size() || inputs.size() < 16) {
    fail(ErrorCode::Tomography, "process tomography needs 16 input/output pairs");
  }
  const auto& e = process_basis();
  const int rows = static_cast<int>(inputs.size()) * 16;
  Matrix a(rows, 256);
  Vector b(rows);
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    if (inputs[i].rows() != 4 || outputs[i].rows() != 4) fail(ErrorCode::Shape, "QPT states must be 4x4");
    for (int m = 0; m < 16; ++m) {
      const Matrix left = e[m] * inputs[i];
      for (int n = 0; n < 16; ++n) {
        const Matrix t = left * e[n].adjoint();
        a.block(16 * i, 16 * m + n, 16, 1) = Eigen::Map<const Vector>(t.data(), 16);
      }
    }
    b.segment(16 * i, 16) = Eigen::Map<const Vector>(outputs[i].data(), 16);
  }
  Eigen::ColPivHouseholderQR<Matrix> qr(a);
  if (qr.rank() < 256) fail(ErrorCode::Tomography, "QPT linear system is singular");
  const Vector x = qr.solve(b);
  ProcessMatrix p;
  for (int m = 0; m < 16; ++m) {
    for (int n = 0; n < 16; ++n) p.chi(m, n) = x(16 * m + n);
  }
  return p;
}

ProcessMatrix process_tomography(const TwoQubitChannel& channel, const std::vector<Matrix>* measured_inputs) {
  const auto ideal = qpt_input_states();
  std::vector<Matrix> outputs;
  for (const auto& r : ideal) outputs.push_back(channel(r));
  return process_tomography(measured_inputs ? *measured_inputs : ideal, outputs);
}

double process_fidelity(const ProcessMatrix& exp, const ProcessMatrix& ideal) {
  if (exp.chi.rows() != 16 || ideal.chi.rows() != 16 || exp.chi.cols() != 16 || ideal.chi.cols() != 16) {
    fail(ErrorCode::BasisMismatch, "process matrices must be 16x16 in the same basis");
  }
  return (exp.chi * ideal.chi).trace().real();
}

Eigen::Matrix2d ReadoutModel::matrix(int qubit) const {
  const auto& r = qubits.at(qubit);
  Eigen::Matrix2d m;
  m << r.fg, 1.0 - r.fe, 1.0 - r.fg, r.fe;
  return m;
}

Eigen::Matrix4d ReadoutModel::joint() const { return Eigen::kroneckerProduct(matrix(0), matrix(1)).eval(); }

Eigen::VectorXd readout_forward(const Eigen::VectorXd& ideal, const ReadoutModel& readout, int qubit) {
  if (ideal.size() == 2) return readout.matrix(qubit) * ideal;
  if (ideal.size() == 4) return readout.joint() * ideal;
  fail(ErrorCode::Shape, "readout vectors have 2 or 4 entries");
}

BayesResult bayes_correct(const Eigen::VectorXd& raw, const ReadoutModel& readout, int qubit) {
  Eigen::MatrixXd m;
  if (raw.size() == 2) m = readout.matrix(qubit);
  else if (raw.size() == 4) m = readout.joint();
  else fail(ErrorCode::Shape, "readout vectors have 2 or 4 entries");
  if (std::abs(m.determinant()) < 1e-12) fail(ErrorCode::Inversion, "readout matrix is singular");
  BayesResult r;
  r.probabilities = m.partialPivLu().solve(raw);
  for (int i = 0; i < r.probabilities.size(); ++i) {
    const double c = std::clamp(r.probabilities(i), 0.0, 1.0);
    r.clipped += std::abs(c - r.probabilities(i));
    r.probabilities(i) = c;
  }
  if (r.clipped > 0.0) {
    const double s = r.probabilities.sum();
    if (s > 0.0) r.probabilities /= s;
  }
  return r;
}

const std::array<Matrix, 16>& tomography_prerotations() {
  static const std::array<Matrix, 16> rot = [] {
    std::array<Matrix, 4> r{Matrix(Eigen::Matrix2cd::Identity()), Matrix(rotation(1, M_PI / 2)),
                            Matrix(rotation(2, M_PI / 2)), Matrix(rotation(1, M_PI))};
    std::array<Matrix, 16> out;
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) out[4 * i + j] = kron(r[i], r[j]);
    }
    return out;
  }();
  return rot;
}

Eigen::MatrixXd simulate_populations(const Matrix& rho, const ReadoutModel* readout) {
  if (rho.rows() != 4 || rho.cols() != 4) fail(ErrorCode::Shape, "state tomography works on 4x4 states");
  Eigen::MatrixXd out(16, 4);
  const auto& rot = tomography_prerotations();
  for (int k = 0; k < 16; ++k) {
    const Matrix r = rot[k] * rho * rot[k].adjoint();
    Eigen::VectorXd p = r.diagonal().real();
    if (readout) p = readout->joint() * p;
    out.row(k) = p.transpose();
  }
  return out;
}

Matrix state_tomography(const Eigen::MatrixXd& populations, const ReadoutModel* readout) {
  if (populations.rows() != 16 || populations.cols() != 4) fail(ErrorCode::Shape, "expected 16 x 4 populations");
  const auto& rot = tomography_prerotations();
  // rho = sum_P r_P P / 4 with real Pauli coefficients r_P.
  std::array<Matrix, 16> paulis;
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) paulis[4 * a + b] = kron(pauli(a), pauli(b));
  }
  Eigen::MatrixXd design(64, 16);
  Eigen::VectorXd y(64);
  for (int k = 0; k < 16; ++k) {
    Eigen::VectorXd p = populations.row(k).transpose();
    if (readout) {
      const Eigen::Matrix4d m = readout->joint();
      if (std::abs(m.determinant()) < 1e-12) fail(ErrorCode::Inversion, "readout matrix is singular");
      p = m.partialPivLu().solve(p);
    }
    for (int o = 0; o < 4; ++o) {
      // Tr(R^dag |o><o| R P) / 4
      const Matrix meas = rot[k].row(o).adjoint() * rot[k].row(o);
      for (int q = 0; q < 16; ++q) design(4 * k + o, q) = (meas * paulis[q]).trace().real() / 4.0;
      y(4 * k + o) = p(o);
    }
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
  if (qr.rank() < 16) fail(ErrorCode::Inversion, "state tomography design is rank deficient");
  const Eigen::VectorXd coef = qr.solve(y);
  Matrix rho = Matrix::Zero(4, 4);
  for (int q = 0; q < 16; ++q) rho += coef(q) * paulis[q] / 4.0;
  rho = 0.5 * (rho + rho.adjoint()).eval();
  Eigen::SelfAdjointEigenSolver<Matrix> es(rho);
  Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0);
  if (ev.sum() <= 0.0) fail(ErrorCode::Inversion, "state estimate has no positive weight");
  ev /= ev.sum();
  return es.eigenvectors() * ev.cast<cplx>().asDiagonal() * es.eigenvectors().adjoint();
}

std::vector<Eigen::Matrix2cd> clifford_group(const Eigen::Matrix2cd& h, const Eigen::Matrix2cd& s) {
  // Canonical phase: first entry with |z| > 1e-9 made real positive.
  auto canon = [](Eigen::Matrix2cd u) {
    for (int k = 0; k < 4; ++k) {
      const cplx z = u(k % 2, k / 2);
      if (std::abs(z) > 1e-9) {
        u *= std::conj(z) / std::abs(z);
        break;
      }
    }
    return u;
  };
  auto same = [](const Eigen::Matrix2cd& a, const Eigen::Matrix2cd& b) { return (a - b).norm() < 1e-8; };
  std::vector<Eigen::Matrix2cd> group{Eigen::Matrix2cd::Identity()};
  for (std::size_t i = 0; i < group.size(); ++i) {
    for (const auto* g : {&h, &s}) {
      const Eigen::Matrix2cd c = canon(*g * group[i]);
      if (std::none_of(group.begin(), group.end(), [&](const auto& x) { return same(x, c); })) group.push_back(c);
    }
    if (group.size() > 64) fail(ErrorCode::Benchmarking, "generators do not close into a finite group");
  }
  if (group.size() != 24) fail(ErrorCode::Benchmarking, "generated group does not have 24 elements");
  return group;
}

std::vector<Eigen::Matrix2cd> clifford_group() {
  Eigen::Matrix2cd h, s;
  const double r = 1.0 / std::sqrt(2.0);
  h << r, r, r, -r;
  s << 1, 0, 0, cplx(0, 1);
  return clifford_group(h, s);
}

DecayFit fit_decay(const std::vector<int>& m, const std::vector<double>& y) {
  if (m.size() != y.size() || m.size() < 3) fail(ErrorCode::Benchmarking, "decay fit needs at least 3 points");
  auto solve = [&](double p, double* a, double* b) {
    const int n = static_cast<int>(m.size());
    Eigen::MatrixXd d(n, 2);
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) {
      d(i, 0) = std::pow(p, m[i]);
      d(i, 1) = 1.0;
      v(i) = y[i];
    }
    const Eigen::Vector2d x = d.colPivHouseholderQr().solve(v);
    if (a) *a = x(0);
    if (b) *b = x(1);
    return (d * x - v).squaredNorm();
  };
  const auto [lo_y, hi_y] = std::minmax_element(y.begin(), y.end());
  if (*hi_y - *lo_y < 1e-12) return {1.0, 0.0, *lo_y};  // flat data: no decay
  // Golden-section search on p with the linear parameters projected out.
  double lo = 0.5, hi = 1.0;
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
  double f1 = solve(x1, nullptr, nullptr), f2 = solve(x2, nullptr, nullptr);
  for (int it = 0; it < 200 && hi - lo > 1e-13; ++it) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - gr * (hi - lo);
      f1 = solve(x1, nullptr, nullptr);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + gr * (hi - lo);
      f2 = solve(x2, nullptr, nullptr);
    }
  }
  DecayFit f{0.5 * (lo + hi), 0.0, 0.0};
  solve(f.p, &f.a, &f.b);
  if (!std::isfinite(f.p) || !std::isfinite(f.a) || !std::isfinite(f.b)) {
    fail(ErrorCode::Benchmarking, "decay fit did not converge");
  }
  return f;
}

namespace {

Matrix superop_unitary(const Matrix& u) { return kron(u.conjugate(), u); }

// exp(L tau) for two qubits with a ZZ term and local relaxation/dephasing.
Matrix idle_superop(const DeviceParams& p, const RbOptions& opt) {
  const Matrix id = Matrix::Identity(4, 4);
  Matrix h = Matrix::Zero(4, 4);
  h(3, 3) = opt.zz_mhz * 1e-3;
  Matrix l = cplx(0, -kTwoPi) * (kron(id, h) - kron(h.transpose(), id));
  if (opt.decoherence) {
    Eigen::Matrix2cd sm, n;
    sm << 0, 1, 0, 0;
    n << 0, 0, 0, 1;
    for (int q = 0; q < 2; ++q) {
      const auto& mp = p.modes[q == 0 ? 0 : 2];
      const double t1 = mp.t1_us * 1e3, t2 = mp.t2_us * 1e3;
      const double g1 = 1.0 / t1, gphi = std::max(0.0, 1.0 / t2 - 0.5 / t1);
      const Matrix e2 = Matrix::Identity(2, 2);
      for (const Matrix& op : {Matrix(std::sqrt(g1) * sm), Matrix(std::sqrt(2.0 * gphi) * n)}) {
        const Matrix c = q == 0 ? kron(op, e2) : kron(e2, op);
        const Matrix cdc = c.adjoint() * c;
        l += kron(c.conjugate(), c) - 0.5 * kron(id, cdc) - 0.5 * kron(cdc.transpose(), id);
      }
    }
  }
  return (l * opt.clifford_ns).exp();
}

}  // namespace

RbResult randomized_benchmarking(const DeviceParams& p, const RbOptions& opt) {
  if (opt.lengths.size() < 3 || opt.sequences < 1) fail(ErrorCode::Benchmarking, "RB needs lengths and sequences");
  const auto group = clifford_group();
  const Matrix idle = idle_superop(p, opt);
  const Eigen::Matrix2cd e2 = Eigen::Matrix2cd::Identity();

  // Lookup for the recovery Clifford.
  auto find_inverse = [&](const Eigen::Matrix2cd& u) {
    for (std::size_t k = 0; k < group.size(); ++k) {
      const cplx t = (group[k] * u).trace();
      if (std::abs(std::abs(t) - 2.0) < 1e-8) return static_cast<int>(k);
    }
    fail(ErrorCode::Benchmarking, "no recovery Clifford found");
  };

  RbResult res;
  res.lengths = opt.lengths;
  std::array<std::vector<double>, 2> surv;
  auto run = [&](std::array<bool, 2> active, std::uint64_t stream) {
    std::array<std::vector<double>, 2> mean;
    for (std::size_t li = 0; li < opt.lengths.size(); ++li) {
      const int len = opt.lengths[li];
      std::array<double, 2> acc{0.0, 0.0};
      for (int s = 0; s < opt.sequences; ++s) {
        std::seed_seq seq{opt.seed, stream, static_cast<std::uint64_t>(li), static_cast<std::uint64_t>(s)};
        std::mt19937_64 rng(seq);
        std::uniform_int_distribution<int> pick(0, 23);
        std::array<std::vector<int>, 2> gates;
        std::array<Eigen::Matrix2cd, 2> total{e2, e2};
        for (int q = 0; q < 2; ++q) {
          if (!active[q]) continue;
          for (int k = 0; k < len; ++k) {
            const int g = pick(rng);
            gates[q].push_back(g);
            total[q] = group[g] * total[q];
          }
          gates[q].push_back(find_inverse(total[q]));
        }
        Vector rho = Vector::Zero(16);
        rho(0) = 1.0;
        for (int k = 0; k <= len; ++k) {
          const Matrix u1 = active[0] ? Matrix(group[gates[0][k]]) : Matrix(e2);
          const Matrix u2 = active[1] ? Matrix(group[gates[1][k]]) : Matrix(e2);
          rho = idle * (superop_unitary(kron(u1, u2)) * rho);
        }
        // Diagonal of the column-major vec(rho): entries 0, 5, 10, 15.
        const double p00 = rho(0).real(), p01 = rho(5).real(), p10 = rho(10).real();
        acc[0] += p00 + p01;
        acc[1] += p00 + p10;
      }
      for (int q = 0; q < 2; ++q) mean[q].push_back(acc[q] / opt.sequences);
    }
    return mean;
  };
  if (opt.mode == RbMode::Simultaneous) {
    surv = run({true, true}, 2);
  } else {
    surv[0] = run({true, false}, 0)[0];
    surv[1] = run({false, true}, 1)[1];
  }
  for (int q = 0; q < 2; ++q) {
    const DecayFit f = fit_decay(opt.lengths, surv[q]);
    auto& r = res.qubits[q];
    r.p = f.p;
    r.amplitude = f.a;
    r.offset = f.b;
    r.fidelity = 1.0 - (1.0 - f.p) / 2.0;
    r.survival = surv[q];
  }
  return res;
}

std::string RbResult::to_csv() const {
  std::ostringstream os;
  os << std::setprecision(12) << "length,survival_q1,survival_q2\n";
  for (std::size_t i = 0; i < lengths.size(); ++i) {
    os << lengths[i] << "," << qubits[0].survival[i] << "," << qubits[1].survival[i] << "\n";
  }
  return os.str();
}

}  // namespace tcq
