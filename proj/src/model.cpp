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

#include "tcq/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <tuple>

#include <Eigen/Eigenvalues>

namespace tcq {

namespace {

constexpr double kMhz = 1e-3;  // MHz -> GHz

Eigen::MatrixXd real_embed(const Eigen::MatrixXd& op, int mode, const ModeLayout& layout) {
  return embed(op.cast<cplx>(), mode, layout).real();
}

void check_detuning(double d, const char* what) {
  if (std::abs(d) < 1e-12) fail(ErrorCode::SingularDetuning, std::string("zero detuning in ") + what);
}

double guarded(double denom, const char* term) {
  if (std::abs(denom) < 1e-12) fail(ErrorCode::Resonance, std::string("vanishing denominator ") + term);
  return denom;
}

}  // namespace

Couplings couplings_at(const DeviceParams& p, double coupler_ghz) {
  double s = 1.0;
  if (p.scale_coupling_with_flux) {
    s = std::sqrt(std::max(0.0, coupler_ghz) / p.modes[1].omega_max_ghz);
  }
  return {p.g1c_mhz * kMhz * s, p.g2c_mhz * kMhz * s, p.g12_mhz * kMhz};
}

HamiltonianTerms::HamiltonianTerms(const DeviceParams& p, const ModeLayout& layout)
    : params_(p), layout_(layout) {
  const int n = layout.total();
  anharmonic_ = Eigen::VectorXd::Zero(n);
  for (int m = 0; m < 3; ++m) {
    const auto ops = mode_operators(layout.dim(m));
    lowering_[m] = real_embed(ops.lowering.real(), m, layout);
    number_[m] = Eigen::VectorXd(n);
    for (int i = 0; i < n; ++i) number_[m](i) = layout.labels(i)[m];
    const double eta = p.modes[m].eta_mhz * kMhz;
    anharmonic_ += (0.5 * eta) * number_[m].cwiseProduct(number_[m] - Eigen::VectorXd::Ones(n));
  }
  auto hop = [&](int a, int b) -> Eigen::MatrixXd {
    Eigen::MatrixXd x = lowering_[a].transpose() * lowering_[b];
    return x + x.transpose();
  };
  hop_1c_ = hop(0, 1);
  hop_2c_ = hop(2, 1);
  hop_12_ = hop(0, 2);
}

void HamiltonianTerms::fill(const FrequencyConfig& f, Eigen::MatrixXd& out) const {
  const Couplings g = couplings_at(params_, f.c);
  out = g.g1c * hop_1c_ + g.g2c * hop_2c_ + g.g12 * hop_12_;
  out.diagonal() += anharmonic_ + f.q1 * number_[0] + f.c * number_[1] + f.q2 * number_[2];
}

Eigen::MatrixXd HamiltonianTerms::at(const FrequencyConfig& f) const {
  Eigen::MatrixXd h;
  fill(f, h);
  return h;
}

Matrix build_hamiltonian(const DeviceParams& p, const FrequencyConfig& f, const ModeLayout& layout) {
  return HamiltonianTerms(p, layout).at(f).cast<cplx>();
}

double effective_coupling_mhz(const DeviceParams& p, const FrequencyConfig& f) {
  const auto d = DetuningSet::of(f);
  check_detuning(d.delta_1c, "delta_1c");
  check_detuning(d.delta_2c, "delta_2c");
  const Couplings g = couplings_at(p, f.c);
  return (g.g12 + 0.5 * g.g1c * g.g2c * (1.0 / d.delta_1c + 1.0 / d.delta_2c)) / kMhz;
}

std::pair<double, double> dressed_frequencies(const DeviceParams& p, const FrequencyConfig& f) {
  const auto d = DetuningSet::of(f);
  check_detuning(d.delta_1c, "delta_1c");
  check_detuning(d.delta_2c, "delta_2c");
  const Couplings g = couplings_at(p, f.c);
  return {f.q1 + g.g1c * g.g1c / d.delta_1c, f.q2 + g.g2c * g.g2c / d.delta_2c};
}

EffectiveTwoQubit effective_two_qubit(const DeviceParams& p, const FrequencyConfig& f) {
  auto [w1, w2] = dressed_frequencies(p, f);
  return {w1, w2, effective_coupling_mhz(p, f)};
}

ZzOrders zz_perturbative(const DeviceParams& p, const FrequencyConfig& f) {
  const Couplings g = couplings_at(p, f.c);
  const double e1 = p.modes[0].eta_mhz * kMhz;
  const double ec = p.modes[1].eta_mhz * kMhz;
  const double e2 = p.modes[2].eta_mhz * kMhz;
  const double d1c = f.q1 - f.c, d2c = f.q2 - f.c, d12 = f.q1 - f.q2, d21 = -d12;

  ZzOrders z;
  if (g.g12 != 0.0) {
    z.second = 2.0 * g.g12 * g.g12 * (e1 + e2) / (guarded(d12 + e1, "d12+eta1") * guarded(d12 - e2, "d12-eta2"));
  }
  const double gg = g.g1c * g.g2c;
  if (gg != 0.0) {
    guarded(d1c, "d1c");
    guarded(d2c, "d2c");
    guarded(d12, "d12");
    guarded(d21 - e1, "d21-eta1");
    guarded(d12 - e2, "d12-eta2");
    const double a2 = 2.0 / (d21 - e1) - 1.0 / d21;
    const double a1 = 2.0 / (d12 - e2) - 1.0 / d12;
    z.third = 2.0 * g.g12 * gg * (a2 / d2c + a1 / d1c);
    const double gg2 = gg * gg;
    const double s = 1.0 / d1c + 1.0 / d2c;
    z.fourth = 2.0 * gg2 / guarded(d1c + d2c - ec, "d1c+d2c-etac") * s * s +
               gg2 / (d1c * d1c) * (a1 - 1.0 / d2c) + gg2 / (d2c * d2c) * (a2 - 1.0 / d1c);
  }
  z.second /= kMhz;
  z.third /= kMhz;
  z.fourth /= kMhz;
  z.total = z.second + z.third + z.fourth;
  return z;
}

DressedBasis dressed_basis(const Eigen::MatrixXd& h) {
  const int n = static_cast<int>(h.rows());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
  if (es.info() != Eigen::Success) fail(ErrorCode::StateIdentification, "eigensolver failed");
  const Eigen::MatrixXd w = es.eigenvectors().cwiseAbs2();

  // Greedy bijective assignment, largest overlap first; ties go to the lower bare index.
  std::vector<std::tuple<double, int, int>> cand;
  cand.reserve(static_cast<std::size_t>(n) * n);
  for (int b = 0; b < n; ++b) {
    for (int e = 0; e < n; ++e) cand.emplace_back(w(b, e), b, e);
  }
  std::stable_sort(cand.begin(), cand.end(), [](const auto& x, const auto& y) {
    if (std::get<0>(x) != std::get<0>(y)) return std::get<0>(x) > std::get<0>(y);
    return std::get<1>(x) < std::get<1>(y);
  });
  std::vector<int> eig_of(n, -1);
  std::vector<char> used(n, 0);
  int assigned = 0;
  for (const auto& [ov, b, e] : cand) {
    if (eig_of[b] >= 0 || used[e]) continue;
    eig_of[b] = e;
    used[e] = 1;
    if (++assigned == n) break;
  }

  DressedBasis out;
  out.energies.resize(n);
  out.vectors.resize(n, n);
  out.overlap.resize(n);
  for (int b = 0; b < n; ++b) {
    const int e = eig_of[b];
    Eigen::VectorXd v = es.eigenvectors().col(e);
    if (v(b) < 0) v = -v;
    out.vectors.col(b) = v;
    out.energies(b) = es.eigenvalues()(e);
    out.overlap(b) = w(b, e);
  }
  return out;
}

double zz_exact_mhz(const DeviceParams& p, const FrequencyConfig& f, const ModeLayout& layout) {
  for (int m = 0; m < 3; ++m) {
    if (layout.dim(m) < 3) fail(ErrorCode::InvalidDimension, "zz_exact needs at least 3 levels per mode");
  }
  const auto db = dressed_basis(HamiltonianTerms(p, layout).at(f));
  const Labels want[4] = {{0, 0, 0}, {1, 0, 0}, {0, 0, 1}, {1, 0, 1}};
  for (const auto& l : want) {
    if (db.overlap(layout.index(l)) < 0.5) {
      fail(ErrorCode::StateIdentification, "ambiguous dressed state for |" + l.str() + ">");
    }
  }
  const double e = db.energy(want[3], layout) - db.energy(want[1], layout) - db.energy(want[2], layout) +
                   db.energy(want[0], layout);
  return e / kMhz;
}

PairBlock effective_pair(const Eigen::MatrixXd& h, int ia, int ib) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
  if (es.info() != Eigen::Success) fail(ErrorCode::StateIdentification, "eigensolver failed");
  const auto& v = es.eigenvectors();
  // The two eigenvectors with the largest weight in span{|a>, |b>}.
  std::vector<int> order(h.rows());
  std::iota(order.begin(), order.end(), 0);
  auto weight = [&](int e) { return v(ia, e) * v(ia, e) + v(ib, e) * v(ib, e); };
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return weight(a) > weight(b); });
  const int ea = order[0], eb = order[1];
  Eigen::Matrix2d c;
  c << v(ia, ea), v(ia, eb), v(ib, ea), v(ib, eb);
  // Symmetric orthonormalization of the projected bare states.
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> s(c.transpose() * c);
  if (s.eigenvalues().minCoeff() < 1e-6) fail(ErrorCode::StateIdentification, "pair block is not isolated");
  const Eigen::Matrix2d inv_sqrt =
      s.eigenvectors() * s.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() * s.eigenvectors().transpose();
  const Eigen::Matrix2d w = c * inv_sqrt;
  PairBlock out;
  out.heff = w * Eigen::Vector2d(es.eigenvalues()(ea), es.eigenvalues()(eb)).asDiagonal() * w.transpose();
  out.state_a = w(0, 0) * v.col(ea) + w(0, 1) * v.col(eb);
  out.state_b = w(1, 0) * v.col(ea) + w(1, 1) * v.col(eb);
  return out;
}

double exact_swap_coupling_mhz(const DeviceParams& p, const FrequencyConfig& f, const ModeLayout& layout) {
  const Eigen::MatrixXd h = HamiltonianTerms(p, layout).at(f);
  return effective_pair(h, layout.index({1, 0, 0}), layout.index({0, 0, 1})).heff(0, 1) / kMhz;
}

double dispersive_shift_mhz(const DeviceParams& p, const FrequencyConfig& f, int qubit) {
  if (qubit != 1 && qubit != 2) fail(ErrorCode::Index, "qubit must be 1 or 2");
  const int m = qubit == 1 ? 0 : 2;
  const Couplings g = couplings_at(p, f.c);
  const double gic = qubit == 1 ? g.g1c : g.g2c;
  const double ei = p.modes[m].eta_mhz * kMhz;
  const double ec = p.modes[1].eta_mhz * kMhz;
  const double d = f[m] - f.c;
  const double den = 2.0 * guarded(d - ec, "delta_ic - eta_c") * guarded(d + ei, "delta_ic + eta_i");
  return gic * gic * (ei + ec) / den / kMhz;
}

double find_coupler_off(const DeviceParams& p, double q1_ghz, double q2_ghz, OffCriterion criterion,
                        const ModeLayout& layout, std::optional<std::pair<double, double>> bracket) {
  double lo = std::max(q1_ghz, q2_ghz) + 0.3;
  double hi = p.modes[1].omega_max_ghz;
  if (bracket) std::tie(lo, hi) = *bracket;
  auto value = [&](double wc) {
    const FrequencyConfig f{q1_ghz, wc, q2_ghz};
    switch (criterion) {
      case OffCriterion::SwapCoupling: return effective_coupling_mhz(p, f);
      case OffCriterion::ZzExact: return zz_exact_mhz(p, f, layout);
      case OffCriterion::SwapExact: return exact_swap_coupling_mhz(p, f, layout);
    }
    return 0.0;
  };
  double flo = value(lo), fhi = value(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0) == (fhi > 0)) fail(ErrorCode::NoOffPoint, "no sign change in the coupler search bracket");
  while (hi - lo > 1e-7) {
    const double mid = 0.5 * (lo + hi);
    const double fm = value(mid);
    if (fm == 0.0) return mid;
    if ((fm > 0) == (flo > 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double idle_coupler_frequency(const DeviceParams& p, const ModeLayout& layout) {
  return find_coupler_off(p, p.modes[0].omega_max_ghz, p.modes[2].omega_max_ghz, OffCriterion::ZzExact, layout);
}

}  // namespace tcq
