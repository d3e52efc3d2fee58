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

#include "tcq/gates.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "tcq/opt.hpp"

namespace tcq {

namespace {

const std::array<Labels, 4> kComp = IdleFrame::computational_labels();

double eta_ghz(const DeviceParams& p, int mode) { return p.modes[mode].eta_mhz * 1e-3; }

int comp_index(const ModeLayout& layout, int k) { return layout.index(kComp[k]); }

// Natural cubic spline through (x_i, y_i) evaluated at x.
class NaturalSpline {
 public:
  NaturalSpline(std::vector<double> x, std::vector<double> y) : x_(std::move(x)), y_(std::move(y)), m_(x_.size()) {
    const int n = static_cast<int>(x_.size());
    if (n < 3) return;
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
    Eigen::VectorXd r = Eigen::VectorXd::Zero(n);
    a(0, 0) = a(n - 1, n - 1) = 1.0;
    for (int i = 1; i < n - 1; ++i) {
      const double h0 = x_[i] - x_[i - 1], h1 = x_[i + 1] - x_[i];
      a(i, i - 1) = h0;
      a(i, i) = 2.0 * (h0 + h1);
      a(i, i + 1) = h1;
      r(i) = 6.0 * ((y_[i + 1] - y_[i]) / h1 - (y_[i] - y_[i - 1]) / h0);
    }
    const Eigen::VectorXd m = a.partialPivLu().solve(r);
    for (int i = 0; i < n; ++i) m_[i] = m(i);
  }

  double operator()(double x) const {
    const int n = static_cast<int>(x_.size());
    if (x <= x_.front()) return y_.front();
    if (x >= x_.back()) return y_.back();
    int i = static_cast<int>(std::upper_bound(x_.begin(), x_.end(), x) - x_.begin()) - 1;
    i = std::clamp(i, 0, n - 2);
    const double h = x_[i + 1] - x_[i];
    const double a = (x_[i + 1] - x) / h, b = (x - x_[i]) / h;
    return a * y_[i] + b * y_[i + 1] + ((a * a * a - a) * m_[i] + (b * b * b - b) * m_[i + 1]) * h * h / 6.0;
  }

 private:
  std::vector<double> x_, y_, m_;
};

// Root of a continuous function on [lo, hi] given opposite signs at the ends.
template <class F>
double bisect(F f, double lo, double hi, double flo, double tol, int max_iter = 100) {
  for (int it = 0; it < max_iter && hi - lo > tol; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if ((fm < 0) == (flo < 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

ChannelWaveform samples_of(Channel ch, double dt, const std::vector<double>& v) {
  ChannelWaveform w{ch, dt, std::vector<cplx>(v.size())};
  for (std::size_t k = 0; k < v.size(); ++k) w.samples[k] = v[k];
  return w;
}

}  // namespace

double wrap_phase(double x) {
  double r = std::remainder(x, kTwoPi);
  if (r <= -M_PI) r += kTwoPi;
  return r;
}

FrequencyConfig idle_point(const DeviceParams& p, const ModeLayout& layout) {
  return {p.modes[0].omega_max_ghz, idle_coupler_frequency(p, layout), p.modes[2].omega_max_ghz};
}

AvoidedCrossingFrame avoided_crossing(const DeviceParams& p, const FrequencyConfig& f, const ModeLayout& layout) {
  if (layout.dim(Mode::Q1) < 3) fail(ErrorCode::InvalidDimension, "the |200> level needs three Q1 levels");
  const PairBlock b = effective_pair(HamiltonianTerms(p, layout).at(f), layout.index({1, 0, 1}),
                                     layout.index({2, 0, 0}));
  return {std::abs(b.heff(0, 1)) * 1e3, 0.5 * (b.heff(0, 0) - b.heff(1, 1)) * 1e3};
}

std::string GateResult::to_json() const {
  nlohmann::json j;
  j["name"] = name;
  j["schedule"] = {{"dt_ns", schedule.dt()},
                   {"samples", schedule.samples()},
                   {"duration_ns", schedule.duration()},
                   {"hash", schedule.hash()}};
  j["single_qubit_phases"] = {{"phi01", single_qubit_phases[0]}, {"phi10", single_qubit_phases[1]}};
  j["conditional_phase"] = conditional_phase;
  j["leakage"] = leakage;
  j["unitary_fidelity"] = unitary_fidelity ? nlohmann::json(*unitary_fidelity) : nlohmann::json(nullptr);
  j["fidelity"] = process_fidelity ? nlohmann::json(*process_fidelity) : j["unitary_fidelity"];
  j["process_fidelity"] = process_fidelity ? nlohmann::json(*process_fidelity) : nlohmann::json(nullptr);
  j["z_angles"] = z_angles;
  std::vector<std::vector<double>> re(4, std::vector<double>(4)), im(4, std::vector<double>(4));
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) {
      re[r][c] = unitary(r, c).real();
      im[r][c] = unitary(r, c).imag();
    }
  }
  j["unitary_real"] = re;
  j["unitary_imag"] = im;
  return j.dump(2);
}

BlockEvolution computational_block(const PulseSchedule& s, const DeviceParams& p, const ModeLayout& layout,
                                   const EvolveOptions& opt) {
  const double frame = opt.frame_ghz.value_or(default_frame(s.idle()));
  const IdleFrame fr(p, layout, s.idle(), frame);
  EvolveOptions o = opt;
  o.frame_ghz = frame;
  const Matrix out = Propagator(p, layout).run_pure(s, fr.computational_states(), o);
  const Matrix amp = fr.to_interaction(out, s.duration());
  BlockEvolution b;
  b.block.resize(4, 4);
  for (int r = 0; r < 4; ++r) b.block.row(r) = amp.row(comp_index(layout, r));
  b.leakage = std::clamp(1.0 - b.block.colwise().squaredNorm().mean(), 0.0, 1.0);
  return b;
}

Matrix local_z(double a, double b) {
  Vector d(4);
  d << 1.0, std::polar(1.0, b), std::polar(1.0, a), std::polar(1.0, a + b);
  return d.asDiagonal();
}

Matrix virtual_z(const Matrix& u, double phi01, double phi10) { return local_z(-phi10, -phi01) * u; }

Matrix virtual_z(const GateResult& r) {
  return virtual_z(r.unitary, r.single_qubit_phases[0], r.single_qubit_phases[1]);
}

Matrix cz_target() {
  Matrix u = Matrix::Identity(4, 4);
  u(3, 3) = -1.0;
  return u;
}

double unitary_fidelity(const Matrix& u, const Matrix& target) {
  return std::norm((target.adjoint() * u).trace()) / 16.0;
}

GateResult analyze_block(const Matrix& u, double leakage) {
  if (u.rows() != 4 || u.cols() != 4) fail(ErrorCode::Shape, "expected a 4x4 computational block");
  GateResult g;
  g.unitary = u;
  g.leakage = leakage;
  const double p0 = std::arg(u(0, 0));
  const double p01 = wrap_phase(std::arg(u(1, 1)) - p0);
  const double p10 = wrap_phase(std::arg(u(2, 2)) - p0);
  const double p11 = std::arg(u(3, 3)) - p0;
  g.single_qubit_phases = {p01, p10};
  g.conditional_phase = wrap_phase(p11 - p01 - p10);
  g.z_angles = {0.0, 0.0, -p10, -p01};
  g.unitary_fidelity = unitary_fidelity(virtual_z(u, p01, p10), cz_target());
  return g;
}

CalibratedPhases calibrate_phases(const PulseSchedule& s, const DeviceParams& p, const ModeLayout& layout,
                                  const EvolveOptions& opt) {
  CalibratedPhases c;
  const RamseyResult t2c0 = ramsey_phase(s, p, layout, 2, 0, opt);
  const RamseyResult t2c1 = ramsey_phase(s, p, layout, 2, 1, opt);
  const RamseyResult t1c0 = ramsey_phase(s, p, layout, 1, 0, opt);
  c.phi01 = wrap_phase(t2c0.phase);
  c.phi10 = wrap_phase(t1c0.phase);
  c.phi11 = wrap_phase(c.phi10 + t2c1.phase);
  c.conditional = wrap_phase(t2c1.phase - t2c0.phase);
  return c;
}

CalibratedPhases calibrate_phases(const Matrix& u) {
  if (u.rows() != 4 || u.cols() != 4) fail(ErrorCode::Shape, "expected a 4x4 unitary");
  auto ramsey = [&](int i0, int i1) {
    Vector psi = Vector::Zero(4);
    psi(i0) = psi(i1) = 1.0 / std::sqrt(2.0);
    const Vector out = u * psi;
    if (2.0 * std::abs(out(i0)) * std::abs(out(i1)) < 0.1) {
      fail(ErrorCode::LowContrast, "Ramsey fringe contrast below 0.1");
    }
    return std::arg(out(i1) * std::conj(out(i0)));
  };
  CalibratedPhases c;
  const double a = ramsey(0, 1), b = ramsey(2, 3), d = ramsey(0, 2);
  c.phi01 = wrap_phase(a);
  c.phi10 = wrap_phase(d);
  c.phi11 = wrap_phase(d + b);
  c.conditional = wrap_phase(b - a);
  return c;
}

TwoQubitChannel gate_channel(const PulseSchedule& s, const DeviceParams& p, const ModeLayout& layout,
                             const CollapseSet& collapse, const std::array<double, 4>& z, const EvolveOptions& opt) {
  const double frame = opt.frame_ghz.value_or(default_frame(s.idle()));
  const IdleFrame fr(p, layout, s.idle(), frame);
  const Matrix comp = fr.computational_states();
  std::vector<Matrix> units;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) units.push_back(comp.col(i) * comp.col(j).adjoint());
  }
  EvolveOptions o = opt;
  o.frame_ghz = frame;
  const auto outs = Propagator(p, layout).run_density(s, units, collapse, o);
  std::vector<Matrix> reduced;
  for (const auto& r : outs) reduced.push_back(fr.reduce_to_qubits(fr.density_to_interaction(r, s.duration())));
  const Matrix pre = local_z(z[0], z[1]), post = local_z(z[2], z[3]);
  return [reduced, pre, post](const Matrix& rho) {
    const Matrix r = pre * rho * pre.adjoint();
    Matrix out = Matrix::Zero(4, 4);
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) out += r(i, j) * reduced[4 * i + j];
    }
    return Matrix(post * out * post.adjoint());
  };
}

double qpt_fidelity(const PulseSchedule& s, const DeviceParams& p, const ModeLayout& layout,
                    const CollapseSet& collapse, const std::array<double, 4>& z_angles, const Matrix& target,
                    const EvolveOptions& opt) {
  const auto ch = gate_channel(s, p, layout, collapse, z_angles, opt);
  return process_fidelity(process_tomography(ch), chi_from_unitary(target));
}

// ---------------------------------------------------------------- iSWAP

Matrix iswap_target(IswapKind kind) {
  Matrix u = Matrix::Identity(4, 4);
  const double a = kind == IswapKind::Full ? M_PI / 2 : M_PI / 4;
  u(1, 1) = u(2, 2) = std::cos(a);
  u(1, 2) = u(2, 1) = cplx(0, std::sin(a));
  return u;
}

double iswap_hold_ns(double coupling_mhz, IswapKind kind) {
  if (coupling_mhz == 0.0) fail(ErrorCode::Infeasible, "zero exchange cannot swap");
  const double t = 1.0 / (4.0 * std::abs(coupling_mhz) * 1e-3);
  return kind == IswapKind::Full ? t : 0.5 * t;
}

namespace {

PulseSchedule iswap_with_hold(const FrequencyConfig& idle, double q_on, double c_on, double ramp, double hold,
                              double dt) {
  PulseSchedule s(dt, idle);
  s.set(cosine_flat_top(Channel::FreqQ1, idle.q1, q_on, ramp, hold, dt));
  s.set(cosine_flat_top(Channel::FreqC, idle.c, c_on, ramp, hold, dt));
  return s;
}

double coupler_for_exchange(const DeviceParams& p, const ModeLayout& layout, double q, double target_mhz) {
  const double hi = find_coupler_off(p, q, q, OffCriterion::SwapExact, layout);
  const double lo = q + 0.2;
  auto f = [&](double c) { return exact_swap_coupling_mhz(p, {q, c, q}, layout) - target_mhz; };
  const double flo = f(lo);
  const double fhi = f(hi - 1e-6);
  if ((flo < 0) == (fhi < 0)) fail(ErrorCode::Infeasible, "target exchange is not reachable with the coupler");
  return bisect(f, lo, hi - 1e-6, flo, 1e-9);
}

}  // namespace

PulseSchedule iswap_schedule(const DeviceParams& p, const ModeLayout& layout, IswapKind kind, const IswapOptions& o) {
  const FrequencyConfig idle = idle_point(p, layout);
  const double q = idle.q2;
  const double c_on = coupler_for_exchange(p, layout, q, o.coupling_mhz);
  const double t0 = iswap_hold_ns(o.coupling_mhz, kind);
  const int i10 = 2, i01 = 1;
  auto transfer = [&](double hold) {
    const auto b = computational_block(iswap_with_hold(idle, q, c_on, o.ramp_ns, hold, o.dt), p, layout);
    return std::norm(b.block(i01, i10));
  };
  // The ramps also swap, so the hold is shortened until the transfer hits its target.
  const double goal = kind == IswapKind::Full ? 1.0 : 0.5;
  auto miss = [&](double h) { return transfer(h) - goal; };
  double lo = 0.0, hi = t0;
  double hold = t0;
  if (kind == IswapKind::Full) {
    // Golden-section search for the maximum over [0, 1.2 t0].
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    hi = 1.2 * t0;
    double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
    double f1 = transfer(x1), f2 = transfer(x2);
    while (hi - lo > o.dt) {
      if (f1 > f2) {
        hi = x2;
        x2 = x1;
        f2 = f1;
        x1 = hi - gr * (hi - lo);
        f1 = transfer(x1);
      } else {
        lo = x1;
        x1 = x2;
        f1 = f2;
        x2 = lo + gr * (hi - lo);
        f2 = transfer(x2);
      }
    }
    hold = 0.5 * (lo + hi);
  } else {
    const double flo = miss(0.0);
    const double fhi = miss(t0);
    if ((flo < 0) != (fhi < 0)) hold = bisect(miss, 0.0, t0, flo, 0.5 * o.dt);
  }
  return iswap_with_hold(idle, q, c_on, o.ramp_ns, hold, o.dt);
}

GateResult iswap_gate(const DeviceParams& p, const ModeLayout& layout, IswapKind kind, const IswapOptions& o,
                      const CollapseSet* collapse) {
  const PulseSchedule s = iswap_schedule(p, layout, kind, o);
  const auto b = computational_block(s, p, layout);
  const Matrix target = iswap_target(kind);
  auto fid = [&](const std::vector<double>& x) {
    return unitary_fidelity(local_z(x[2], x[3]) * b.block * local_z(x[0], x[1]), target);
  };
  // Coarse grid on the post rotations, then all four angles by Nelder-Mead.
  std::vector<double> best{0, 0, 0, 0};
  double fbest = fid(best);
  for (int i = 0; i < 12; ++i) {
    for (int j = 0; j < 12; ++j) {
      std::vector<double> x{0, 0, kTwoPi * i / 12 - M_PI, kTwoPi * j / 12 - M_PI};
      const double v = fid(x);
      if (v > fbest) {
        fbest = v;
        best = x;
      }
    }
  }
  ObjectiveSpec spec;
  spec.names = {"pre_q1", "pre_q2", "post_q1", "post_q2"};
  spec.lower.assign(4, -2.0 * kTwoPi);
  spec.upper.assign(4, 2.0 * kTwoPi);
  spec.step.assign(4, 0.1);
  spec.max_evaluations = 2000;
  const auto r = nelder_mead([&](const std::vector<double>& x) { return 1.0 - fid(x); }, best, spec);

  GateResult g;
  g.name = kind == IswapKind::Full ? "iswap" : "sqrt-iswap";
  g.schedule = s;
  g.unitary = b.block;
  g.leakage = b.leakage;
  g.z_angles = {r.x[0], r.x[1], r.x[2], r.x[3]};
  g.unitary_fidelity = 1.0 - r.value;
  const double p0 = std::arg(b.block(0, 0));
  g.single_qubit_phases = {wrap_phase(std::arg(b.block(1, 2)) - p0), wrap_phase(std::arg(b.block(2, 1)) - p0)};
  g.conditional_phase = wrap_phase(std::arg(b.block(3, 3)) - p0);
  if (collapse) g.process_fidelity = qpt_fidelity(s, p, layout, *collapse, g.z_angles, target);
  return g;
}

// ---------------------------------------------------------------- rectangular CZ

RectCzParams RectCzParams::defaults(CouplingSign sign) {
  RectCzParams r;
  if (sign == CouplingSign::Positive) {
    r.coupler_ghz = 5.9;
    r.hold_ns = 222.0;
    r.detune_ghz = 0.0;
  }
  return r;
}

PulseSchedule cz_rectangular_schedule(const DeviceParams& p, const ModeLayout& layout, const RectCzParams& r) {
  const FrequencyConfig idle = idle_point(p, layout);
  const int nh = static_cast<int>(std::lround(r.hold_ns / r.dt));
  if (nh < 1) fail(ErrorCode::InvalidPulse, "hold shorter than one sample");
  const double q2_on = idle.q1 + eta_ghz(p, 0) + r.detune_ghz;
  if (q2_on > p.modes[2].omega_max_ghz || q2_on <= 0.0) fail(ErrorCode::Infeasible, "|11>-|20> resonance unreachable");
  // Sample 0 is idle; the last on-sample is followed by the implicit idle end point.
  std::vector<double> q2(nh + 1, q2_on), c(nh + 1, r.coupler_ghz);
  q2[0] = idle.q2;
  c[0] = idle.c;
  PulseSchedule s(r.dt, idle);
  s.set(samples_of(Channel::FreqQ2, r.dt, q2));
  s.set(samples_of(Channel::FreqC, r.dt, c));
  s.check_bounds(p);
  return s;
}

namespace {

// Q2 offset from omega1 + eta1 that puts the dressed |101> and |200> on resonance.
double resonant_detune(const DeviceParams& p, const ModeLayout& layout, const FrequencyConfig& idle, double coupler) {
  const double base = idle.q1 + eta_ghz(p, 0);
  auto hz = [&](double d) { return avoided_crossing(p, {idle.q1, coupler, base + d}, layout).hz_mhz; };
  double lo = -0.03, hi = 0.03;
  const double flo = hz(lo), fhi = hz(hi);
  if ((flo < 0) == (fhi < 0)) fail(ErrorCode::Infeasible, "no |11>-|20> resonance near the bare crossing");
  return bisect(hz, lo, hi, flo, 1e-9);
}

}  // namespace

GateResult cz_rectangular(const DeviceParams& p, const ModeLayout& layout, CouplingSign sign,
                          std::optional<RectCzParams> given, const CollapseSet* collapse) {
  RectCzParams r = given.value_or(RectCzParams::defaults(sign));
  auto run = [&](const RectCzParams& x) {
    const auto s = cz_rectangular_schedule(p, layout, x);
    const auto b = computational_block(s, p, layout);
    GateResult g = analyze_block(b.block, b.leakage);
    g.schedule = s;
    return g;
  };
  if (sign == CouplingSign::Positive) {
    // Fixed hold; the coupler level sets the exchange and is tuned for a pi conditional phase.
    const FrequencyConfig idle = idle_point(p, layout);
    const double q2_on = idle.q1 + eta_ghz(p, 0);
    const double off = find_coupler_off(p, idle.q1, q2_on, OffCriterion::SwapExact, layout);
    auto miss = [&](double c) {
      RectCzParams x = r;
      x.coupler_ghz = c;
      x.detune_ghz = resonant_detune(p, layout, idle, c);
      return wrap_phase(run(x).conditional_phase - M_PI);
    };
    const double top = p.modes[1].omega_max_ghz;
    double prev_c = top, prev = miss(top);
    bool found = false;
    for (double c = top - 0.01; c > off + 0.005; c -= 0.01) {
      const double v = miss(c);
      if ((v < 0) != (prev < 0) && std::abs(v - prev) < M_PI) {
        r.coupler_ghz = bisect(miss, c, prev_c, v, 1e-7);
        found = true;
        break;
      }
      prev = v;
      prev_c = c;
    }
    if (!found) fail(ErrorCode::Calibration, "no coupler level gives a pi conditional phase");
    r.detune_ghz = resonant_detune(p, layout, idle, r.coupler_ghz);
  }
  GateResult g = run(r);
  g.name = sign == CouplingSign::Positive ? "cz-rect-positive" : "cz-rect-negative";
  if (collapse) g.process_fidelity = qpt_fidelity(g.schedule, p, layout, *collapse, g.z_angles, cz_target());
  return g;
}

// ---------------------------------------------------------------- DDR CZ

namespace {

PulseSchedule ddr_build(const DeviceParams& p, const ModeLayout& layout, const DdrCzParams& d, bool with_dip) {
  if (d.ramp_ns < 2.0 * d.dt) fail(ErrorCode::TooFastRamp, "qubit ramp shorter than two samples");
  if (with_dip && (d.dip_ns < 2.0 * d.dt || d.hold_ns < 0.0)) fail(ErrorCode::InvalidPulse, "invalid dip timing");
  if (!d.knots.empty() && d.knots.size() != 5) fail(ErrorCode::InvalidPulse, "the DDR correction uses 5 knots");
  const FrequencyConfig idle = idle_point(p, layout);
  const double tr = d.ramp_ns;
  const double tc = with_dip ? d.dip_ns : 0.0;
  const double th = with_dip ? d.hold_ns : 0.0;
  const int n = static_cast<int>(std::lround((2.0 * tr + 2.0 * tc + th) / d.dt));
  const double T = n * d.dt;
  const double th_eff = T - 2.0 * tr - 2.0 * tc;
  const double q2_on = idle.q1 + eta_ghz(p, 0) + d.detune_ghz;

  std::vector<double> s(n), w2(n), corr;
  for (int k = 0; k < n; ++k) {
    const double t = k * d.dt;
    s[k] = t < tr ? cosine_ramp(t / tr) : (t > T - tr ? cosine_ramp((T - t) / tr) : 1.0);
    w2[k] = idle.q2 + (q2_on - idle.q2) * s[k];
  }
  if (!d.knots.empty()) {
    std::vector<double> xs{0.0}, ys{0.0};
    for (int i = 0; i < 5; ++i) {
      xs.push_back((i + 1) / 6.0);
      ys.push_back(d.knots[i] * 1e-3);
    }
    xs.push_back(1.0);
    ys.push_back(0.0);
    const NaturalSpline sp(xs, ys);
    corr.resize(n);
    for (int k = 0; k < n; ++k) {
      const double t = k * d.dt;
      corr[k] = t < tr ? sp(t / tr) : (t > T - tr ? sp((T - t) / tr) : 0.0);
    }
  }
  const ChannelWaveform track = ddr_coupler_track(p, idle.q1, w2, d.dt, d.manifold, corr);
  const double a = d.manifold == DdrManifold::SingleExcitation ? idle.q1 : idle.q1 + eta_ghz(p, 0);
  const double c0 = ddr_root(p, a, idle.q2);
  std::vector<double> c(n);
  for (int k = 0; k < n; ++k) {
    const double t = k * d.dt;
    c[k] = track.real(k) + (idle.c - c0) * (1.0 - s[k]);
    if (with_dip && t >= tr && t <= T - tr) {
      const double tt = t - tr;
      const double u = tt < tc ? cosine_ramp(tt / tc) : (tt > tc + th_eff ? cosine_ramp((T - tr - t) / tc) : 1.0);
      c[k] += (d.coupler_on_ghz - c[k]) * u;
    }
  }
  c[0] = idle.c;
  w2[0] = idle.q2;
  PulseSchedule sch(d.dt, idle);
  sch.set(samples_of(Channel::FreqQ2, d.dt, w2));
  sch.set(samples_of(Channel::FreqC, d.dt, c));
  sch.check_bounds(p);
  return sch;
}

}  // namespace

PulseSchedule ddr_cz_schedule(const DeviceParams& p, const ModeLayout& layout, const DdrCzParams& d) {
  return ddr_build(p, layout, d, true);
}

PulseSchedule ddr_ramp_schedule(const DeviceParams& p, const ModeLayout& layout, const DdrCzParams& d) {
  return ddr_build(p, layout, d, false);
}

GateResult cz_ddr(const DeviceParams& p, const ModeLayout& layout, DdrCzParams d, bool solve_hold,
                  const CollapseSet* collapse) {
  auto run = [&](const DdrCzParams& x) {
    const auto s = ddr_cz_schedule(p, layout, x);
    const auto b = computational_block(s, p, layout);
    GateResult g = analyze_block(b.block, b.leakage);
    g.schedule = s;
    return g;
  };
  if (solve_hold) {
    // Integer hold samples; scan outward for a sign change of wrap(cond - pi), then bisect.
    auto miss = [&](int nh) {
      DdrCzParams x = d;
      x.hold_ns = nh * d.dt;
      return wrap_phase(run(x).conditional_phase - M_PI);
    };
    const int n0 = static_cast<int>(std::lround(d.hold_ns / d.dt));
    const int step = std::max(1, static_cast<int>(std::lround(2.0 / d.dt)));
    int lo = -1, hi = -1;
    double flo = 0.0;
    const double f0 = miss(n0);
    for (int k = 1; k <= 40 && lo < 0; ++k) {
      for (int sgn : {1, -1}) {
        const int a = n0 + sgn * (k - 1) * step, b = n0 + sgn * k * step;
        if (b < 0) continue;
        const double fa = k == 1 ? f0 : miss(a), fb = miss(b);
        if ((fa < 0) != (fb < 0) && std::abs(fa - fb) < M_PI) {
          lo = std::min(a, b);
          hi = std::max(a, b);
          flo = lo == a ? fa : fb;
          break;
        }
      }
    }
    if (lo < 0) fail(ErrorCode::Calibration, "hold-time search did not bracket a pi conditional phase");
    while (hi - lo > 1) {
      const int mid = (lo + hi) / 2;
      const double fm = miss(mid);
      if ((fm < 0) == (flo < 0)) {
        lo = mid;
        flo = fm;
      } else {
        hi = mid;
      }
    }
    const double fhi = miss(hi);
    d.hold_ns = (std::abs(flo) <= std::abs(fhi) ? lo : hi) * d.dt;
  }
  GateResult g = run(d);
  g.name = "cz-ddr";
  if (collapse) g.process_fidelity = qpt_fidelity(g.schedule, p, layout, *collapse, g.z_angles, cz_target());
  return g;
}

// ---------------------------------------------------------------- geometric phase

GeometricSplit geometric_fraction(const PulseSchedule& s, const DeviceParams& p, const ModeLayout& layout,
                                  const EvolveOptions& opt) {
  const double frame = opt.frame_ghz.value_or(default_frame(s.idle()));
  const IdleFrame fr(p, layout, s.idle(), frame);
  const HamiltonianTerms terms(p, layout);
  const Eigen::VectorXd ntot = terms.total_number();
  EvolveOptions o = opt;
  o.frame_ghz = frame;
  std::vector<Eigen::Vector4d> energy(s.samples() + 1);
  const Matrix out = Propagator(p, layout).run_pure(s, fr.computational_states(), o, [&](int k, const Matrix& st) {
    Eigen::MatrixXd h = terms.at(s.sample(k).freq);
    h.diagonal() -= frame * ntot;
    for (int j = 0; j < 4; ++j) energy[k](j) = st.col(j).dot(h * st.col(j)).real() / st.col(j).squaredNorm();
  });
  const Matrix amp = fr.to_interaction(out, s.duration());
  std::array<double, 4> dyn{};
  for (int j = 0; j < 4; ++j) {
    const int ij = comp_index(layout, j);
    if (std::norm(amp(ij, j)) < 0.9) fail(ErrorCode::Nonadiabatic, "state does not return to its computational label");
    const double e_ref = fr.frame_energies()(ij);
    double integral = 0.0;
    for (int k = 0; k < s.samples(); ++k) integral += 0.5 * (energy[k](j) + energy[k + 1](j)) - e_ref;
    dyn[j] = -kTwoPi * integral * s.dt();
  }
  GeometricSplit g;
  const double p0 = std::arg(amp(comp_index(layout, 0), 0));
  auto ph = [&](int j) { return std::arg(amp(comp_index(layout, j), j)) - p0; };
  g.dynamical = wrap_phase(dyn[3] - dyn[1] - dyn[2] + dyn[0]);
  g.geometric = wrap_phase(ph(3) - ph(1) - ph(2) - g.dynamical);
  // Representative of the conditional phase consistent with the split, so that
  // a phase near -pi and one near +pi give the same fraction.
  g.conditional = g.geometric + g.dynamical;
  g.fraction = g.conditional != 0.0 ? g.geometric / g.conditional : 0.0;
  return g;
}

// ---------------------------------------------------------------- leakage scan

LeakageScan leakage_scan(const DeviceParams& p, const ModeLayout& layout, const std::vector<double>& coupler_ghz,
                         double hold_ns, double dt, int jobs, double tolerance) {
  if (coupler_ghz.empty()) fail(ErrorCode::InvalidPulse, "empty coupler grid");
  const FrequencyConfig idle = idle_point(p, layout);
  const double q = idle.q2;
  const int nh = static_cast<int>(std::lround(hold_ns / dt));
  if (nh < 1) fail(ErrorCode::InvalidPulse, "hold shorter than one sample");
  const IdleFrame fr(p, layout, idle, default_frame(idle));
  const Vector start = fr.dressed_state({1, 0, 1});

  LeakageScan out;
  out.coupler_ghz = coupler_ghz;
  out.retained.assign(coupler_ghz.size(), 0.0);
  out.deviation.assign(coupler_ghz.size(), 0.0);
  auto point = [&](std::size_t i) {
    const double c = coupler_ghz[i];
    if (c <= 0.0 || c > p.modes[1].omega_max_ghz + 1e-12) {
      fail(ErrorCode::InvalidPulse, "coupler grid outside the tunable range");
    }
    std::vector<double> q1(nh + 1, q), cc(nh + 1, c);
    q1[0] = idle.q1;
    cc[0] = idle.c;
    PulseSchedule s(dt, idle);
    s.set(samples_of(Channel::FreqQ1, dt, q1));
    s.set(samples_of(Channel::FreqC, dt, cc));
    double acc = 0.0;
    int count = 0;
    const Matrix fin = Propagator(p, layout).run_pure(s, start, {}, [&](int k, const Matrix& st) {
      if (k >= 1 && k <= nh) {
        acc += std::norm(start.dot(st.col(0)));
        ++count;
      }
    });
    out.deviation[i] = 1.0 - acc / count;
    out.retained[i] = std::norm(start.dot(fin.col(0)));
  };
  jobs = std::max(1, jobs);
  std::vector<std::exception_ptr> errors(jobs);
  std::vector<std::thread> pool;
  for (int w = 0; w < jobs; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < coupler_ghz.size(); i += jobs) point(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  for (std::size_t i = 0; i < coupler_ghz.size(); ++i) {
    if (out.deviation[i] > tolerance && (!out.threshold_ghz || coupler_ghz[i] > *out.threshold_ghz)) {
      out.threshold_ghz = coupler_ghz[i];
    }
  }
  return out;
}

std::string LeakageScan::to_csv() const {
  std::ostringstream os;
  os << std::setprecision(12) << "coupler_ghz,retained_101,deviation\n";
  for (std::size_t i = 0; i < coupler_ghz.size(); ++i) {
    os << coupler_ghz[i] << "," << retained[i] << "," << deviation[i] << "\n";
  }
  return os.str();
}

// ---------------------------------------------------------------- direct coupling

DeviceParams direct_coupling_device(const DeviceParams& p, double coupling_mhz) {
  DeviceParams d = p;
  d.g1c_mhz = 0.0;
  d.g2c_mhz = 0.0;
  d.g12_mhz = coupling_mhz;
  d.scale_coupling_with_flux = false;
  return d;
}

GateResult fast_adiabatic_gate(const DeviceParams& direct, const ModeLayout& layout,
                               const std::vector<double>& coefficients, const FastAdiabaticSpec& spec) {
  const FrequencyConfig idle{spec.q1_ghz, direct.modes[1].omega_max_ghz, spec.q2_idle_ghz};
  PulseSchedule s(spec.dt, idle);
  s.set(fast_adiabatic(coefficients, spec));
  const auto b = computational_block(s, direct, layout);
  GateResult g = analyze_block(b.block, b.leakage);
  g.name = "cz-fast-adiabatic";
  g.schedule = s;
  return g;
}

}  // namespace tcq
