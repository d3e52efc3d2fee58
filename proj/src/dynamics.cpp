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

#include "tcq/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <iomanip>
#include <sstream>
#include <thread>

#include <Eigen/Eigenvalues>

#include "json.hpp"

namespace tcq {

CollapseSet CollapseSet::from_device(const DeviceParams& p) {
  CollapseSet c;
  for (int m = 0; m < 3; ++m) {
    const double t1 = p.modes[m].t1_us * 1e3, t2 = p.modes[m].t2_us * 1e3;
    c.gamma1[m] = 1.0 / t1;
    c.gamma_phi[m] = std::max(0.0, 1.0 / t2 - 0.5 / t1);
  }
  return c;
}

bool CollapseSet::empty() const {
  for (int m = 0; m < 3; ++m) {
    if (gamma1[m] != 0.0 || gamma_phi[m] != 0.0) return false;
  }
  return true;
}

double default_frame(const FrequencyConfig& idle) { return 0.5 * (idle.q1 + idle.q2); }

std::uint64_t params_hash(const DeviceParams& p) {
  const std::string y = device_to_yaml(p);
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : y) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

struct Propagator::Sector {
  std::vector<int> keep;
  int dim = 0;
  Eigen::VectorXd ntot;
  std::array<Eigen::VectorXd, 3> n;
  std::array<Matrix, 2> lowering;  // Q1, Q2 restricted; only used with drive
  bool drive = false;
  double frame = 0.0;
};

Propagator::Propagator(const DeviceParams& p, const ModeLayout& layout)
    : params_(p), layout_(layout), terms_(p, layout) {}

Propagator::Sector Propagator::sector(const PulseSchedule& s, int max_excitation, double frame) const {
  Sector sec;
  sec.frame = frame;
  for (int q = 0; q < 2; ++q) {
    const auto* w = s.find(q == 0 ? Channel::XyQ1 : Channel::XyQ2);
    if (!w) continue;
    for (const auto& v : w->samples) {
      if (v != cplx{}) sec.drive = true;
    }
  }
  const Eigen::VectorXd ntot = terms_.total_number();
  for (int i = 0; i < layout_.total(); ++i) {
    if (sec.drive || ntot(i) <= max_excitation) sec.keep.push_back(i);
  }
  sec.dim = static_cast<int>(sec.keep.size());
  sec.ntot = ntot(sec.keep);
  for (int m = 0; m < 3; ++m) sec.n[m] = terms_.number(m)(sec.keep);
  if (sec.drive) {
    sec.lowering[0] = terms_.lowering(0).cast<cplx>();
    sec.lowering[1] = terms_.lowering(2).cast<cplx>();
  }
  return sec;
}

namespace {

struct HBuilder {
  const HamiltonianTerms& terms;
  const PulseSchedule& sched;
  Eigen::MatrixXd full;

  void build(const Propagator::Sector& sec, const ControlPoint& c, double t, Matrix& out) {
    terms.fill(c.freq, full);
    out = full(sec.keep, sec.keep).cast<cplx>();
    out.diagonal().array() -= sec.frame * sec.ntot.array();
    if (!sec.drive) return;
    for (int q = 0; q < 2; ++q) {
      if (c.xy[q] == cplx{}) continue;
      const cplx coef = 0.5 * c.xy[q] * std::polar(1.0, -kTwoPi * (sched.drive_ghz[q] - sec.frame) * t);
      out.noalias() += coef * sec.lowering[q].adjoint();
      out.noalias() += std::conj(coef) * sec.lowering[q];
    }
  }
};

ControlPoint lerp(const ControlPoint& a, const ControlPoint& b, double f) {
  ControlPoint c = a;
  for (int m = 0; m < 3; ++m) c.freq[m] += f * (b.freq[m] - a.freq[m]);
  for (int q = 0; q < 2; ++q) c.xy[q] += f * (b.xy[q] - a.xy[q]);
  return c;
}

double row_norm(const Matrix& h) { return h.cwiseAbs().rowwise().sum().maxCoeff(); }

int steps_for(double bound, double dt, const EvolveOptions& opt) {
  if (opt.substeps > 0) return opt.substeps;
  if (!(opt.max_step_phase > 0.0)) fail(ErrorCode::IntegratorFailure, "max_step_phase must be positive");
  return std::max(1, static_cast<int>(std::ceil(kTwoPi * dt * bound / opt.max_step_phase)));
}

int max_excitation_of(const Matrix& m, const Eigen::VectorXd& ntot, bool rows_only) {
  int mx = 0;
  for (int i = 0; i < m.rows(); ++i) {
    for (int j = 0; j < m.cols(); ++j) {
      if (std::abs(m(i, j)) > 1e-12) {
        mx = std::max(mx, static_cast<int>(ntot(i)));
        if (!rows_only) mx = std::max(mx, static_cast<int>(ntot(j)));
      }
    }
  }
  return mx;
}

}  // namespace

Matrix Propagator::run_pure(const PulseSchedule& s, const Matrix& columns, const EvolveOptions& opt,
                            const Observer& observer) const {
  if (columns.rows() != layout_.total()) fail(ErrorCode::Shape, "state dimension does not match the layout");
  const double frame = opt.frame_ghz.value_or(default_frame(s.idle()));
  const Sector sec = sector(s, max_excitation_of(columns, terms_.total_number(), true), frame);
  Matrix psi = columns(sec.keep, Eigen::all);
  const Eigen::VectorXd norm0 = columns.colwise().norm();

  auto emit = [&](int k) {
    if (!observer) return;
    Matrix full = Matrix::Zero(layout_.total(), psi.cols());
    full(sec.keep, Eigen::all) = psi;
    observer(k, full);
  };
  emit(0);

  HBuilder hb{terms_, s, {}};
  Matrix h0, hm, h1, k1, k2, k3, k4;
  const double dt = s.dt();
  const cplx mi(0.0, -kTwoPi);
  for (int k = 0; k < s.samples(); ++k) {
    const ControlPoint c0 = s.sample(k), c1 = s.sample(k + 1);
    const double tk = k * dt;
    hb.build(sec, c0, tk, h0);
    hb.build(sec, c1, tk + dt, h1);
    const int m = steps_for(std::max(row_norm(h0), row_norm(h1)), dt, opt);
    const double h = dt / m;
    for (int j = 0; j < m; ++j) {
      const double t = tk + j * h;
      if (j > 0) hb.build(sec, lerp(c0, c1, double(j) / m), t, h0);
      hb.build(sec, lerp(c0, c1, (j + 0.5) / m), t + 0.5 * h, hm);
      if (j + 1 < m) hb.build(sec, lerp(c0, c1, double(j + 1) / m), t + h, h1);
      else hb.build(sec, c1, tk + dt, h1);
      k1.noalias() = mi * (h0 * psi);
      k2.noalias() = mi * (hm * (psi + (0.5 * h) * k1));
      k3.noalias() = mi * (hm * (psi + (0.5 * h) * k2));
      k4.noalias() = mi * (h1 * (psi + h * k3));
      psi += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    emit(k + 1);
  }
  Matrix out = Matrix::Zero(layout_.total(), psi.cols());
  out(sec.keep, Eigen::all) = psi;
  const Eigen::VectorXd norm1 = out.colwise().norm();
  for (int j = 0; j < out.cols(); ++j) {
    if (!std::isfinite(norm1(j)) || std::abs(norm1(j) - norm0(j)) > 1e-4) {
      fail(ErrorCode::IntegratorFailure, "state norm drifted by more than 1e-4; use a smaller step");
    }
  }
  return out;
}

std::vector<Matrix> Propagator::run_density(const PulseSchedule& s, const std::vector<Matrix>& rhos,
                                            const CollapseSet& c, const EvolveOptions& opt,
                                            const DensityObserver& observer) const {
  const int nfull = layout_.total();
  int mx = 0;
  for (const auto& r : rhos) {
    if (r.rows() != nfull || r.cols() != nfull) fail(ErrorCode::Shape, "density dimension does not match the layout");
    mx = std::max(mx, max_excitation_of(r, terms_.total_number(), false));
  }
  const double frame = opt.frame_ghz.value_or(default_frame(s.idle()));
  const Sector sec = sector(s, mx, frame);
  const int d = sec.dim;

  // Dissipator pieces: anti-Hermitian diagonal, dephasing mask, relaxation jumps.
  Eigen::VectorXd loss = Eigen::VectorXd::Zero(d);
  Eigen::MatrixXd mask = Eigen::MatrixXd::Zero(d, d);
  struct Jump {
    int from, to;
    double amp;
  };
  std::array<std::vector<Jump>, 3> jumps;
  std::vector<int> pos(nfull, -1);
  for (int i = 0; i < d; ++i) pos[sec.keep[i]] = i;
  for (int m = 0; m < 3; ++m) {
    const auto& n = sec.n[m];
    loss += c.gamma1[m] * n + 2.0 * c.gamma_phi[m] * n.cwiseProduct(n);
    mask += 2.0 * c.gamma_phi[m] * n * n.transpose();
    if (c.gamma1[m] == 0.0) continue;
    for (int i = 0; i < d; ++i) {
      if (n(i) < 1) continue;
      Labels l = layout_.labels(sec.keep[i]);
      if (m == 0) --l.q1;
      else if (m == 1) --l.c;
      else --l.q2;
      const int to = pos[layout_.index(l)];
      if (to < 0) fail(ErrorCode::IntegratorFailure, "relaxation leaves the simulated sector");
      jumps[m].push_back({i, to, std::sqrt(c.gamma1[m] * n(i))});
    }
  }

  std::vector<Matrix> rho;
  rho.reserve(rhos.size());
  for (const auto& r : rhos) rho.push_back(r(sec.keep, sec.keep));
  std::vector<cplx> tr0;
  for (const auto& r : rhos) tr0.push_back(r.trace());

  auto emit = [&](int k) {
    if (!observer) return;
    std::vector<Matrix> full;
    for (const auto& r : rho) {
      Matrix f = Matrix::Zero(nfull, nfull);
      f(sec.keep, sec.keep) = r;
      full.push_back(std::move(f));
    }
    observer(k, full);
  };
  emit(0);

  Matrix heff, tmp;
  auto rhs = [&](const Matrix& hgen, const Matrix& r, Matrix& out) {
    // hgen = -i (2 pi H' - i loss/2)
    tmp.noalias() = hgen * r;
    out = tmp;
    out.noalias() += r * hgen.adjoint();
    out.array() += mask.array().cast<cplx>() * r.array();
    for (int m = 0; m < 3; ++m) {
      for (const auto& a : jumps[m]) {
        for (const auto& b : jumps[m]) out(a.to, b.to) += a.amp * b.amp * r(a.from, b.from);
      }
    }
  };
  auto generator = [&](const Matrix& h) {
    Matrix g = cplx(0, -kTwoPi) * h;
    g.diagonal().array() -= 0.5 * loss.array();
    return g;
  };

  HBuilder hb{terms_, s, {}};
  Matrix h0, hm, h1, g0, gm, g1, k1, k2, k3, k4, y;
  const double dt = s.dt();
  for (int k = 0; k < s.samples(); ++k) {
    const ControlPoint c0 = s.sample(k), c1 = s.sample(k + 1);
    const double tk = k * dt;
    hb.build(sec, c0, tk, h0);
    hb.build(sec, c1, tk + dt, h1);
    const int m = steps_for(std::max(row_norm(h0), row_norm(h1)), dt, opt);
    const double h = dt / m;
    for (int j = 0; j < m; ++j) {
      const double t = tk + j * h;
      if (j > 0) hb.build(sec, lerp(c0, c1, double(j) / m), t, h0);
      hb.build(sec, lerp(c0, c1, (j + 0.5) / m), t + 0.5 * h, hm);
      if (j + 1 < m) hb.build(sec, lerp(c0, c1, double(j + 1) / m), t + h, h1);
      else hb.build(sec, c1, tk + dt, h1);
      g0 = generator(h0);
      gm = generator(hm);
      g1 = generator(h1);
      for (auto& r : rho) {
        rhs(g0, r, k1);
        y = r + (0.5 * h) * k1;
        rhs(gm, y, k2);
        y = r + (0.5 * h) * k2;
        rhs(gm, y, k3);
        y = r + h * k3;
        rhs(g1, y, k4);
        r += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      }
    }
    emit(k + 1);
  }
  std::vector<Matrix> out;
  for (std::size_t i = 0; i < rho.size(); ++i) {
    Matrix f = Matrix::Zero(nfull, nfull);
    f(sec.keep, sec.keep) = rho[i];
    const cplx tr = f.trace();
    if (!std::isfinite(std::abs(tr)) || std::abs(tr - tr0[i]) > 1e-4) {
      fail(ErrorCode::IntegratorFailure, "trace drifted by more than 1e-4; use a smaller step");
    }
    out.push_back(std::move(f));
  }
  return out;
}

TrajectoryRecord evolve(const PulseSchedule& s, const SystemState& initial, const DeviceParams& p,
                        const ModeLayout& layout, const CollapseSet* collapse, const EvolveOptions& opt) {
  if (initial.dim() != layout.total()) fail(ErrorCode::Shape, "initial state dimension does not match the layout");
  TrajectoryRecord rec;
  rec.labels = opt.record;
  rec.frame_ghz = opt.frame_ghz.value_or(default_frame(s.idle()));
  rec.schedule_hash = s.hash();
  rec.params_hash = params_hash(p);
  std::vector<int> idx;
  for (const auto& l : opt.record) idx.push_back(layout.index(l));
  const int every = std::max(1, opt.record_every);
  auto keep = [&](int k) { return k % every == 0 || k == s.samples(); };

  Propagator prop(p, layout);
  const bool open = collapse && !collapse->empty();
  if (!open && initial.is_pure()) {
    Matrix col = initial.vector();
    Matrix out = prop.run_pure(s, col, opt, [&](int k, const Matrix& st) {
      if (!keep(k)) return;
      rec.times_ns.push_back(k * s.dt());
      std::vector<double> pops;
      for (int i : idx) pops.push_back(std::norm(st(i, 0)));
      rec.populations.push_back(std::move(pops));
    });
    rec.final_state = SystemState::pure(out.col(0));
  } else {
    const CollapseSet c = open ? *collapse : CollapseSet{};
    auto out = prop.run_density(s, {initial.to_density()}, c, opt, [&](int k, const std::vector<Matrix>& r) {
      if (!keep(k)) return;
      rec.times_ns.push_back(k * s.dt());
      std::vector<double> pops;
      for (int i : idx) pops.push_back(r[0](i, i).real());
      rec.populations.push_back(std::move(pops));
    });
    Matrix r = out[0];
    r = 0.5 * (r + r.adjoint()).eval();
    rec.final_state = SystemState::density(r);
  }
  return rec;
}

std::string TrajectoryRecord::to_csv() const {
  std::ostringstream os;
  os << std::setprecision(12) << "time_ns";
  for (const auto& l : labels) os << ",p" << l.str();
  os << "\n";
  for (std::size_t i = 0; i < times_ns.size(); ++i) {
    os << times_ns[i];
    for (double v : populations[i]) os << "," << v;
    os << "\n";
  }
  return os.str();
}

std::string TrajectoryRecord::to_json() const {
  nlohmann::json j;
  j["frame_ghz"] = frame_ghz;
  j["schedule_hash"] = schedule_hash;
  j["params_hash"] = params_hash;
  std::vector<std::string> names;
  for (const auto& l : labels) names.push_back(l.str());
  j["labels"] = names;
  j["times_ns"] = times_ns;
  j["populations"] = populations;
  return j.dump(2);
}

IdleFrame::IdleFrame(const DeviceParams& p, const ModeLayout& layout, const FrequencyConfig& idle, double frame_ghz)
    : layout_(layout), basis_(dressed_basis(HamiltonianTerms(p, layout).at(idle))), frame_(frame_ghz) {
  const int n = layout.total();
  frame_energies_.resize(n);
  for (int j = 0; j < n; ++j) frame_energies_(j) = basis_.energies(j) - frame_ * layout.labels(j).excitations();
}

std::array<Labels, 4> IdleFrame::computational_labels() {
  return {Labels{0, 0, 0}, Labels{0, 0, 1}, Labels{1, 0, 0}, Labels{1, 0, 1}};
}

Vector IdleFrame::dressed_state(const Labels& l) const {
  return basis_.vectors.col(layout_.index(l)).cast<cplx>();
}

Matrix IdleFrame::computational_states() const {
  Matrix m(layout_.total(), 4);
  const auto labels = computational_labels();
  for (int k = 0; k < 4; ++k) m.col(k) = dressed_state(labels[k]);
  return m;
}

Matrix IdleFrame::to_interaction(const Matrix& states, double t_ns) const {
  Matrix out = basis_.vectors.transpose().cast<cplx>() * states;
  for (int j = 0; j < out.rows(); ++j) out.row(j) *= std::polar(1.0, kTwoPi * frame_energies_(j) * t_ns);
  return out;
}

Matrix IdleFrame::density_to_interaction(const Matrix& rho, double t_ns) const {
  const Matrix v = basis_.vectors.cast<cplx>();
  Matrix out = v.adjoint() * rho * v;
  Vector ph(out.rows());
  for (int j = 0; j < out.rows(); ++j) ph(j) = std::polar(1.0, kTwoPi * frame_energies_(j) * t_ns);
  return ph.asDiagonal() * out * ph.conjugate().asDiagonal();
}

Matrix IdleFrame::reduce_to_qubits(const Matrix& r) const {
  const int n = layout_.total();
  if (r.rows() != n || r.cols() != n) fail(ErrorCode::Shape, "density dimension does not match the layout");
  auto kraus = [](int level) { return level <= 1 ? 0 : level; };
  auto target = [](int level) { return level <= 1 ? level : 1; };
  Matrix out = Matrix::Zero(4, 4);
  for (int x = 0; x < n; ++x) {
    const Labels lx = layout_.labels(x);
    for (int y = 0; y < n; ++y) {
      const Labels ly = layout_.labels(y);
      if (lx.c != ly.c || kraus(lx.q1) != kraus(ly.q1) || kraus(lx.q2) != kraus(ly.q2)) continue;
      out(2 * target(lx.q1) + target(lx.q2), 2 * target(ly.q1) + target(ly.q2)) += r(x, y);
    }
  }
  return out;
}

ChevronMap swap_chevron(const DeviceParams& p, const ModeLayout& layout, const std::vector<double>& coupler_ghz,
                        double t_max_ns, int n_times, double dt, int jobs) {
  if (coupler_ghz.empty() || n_times < 2) fail(ErrorCode::InvalidPulse, "chevron grids must be nonempty");
  const int every = static_cast<int>(std::lround(t_max_ns / (n_times - 1) / dt));
  if (every < 1 || std::abs(every * dt * (n_times - 1) - t_max_ns) > 1e-9 * t_max_ns) {
    fail(ErrorCode::IncompatibleGrid, "time grid spacing must be a multiple of dt");
  }
  ChevronMap map;
  map.coupler_ghz = coupler_ghz;
  for (int i = 0; i < n_times; ++i) map.times_ns.push_back(i * every * dt);
  map.population.assign(coupler_ghz.size(), {});

  const HamiltonianTerms terms(p, layout);
  const double w2 = p.modes[2].omega_max_ghz;
  auto column = [&](std::size_t ic) {
    const FrequencyConfig f{w2, coupler_ghz[ic], w2};
    PulseSchedule s(dt, f);
    s.set(rectangular(Channel::FreqC, f.c, every * dt * (n_times - 1), dt));
    const Vector probe =
        effective_pair(terms.at(f), layout.index({1, 0, 0}), layout.index({0, 0, 1})).state_b.cast<cplx>();
    Propagator prop(p, layout);
    EvolveOptions opt;
    std::vector<double> pops;
    prop.run_pure(s, probe, opt, [&](int k, const Matrix& st) {
      if (k % every == 0) pops.push_back(std::norm(probe.dot(st.col(0))));
    });
    map.population[ic] = std::move(pops);
  };
  jobs = std::max(1, jobs);
  if (jobs == 1) {
    for (std::size_t ic = 0; ic < coupler_ghz.size(); ++ic) column(ic);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < jobs; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t ic = w; ic < coupler_ghz.size(); ic += jobs) column(ic);
      });
    }
    for (auto& t : pool) t.join();
  }
  return map;
}

std::string ChevronMap::to_csv() const {
  std::ostringstream os;
  os << std::setprecision(12) << "coupler_ghz,time_ns,p_q2\n";
  for (std::size_t i = 0; i < coupler_ghz.size(); ++i) {
    for (std::size_t j = 0; j < times_ns.size(); ++j) {
      os << coupler_ghz[i] << "," << times_ns[j] << "," << population[i][j] << "\n";
    }
  }
  return os.str();
}

namespace {

// Residual sum of squares of the best fit a + b cos(2 pi f t) + c sin(2 pi f t).
double sinusoid_residual(const std::vector<double>& y, double dt, double f) {
  const int n = static_cast<int>(y.size());
  Eigen::MatrixXd a(n, 3);
  Eigen::VectorXd b(n);
  for (int i = 0; i < n; ++i) {
    const double ph = kTwoPi * f * i * dt;
    a(i, 0) = 1.0;
    a(i, 1) = std::cos(ph);
    a(i, 2) = std::sin(ph);
    b(i) = y[i];
  }
  const Eigen::VectorXd x = a.colPivHouseholderQr().solve(b);
  return (a * x - b).squaredNorm();
}

}  // namespace

double oscillation_frequency(const std::vector<double>& y, double dt_ns, double f_max_ghz) {
  if (y.size() < 4) fail(ErrorCode::InvalidPulse, "series too short for a frequency estimate");
  const double span = dt_ns * (y.size() - 1);
  const double step = 1.0 / (8.0 * span);
  double best_f = step, best_r = sinusoid_residual(y, dt_ns, step);
  for (double f = 2 * step; f <= f_max_ghz; f += step) {
    const double r = sinusoid_residual(y, dt_ns, f);
    if (r < best_r) {
      best_r = r;
      best_f = f;
    }
  }
  double lo = std::max(1e-9, best_f - step), hi = best_f + step;
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
  double f1 = sinusoid_residual(y, dt_ns, x1), f2 = sinusoid_residual(y, dt_ns, x2);
  for (int it = 0; it < 80; ++it) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - gr * (hi - lo);
      f1 = sinusoid_residual(y, dt_ns, x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + gr * (hi - lo);
      f2 = sinusoid_residual(y, dt_ns, x2);
    }
  }
  return 0.5 * (lo + hi);
}

double oscillation_amplitude(const std::vector<double>& y) {
  if (y.empty()) return 0.0;
  auto [lo, hi] = std::minmax_element(y.begin(), y.end());
  return *hi - *lo;
}

RamseyResult ramsey_phase(const PulseSchedule& s, const DeviceParams& p, const ModeLayout& layout, int target,
                          int control_state, const EvolveOptions& opt) {
  if (target != 1 && target != 2) fail(ErrorCode::Index, "target must be 1 or 2");
  if (control_state != 0 && control_state != 1) fail(ErrorCode::Index, "control state must be 0 or 1");
  const double frame = opt.frame_ghz.value_or(default_frame(s.idle()));
  const IdleFrame idle(p, layout, s.idle(), frame);
  auto label = [&](int t) {
    return target == 1 ? Labels{t, 0, control_state} : Labels{control_state, 0, t};
  };
  const int i0 = layout.index(label(0)), i1 = layout.index(label(1));
  const Vector psi0 = (idle.dressed_state(label(0)) + idle.dressed_state(label(1))) / std::sqrt(2.0);
  EvolveOptions o = opt;
  o.frame_ghz = frame;
  const Matrix out = Propagator(p, layout).run_pure(s, psi0, o);
  const Matrix amp = idle.to_interaction(out, s.duration());
  const cplx a0 = amp(i0, 0), a1 = amp(i1, 0);

  // P(phi) = |a0 + exp(-i phi) a1|^2 / 2, fitted as A + B cos(phi) + C sin(phi).
  constexpr int kPoints = 16;
  Eigen::MatrixXd design(kPoints, 3);
  Eigen::VectorXd pv(kPoints);
  for (int j = 0; j < kPoints; ++j) {
    const double phi = kTwoPi * j / kPoints;
    design(j, 0) = 1.0;
    design(j, 1) = std::cos(phi);
    design(j, 2) = std::sin(phi);
    pv(j) = 0.5 * std::norm(a0 + std::polar(1.0, -phi) * a1);
  }
  const Eigen::Vector3d x = design.colPivHouseholderQr().solve(pv);
  RamseyResult r;
  r.contrast = 2.0 * std::hypot(x(1), x(2));
  if (r.contrast < 0.1) fail(ErrorCode::LowContrast, "Ramsey fringe contrast below 0.1");
  r.phase = std::atan2(x(2), x(1));
  return r;
}

}  // namespace tcq
