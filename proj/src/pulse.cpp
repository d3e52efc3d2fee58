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

#include "tcq/pulse.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <iomanip>
#include <limits>
#include <sstream>

namespace tcq {

namespace {

int sample_count(double duration, double dt) {
  if (!(dt > 0.0)) fail(ErrorCode::InvalidPulse, "dt must be positive");
  if (!(duration > 0.0)) fail(ErrorCode::InvalidPulse, "duration must be positive");
  const int n = static_cast<int>(std::lround(duration / dt));
  if (n < 1) fail(ErrorCode::InvalidPulse, "duration shorter than one sample");
  return n;
}

double idle_value(const FrequencyConfig& idle, Channel ch) {
  return is_frequency(ch) ? idle[static_cast<int>(ch)] : 0.0;
}

void fnv(std::uint64_t& h, const void* data, std::size_t len) {
  const auto* b = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < len; ++i) {
    h ^= b[i];
    h *= 1099511628211ull;
  }
}

}  // namespace

const char* channel_name(Channel ch) {
  switch (ch) {
    case Channel::FreqQ1: return "freq_q1";
    case Channel::FreqC: return "freq_c";
    case Channel::FreqQ2: return "freq_q2";
    case Channel::XyQ1: return "xy_q1";
    case Channel::XyQ2: return "xy_q2";
  }
  return "?";
}

std::vector<double> ChannelWaveform::real_samples() const {
  std::vector<double> v(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) v[i] = samples[i].real();
  return v;
}

PulseSchedule::PulseSchedule(double dt, const FrequencyConfig& idle)
    : drive_ghz{idle.q1, idle.q2}, dt_(dt), idle_(idle) {
  if (!(dt > 0.0)) fail(ErrorCode::InvalidPulse, "dt must be positive");
}

const ChannelWaveform* PulseSchedule::find(Channel ch) const {
  for (const auto& w : waveforms_) {
    if (w.channel == ch) return &w;
  }
  return nullptr;
}

void PulseSchedule::set(ChannelWaveform w) {
  if (std::abs(w.dt - dt_) > 1e-12) fail(ErrorCode::IncompatibleGrid, "waveform dt differs from schedule dt");
  if (w.samples.empty()) fail(ErrorCode::InvalidPulse, "empty waveform");
  const bool only_self = waveforms_.size() == 1 && waveforms_[0].channel == w.channel;
  if (!waveforms_.empty() && !only_self && w.size() != n_) {
    fail(ErrorCode::IncompatibleGrid, "waveform length differs from schedule length");
  }
  n_ = w.size();
  for (auto& x : waveforms_) {
    if (x.channel == w.channel) {
      x = std::move(w);
      return;
    }
  }
  waveforms_.push_back(std::move(w));
  std::sort(waveforms_.begin(), waveforms_.end(),
            [](const auto& a, const auto& b) { return a.channel < b.channel; });
}

PulseSchedule PulseSchedule::idle_for(double dt, const FrequencyConfig& idle, int n) {
  if (n < 1) fail(ErrorCode::InvalidPulse, "idle schedule needs at least one sample");
  PulseSchedule s(dt, idle);
  s.set(ChannelWaveform{Channel::FreqQ1, dt, std::vector<cplx>(n, idle.q1)});
  return s;
}

ControlPoint PulseSchedule::sample(int k) const {
  ControlPoint c{idle_, {}};
  if (k < 0 || k > n_) fail(ErrorCode::Index, "sample index outside schedule");
  if (k == n_) return c;
  for (const auto& w : waveforms_) {
    const int ch = static_cast<int>(w.channel);
    if (ch < 3) c.freq[ch] = w.samples[k].real();
    else c.xy[ch - 3] = w.samples[k];
  }
  return c;
}

ControlPoint PulseSchedule::at(double t) const {
  if (n_ == 0) return sample(0);
  double u = t / dt_;
  int k = static_cast<int>(std::floor(u));
  if (k >= n_) return sample(n_);
  if (k < 0) return sample(0);
  const double f = u - k;
  ControlPoint a = sample(k), b = sample(k + 1);
  if (f == 0.0) return a;
  for (int m = 0; m < 3; ++m) a.freq[m] += f * (b.freq[m] - a.freq[m]);
  for (int q = 0; q < 2; ++q) a.xy[q] += f * (b.xy[q] - a.xy[q]);
  return a;
}

void PulseSchedule::check_bounds(const DeviceParams& p) const {
  for (const auto& w : waveforms_) {
    if (!is_frequency(w.channel)) continue;
    const auto& m = p.modes[static_cast<int>(w.channel)];
    const double lo = m.eta_mhz * 1e-3, hi = m.omega_max_ghz + 1e-9;
    for (const auto& s : w.samples) {
      if (!(s.real() >= lo && s.real() <= hi)) {
        fail(ErrorCode::InvalidPulse, std::string(channel_name(w.channel)) + " sample outside the reachable range");
      }
    }
  }
}

std::uint64_t PulseSchedule::hash() const {
  std::uint64_t h = 1469598103934665603ull;
  fnv(h, &dt_, sizeof dt_);
  fnv(h, &idle_, sizeof idle_);
  fnv(h, drive_ghz.data(), sizeof(double) * 2);
  for (const auto& w : waveforms_) {
    int ch = static_cast<int>(w.channel);
    fnv(h, &ch, sizeof ch);
    fnv(h, w.samples.data(), sizeof(cplx) * w.samples.size());
  }
  return h;
}

std::string PulseSchedule::to_csv() const {
  std::ostringstream os;
  os << std::setprecision(12) << "time_ns";
  for (const auto& w : waveforms_) {
    if (is_frequency(w.channel)) os << "," << channel_name(w.channel) << "_ghz";
    else os << "," << channel_name(w.channel) << "_re," << channel_name(w.channel) << "_im";
  }
  os << "\n";
  for (int k = 0; k < n_; ++k) {
    os << k * dt_;
    for (const auto& w : waveforms_) {
      if (is_frequency(w.channel)) os << "," << w.samples[k].real();
      else os << "," << w.samples[k].real() << "," << w.samples[k].imag();
    }
    os << "\n";
  }
  return os.str();
}

double cosine_ramp(double u) {
  u = std::clamp(u, 0.0, 1.0);
  return 0.5 * (1.0 - std::cos(M_PI * u));
}

ChannelWaveform rectangular(Channel ch, double level, double duration_ns, double dt) {
  const int n = sample_count(duration_ns, dt);
  return {ch, dt, std::vector<cplx>(n, level)};
}

ChannelWaveform cosine_flat_top(Channel ch, double start, double plateau, double ramp_ns, double hold_ns, double dt) {
  if (!(dt > 0.0)) fail(ErrorCode::InvalidPulse, "dt must be positive");
  if (ramp_ns < 2.0 * dt - 1e-12) fail(ErrorCode::TooFastRamp, "ramp shorter than two samples");
  if (hold_ns < 0.0) fail(ErrorCode::InvalidPulse, "negative hold");
  const int nr = static_cast<int>(std::lround(ramp_ns / dt));
  const int nh = static_cast<int>(std::lround(hold_ns / dt));
  ChannelWaveform w{ch, dt, std::vector<cplx>(2 * nr + nh)};
  for (int k = 0; k < w.size(); ++k) {
    double s = 1.0;
    if (k < nr) s = cosine_ramp(double(k) / nr);
    else if (k >= nr + nh) s = cosine_ramp(1.0 - double(k - nr - nh) / nr);
    w.samples[k] = start + (plateau - start) * s;
  }
  w.samples[0] = start;
  return w;
}

namespace {

// Baseline-subtracted Gaussian sampled at bin centres so the derivative sums to zero.
std::vector<double> gaussian_bins(double sigma, double length, double dt, std::vector<double>* deriv) {
  const int n = sample_count(length, dt);
  const double c = 0.5 * n * dt;
  const double base = std::exp(-c * c / (2 * sigma * sigma));
  std::vector<double> g(n);
  if (deriv) deriv->assign(n, 0.0);
  for (int k = 0; k < n; ++k) {
    const double x = (k + 0.5) * dt - c;
    const double e = std::exp(-x * x / (2 * sigma * sigma));
    g[k] = e - base;
    if (deriv) (*deriv)[k] = -x / (sigma * sigma) * e;
  }
  if (deriv) {
    for (int k = 0; k < n / 2; ++k) {
      const double a = 0.5 * ((*deriv)[k] - (*deriv)[n - 1 - k]);
      (*deriv)[k] = a;
      (*deriv)[n - 1 - k] = -a;
    }
  }
  return g;
}

}  // namespace

double drag_amplitude_for(double theta, double sigma_ns, double length_ns, double dt) {
  if (length_ns <= 0.0) length_ns = 4.0 * sigma_ns;
  const auto g = gaussian_bins(sigma_ns, length_ns, dt, nullptr);
  double area = 0.0;
  for (double v : g) area += v * dt;
  return theta / (kTwoPi * area);
}

ChannelWaveform drag(Channel ch, const DragParams& d, double dt) {
  if (is_frequency(ch)) fail(ErrorCode::InvalidPulse, "DRAG needs an XY channel");
  if (d.sigma_ns < 2.0 * dt) fail(ErrorCode::TooFastRamp, "DRAG sigma shorter than two samples");
  const double length = d.length_ns > 0.0 ? d.length_ns : 4.0 * d.sigma_ns;
  std::vector<double> dg;
  const auto g = gaussian_bins(d.sigma_ns, length, dt, &dg);
  ChannelWaveform w{ch, dt, std::vector<cplx>(g.size())};
  const cplx axis = std::polar(1.0, d.axis_rad);
  for (std::size_t k = 0; k < g.size(); ++k) {
    const double t = (k + 0.5) * dt;
    const cplx carrier = std::polar(1.0, -kTwoPi * d.detuning_mhz * 1e-3 * t);
    w.samples[k] = d.amplitude * cplx(g[k], d.beta_ns * dg[k]) * axis * carrier;
  }
  return w;
}

double ddr_root(const DeviceParams& p, double a, double b) {
  const Couplings g = couplings_at(p, p.modes[1].omega_max_ghz);
  const double G = g.g1c * g.g2c;
  const double qa = g.g12, qb = -(g.g12 * (a + b) + G), qc = g.g12 * a * b + 0.5 * G * (a + b);
  const double disc = qb * qb - 4 * qa * qc;
  if (!(disc >= 0.0) || qa == 0.0) fail(ErrorCode::DdrInfeasible, "DDR condition has no real root");
  const double sq = std::sqrt(disc);
  // Numerically stable pair of roots; the larger one lies above both levels.
  const double q = -0.5 * (qb + (qb < 0 ? -sq : sq));
  const double top = std::max(a, b);
  double root = std::max(q / qa, qc / q);
  if (!(root > top + 1e-12)) fail(ErrorCode::DdrInfeasible, "no DDR root above both qubit frequencies");
  if (p.scale_coupling_with_flux) {
    // Flux-dependent g_ic: bisect the exact condition instead.
    double lo = top + 1e-6, hi = p.modes[1].omega_max_ghz;
    auto f = [&](double x) { return effective_coupling_mhz(p, {a, x, b}); };
    if ((f(lo) > 0) == (f(hi) > 0)) fail(ErrorCode::DdrInfeasible, "no DDR root below the coupler maximum");
    for (int i = 0; i < 80; ++i) {
      const double mid = 0.5 * (lo + hi);
      ((f(mid) > 0) == (f(hi) > 0) ? hi : lo) = mid;
    }
    root = 0.5 * (lo + hi);
  }
  return root;
}

ChannelWaveform ddr_coupler_track(const DeviceParams& p, double omega1_ghz, const std::vector<double>& omega2,
                                  double dt, DdrManifold manifold, const std::vector<double>& correction) {
  if (omega2.empty()) fail(ErrorCode::InvalidPulse, "empty qubit trajectory");
  if (!correction.empty() && correction.size() != omega2.size()) {
    fail(ErrorCode::IncompatibleGrid, "DDR correction length differs from the trajectory");
  }
  const double a = manifold == DdrManifold::SingleExcitation ? omega1_ghz : omega1_ghz + p.modes[0].eta_mhz * 1e-3;
  ChannelWaveform w{Channel::FreqC, dt, std::vector<cplx>(omega2.size())};
  for (std::size_t k = 0; k < omega2.size(); ++k) {
    double x = ddr_root(p, a, omega2[k]);
    if (!correction.empty()) x += correction[k];
    w.samples[k] = x;
  }
  return w;
}

ChannelWaveform fast_adiabatic(const std::vector<double>& coefficients, const FastAdiabaticSpec& spec) {
  if (coefficients.empty()) fail(ErrorCode::InvalidPulse, "need at least one Fourier coefficient");
  const int n = sample_count(spec.duration_ns, spec.dt);
  const double c = std::sqrt(2.0) * spec.coupling_mhz * 1e-3;
  const double cross = spec.q1_ghz + spec.eta1_mhz * 1e-3;
  const double theta0 = std::atan2(2.0 * c, spec.q2_idle_ghz - cross);
  const double T = spec.duration_ns;
  ChannelWaveform w{Channel::FreqQ2, spec.dt, std::vector<cplx>(n)};
  for (int k = 0; k < n; ++k) {
    const double t = k * spec.dt;
    double th = theta0;
    for (std::size_t j = 0; j < coefficients.size(); ++j) {
      th += coefficients[j] * (1.0 - std::cos(kTwoPi * double(j + 1) * t / T));
    }
    if (!(th > 0.0 && th < M_PI)) fail(ErrorCode::InvalidTrajectory, "control angle leaves (0, pi)");
    const double f = cross + 2.0 * c / std::tan(th);
    if (f > spec.q2_max_ghz + 1e-9) fail(ErrorCode::InvalidTrajectory, "trajectory exceeds the qubit maximum");
    w.samples[k] = f;
  }
  w.samples[0] = spec.q2_idle_ghz;
  return w;
}

PulseSchedule concat(const PulseSchedule& a, const PulseSchedule& b) {
  if (std::abs(a.dt() - b.dt()) > 1e-12) fail(ErrorCode::IncompatibleGrid, "schedules use different dt");
  if (a.samples() == 0) return b;
  if (b.samples() == 0) return a;
  PulseSchedule out(a.dt(), a.idle());
  out.drive_ghz = a.drive_ghz;
  for (int c = 0; c < 5; ++c) {
    const auto ch = static_cast<Channel>(c);
    const auto* wa = a.find(ch);
    const auto* wb = b.find(ch);
    if (!wa && !wb) continue;
    ChannelWaveform w{ch, a.dt(), {}};
    w.samples.reserve(a.samples() + b.samples());
    if (wa) w.samples.insert(w.samples.end(), wa->samples.begin(), wa->samples.end());
    else w.samples.insert(w.samples.end(), a.samples(), idle_value(a.idle(), ch));
    if (wb) w.samples.insert(w.samples.end(), wb->samples.begin(), wb->samples.end());
    else w.samples.insert(w.samples.end(), b.samples(), idle_value(b.idle(), ch));
    out.set(std::move(w));
  }
  return out;
}

PulseSchedule pad(const PulseSchedule& s, int extra_samples) {
  if (extra_samples <= 0) return s;
  return concat(s, PulseSchedule::idle_for(s.dt(), s.idle(), extra_samples));
}

}  // namespace tcq
