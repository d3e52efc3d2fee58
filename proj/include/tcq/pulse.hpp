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
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tcq/device.hpp"
#include "tcq/model.hpp"

namespace tcq {

enum class Channel : int { FreqQ1 = 0, FreqC = 1, FreqQ2 = 2, XyQ1 = 3, XyQ2 = 4 };

const char* channel_name(Channel ch);
inline bool is_frequency(Channel ch) { return static_cast<int>(ch) < 3; }

/// Uniformly sampled control values. Sample k belongs to t = k*dt and the
/// waveform covers [0, n*dt). Frequency channels are in GHz (imaginary part
/// zero); XY channels hold the complex Rabi envelope in GHz.
struct ChannelWaveform {
  Channel channel = Channel::FreqQ1;
  double dt = 0.1;
  std::vector<cplx> samples;

  int size() const { return static_cast<int>(samples.size()); }
  double duration() const { return dt * size(); }
  double real(int k) const { return samples[k].real(); }
  std::vector<double> real_samples() const;
};

struct ControlPoint {
  FrequencyConfig freq;
  std::array<cplx, 2> xy{};
};

class PulseSchedule {
 public:
  PulseSchedule(double dt, const FrequencyConfig& idle);

  double dt() const { return dt_; }
  int samples() const { return n_; }
  double duration() const { return dt_ * n_; }
  const FrequencyConfig& idle() const { return idle_; }
  const std::vector<ChannelWaveform>& waveforms() const { return waveforms_; }
  const ChannelWaveform* find(Channel ch) const;

  /// Adds or replaces a channel. The first waveform fixes the length; later
  /// ones must match it.
  void set(ChannelWaveform w);
  /// Idle-valued schedule of n samples.
  static PulseSchedule idle_for(double dt, const FrequencyConfig& idle, int n);

  /// Drive carrier frequency for XY channels, GHz (defaults to the idle frequencies).
  std::array<double, 2> drive_ghz;

  /// Control values at sample k in [0, n]; k = n gives the idle values.
  ControlPoint sample(int k) const;
  /// Linear interpolation between samples.
  ControlPoint at(double t) const;

  /// Throws InvalidPulse if a frequency channel leaves its mode's range.
  void check_bounds(const DeviceParams& p) const;
  std::uint64_t hash() const;
  std::string to_csv() const;

 private:
  double dt_;
  int n_ = 0;
  FrequencyConfig idle_;
  std::vector<ChannelWaveform> waveforms_;
};

ChannelWaveform rectangular(Channel ch, double level, double duration_ns, double dt);
ChannelWaveform cosine_flat_top(Channel ch, double start, double plateau, double ramp_ns, double hold_ns, double dt);
/// (1 - cos(pi u)) / 2 for u in [0, 1], clamped outside.
double cosine_ramp(double u);

struct DragParams {
  double amplitude = 0.0;  // peak Rabi frequency, GHz
  double sigma_ns = 5.0;
  double beta_ns = 0.0;
  double detuning_mhz = 0.0;
  double axis_rad = 0.0;
  double length_ns = 0.0;  // 0 means 4 sigma
};
ChannelWaveform drag(Channel ch, const DragParams& d, double dt);
/// Peak amplitude giving rotation angle theta for the baseline-subtracted Gaussian.
double drag_amplitude_for(double theta, double sigma_ns, double length_ns, double dt);

enum class DdrManifold { SingleExcitation, DoubleExcitation };

/// Root above both qubit levels of g12 x^2 - [g12(a+b)+G] x + g12 ab + G(a+b)/2 = 0.
double ddr_root(const DeviceParams& p, double a_ghz, double b_ghz);
ChannelWaveform ddr_coupler_track(const DeviceParams& p, double omega1_ghz, const std::vector<double>& omega2,
                                  double dt, DdrManifold manifold = DdrManifold::SingleExcitation,
                                  const std::vector<double>& correction = {});

/// Direct-coupling |11>-|20> avoided-crossing trajectory for Q2.
struct FastAdiabaticSpec {
  double q1_ghz = 4.961;
  double q2_idle_ghz = 4.926;
  double q2_max_ghz = 4.926;
  double eta1_mhz = -206.0;
  double coupling_mhz = 3.0;  // direct g; the |11>-|20> element is sqrt(2) g
  double duration_ns = 120.0;
  double dt = 0.1;
};
ChannelWaveform fast_adiabatic(const std::vector<double>& coefficients, const FastAdiabaticSpec& spec);

PulseSchedule concat(const PulseSchedule& a, const PulseSchedule& b);
PulseSchedule pad(const PulseSchedule& s, int extra_samples);

}  // namespace tcq
