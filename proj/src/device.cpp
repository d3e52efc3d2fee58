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

#include "tcq/device.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

#include <yaml-cpp/yaml.h>

namespace tcq {

DeviceParams paper_device() {
  DeviceParams p;
  p.modes[0] = {4.961, -206.0, 14.0, 8.4};
  p.modes[1] = {5.977, -254.0, 5.0, 5.0};
  p.modes[2] = {4.926, -202.0, 13.7, 4.0};
  p.g1c_mhz = 76.9;
  p.g2c_mhz = 76.9;
  p.g12_mhz = 6.74;
  p.crosstalk_inv << 0.9963, 0.0096, 0.0264,
                     -0.0798, 0.9997, 0.0094,
                     -0.0116, 0.0384, 0.9974;
  p.readout[0] = {0.95, 0.90};
  p.readout[1] = {0.95, 0.90};
  return p;
}

std::vector<std::string> validation_errors(const DeviceParams& p) {
  static const char* names[3] = {"q1", "c", "q2"};
  std::vector<std::string> out;
  for (int k = 0; k < 3; ++k) {
    const auto& m = p.modes[k];
    const std::string n = names[k];
    if (!(m.omega_max_ghz > 0.0)) out.push_back(n + ".omega_max_ghz must be > 0");
    if (!(m.eta_mhz < 0.0)) out.push_back(n + ".eta_mhz must be < 0");
    if (!(m.t1_us > 0.0)) out.push_back(n + ".t1_us must be > 0");
    if (!(m.t2_us > 0.0)) out.push_back(n + ".t2_us must be > 0");
    if (m.t2_us > 2.0 * m.t1_us) out.push_back(n + ".t2_us exceeds 2*t1_us");
    if (p.levels[k] < 2) out.push_back("levels." + n + " must be >= 2");
  }
  if (!(p.g1c_mhz > 0.0)) out.push_back("coupling.g1c_mhz must be > 0");
  if (!(p.g2c_mhz > 0.0)) out.push_back("coupling.g2c_mhz must be > 0");
  if (!(p.g12_mhz > 0.0)) out.push_back("coupling.g12_mhz must be > 0");
  if (!std::isfinite(p.crosstalk_inv.determinant()) || std::abs(p.crosstalk_inv.determinant()) <= 1e-6) {
    out.push_back("crosstalk_inv is singular");
  }
  for (int q = 0; q < 2; ++q) {
    const auto& r = p.readout[q];
    const std::string n = q == 0 ? "q1" : "q2";
    if (!(r.fg > 0.5 && r.fg <= 1.0)) out.push_back("readout." + n + ".fg must lie in (0.5, 1]");
    if (!(r.fe > 0.5 && r.fe <= 1.0)) out.push_back("readout." + n + ".fe must lie in (0.5, 1]");
  }
  return out;
}

void validate(const DeviceParams& p) {
  auto errs = validation_errors(p);
  if (!errs.empty()) fail(ErrorCode::Configuration, errs.front());
}

double freq_from_flux(double phi, double omega_max_ghz, double eta_mhz) {
  if (!std::isfinite(phi) || std::abs(phi) >= 0.5) {
    fail(ErrorCode::OutOfBranch, "flux outside the monotone branch |phi| < 0.5");
  }
  const double eta = eta_mhz * 1e-3;
  return (omega_max_ghz - eta) * std::sqrt(std::abs(std::cos(M_PI * phi))) + eta;
}

double flux_from_freq(double target_ghz, double omega_max_ghz, double eta_mhz) {
  const double eta = eta_mhz * 1e-3;
  if (!(target_ghz > eta && target_ghz <= omega_max_ghz)) {
    fail(ErrorCode::UnreachableFrequency, "target frequency outside (eta, omega_max]");
  }
  const double r = (target_ghz - eta) / (omega_max_ghz - eta);
  return std::acos(std::min(1.0, r * r)) / M_PI;
}

Eigen::Vector3d apply_crosstalk_correction(const Eigen::Vector3d& desired, const Eigen::Matrix3d& crosstalk_inv) {
  if (std::abs(crosstalk_inv.determinant()) <= 1e-6) fail(ErrorCode::Configuration, "crosstalk matrix is singular");
  return crosstalk_inv * desired;
}

Eigen::Matrix3d crosstalk_matrix(const Eigen::Matrix3d& crosstalk_inv) {
  if (std::abs(crosstalk_inv.determinant()) <= 1e-6) fail(ErrorCode::Configuration, "crosstalk matrix is singular");
  return crosstalk_inv.inverse();
}

namespace {

// Every config leaf. Integers and the bool are stored through a double view.
struct Field {
  std::string key;
  std::function<double(const DeviceParams&)> get;
  std::function<void(DeviceParams&, double)> set;
  bool required;
};

const std::vector<Field>& fields() {
  static const std::vector<Field> table = [] {
    std::vector<Field> f;
    static const char* names[3] = {"q1", "c", "q2"};
    for (int k = 0; k < 3; ++k) {
      std::string n = names[k];
      f.push_back({n + ".omega_max_ghz", [k](const DeviceParams& p) { return p.modes[k].omega_max_ghz; },
                   [k](DeviceParams& p, double v) { p.modes[k].omega_max_ghz = v; }, true});
      f.push_back({n + ".eta_mhz", [k](const DeviceParams& p) { return p.modes[k].eta_mhz; },
                   [k](DeviceParams& p, double v) { p.modes[k].eta_mhz = v; }, true});
      f.push_back({n + ".t1_us", [k](const DeviceParams& p) { return p.modes[k].t1_us; },
                   [k](DeviceParams& p, double v) { p.modes[k].t1_us = v; }, true});
      f.push_back({n + ".t2_us", [k](const DeviceParams& p) { return p.modes[k].t2_us; },
                   [k](DeviceParams& p, double v) { p.modes[k].t2_us = v; }, true});
    }
    f.push_back({"coupling.g1c_mhz", [](const DeviceParams& p) { return p.g1c_mhz; },
                 [](DeviceParams& p, double v) { p.g1c_mhz = v; }, true});
    f.push_back({"coupling.g2c_mhz", [](const DeviceParams& p) { return p.g2c_mhz; },
                 [](DeviceParams& p, double v) { p.g2c_mhz = v; }, true});
    f.push_back({"coupling.g12_mhz", [](const DeviceParams& p) { return p.g12_mhz; },
                 [](DeviceParams& p, double v) { p.g12_mhz = v; }, true});
    for (int r = 0; r < 3; ++r) {
      for (int c = 0; c < 3; ++c) {
        f.push_back({"crosstalk_inv." + std::to_string(r) + "." + std::to_string(c),
                     [r, c](const DeviceParams& p) { return p.crosstalk_inv(r, c); },
                     [r, c](DeviceParams& p, double v) { p.crosstalk_inv(r, c) = v; }, true});
      }
    }
    for (int q = 0; q < 2; ++q) {
      std::string n = q == 0 ? "readout.q1" : "readout.q2";
      f.push_back({n + ".fg", [q](const DeviceParams& p) { return p.readout[q].fg; },
                   [q](DeviceParams& p, double v) { p.readout[q].fg = v; }, true});
      f.push_back({n + ".fe", [q](const DeviceParams& p) { return p.readout[q].fe; },
                   [q](DeviceParams& p, double v) { p.readout[q].fe = v; }, true});
    }
    for (int k = 0; k < 3; ++k) {
      f.push_back({std::string("levels.") + names[k], [k](const DeviceParams& p) { return double(p.levels[k]); },
                   [k](DeviceParams& p, double v) { p.levels[k] = static_cast<int>(std::lround(v)); }, false});
    }
    f.push_back({"scale_coupling_with_flux",
                 [](const DeviceParams& p) { return p.scale_coupling_with_flux ? 1.0 : 0.0; },
                 [](DeviceParams& p, double v) { p.scale_coupling_with_flux = v != 0.0; }, false});
    return f;
  }();
  return table;
}

const Field* find_field(const std::string& key) {
  for (const auto& f : fields()) {
    if (f.key == key) return &f;
  }
  return nullptr;
}

std::size_t edit_distance(const std::string& a, const std::string& b) {
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1)});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

double parse_value(const std::string& key, const std::string& text) {
  if (text == "true") return 1.0;
  if (text == "false") return 0.0;
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    fail(ErrorCode::Configuration, "value for '" + key + "' is not a number: " + text);
  }
  return v;
}

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  std::string s(buf, ptr);
  if (s.find_first_of(".eE") == std::string::npos && s != "inf" && s != "-inf" && s != "nan") s += ".0";
  return s;
}

void collect_leaves(const YAML::Node& node, const std::string& prefix, std::vector<std::string>& out) {
  if (node.IsMap()) {
    for (const auto& kv : node) {
      const std::string k = kv.first.as<std::string>();
      collect_leaves(kv.second, prefix.empty() ? k : prefix + "." + k, out);
    }
  } else if (node.IsSequence()) {
    for (std::size_t i = 0; i < node.size(); ++i) collect_leaves(node[i], prefix + "." + std::to_string(i), out);
  } else {
    out.push_back(prefix);
  }
}

YAML::Node lookup(const YAML::Node& root, const std::string& key) {
  YAML::Node cur = YAML::Clone(root);
  std::stringstream ss(key);
  std::string part;
  while (std::getline(ss, part, '.')) {
    if (!cur) return {};
    if (cur.IsSequence()) {
      std::size_t i = std::stoul(part);
      if (i >= cur.size()) return {};
      cur = cur[i];
    } else if (cur.IsMap()) {
      cur = cur[part];
    } else {
      return {};
    }
  }
  return cur;
}

}  // namespace

const std::vector<std::string>& device_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k;
    for (const auto& f : fields()) k.push_back(f.key);
    return k;
  }();
  return keys;
}

std::string nearest_key(const std::string& key) {
  std::string best;
  std::size_t best_d = std::string::npos;
  for (const auto& k : device_keys()) {
    std::size_t d = edit_distance(key, k);
    if (d < best_d) {
      best_d = d;
      best = k;
    }
  }
  return best;
}

void apply_override(DeviceParams& p, const std::string& assignment) {
  auto eq = assignment.find('=');
  if (eq == std::string::npos) fail(ErrorCode::Configuration, "override must look like key=value: " + assignment);
  const std::string key = assignment.substr(0, eq);
  const std::string value = assignment.substr(eq + 1);
  const Field* f = find_field(key);
  if (!f) fail(ErrorCode::Configuration, "unknown key '" + key + "' (did you mean '" + nearest_key(key) + "'?)");
  f->set(p, parse_value(key, value));
}

DeviceParams device_from_yaml(const std::string& text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    fail(ErrorCode::Configuration, std::string("cannot parse device file: ") + e.what());
  }
  std::vector<std::string> leaves;
  collect_leaves(root, "", leaves);
  for (const auto& leaf : leaves) {
    if (!find_field(leaf)) {
      fail(ErrorCode::Configuration, "unknown key '" + leaf + "' (did you mean '" + nearest_key(leaf) + "'?)");
    }
  }
  DeviceParams p = paper_device();
  for (const auto& f : fields()) {
    YAML::Node n = lookup(root, f.key);
    if (!n || !n.IsScalar()) {
      if (f.required) fail(ErrorCode::Configuration, "missing key '" + f.key + "'");
      continue;
    }
    f.set(p, parse_value(f.key, n.Scalar()));
  }
  return p;
}

std::string device_to_yaml(const DeviceParams& p) {
  std::ostringstream os;
  static const char* names[3] = {"q1", "c", "q2"};
  for (int k = 0; k < 3; ++k) {
    const auto& m = p.modes[k];
    os << names[k] << ":\n"
       << "  omega_max_ghz: " << format_double(m.omega_max_ghz) << "\n"
       << "  eta_mhz: " << format_double(m.eta_mhz) << "\n"
       << "  t1_us: " << format_double(m.t1_us) << "\n"
       << "  t2_us: " << format_double(m.t2_us) << "\n";
  }
  os << "coupling:\n"
     << "  g1c_mhz: " << format_double(p.g1c_mhz) << "\n"
     << "  g2c_mhz: " << format_double(p.g2c_mhz) << "\n"
     << "  g12_mhz: " << format_double(p.g12_mhz) << "\n";
  os << "# rows/columns in channel order (q1, q2, c)\ncrosstalk_inv:\n";
  for (int r = 0; r < 3; ++r) {
    os << "  - [" << format_double(p.crosstalk_inv(r, 0)) << ", " << format_double(p.crosstalk_inv(r, 1)) << ", "
       << format_double(p.crosstalk_inv(r, 2)) << "]\n";
  }
  os << "readout:\n";
  for (int q = 0; q < 2; ++q) {
    os << "  q" << q + 1 << ": {fg: " << format_double(p.readout[q].fg) << ", fe: " << format_double(p.readout[q].fe)
       << "}\n";
  }
  os << "levels: {q1: " << p.levels[0] << ", c: " << p.levels[1] << ", q2: " << p.levels[2] << "}\n";
  os << "scale_coupling_with_flux: " << (p.scale_coupling_with_flux ? "true" : "false") << "\n";
  return os.str();
}

DeviceParams load_device(const std::string& preset_or_path) {
  if (preset_or_path == "paper_device") return paper_device();
  std::ifstream in(preset_or_path);
  if (!in) fail(ErrorCode::Io, "cannot open device file '" + preset_or_path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return device_from_yaml(ss.str());
}

void save_device(const DeviceParams& p, const std::string& path) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::Io, "cannot write '" + path + "'");
  out << device_to_yaml(p);
}

}  // namespace tcq
