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

#include "tcq/experiments.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <map>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "tcq/dynamics.hpp"
#include "tcq/gates.hpp"
#include "tcq/model.hpp"
#include "tcq/opt.hpp"
#include "tcq/tomo.hpp"

#ifndef TCQ_VERSION
#define TCQ_VERSION "0.0.0"
#endif

namespace tcq {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = n == 1 ? a : a + (b - a) * i / (n - 1);
  return v;
}

std::uint64_t fnv(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string hex(std::uint64_t v) {
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << v;
  return os.str();
}

class Sink {
 public:
  explicit Sink(const fs::path& dir) : dir_(dir) {
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec) fail(ErrorCode::Io, "cannot create output directory " + dir_.string() + ": " + ec.message());
  }

  void write(const std::string& name, const std::string& text) {
    std::ofstream f(dir_ / name, std::ios::binary);
    if (!f) fail(ErrorCode::Io, "cannot write " + (dir_ / name).string());
    f << text;
    if (!f) fail(ErrorCode::Io, "write failed for " + (dir_ / name).string());
    files_.push_back(name);
  }

  const std::vector<std::string>& files() const { return files_; }

 private:
  fs::path dir_;
  std::vector<std::string> files_;
};

struct Context {
  const ExperimentSpec& spec;
  DeviceParams p;
  ModeLayout layout;
  int jobs;
  Sink& out;
  json summary;
};

std::string csv_row(std::initializer_list<double> v) {
  std::ostringstream os;
  os << std::setprecision(12);
  bool first = true;
  for (double x : v) {
    if (!first) os << ",";
    os << x;
    first = false;
  }
  os << "\n";
  return os.str();
}

// ---------------------------------------------------------------- static experiments

void coupling_scan(Context& c) {
  const double q = c.p.modes[2].omega_max_ghz;
  const FrequencyConfig idle{c.p.modes[0].omega_max_ghz, 0.0, q};
  std::string csv = "coupler_ghz,g_eff_mhz,g_exact_mhz,g_eff_idle_mhz\n";
  for (double wc : linspace(5.2, c.p.modes[1].omega_max_ghz, 200)) {
    csv += csv_row({wc, effective_coupling_mhz(c.p, {q, wc, q}), exact_swap_coupling_mhz(c.p, {q, wc, q}, c.layout),
                    effective_coupling_mhz(c.p, {idle.q1, wc, idle.q2})});
  }
  c.out.write("coupling_scan.csv", csv);
  c.summary["off_swap_ghz"] = find_coupler_off(c.p, q, q, OffCriterion::SwapCoupling, c.layout);
  c.summary["off_swap_exact_ghz"] = find_coupler_off(c.p, q, q, OffCriterion::SwapExact, c.layout);
}

void zz_scan(Context& c) {
  const double q1 = c.p.modes[0].omega_max_ghz, q2 = c.p.modes[2].omega_max_ghz;
  std::string csv = "coupler_ghz,zz2_mhz,zz3_mhz,zz4_mhz,zz_pert_mhz,zz_exact_mhz\n";
  for (double wc : linspace(5.2, c.p.modes[1].omega_max_ghz, 100)) {
    const FrequencyConfig f{q1, wc, q2};
    const ZzOrders z = zz_perturbative(c.p, f);
    csv += csv_row({wc, z.second, z.third, z.fourth, z.total, zz_exact_mhz(c.p, f, c.layout)});
  }
  c.out.write("zz_scan.csv", csv);
  c.summary["zz_zero_ghz"] = idle_coupler_frequency(c.p, c.layout);
}

void chevron(Context& c) {
  const auto grid = linspace(5.35, 5.75, 50);
  const ChevronMap m = swap_chevron(c.p, c.layout, grid, 398.0, 200, 0.1, c.jobs);
  c.out.write("chevron.csv", m.to_csv());
  const double q = c.p.modes[2].omega_max_ghz;
  std::string csv = "coupler_ghz,fit_freq_mhz,two_g_exact_mhz\n";
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double f = oscillation_frequency(m.population[i], m.times_ns[1] - m.times_ns[0], 0.05);
    csv += csv_row({grid[i], f * 1e3, 2.0 * std::abs(exact_swap_coupling_mhz(c.p, {q, grid[i], q}, c.layout))});
  }
  c.out.write("chevron_fit.csv", csv);
}

void dispersive_spectrum(Context& c) {
  const double q1 = c.p.modes[0].omega_max_ghz, q2 = c.p.modes[2].omega_max_ghz;
  std::string csv = "coupler_ghz,q1_dressed_ghz,q2_dressed_ghz,chi1_mhz,chi2_mhz\n";
  for (double wc : linspace(5.2, c.p.modes[1].omega_max_ghz, 100)) {
    const FrequencyConfig f{q1, wc, q2};
    const auto d = dressed_frequencies(c.p, f);
    csv += csv_row({wc, d.first, d.second, dispersive_shift_mhz(c.p, f, 1), dispersive_shift_mhz(c.p, f, 2)});
  }
  c.out.write("dispersive_spectrum.csv", csv);
}

void leakage(Context& c) {
  const double q = c.p.modes[2].omega_max_ghz;
  const double off = find_coupler_off(c.p, q, q, OffCriterion::SwapExact, c.layout);
  const LeakageScan s = leakage_scan(c.p, c.layout, linspace(q + 0.1, off, 20), 200.0, 0.1, c.jobs);
  c.out.write("leakage_scan.csv", s.to_csv());
  c.summary["off_ghz"] = off;
  c.summary["threshold_ghz"] = s.threshold_ghz ? json(*s.threshold_ghz) : json(nullptr);
}

// ---------------------------------------------------------------- gates

void write_gate(Context& c, const std::string& stem, const GateResult& g) {
  c.out.write(stem + ".json", g.to_json());
  c.out.write(stem + "_schedule.csv", g.schedule.to_csv());
  json s;
  s["unitary_fidelity"] = g.unitary_fidelity.value_or(0.0);
  if (g.process_fidelity) s["process_fidelity"] = *g.process_fidelity;
  s["conditional_phase"] = g.conditional_phase;
  s["leakage"] = g.leakage;
  s["duration_ns"] = g.schedule.duration();
  c.summary[stem] = s;
}

void iswap(Context& c) {
  const CollapseSet col = CollapseSet::from_device(c.p);
  write_gate(c, "iswap", iswap_gate(c.p, c.layout, IswapKind::Full, {}, &col));
  write_gate(c, "sqrt_iswap", iswap_gate(c.p, c.layout, IswapKind::Half, {}, &col));
}

void cz_rect(Context& c) {
  const CollapseSet col = CollapseSet::from_device(c.p);
  write_gate(c, "cz_rect_positive", cz_rectangular(c.p, c.layout, CouplingSign::Positive, std::nullopt, &col));
  write_gate(c, "cz_rect_negative", cz_rectangular(c.p, c.layout, CouplingSign::Negative, std::nullopt, &col));
}

void cz_ddr_run(Context& c) {
  const CollapseSet col = CollapseSet::from_device(c.p);
  const GateResult g = cz_ddr(c.p, c.layout, DdrCzParams{}, false, &col);
  write_gate(c, "cz_ddr", g);
  const GeometricSplit s = geometric_fraction(g.schedule, c.p, c.layout);
  c.summary["cz_ddr"]["geometric_fraction"] = s.fraction;
  c.summary["cz_ddr"]["dynamical_phase"] = s.dynamical;
  c.summary["fidelity"] = g.process_fidelity.value_or(0.0);
}

void qpt(Context& c) {
  const CollapseSet col = CollapseSet::from_device(c.p);
  const GateResult g = cz_ddr(c.p, c.layout, DdrCzParams{});
  const auto ch = gate_channel(g.schedule, c.p, c.layout, col, g.z_angles);
  const ProcessMatrix chi = process_tomography(ch);
  const ProcessMatrix ideal = chi_from_unitary(cz_target());
  c.out.write("chi_exp.json", chi.to_json());
  c.out.write("chi_ideal.json", ideal.to_json());
  c.summary["process_fidelity"] = process_fidelity(chi, ideal);
  c.summary["trace_preservation_residual"] = chi.trace_preservation_residual();
  c.summary["min_eigenvalue"] = chi.min_eigenvalue();
}

double coupler_for_zz(const DeviceParams& p, const ModeLayout& layout, double target_mhz) {
  const double q1 = p.modes[0].omega_max_ghz, q2 = p.modes[2].omega_max_ghz;
  const double zero = idle_coupler_frequency(p, layout);
  auto f = [&](double wc) { return zz_exact_mhz(p, {q1, wc, q2}, layout) - target_mhz; };
  // Walk down from the zero until the target is bracketed.
  double hi = zero, fhi = f(hi);
  for (double lo = zero - 0.01; lo > std::max(q1, q2) + 0.1; lo -= 0.01) {
    const double flo = f(lo);
    if ((flo < 0) != (fhi < 0)) {
      for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if ((fm < 0) == (fhi < 0)) hi = mid, fhi = fm;
        else lo = mid;
      }
      return 0.5 * (lo + hi);
    }
    hi = lo;
    fhi = flo;
  }
  fail(ErrorCode::Infeasible, "requested ZZ is not reachable below the zero point");
}

void rb(Context& c) {
  const double q1 = c.p.modes[0].omega_max_ghz, q2 = c.p.modes[2].omega_max_ghz;
  const double wc_zero = idle_coupler_frequency(c.p, c.layout);
  const double wc_on = coupler_for_zz(c.p, c.layout, -0.45);
  struct Case {
    const char* stem;
    double wc;
    RbMode mode;
  };
  const Case cases[] = {{"rb_individual", wc_zero, RbMode::Individual},
                        {"rb_simultaneous_zz0", wc_zero, RbMode::Simultaneous},
                        {"rb_simultaneous_zz045", wc_on, RbMode::Simultaneous}};
  for (const auto& k : cases) {
    RbOptions o;
    o.mode = k.mode;
    o.zz_mhz = zz_exact_mhz(c.p, {q1, k.wc, q2}, c.layout);
    o.seed = c.spec.seed;
    const RbResult r = randomized_benchmarking(c.p, o);
    c.out.write(std::string(k.stem) + ".csv", r.to_csv());
    c.summary[k.stem] = {{"coupler_ghz", k.wc},
                         {"zz_mhz", o.zz_mhz},
                         {"fidelity_q1", r.qubits[0].fidelity},
                         {"fidelity_q2", r.qubits[1].fidelity}};
  }
}

void optimize_ddr(Context& c) {
  DdrCzParams start;
  start.ramp_ns = 17.0;
  const DdrOptimization o = optimize_cz_ddr(c.p, c.layout, start, {}, 300);
  c.out.write("optimize_ddr_trace.csv", o.search.trace_csv({"coupler_on_ghz", "hold_ns", "detune_ghz", "dip_ns"}));
  const CollapseSet col = CollapseSet::from_device(c.p);
  GateResult g = o.gate;
  g.process_fidelity = qpt_fidelity(g.schedule, c.p, c.layout, col, g.z_angles, cz_target());
  write_gate(c, "cz_ddr_optimized", g);
  c.summary["start_objective"] = o.start_objective;
  c.summary["final_objective"] = o.search.value;
  c.summary["converged"] = o.search.converged;
  c.summary["params"] = {{"coupler_on_ghz", o.params.coupler_on_ghz},
                         {"hold_ns", o.params.hold_ns},
                         {"detune_ghz", o.params.detune_ghz},
                         {"dip_ns", o.params.dip_ns},
                         {"ramp_ns", o.params.ramp_ns}};
}

void optimize_fa(Context& c) {
  FastAdiabaticSpec spec;
  spec.q1_ghz = c.p.modes[0].omega_max_ghz;
  spec.q2_idle_ghz = spec.q2_max_ghz = c.p.modes[2].omega_max_ghz;
  spec.eta1_mhz = c.p.modes[0].eta_mhz;
  spec.duration_ns = 120.0;
  spec.coupling_mhz = fast_adiabatic_coupling_mhz(spec.duration_ns);
  const DeviceParams direct = direct_coupling_device(c.p, spec.coupling_mhz);
  json runs = json::array();
  for (int n : {1, 3}) {
    const auto r = optimize_fast_adiabatic(direct, c.layout, spec, n, 400);
    std::vector<std::string> names;
    for (int i = 0; i < n; ++i) names.push_back("lambda" + std::to_string(i + 1));
    c.out.write("optimize_fa_n" + std::to_string(n) + "_trace.csv", r.search.trace_csv(names));
    runs.push_back({{"n_fourier", n}, {"coefficients", r.coefficients}, {"fidelity", r.fidelity},
                    {"converged", r.search.converged}});
  }
  c.summary["coupling_mhz"] = spec.coupling_mhz;
  c.summary["runs"] = runs;
}

const std::map<std::string, std::function<void(Context&)>>& registry() {
  static const std::map<std::string, std::function<void(Context&)>> r{
      {"coupling-scan", coupling_scan}, {"zz-scan", zz_scan},
      {"chevron", chevron},             {"dispersive-spectrum", dispersive_spectrum},
      {"leakage-scan", leakage},        {"iswap", iswap},
      {"cz-rect", cz_rect},             {"cz-ddr", cz_ddr_run},
      {"qpt", qpt},                     {"rb", rb},
      {"optimize-ddr", optimize_ddr},   {"optimize-fa", optimize_fa},
  };
  return r;
}

}  // namespace

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names{"coupling-scan", "zz-scan",    "chevron", "dispersive-spectrum",
                                              "leakage-scan",  "iswap",      "cz-rect", "cz-ddr",
                                              "qpt",           "rb",         "optimize-ddr", "optimize-fa"};
  return names;
}

ExperimentSpec experiment_from_yaml(const std::string& text) {
  YAML::Node n;
  try {
    n = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    fail(ErrorCode::Configuration, std::string("experiment file: ") + e.what());
  }
  ExperimentSpec s;
  try {
    if (n["name"]) s.name = n["name"].as<std::string>();
    if (n["device"]) s.device = n["device"].as<std::string>();
    if (n["output"]) s.output = n["output"].as<std::string>();
    if (n["seed"]) s.seed = n["seed"].as<std::uint64_t>();
    if (n["jobs"]) s.jobs = n["jobs"].as<int>();
    if (n["overrides"]) {
      for (const auto& o : n["overrides"]) s.overrides.push_back(o.as<std::string>());
    }
  } catch (const YAML::Exception& e) {
    fail(ErrorCode::Configuration, std::string("experiment file: ") + e.what());
  }
  for (const auto& kv : n) {
    const auto key = kv.first.as<std::string>();
    if (key != "name" && key != "device" && key != "output" && key != "seed" && key != "jobs" && key != "overrides") {
      fail(ErrorCode::Configuration, "unknown experiment key '" + key + "'");
    }
  }
  return s;
}

DeviceParams resolve_device(const ExperimentSpec& spec) {
  DeviceParams p = load_device(spec.device);
  for (const auto& o : spec.overrides) apply_override(p, o);
  return p;
}

std::vector<std::string> validate_experiment(const ExperimentSpec& spec) {
  std::vector<std::string> out;
  if (!spec.name.empty() && !registry().count(spec.name)) out.push_back("unknown experiment '" + spec.name + "'");
  if (spec.jobs < 0) out.push_back("jobs must be >= 0");
  DeviceParams p;
  try {
    p = load_device(spec.device);
  } catch (const Error& e) {
    out.push_back(e.what());
    return out;
  }
  for (const auto& o : spec.overrides) {
    try {
      apply_override(p, o);
    } catch (const Error& e) {
      out.push_back(e.what());
    }
  }
  for (auto& e : validation_errors(p)) out.push_back(std::move(e));
  return out;
}

ExperimentReport run_experiment(const ExperimentSpec& spec) {
  const auto it = registry().find(spec.name);
  if (it == registry().end()) fail(ErrorCode::Usage, "unknown experiment '" + spec.name + "'");
  const auto t0 = std::chrono::steady_clock::now();
  DeviceParams p = resolve_device(spec);
  validate(p);
  Sink sink(spec.output);
  const int jobs = spec.jobs > 0 ? spec.jobs : std::max(1u, std::thread::hardware_concurrency());
  Context ctx{spec, p, p.layout(), jobs, sink, json::object()};
  it->second(ctx);

  ExperimentReport r;
  r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const std::string device_yaml = device_to_yaml(p);
  sink.write("device.yaml", device_yaml);
  sink.write("summary.json", ctx.summary.dump(2));
  std::string inputs = spec.name + "\n" + device_yaml + "\n" + std::to_string(spec.seed);
  json m;
  m["experiment"] = spec.name;
  m["version"] = TCQ_VERSION;
  m["versions"] = {{"tcq", TCQ_VERSION},
                   {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                                 std::to_string(EIGEN_MINOR_VERSION)}};
  m["device"] = spec.device;
  m["overrides"] = spec.overrides;
  m["seed"] = spec.seed;
  m["jobs"] = jobs;
  m["inputs_hash"] = hex(fnv(inputs));
  m["wall_time_s"] = r.wall_seconds;
  m["artifacts"] = sink.files();
  std::string cmd = "tcq run " + spec.name + " --device device.yaml --seed " + std::to_string(spec.seed);
  m["rerun"] = cmd;
  sink.write("manifest.json", m.dump(2));
  r.artifacts = sink.files();
  r.summary = ctx.summary.dump();
  return r;
}

std::string plot_template(const std::string& name) {
  static const std::map<std::string, std::pair<std::string, std::string>> plots{
      {"coupling-scan", {"coupling_scan.csv", "coupler_ghz"}},
      {"zz-scan", {"zz_scan.csv", "coupler_ghz"}},
      {"chevron", {"chevron.csv", "time_ns"}},
      {"dispersive-spectrum", {"dispersive_spectrum.csv", "coupler_ghz"}},
      {"leakage-scan", {"leakage_scan.csv", "coupler_ghz"}},
      {"iswap", {"iswap_schedule.csv", "time_ns"}},
      {"cz-rect", {"cz_rect_negative_schedule.csv", "time_ns"}},
      {"cz-ddr", {"cz_ddr_schedule.csv", "time_ns"}},
      {"qpt", {"", ""}},
      {"rb", {"rb_simultaneous_zz045.csv", "length"}},
      {"optimize-ddr", {"optimize_ddr_trace.csv", "evaluation"}},
      {"optimize-fa", {"optimize_fa_n3_trace.csv", "evaluation"}},
  };
  const auto it = plots.find(name);
  if (it == plots.end()) fail(ErrorCode::Usage, "unknown experiment '" + name + "'");
  std::ostringstream os;
  os << "#!/usr/bin/env python3\n"
     << "# Plot template for '" << name << "'. Run from the artifact directory.\n"
     << "import csv, json, sys\n"
     << "import matplotlib.pyplot as plt\n\n";
  if (name == "qpt") {
    os << "chi = json.load(open('chi_exp.json'))\n"
       << "plt.imshow(chi['chi_real'], cmap='RdBu', vmin=-0.25, vmax=0.25)\n"
       << "plt.colorbar(); plt.title(chi['basis'])\n";
  } else if (name == "chevron") {
    os << "rows = list(csv.DictReader(open('chevron.csv')))\n"
       << "wc = sorted({float(r['coupler_ghz']) for r in rows})\n"
       << "t = sorted({float(r['time_ns']) for r in rows})\n"
       << "z = [[0.0] * len(t) for _ in wc]\n"
       << "for r in rows:\n"
       << "    z[wc.index(float(r['coupler_ghz']))][t.index(float(r['time_ns']))] = float(r['p_q2'])\n"
       << "plt.pcolormesh(t, wc, z, shading='auto'); plt.xlabel('time (ns)'); plt.ylabel('coupler (GHz)')\n";
  } else {
    os << "rows = list(csv.DictReader(open('" << it->second.first << "')))\n"
       << "x = [float(r['" << it->second.second << "']) for r in rows]\n"
       << "for key in rows[0]:\n"
       << "    if key != '" << it->second.second << "':\n"
       << "        plt.plot(x, [float(r[key]) for r in rows], label=key)\n"
       << "plt.xlabel('" << it->second.second << "'); plt.legend()\n";
  }
  os << "plt.savefig(sys.argv[1] if len(sys.argv) > 1 else '" << name << ".png', dpi=150)\n";
  return os.str();
}

}  // namespace tcq
