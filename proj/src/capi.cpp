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

#include "tcq/tcq.h"

#include <cstdlib>
#include <cstring>
#include <string>

#include "tcq/device.hpp"
#include "tcq/experiments.hpp"
#include "tcq/model.hpp"

#ifndef TCQ_VERSION
#define TCQ_VERSION "0.0.0"
#endif

struct tcq_device {
  tcq::DeviceParams params;
};

struct tcq_experiment {
  tcq::ExperimentSpec spec;
};

namespace {

thread_local std::string g_last_error;

template <class F>
int guarded(F&& f) {
  try {
    f();
    g_last_error.clear();
    return TCQ_OK;
  } catch (const tcq::Error& e) {
    g_last_error = e.what();
    return static_cast<int>(e.code());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return TCQ_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown failure";
    return TCQ_ERR_INTERNAL;
  }
}

int null_arg(const char* what) {
  g_last_error = std::string("null argument: ") + what;
  return TCQ_ERR_NULL_ARGUMENT;
}

char* dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

std::string join(const std::vector<std::string>& v) {
  std::string out;
  for (const auto& s : v) out += s + "\n";
  return out;
}

}  // namespace

extern "C" {

const char* tcq_version(void) { return TCQ_VERSION; }

const char* tcq_status_name(int status) {
  switch (status) {
    case TCQ_OK: return "ok";
    case TCQ_ERR_INTERNAL: return "internal";
    case TCQ_ERR_NULL_ARGUMENT: return "null argument";
    default: return tcq::to_string(static_cast<tcq::ErrorCode>(status));
  }
}

const char* tcq_last_error(void) { return g_last_error.c_str(); }

void tcq_string_free(char* s) { std::free(s); }

int tcq_device_load(const char* preset_or_path, tcq_device** out) {
  if (!preset_or_path) return null_arg("preset_or_path");
  if (!out) return null_arg("out");
  *out = nullptr;
  return guarded([&] { *out = new tcq_device{tcq::load_device(preset_or_path)}; });
}

void tcq_device_free(tcq_device* d) { delete d; }

int tcq_device_set(tcq_device* d, const char* assignment) {
  if (!d) return null_arg("device");
  if (!assignment) return null_arg("assignment");
  return guarded([&] { tcq::apply_override(d->params, assignment); });
}

int tcq_device_to_yaml(const tcq_device* d, char** out) {
  if (!d) return null_arg("device");
  if (!out) return null_arg("out");
  return guarded([&] { *out = dup(tcq::device_to_yaml(d->params)); });
}

int tcq_device_report(const tcq_device* d, char** out) {
  if (!d) return null_arg("device");
  if (!out) return null_arg("out");
  return guarded([&] { *out = dup(join(tcq::validation_errors(d->params))); });
}

int tcq_effective_coupling_mhz(const tcq_device* d, double q1, double c, double q2, double* out) {
  if (!d) return null_arg("device");
  if (!out) return null_arg("out");
  return guarded([&] { *out = tcq::effective_coupling_mhz(d->params, {q1, c, q2}); });
}

int tcq_zz_exact_mhz(const tcq_device* d, double q1, double c, double q2, double* out) {
  if (!d) return null_arg("device");
  if (!out) return null_arg("out");
  return guarded([&] { *out = tcq::zz_exact_mhz(d->params, {q1, c, q2}, d->params.layout()); });
}

int tcq_find_coupler_off(const tcq_device* d, double q1, double q2, int criterion, double* out_ghz) {
  if (!d) return null_arg("device");
  if (!out_ghz) return null_arg("out_ghz");
  return guarded([&] {
    if (criterion < 0 || criterion > 2) tcq::fail(tcq::ErrorCode::Usage, "unknown off-point criterion");
    *out_ghz = tcq::find_coupler_off(d->params, q1, q2, static_cast<tcq::OffCriterion>(criterion),
                                     d->params.layout());
  });
}

size_t tcq_experiment_count(void) { return tcq::experiment_names().size(); }

const char* tcq_experiment_name(size_t i) {
  const auto& n = tcq::experiment_names();
  return i < n.size() ? n[i].c_str() : nullptr;
}

int tcq_experiment_create(const char* name, tcq_experiment** out) {
  if (!name) return null_arg("name");
  if (!out) return null_arg("out");
  *out = nullptr;
  return guarded([&] {
    auto e = new tcq_experiment{};
    e->spec.name = name;
    *out = e;
  });
}

int tcq_experiment_load(const char* path, tcq_experiment** out) {
  if (!path) return null_arg("path");
  if (!out) return null_arg("out");
  *out = nullptr;
  return guarded([&] {
    std::string text;
    {
      FILE* f = std::fopen(path, "rb");
      if (!f) tcq::fail(tcq::ErrorCode::Io, std::string("cannot open ") + path);
      char buf[4096];
      std::size_t n;
      while ((n = std::fread(buf, 1, sizeof buf, f)) > 0) text.append(buf, n);
      std::fclose(f);
    }
    *out = new tcq_experiment{tcq::experiment_from_yaml(text)};
  });
}

void tcq_experiment_free(tcq_experiment* e) { delete e; }

int tcq_experiment_set_name(tcq_experiment* e, const char* name) {
  if (!e) return null_arg("experiment");
  if (!name) return null_arg("name");
  e->spec.name = name;
  return TCQ_OK;
}

int tcq_experiment_set_device(tcq_experiment* e, const char* preset_or_path) {
  if (!e) return null_arg("experiment");
  if (!preset_or_path) return null_arg("preset_or_path");
  e->spec.device = preset_or_path;
  return TCQ_OK;
}

int tcq_experiment_add_override(tcq_experiment* e, const char* assignment) {
  if (!e) return null_arg("experiment");
  if (!assignment) return null_arg("assignment");
  e->spec.overrides.emplace_back(assignment);
  return TCQ_OK;
}

int tcq_experiment_set_output(tcq_experiment* e, const char* dir) {
  if (!e) return null_arg("experiment");
  if (!dir) return null_arg("dir");
  e->spec.output = dir;
  return TCQ_OK;
}

int tcq_experiment_set_seed(tcq_experiment* e, uint64_t seed) {
  if (!e) return null_arg("experiment");
  e->spec.seed = seed;
  return TCQ_OK;
}

int tcq_experiment_set_jobs(tcq_experiment* e, int jobs) {
  if (!e) return null_arg("experiment");
  if (jobs < 0) {
    g_last_error = "jobs must be >= 0";
    return TCQ_ERR_USAGE;
  }
  e->spec.jobs = jobs;
  return TCQ_OK;
}

int tcq_experiment_validate(const tcq_experiment* e, char** report) {
  if (!e) return null_arg("experiment");
  if (!report) return null_arg("report");
  return guarded([&] { *report = dup(join(tcq::validate_experiment(e->spec))); });
}

int tcq_experiment_run(const tcq_experiment* e, char** summary) {
  if (!e) return null_arg("experiment");
  return guarded([&] {
    const auto r = tcq::run_experiment(e->spec);
    if (summary) *summary = dup(r.summary);
  });
}

int tcq_plot_template(const char* name, char** out) {
  if (!name) return null_arg("name");
  if (!out) return null_arg("out");
  return guarded([&] { *out = dup(tcq::plot_template(name)); });
}

}  // extern "C"
