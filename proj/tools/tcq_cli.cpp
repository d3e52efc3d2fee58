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

// Command-line front end. Talks to the library only through tcq/tcq.h.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "tcq/tcq.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

struct Options {
  std::string name;
  std::string config;
  std::string device;
  std::vector<std::string> overrides;
  std::string out;
  std::uint64_t seed = 1;
  int jobs = 0;
  bool seed_set = false;
};

int exit_for(int status) {
  if (status == TCQ_OK) return kExitOk;
  return status == TCQ_ERR_USAGE ? kExitUsage : kExitFailure;
}

int report(int status) {
  if (status != TCQ_OK) {
    std::fprintf(stderr, "tcq: %s: %s\n", tcq_status_name(status), tcq_last_error());
  }
  return exit_for(status);
}

// Builds the experiment handle; command-line values override the config file.
int make_experiment(const Options& o, tcq_experiment** e) {
  int st = o.config.empty() ? tcq_experiment_create(o.name.c_str(), e) : tcq_experiment_load(o.config.c_str(), e);
  if (st != TCQ_OK) return st;
  if (!o.name.empty() && (st = tcq_experiment_set_name(*e, o.name.c_str())) != TCQ_OK) return st;
  if (!o.device.empty() && (st = tcq_experiment_set_device(*e, o.device.c_str())) != TCQ_OK) return st;
  for (const auto& s : o.overrides) {
    if ((st = tcq_experiment_add_override(*e, s.c_str())) != TCQ_OK) return st;
  }
  if (!o.out.empty() && (st = tcq_experiment_set_output(*e, o.out.c_str())) != TCQ_OK) return st;
  if (o.seed_set && (st = tcq_experiment_set_seed(*e, o.seed)) != TCQ_OK) return st;
  if (o.jobs != 0 && (st = tcq_experiment_set_jobs(*e, o.jobs)) != TCQ_OK) return st;
  return TCQ_OK;
}

int cmd_list() {
  for (size_t i = 0; i < tcq_experiment_count(); ++i) std::printf("%s\n", tcq_experiment_name(i));
  return kExitOk;
}

int cmd_validate(const Options& o) {
  tcq_experiment* e = nullptr;
  int st = make_experiment(o, &e);
  if (st != TCQ_OK) {
    tcq_experiment_free(e);
    return report(st);
  }
  char* text = nullptr;
  st = tcq_experiment_validate(e, &text);
  tcq_experiment_free(e);
  if (st != TCQ_OK) return report(st);
  const std::string r = text;
  tcq_string_free(text);
  if (r.empty()) {
    std::printf("ok\n");
    return kExitOk;
  }
  std::printf("%s", r.c_str());
  return kExitFailure;
}

int cmd_run(const Options& o) {
  tcq_experiment* e = nullptr;
  int st = make_experiment(o, &e);
  if (st != TCQ_OK) {
    tcq_experiment_free(e);
    return report(st);
  }
  char* summary = nullptr;
  st = tcq_experiment_run(e, &summary);
  tcq_experiment_free(e);
  if (st != TCQ_OK) return report(st);
  std::printf("%s\n", summary);
  tcq_string_free(summary);

  std::string name = o.name;
  char* plot = nullptr;
  if (!name.empty() && tcq_plot_template(name.c_str(), &plot) == TCQ_OK) {
    const std::string dir = o.out.empty() ? "tcq-out" : o.out;
    std::ofstream f(dir + "/plot.py");
    f << plot;
    tcq_string_free(plot);
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"tcq: two-transmon tunable-coupler simulator"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(tcq_version()));

  Options o;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", o.config, "Experiment file (YAML)");
    sub->add_option("--device", o.device, "Device preset or YAML file (default paper_device)");
    sub->add_option("--set", o.overrides, "Device override key=value (repeatable)")->allow_extra_args(false);
    sub->add_option("--jobs", o.jobs, "Worker threads for sweeps (0 = all cores)")->check(CLI::NonNegativeNumber);
  };

  auto* run = app.add_subcommand("run", "Run a named experiment");
  run->add_option("name", o.name, "Experiment name (see 'tcq list')");
  add_common(run);
  run->add_option("--out", o.out, "Output directory");
  run->add_option("--seed", o.seed, "Random seed")->each([&](const std::string&) { o.seed_set = true; });

  auto* val = app.add_subcommand("validate", "Check a configuration without running it");
  val->add_option("name", o.name, "Experiment name");
  add_common(val);

  app.add_subcommand("list", "List experiment names");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  if (app.got_subcommand("list")) return cmd_list();
  if (run->parsed() && o.name.empty() && o.config.empty()) {
    std::fprintf(stderr, "tcq: run needs an experiment name or --config\n");
    return kExitUsage;
  }
  return run->parsed() ? cmd_run(o) : cmd_validate(o);
}
