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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "tcq/tcq.h"

namespace {

std::string take(char* s) {
  std::string out = s ? s : "";
  tcq_string_free(s);
  return out;
}

}  // namespace

TEST_SUITE("capi") {

TEST_CASE("version and status names") {
  CHECK(std::string(tcq_version()).size() > 0);
  CHECK(std::string(tcq_status_name(TCQ_OK)) == "ok");
  CHECK(std::string(tcq_status_name(TCQ_ERR_USAGE)) == "usage");
}

TEST_CASE("device handle") {
  tcq_device* d = nullptr;
  REQUIRE(tcq_device_load("paper_device", &d) == TCQ_OK);
  double g = 0.0;
  REQUIRE(tcq_effective_coupling_mhz(d, 4.926, 5.905, 4.926, &g) == TCQ_OK);
  CHECK(g == doctest::Approx(6.74 - 76.9 * 76.9 / 979.0));
  double off = 0.0;
  REQUIRE(tcq_find_coupler_off(d, 4.926, 4.926, TCQ_OFF_SWAP_COUPLING, &off) == TCQ_OK);
  CHECK(off == doctest::Approx(5.80339).epsilon(1e-5));
  double zz = 1.0;
  REQUIRE(tcq_zz_exact_mhz(d, 4.961, 5.977, 4.926, &zz) == TCQ_OK);
  CHECK(std::isfinite(zz));

  char* report = nullptr;
  REQUIRE(tcq_device_report(d, &report) == TCQ_OK);
  CHECK(take(report).empty());
  REQUIRE(tcq_device_set(d, "q1.t2_us=40") == TCQ_OK);
  REQUIRE(tcq_device_report(d, &report) == TCQ_OK);
  CHECK(take(report).find("q1.t2_us") != std::string::npos);

  CHECK(tcq_device_set(d, "q1.t2_sec=4") == TCQ_ERR_CONFIGURATION);
  CHECK(std::string(tcq_last_error()).find("q1.t2_us") != std::string::npos);

  char* yaml = nullptr;
  REQUIRE(tcq_device_to_yaml(d, &yaml) == TCQ_OK);
  CHECK(take(yaml).find("t2_us: 40") != std::string::npos);
  tcq_device_free(d);
}

TEST_CASE("argument errors") {
  CHECK(tcq_device_load(nullptr, nullptr) == TCQ_ERR_NULL_ARGUMENT);
  tcq_device* d = nullptr;
  CHECK(tcq_device_load("/no/such/file.yaml", &d) != TCQ_OK);
  CHECK(d == nullptr);
  CHECK(tcq_experiment_create("bogus", nullptr) == TCQ_ERR_NULL_ARGUMENT);
  tcq_device_free(nullptr);
  tcq_experiment_free(nullptr);
}

TEST_CASE("experiment handle") {
  REQUIRE(tcq_experiment_count() == 12);
  CHECK(std::string(tcq_experiment_name(0)) == "coupling-scan");
  CHECK(tcq_experiment_name(99) == nullptr);

  tcq_experiment* e = nullptr;
  REQUIRE(tcq_experiment_create("zz-scan", &e) == TCQ_OK);
  const auto dir = std::filesystem::temp_directory_path() / "tcq_capi_test";
  std::filesystem::remove_all(dir);
  REQUIRE(tcq_experiment_set_output(e, dir.c_str()) == TCQ_OK);
  REQUIRE(tcq_experiment_set_seed(e, 7) == TCQ_OK);
  REQUIRE(tcq_experiment_set_jobs(e, 1) == TCQ_OK);
  char* report = nullptr;
  REQUIRE(tcq_experiment_validate(e, &report) == TCQ_OK);
  CHECK(take(report).empty());
  char* summary = nullptr;
  REQUIRE(tcq_experiment_run(e, &summary) == TCQ_OK);
  CHECK(take(summary).find("zz_zero_ghz") != std::string::npos);
  CHECK(std::filesystem::exists(dir / "zz_scan.csv"));
  CHECK(std::filesystem::exists(dir / "manifest.json"));

  REQUIRE(tcq_experiment_add_override(e, "c.t2_us=11") == TCQ_OK);
  REQUIRE(tcq_experiment_validate(e, &report) == TCQ_OK);
  CHECK(take(report).find("c.t2_us") != std::string::npos);
  tcq_experiment_free(e);

  e = nullptr;
  REQUIRE(tcq_experiment_create("no-such-experiment", &e) == TCQ_OK);
  CHECK(tcq_experiment_run(e, &summary) == TCQ_ERR_USAGE);
  tcq_experiment_free(e);
  std::filesystem::remove_all(dir);
}

TEST_CASE("experiment from yaml") {
  const auto path = std::filesystem::temp_directory_path() / "tcq_capi_exp.yaml";
  {
    std::ofstream f(path);
    f << "name: coupling-scan\ndevice: paper_device\noverrides:\n  - coupling.g12_mhz=6.0\nseed: 3\njobs: 1\n";
  }
  tcq_experiment* e = nullptr;
  REQUIRE(tcq_experiment_load(path.c_str(), &e) == TCQ_OK);
  char* report = nullptr;
  REQUIRE(tcq_experiment_validate(e, &report) == TCQ_OK);
  CHECK(take(report).empty());
  tcq_experiment_free(e);
  {
    std::ofstream f(path);
    f << "name: coupling-scan\ncolour: blue\n";
  }
  CHECK(tcq_experiment_load(path.c_str(), &e) == TCQ_ERR_CONFIGURATION);
  std::filesystem::remove(path);
}

TEST_CASE("plot templates") {
  char* t = nullptr;
  REQUIRE(tcq_plot_template("chevron", &t) == TCQ_OK);
  CHECK(take(t).find("chevron.csv") != std::string::npos);
}

}
