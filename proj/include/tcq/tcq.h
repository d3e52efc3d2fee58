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


#ifndef TCQ_TCQ_H_
#define TCQ_TCQ_H_

#include <stddef.h>
#include <stdint.h>

#if defined(TCQ_BUILDING_LIBRARY)
#define TCQ_API __attribute__((visibility("default")))
#else
#define TCQ_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes. Values match the library's internal error codes. */
typedef enum tcq_status {
  TCQ_OK = 0,
  TCQ_ERR_INTERNAL = 1,
  TCQ_ERR_NULL_ARGUMENT = 2,
  TCQ_ERR_INVALID_DIMENSION = 10,
  TCQ_ERR_SHAPE = 11,
  TCQ_ERR_INDEX = 12,
  TCQ_ERR_INVALID_STATE = 13,
  TCQ_ERR_OUT_OF_BRANCH = 20,
  TCQ_ERR_UNREACHABLE_FREQUENCY = 21,
  TCQ_ERR_CONFIGURATION = 22,
  TCQ_ERR_SINGULAR_DETUNING = 30,
  TCQ_ERR_RESONANCE = 31,
  TCQ_ERR_STATE_IDENTIFICATION = 32,
  TCQ_ERR_NO_OFF_POINT = 33,
  TCQ_ERR_INVALID_PULSE = 40,
  TCQ_ERR_TOO_FAST_RAMP = 41,
  TCQ_ERR_INCOMPATIBLE_GRID = 42,
  TCQ_ERR_DDR_INFEASIBLE = 43,
  TCQ_ERR_INVALID_TRAJECTORY = 44,
  TCQ_ERR_INTEGRATOR_FAILURE = 50,
  TCQ_ERR_LOW_CONTRAST = 51,
  TCQ_ERR_INFEASIBLE = 60,
  TCQ_ERR_CALIBRATION = 61,
  TCQ_ERR_NONADIABATIC = 62,
  TCQ_ERR_INVERSION = 70,
  TCQ_ERR_TOMOGRAPHY = 71,
  TCQ_ERR_BASIS_MISMATCH = 72,
  TCQ_ERR_BENCHMARKING = 73,
  TCQ_ERR_USAGE = 80,
  TCQ_ERR_IO = 81
} tcq_status;

typedef enum tcq_off_criterion {
  TCQ_OFF_SWAP_COUPLING = 0,
  TCQ_OFF_ZZ_EXACT = 1,
  TCQ_OFF_SWAP_EXACT = 2
} tcq_off_criterion;

typedef struct tcq_device tcq_device;
typedef struct tcq_experiment tcq_experiment;

TCQ_API const char* tcq_version(void);
TCQ_API const char* tcq_status_name(int status);
/* Message of the last failed call on this thread; never NULL. */
TCQ_API const char* tcq_last_error(void);
/* Frees strings returned through char** out-parameters. */
TCQ_API void tcq_string_free(char* s);

/* Device: "paper_device" or a YAML path. */
TCQ_API int tcq_device_load(const char* preset_or_path, tcq_device** out);
TCQ_API void tcq_device_free(tcq_device* d);
/* "key=value" with a dotted key path. */
TCQ_API int tcq_device_set(tcq_device* d, const char* assignment);
TCQ_API int tcq_device_to_yaml(const tcq_device* d, char** out);
/* Newline-separated list of invariant violations; empty when valid. */
TCQ_API int tcq_device_report(const tcq_device* d, char** out);

/* Frequencies in GHz, results in MHz or GHz as named. */
TCQ_API int tcq_effective_coupling_mhz(const tcq_device* d, double q1, double c, double q2, double* out);
TCQ_API int tcq_zz_exact_mhz(const tcq_device* d, double q1, double c, double q2, double* out);
TCQ_API int tcq_find_coupler_off(const tcq_device* d, double q1, double q2, int criterion, double* out_ghz);

TCQ_API size_t tcq_experiment_count(void);
TCQ_API const char* tcq_experiment_name(size_t i);
TCQ_API int tcq_experiment_create(const char* name, tcq_experiment** out);
/* Reads name, device, overrides, output, seed and jobs from a YAML file. */
TCQ_API int tcq_experiment_load(const char* path, tcq_experiment** out);
TCQ_API void tcq_experiment_free(tcq_experiment* e);
TCQ_API int tcq_experiment_set_name(tcq_experiment* e, const char* name);
TCQ_API int tcq_experiment_set_device(tcq_experiment* e, const char* preset_or_path);
TCQ_API int tcq_experiment_add_override(tcq_experiment* e, const char* assignment);
TCQ_API int tcq_experiment_set_output(tcq_experiment* e, const char* dir);
TCQ_API int tcq_experiment_set_seed(tcq_experiment* e, uint64_t seed);
/* 0 selects all available cores. */
TCQ_API int tcq_experiment_set_jobs(tcq_experiment* e, int jobs);
TCQ_API int tcq_experiment_validate(const tcq_experiment* e, char** report);
/* Runs the experiment; *summary receives a JSON object. */
TCQ_API int tcq_experiment_run(const tcq_experiment* e, char** summary);
TCQ_API int tcq_plot_template(const char* name, char** out);

#ifdef __cplusplus
}
#endif

#endif  // TCQ_TCQ_H_
