// Copyright 2026 The qmtk Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/*
 * C interface to the qmtk measurement-theory toolkit.
 *
 * Objects are opaque handles released with the matching *_free function.
 * Every fallible call returns a qmtk_status; on failure a message is
 * available from qmtk_last_error() on the calling thread. Complex matrices
 * cross the boundary as row-major arrays of interleaved (re, im) doubles,
 * length 2 * rows * cols. Strings returned through char ** are owned by the
 * caller and released with qmtk_string_free.
 */
#ifndef QMTK_QMTK_H
#define QMTK_QMTK_H

#include <stddef.h>
#include <stdint.h>

#if defined(QMTK_BUILDING_LIBRARY)
#define QMTK_API __attribute__((visibility("default")))
#else
#define QMTK_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum qmtk_status {
    QMTK_OK = 0,
    QMTK_ERR_SHAPE = 1,
    QMTK_ERR_INVALID_OPERATOR = 2,
    QMTK_ERR_INVALID_STATE = 3,
    QMTK_ERR_DOMAIN = 4,
    QMTK_ERR_NUMERICAL = 5,
    QMTK_ERR_UNDEFINED_JOINT = 6,
    QMTK_ERR_USAGE = 7,
    QMTK_ERR_PARSE = 8,
    QMTK_ERR_NULL_ARGUMENT = 9,
    QMTK_ERR_BUFFER_TOO_SMALL = 10,
    QMTK_ERR_INTERNAL = 11
} qmtk_status;

typedef struct qmtk_op qmtk_op;
typedef struct qmtk_instrument qmtk_instrument;
typedef struct qmtk_process qmtk_process;
typedef struct qmtk_report qmtk_report;

typedef struct qmtk_error_report {
    double epsilon;
    double eta;
    double sigma_a;
    double sigma_b;
    double commutator_bound;
    double mean_noise;
    double mean_disturbance;
} qmtk_error_report;

QMTK_API const char *qmtk_version(void);
QMTK_API const char *qmtk_last_error(void);
QMTK_API const char *qmtk_status_string(qmtk_status status);
QMTK_API void qmtk_string_free(char *s);

/* Operators */
QMTK_API qmtk_status qmtk_op_create(size_t rows, size_t cols, const double *data, qmtk_op **out);
QMTK_API void qmtk_op_free(qmtk_op *op);
QMTK_API qmtk_status qmtk_op_shape(const qmtk_op *op, size_t *rows, size_t *cols);
QMTK_API qmtk_status qmtk_op_data(const qmtk_op *op, double *buffer, size_t length);
/* 1/2 ||a - b||_1 */
QMTK_API qmtk_status qmtk_trace_distance(const qmtk_op *a, const qmtk_op *b, double *out);
/* keep_first != 0 keeps the first factor of C^d1 (x) C^d2. */
QMTK_API qmtk_status qmtk_partial_trace(const qmtk_op *x, size_t d1, size_t d2, int keep_first, qmtk_op **out);

/* Instruments */
QMTK_API qmtk_status qmtk_instrument_from_json(const char *json, qmtk_instrument **out);
QMTK_API qmtk_status qmtk_instrument_to_json(const qmtk_instrument *inst, char **out);
QMTK_API qmtk_status qmtk_instrument_random(size_t dim, size_t outcomes, size_t kraus_per_outcome, uint64_t seed,
                                            qmtk_instrument **out);
QMTK_API void qmtk_instrument_free(qmtk_instrument *inst);
/* Probability of the outcome value and the unnormalized post-measurement
 * state I({value}) rho; post may be NULL. */
QMTK_API qmtk_status qmtk_instrument_apply(const qmtk_instrument *inst, double value, const qmtk_op *rho,
                                           double *prob, qmtk_op **post);
QMTK_API qmtk_status qmtk_instrument_is_cp(const qmtk_instrument *inst, int *completely_positive,
                                           double *min_choi_eigenvalue);
/* CP check of the transpose composed with the Lueders instrument of a. */
QMTK_API qmtk_status qmtk_transpose_instrument_check(const qmtk_op *a, int *completely_positive,
                                                     double *min_choi_eigenvalue);
QMTK_API qmtk_status qmtk_superoperator_distance(const qmtk_instrument *a, const qmtk_instrument *b, double *out);

/* Measuring processes */
QMTK_API qmtk_status qmtk_process_from_json(const char *json, qmtk_process **out);
QMTK_API qmtk_status qmtk_process_to_json(const qmtk_process *mp, char **out);
QMTK_API qmtk_status qmtk_process_random(size_t object_dim, size_t probe_dim, uint64_t seed, qmtk_process **out);
QMTK_API void qmtk_process_free(qmtk_process *mp);
QMTK_API qmtk_status qmtk_process_of_instrument(const qmtk_instrument *inst, qmtk_process **out);
QMTK_API qmtk_status qmtk_instrument_of_process(const qmtk_process *mp, qmtk_instrument **out);
/* Error report of the process for observables a, b in state rho; holds is
 * set to the universal relation verdict. */
QMTK_API qmtk_status qmtk_universal_relation(const qmtk_process *mp, const qmtk_op *a, const qmtk_op *b,
                                             const qmtk_op *rho, qmtk_error_report *report, int *holds);

/* Bounds */
QMTK_API qmtk_status qmtk_gate_infidelity_bound(double theta, int n, double *out);
QMTK_API qmtk_status qmtk_yanase_bound(double sigma_l2, double hbar, double *out);

/* Experiments. hbar_override <= 0 keeps the configured value. */
QMTK_API qmtk_status qmtk_run_experiment(const char *config_json, double hbar_override, qmtk_report **out);
QMTK_API qmtk_status qmtk_random_audit(const char *suite, uint64_t seed, size_t trials, double hbar,
                                       qmtk_report **out);
QMTK_API void qmtk_report_free(qmtk_report *report);
QMTK_API int qmtk_report_passed(const qmtk_report *report);
QMTK_API size_t qmtk_report_violations(const qmtk_report *report);
QMTK_API qmtk_status qmtk_report_json(const qmtk_report *report, char **out);
QMTK_API qmtk_status qmtk_report_csv(const qmtk_report *report, char **out);
QMTK_API qmtk_status qmtk_report_summary_number(const qmtk_report *report, const char *key, double *out);

#ifdef __cplusplus
}
#endif

#endif /* QMTK_QMTK_H */
