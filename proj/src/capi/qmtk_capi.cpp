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

#include "qmtk/qmtk.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include "qmtk/conservation.hpp"
#include "qmtk/errdist.hpp"
#include "qmtk/experiments.hpp"
#include "qmtk/instruments.hpp"
#include "qmtk/models.hpp"
#include "qmtk/serialize.hpp"

struct qmtk_op {
    qmtk::Op value;
};
struct qmtk_instrument {
    qmtk::CpInstrument value;
};
struct qmtk_process {
    qmtk::MeasuringProcess value;
};
struct qmtk_report {
    qmtk::Report value;
};

namespace {

thread_local std::string g_last_error;

qmtk_status status_of(qmtk::ErrorKind kind) {
    switch (kind) {
    case qmtk::ErrorKind::Shape:
        return QMTK_ERR_SHAPE;
    case qmtk::ErrorKind::InvalidOperator:
        return QMTK_ERR_INVALID_OPERATOR;
    case qmtk::ErrorKind::InvalidState:
        return QMTK_ERR_INVALID_STATE;
    case qmtk::ErrorKind::Domain:
        return QMTK_ERR_DOMAIN;
    case qmtk::ErrorKind::NumericalConsistency:
        return QMTK_ERR_NUMERICAL;
    case qmtk::ErrorKind::UndefinedJointDistribution:
        return QMTK_ERR_UNDEFINED_JOINT;
    case qmtk::ErrorKind::Usage:
        return QMTK_ERR_USAGE;
    case qmtk::ErrorKind::Parse:
        return QMTK_ERR_PARSE;
    }
    return QMTK_ERR_INTERNAL;
}

qmtk_status fail(qmtk_status s, const char *msg) {
    g_last_error = msg;
    return s;
}

template <class F>
qmtk_status guard(F &&f) {
    try {
        g_last_error.clear();
        f();
        return QMTK_OK;
    } catch (const qmtk::Error &e) {
        return fail(status_of(e.kind()), e.what());
    } catch (const std::bad_alloc &) {
        return fail(QMTK_ERR_INTERNAL, "out of memory");
    } catch (const std::exception &e) {
        return fail(QMTK_ERR_INTERNAL, e.what());
    } catch (...) {
        return fail(QMTK_ERR_INTERNAL, "unknown error");
    }
}

char *dup_string(const std::string &s) {
    char *out = static_cast<char *>(std::malloc(s.size() + 1));
    if (!out) throw std::bad_alloc();
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

#define QMTK_REQUIRE(...)                                                      \
    do {                                                                       \
        const void *ptrs_[] = {__VA_ARGS__};                                   \
        for (const void *p_ : ptrs_)                                           \
            if (!p_) return fail(QMTK_ERR_NULL_ARGUMENT, "null argument");     \
    } while (0)

}  // namespace

extern "C" {

const char *qmtk_version(void) {
    return "0.1.0";
}

const char *qmtk_last_error(void) {
    return g_last_error.c_str();
}

const char *qmtk_status_string(qmtk_status status) {
    switch (status) {
    case QMTK_OK:
        return "ok";
    case QMTK_ERR_SHAPE:
        return "shape error";
    case QMTK_ERR_INVALID_OPERATOR:
        return "invalid operator";
    case QMTK_ERR_INVALID_STATE:
        return "invalid state";
    case QMTK_ERR_DOMAIN:
        return "domain error";
    case QMTK_ERR_NUMERICAL:
        return "numerical consistency error";
    case QMTK_ERR_UNDEFINED_JOINT:
        return "undefined joint distribution";
    case QMTK_ERR_USAGE:
        return "usage error";
    case QMTK_ERR_PARSE:
        return "parse error";
    case QMTK_ERR_NULL_ARGUMENT:
        return "null argument";
    case QMTK_ERR_BUFFER_TOO_SMALL:
        return "buffer too small";
    case QMTK_ERR_INTERNAL:
        return "internal error";
    }
    return "unknown status";
}

void qmtk_string_free(char *s) {
    std::free(s);
}

// --- operators -------------------------------------------------------------

qmtk_status qmtk_op_create(size_t rows, size_t cols, const double *data, qmtk_op **out) {
    QMTK_REQUIRE(data, out);
    if (rows == 0 || cols == 0) return fail(QMTK_ERR_SHAPE, "operator dimensions must be positive");
    return guard([&] {
        qmtk::Op x(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
        for (size_t r = 0; r < rows; ++r)
            for (size_t c = 0; c < cols; ++c) {
                const size_t k = 2 * (r * cols + c);
                x(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = qmtk::Complex(data[k], data[k + 1]);
            }
        *out = new qmtk_op{std::move(x)};
    });
}

void qmtk_op_free(qmtk_op *op) {
    delete op;
}

qmtk_status qmtk_op_shape(const qmtk_op *op, size_t *rows, size_t *cols) {
    QMTK_REQUIRE(op, rows, cols);
    *rows = static_cast<size_t>(op->value.rows());
    *cols = static_cast<size_t>(op->value.cols());
    return QMTK_OK;
}

qmtk_status qmtk_op_data(const qmtk_op *op, double *buffer, size_t length) {
    QMTK_REQUIRE(op, buffer);
    const size_t rows = static_cast<size_t>(op->value.rows()), cols = static_cast<size_t>(op->value.cols());
    if (length < 2 * rows * cols) return fail(QMTK_ERR_BUFFER_TOO_SMALL, "buffer shorter than 2 * rows * cols");
    for (size_t r = 0; r < rows; ++r)
        for (size_t c = 0; c < cols; ++c) {
            const auto v = op->value(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
            buffer[2 * (r * cols + c)] = v.real();
            buffer[2 * (r * cols + c) + 1] = v.imag();
        }
    return QMTK_OK;
}

qmtk_status qmtk_trace_distance(const qmtk_op *a, const qmtk_op *b, double *out) {
    QMTK_REQUIRE(a, b, out);
    return guard([&] { *out = qmtk::trace_distance(a->value, b->value); });
}

qmtk_status qmtk_partial_trace(const qmtk_op *x, size_t d1, size_t d2, int keep_first, qmtk_op **out) {
    QMTK_REQUIRE(x, out);
    return guard([&] {
        *out = new qmtk_op{qmtk::partial_trace(x->value, d1, d2,
                                               keep_first ? qmtk::Subsystem::First : qmtk::Subsystem::Second)};
    });
}

// --- instruments -----------------------------------------------------------

qmtk_status qmtk_instrument_from_json(const char *json, qmtk_instrument **out) {
    QMTK_REQUIRE(json, out);
    return guard([&] { *out = new qmtk_instrument{qmtk::instrument_from_json(json)}; });
}

qmtk_status qmtk_instrument_to_json(const qmtk_instrument *inst, char **out) {
    QMTK_REQUIRE(inst, out);
    return guard([&] { *out = dup_string(qmtk::instrument_to_json(inst->value)); });
}

qmtk_status qmtk_instrument_random(size_t dim, size_t outcomes, size_t kraus_per_outcome, uint64_t seed,
                                   qmtk_instrument **out) {
    QMTK_REQUIRE(out);
    return guard(
        [&] { *out = new qmtk_instrument{qmtk::random_cp_instrument(dim, outcomes, kraus_per_outcome, seed)}; });
}

void qmtk_instrument_free(qmtk_instrument *inst) {
    delete inst;
}

qmtk_status qmtk_instrument_apply(const qmtk_instrument *inst, double value, const qmtk_op *rho, double *prob,
                                  qmtk_op **post) {
    QMTK_REQUIRE(inst, rho, prob);
    return guard([&] {
        const auto r = qmtk::apply_instrument(inst->value, qmtk::OutcomeSet::of({value}), qmtk::DensityState(rho->value));
        *prob = r.prob;
        if (post) *post = new qmtk_op{r.unnormalized};
    });
}

qmtk_status qmtk_instrument_is_cp(const qmtk_instrument *inst, int *completely_positive,
                                  double *min_choi_eigenvalue) {
    QMTK_REQUIRE(inst, completely_positive, min_choi_eigenvalue);
    return guard([&] {
        const auto chk = qmtk::is_completely_positive(qmtk::DlInstrument::from_cp(inst->value));
        *completely_positive = chk.completely_positive ? 1 : 0;
        *min_choi_eigenvalue = chk.min_choi_eigenvalue;
    });
}

qmtk_status qmtk_transpose_instrument_check(const qmtk_op *a, int *completely_positive,
                                            double *min_choi_eigenvalue) {
    QMTK_REQUIRE(a, completely_positive, min_choi_eigenvalue);
    return guard([&] {
        qmtk::require_square(a->value, "transpose check");
        if (!qmtk::is_hermitian(a->value)) throw qmtk::InvalidOperatorError("transpose check: operator is not Hermitian");
        const auto chk = qmtk::is_completely_positive(
            qmtk::transpose_composed_instrument(qmtk::Observable::from_hermitian(a->value)));
        *completely_positive = chk.completely_positive ? 1 : 0;
        *min_choi_eigenvalue = chk.min_choi_eigenvalue;
    });
}

qmtk_status qmtk_superoperator_distance(const qmtk_instrument *a, const qmtk_instrument *b, double *out) {
    QMTK_REQUIRE(a, b, out);
    return guard([&] { *out = qmtk::superoperator_distance(a->value, b->value); });
}

// --- processes -------------------------------------------------------------

qmtk_status qmtk_process_from_json(const char *json, qmtk_process **out) {
    QMTK_REQUIRE(json, out);
    return guard([&] { *out = new qmtk_process{qmtk::process_from_json(json)}; });
}

qmtk_status qmtk_process_to_json(const qmtk_process *mp, char **out) {
    QMTK_REQUIRE(mp, out);
    return guard([&] { *out = dup_string(qmtk::process_to_json(mp->value)); });
}

qmtk_status qmtk_process_random(size_t object_dim, size_t probe_dim, uint64_t seed, qmtk_process **out) {
    QMTK_REQUIRE(out);
    return guard([&] { *out = new qmtk_process{qmtk::random_measuring_process(object_dim, probe_dim, seed)}; });
}

void qmtk_process_free(qmtk_process *mp) {
    delete mp;
}

qmtk_status qmtk_process_of_instrument(const qmtk_instrument *inst, qmtk_process **out) {
    QMTK_REQUIRE(inst, out);
    return guard([&] { *out = new qmtk_process{qmtk::process_of_instrument(inst->value)}; });
}

qmtk_status qmtk_instrument_of_process(const qmtk_process *mp, qmtk_instrument **out) {
    QMTK_REQUIRE(mp, out);
    return guard([&] { *out = new qmtk_instrument{qmtk::instrument_of_process(mp->value)}; });
}

qmtk_status qmtk_universal_relation(const qmtk_process *mp, const qmtk_op *a, const qmtk_op *b, const qmtk_op *rho,
                                    qmtk_error_report *report, int *holds) {
    QMTK_REQUIRE(mp, a, b, rho, report, holds);
    return guard([&] {
        for (const auto *x : {a, b}) {
            qmtk::require_square(x->value, "universal relation");
            if (!qmtk::is_hermitian(x->value)) throw qmtk::InvalidOperatorError("universal relation: observable is not Hermitian");
        }
        const auto chk = qmtk::check_universal_relation(mp->value, qmtk::Observable::from_hermitian(a->value),
                                                        qmtk::Observable::from_hermitian(b->value),
                                                        qmtk::DensityState(rho->value));
        const auto &r = chk.report;
        *report = {r.epsilon, r.eta, r.sigma_a, r.sigma_b, r.commutator_bound, r.mean_noise, r.mean_disturbance};
        *holds = chk.holds ? 1 : 0;
    });
}

// --- bounds ----------------------------------------------------------------

qmtk_status qmtk_gate_infidelity_bound(double theta, int n, double *out) {
    QMTK_REQUIRE(out);
    return guard([&] { *out = qmtk::gate_infidelity_bound(theta, n); });
}

qmtk_status qmtk_yanase_bound(double sigma_l2, double hbar, double *out) {
    QMTK_REQUIRE(out);
    return guard([&] { *out = qmtk::yanase_bound(sigma_l2, hbar); });
}

// --- experiments -----------------------------------------------------------

qmtk_status qmtk_run_experiment(const char *config_json, double hbar_override, qmtk_report **out) {
    QMTK_REQUIRE(config_json, out);
    return guard([&] {
        qmtk::RunConfig c = qmtk::parse_run_config(config_json);
        if (hbar_override > 0.0) c.hbar = hbar_override;
        *out = new qmtk_report{qmtk::run_experiment(c)};
    });
}

qmtk_status qmtk_random_audit(const char *suite, uint64_t seed, size_t trials, double hbar, qmtk_report **out) {
    QMTK_REQUIRE(suite, out);
    if (trials == 0) return fail(QMTK_ERR_USAGE, "trials must be >= 1");
    return guard([&] { *out = new qmtk_report{qmtk::random_audit(suite, seed, trials, hbar)}; });
}

void qmtk_report_free(qmtk_report *report) {
    delete report;
}

int qmtk_report_passed(const qmtk_report *report) {
    return report && report->value.passed() ? 1 : 0;
}

size_t qmtk_report_violations(const qmtk_report *report) {
    return report ? report->value.violations : 0;
}

qmtk_status qmtk_report_json(const qmtk_report *report, char **out) {
    QMTK_REQUIRE(report, out);
    return guard([&] { *out = dup_string(report->value.to_json()); });
}

qmtk_status qmtk_report_csv(const qmtk_report *report, char **out) {
    QMTK_REQUIRE(report, out);
    return guard([&] { *out = dup_string(report->value.to_csv()); });
}

qmtk_status qmtk_report_summary_number(const qmtk_report *report, const char *key, double *out) {
    QMTK_REQUIRE(report, key, out);
    return guard([&] { *out = report->value.number(key); });
}

}  // extern "C"
