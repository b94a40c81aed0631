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

#include <gtest/gtest.h>

#include <cmath>
#include <string>
#include <vector>

#include "qmtk/qmtk.h"

namespace {

// Interleaved re/im, row-major.
qmtk_op *make_op(size_t rows, size_t cols, std::vector<double> data) {
    qmtk_op *op = nullptr;
    EXPECT_EQ(qmtk_op_create(rows, cols, data.data(), &op), QMTK_OK);
    return op;
}

qmtk_op *pauli_z() {
    return make_op(2, 2, {1, 0, 0, 0, 0, 0, -1, 0});
}
qmtk_op *pauli_x() {
    return make_op(2, 2, {0, 0, 1, 0, 1, 0, 0, 0});
}
qmtk_op *pure_zero() {
    return make_op(2, 2, {1, 0, 0, 0, 0, 0, 0, 0});
}

std::string take(char *s) {
    std::string out(s ? s : "");
    qmtk_string_free(s);
    return out;
}

}  // namespace

TEST(CApi, VersionAndStatusStrings) {
    EXPECT_STREQ(qmtk_version(), "0.1.0");
    EXPECT_NE(std::string(qmtk_status_string(QMTK_ERR_PARSE)), std::string(qmtk_status_string(QMTK_OK)));
}

TEST(CApi, NullArgumentsAreRejected) {
    qmtk_op *op = nullptr;
    EXPECT_EQ(qmtk_op_create(2, 2, nullptr, &op), QMTK_ERR_NULL_ARGUMENT);
    EXPECT_EQ(op, nullptr);
    double d = 0;
    EXPECT_EQ(qmtk_trace_distance(nullptr, nullptr, &d), QMTK_ERR_NULL_ARGUMENT);
    EXPECT_EQ(qmtk_report_passed(nullptr), 0);
    qmtk_op_free(nullptr);
    qmtk_report_free(nullptr);
}

TEST(CApi, OperatorsAndTraceDistance) {
    qmtk_op *z = pure_zero();
    qmtk_op *one = make_op(2, 2, {0, 0, 0, 0, 0, 0, 1, 0});
    size_t r = 0, c = 0;
    ASSERT_EQ(qmtk_op_shape(z, &r, &c), QMTK_OK);
    EXPECT_EQ(r, 2u);
    EXPECT_EQ(c, 2u);
    double dist = -1;
    ASSERT_EQ(qmtk_trace_distance(z, one, &dist), QMTK_OK);
    EXPECT_NEAR(dist, 1.0, 1e-14);
    std::vector<double> buf(8);
    EXPECT_EQ(qmtk_op_data(z, buf.data(), 3), QMTK_ERR_BUFFER_TOO_SMALL);
    ASSERT_EQ(qmtk_op_data(z, buf.data(), buf.size()), QMTK_OK);
    EXPECT_EQ(buf[0], 1.0);

    qmtk_op *wrong = make_op(3, 3, std::vector<double>(18, 0.0));
    EXPECT_EQ(qmtk_trace_distance(z, wrong, &dist), QMTK_ERR_SHAPE);
    EXPECT_FALSE(std::string(qmtk_last_error()).empty());

    // Partial trace of |00><00| + |11><11| over either factor is the identity / 2 scaled.
    std::vector<double> bell(32, 0.0);
    bell[0] = bell[6] = bell[24] = bell[30] = 0.5;
    qmtk_op *b = make_op(4, 4, bell);
    qmtk_op *red = nullptr;
    ASSERT_EQ(qmtk_partial_trace(b, 2, 2, 1, &red), QMTK_OK);
    ASSERT_EQ(qmtk_op_data(red, buf.data(), buf.size()), QMTK_OK);
    EXPECT_NEAR(buf[0], 0.5, 1e-15);
    EXPECT_NEAR(buf[6], 0.5, 1e-15);
    EXPECT_NEAR(buf[2], 0.0, 1e-15);
    EXPECT_EQ(qmtk_partial_trace(b, 3, 2, 1, &red), QMTK_ERR_SHAPE);
    for (qmtk_op *p : {z, one, wrong, b, red}) qmtk_op_free(p);
}

TEST(CApi, InstrumentJsonAndApply) {
    qmtk_instrument *inst = nullptr;
    ASSERT_EQ(qmtk_instrument_random(2, 2, 1, 4, &inst), QMTK_OK);
    char *text = nullptr;
    ASSERT_EQ(qmtk_instrument_to_json(inst, &text), QMTK_OK);
    const std::string json = take(text);
    qmtk_instrument *back = nullptr;
    ASSERT_EQ(qmtk_instrument_from_json(json.c_str(), &back), QMTK_OK);
    double dist = -1;
    ASSERT_EQ(qmtk_superoperator_distance(inst, back, &dist), QMTK_OK);
    EXPECT_LT(dist, 1e-15);

    int cp = 0;
    double min_eig = 0;
    ASSERT_EQ(qmtk_instrument_is_cp(inst, &cp, &min_eig), QMTK_OK);
    EXPECT_EQ(cp, 1);

    qmtk_op *rho = pure_zero();
    double p = 0;
    qmtk_op *post = nullptr;
    ASSERT_EQ(qmtk_instrument_apply(inst, 0.0, rho, &p, &post), QMTK_OK);
    EXPECT_GE(p, 0.0);
    EXPECT_LE(p, 1.0);
    EXPECT_NE(post, nullptr);
    EXPECT_EQ(qmtk_instrument_apply(inst, 0.0, rho, &p, nullptr), QMTK_OK);

    qmtk_instrument *bad = nullptr;
    EXPECT_EQ(qmtk_instrument_from_json("{not json", &bad), QMTK_ERR_PARSE);
    EXPECT_EQ(bad, nullptr);
    qmtk_op_free(rho);
    qmtk_op_free(post);
    qmtk_instrument_free(inst);
    qmtk_instrument_free(back);
}

TEST(CApi, TransposeInstrumentIsNotCp) {
    // Degenerate observable: the single outcome map is the transpose itself.
    qmtk_op *x = make_op(2, 2, {1, 0, 0, 0, 0, 0, 1, 0});
    int cp = 1;
    double min_eig = 0;
    ASSERT_EQ(qmtk_transpose_instrument_check(x, &cp, &min_eig), QMTK_OK);
    EXPECT_EQ(cp, 0);
    EXPECT_NEAR(min_eig, -0.5, 1e-9);
    qmtk_op_free(x);
    qmtk_op *z = pauli_z();
    ASSERT_EQ(qmtk_transpose_instrument_check(z, &cp, &min_eig), QMTK_OK);
    EXPECT_EQ(cp, 1);
    qmtk_op_free(z);
}

TEST(CApi, ProcessRoundTripAndUniversalRelation) {
    qmtk_process *mp = nullptr;
    ASSERT_EQ(qmtk_process_random(2, 2, 8, &mp), QMTK_OK);
    qmtk_instrument *inst = nullptr;
    ASSERT_EQ(qmtk_instrument_of_process(mp, &inst), QMTK_OK);
    qmtk_process *mp2 = nullptr;
    ASSERT_EQ(qmtk_process_of_instrument(inst, &mp2), QMTK_OK);
    qmtk_instrument *inst2 = nullptr;
    ASSERT_EQ(qmtk_instrument_of_process(mp2, &inst2), QMTK_OK);
    double dist = -1;
    ASSERT_EQ(qmtk_superoperator_distance(inst, inst2, &dist), QMTK_OK);
    EXPECT_LT(dist, 1e-10);

    char *text = nullptr;
    ASSERT_EQ(qmtk_process_to_json(mp, &text), QMTK_OK);
    qmtk_process *mp3 = nullptr;
    EXPECT_EQ(qmtk_process_from_json(take(text).c_str(), &mp3), QMTK_OK);

    qmtk_op *a = pauli_z(), *b = pauli_x(), *rho = pure_zero();
    qmtk_error_report rep{};
    int holds = 0;
    ASSERT_EQ(qmtk_universal_relation(mp, a, b, rho, &rep, &holds), QMTK_OK);
    EXPECT_EQ(holds, 1);
    EXPECT_GE(rep.epsilon, 0.0);
    EXPECT_NEAR(rep.sigma_a, 0.0, 1e-12);
    EXPECT_NEAR(rep.sigma_b, 1.0, 1e-12);
    qmtk_op *bad_rho = make_op(2, 2, {2, 0, 0, 0, 0, 0, 0, 0});
    EXPECT_EQ(qmtk_universal_relation(mp, a, b, bad_rho, &rep, &holds), QMTK_ERR_INVALID_STATE);
    for (qmtk_op *p : {a, b, rho, bad_rho}) qmtk_op_free(p);
    qmtk_instrument_free(inst);
    qmtk_instrument_free(inst2);
    qmtk_process_free(mp);
    qmtk_process_free(mp2);
    qmtk_process_free(mp3);
}

TEST(CApi, Bounds) {
    double v = 0;
    ASSERT_EQ(qmtk_gate_infidelity_bound(M_PI, 1, &v), QMTK_OK);
    EXPECT_NEAR(v, 0.125, 1e-15);
    EXPECT_EQ(qmtk_gate_infidelity_bound(4.0, 1, &v), QMTK_ERR_DOMAIN);
    ASSERT_EQ(qmtk_yanase_bound(0.5, 1.0, &v), QMTK_OK);
    EXPECT_NEAR(v, 0.125, 1e-15);
    EXPECT_EQ(qmtk_yanase_bound(-1.0, 1.0, &v), QMTK_ERR_DOMAIN);
}

TEST(CApi, Reports) {
    qmtk_report *r = nullptr;
    ASSERT_EQ(qmtk_random_audit("roundtrip", 3, 5, 1.0, &r), QMTK_OK);
    EXPECT_EQ(qmtk_report_passed(r), 1);
    EXPECT_EQ(qmtk_report_violations(r), 0u);
    char *json = nullptr, *csv = nullptr;
    ASSERT_EQ(qmtk_report_json(r, &json), QMTK_OK);
    ASSERT_EQ(qmtk_report_csv(r, &csv), QMTK_OK);
    EXPECT_NE(take(json).find("\"experiment\""), std::string::npos);
    EXPECT_FALSE(take(csv).empty());
    double v = 0;
    EXPECT_EQ(qmtk_report_summary_number(r, "no-such-key", &v), QMTK_ERR_USAGE);
    qmtk_report_free(r);

    EXPECT_EQ(qmtk_random_audit("no-such-suite", 1, 1, 1.0, &r), QMTK_ERR_USAGE);
    EXPECT_EQ(qmtk_random_audit("roundtrip", 1, 0, 1.0, &r), QMTK_ERR_USAGE);
    EXPECT_EQ(qmtk_run_experiment("{\"experiment\": \"nope\"}", 0.0, &r), QMTK_ERR_USAGE);
    EXPECT_EQ(qmtk_run_experiment("{", 0.0, &r), QMTK_ERR_PARSE);

    ASSERT_EQ(qmtk_run_experiment("{\"experiment\": \"yanase-bound\", \"trials\": 3}", 2.0, &r), QMTK_OK);
    EXPECT_EQ(qmtk_report_passed(r), 1);
    qmtk_report_free(r);
}
