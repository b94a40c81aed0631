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

#include "qmtk/serialize.hpp"

#include "json_io.hpp"

namespace qmtk {

namespace detail {

json op_to_json(const Op &x) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < x.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < x.cols(); ++c) row.push_back({x(r, c).real(), x(r, c).imag()});
        rows.push_back(std::move(row));
    }
    return rows;
}

Op op_from_json(const json &j, const char *what) {
    if (!j.is_array() || j.empty()) throw ParseError(std::string(what) + ": expected a nonempty array of rows");
    const auto rows = static_cast<Eigen::Index>(j.size());
    if (!j[0].is_array()) throw ParseError(std::string(what) + ": expected rows to be arrays");
    const auto cols = static_cast<Eigen::Index>(j[0].size());
    Op x(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
        const json &row = j[static_cast<std::size_t>(r)];
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols)
            throw ParseError(std::string(what) + ": ragged matrix");
        for (Eigen::Index c = 0; c < cols; ++c) {
            const json &e = row[static_cast<std::size_t>(c)];
            if (e.is_number())
                x(r, c) = e.get<double>();
            else if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number())
                x(r, c) = Complex(e[0].get<double>(), e[1].get<double>());
            else
                throw ParseError(std::string(what) + ": entries must be numbers or [re, im] pairs");
        }
    }
    return x;
}

json instrument_to_json(const CpInstrument &inst) {
    json outcomes = json::array();
    for (const auto &o : inst.outcomes()) {
        json kraus = json::array();
        for (const auto &k : o.kraus) kraus.push_back(op_to_json(k));
        outcomes.push_back({{"value", o.value}, {"kraus", std::move(kraus)}});
    }
    return {{"dim", inst.dim()}, {"outcomes", std::move(outcomes)}};
}

CpInstrument instrument_from_json(const json &j) {
    if (!j.is_object() || !j.contains("outcomes") || !j["outcomes"].is_array())
        throw ParseError("instrument: missing \"outcomes\" array");
    std::vector<KrausOutcome> outcomes;
    for (const auto &o : j["outcomes"]) {
        if (!o.contains("value") || !o["value"].is_number() || !o.contains("kraus") || !o["kraus"].is_array())
            throw ParseError("instrument: each outcome needs \"value\" and \"kraus\"");
        KrausOutcome k{o["value"].get<double>(), {}};
        for (const auto &m : o["kraus"]) k.kraus.push_back(op_from_json(m, "instrument kraus"));
        outcomes.push_back(std::move(k));
    }
    CpInstrument inst(std::move(outcomes));
    if (j.contains("dim") && j["dim"].get<std::size_t>() != inst.dim())
        throw ShapeError("instrument: \"dim\" does not match the Kraus operators");
    return inst;
}

json process_to_json(const MeasuringProcess &mp) {
    return {{"object_dim", mp.object_dim()},
            {"probe_state", op_to_json(mp.probe_state().op())},
            {"unitary", op_to_json(mp.unitary())},
            {"meter", op_to_json(mp.meter().op())}};
}

MeasuringProcess process_from_json(const json &j) {
    for (const char *key : {"object_dim", "probe_state", "unitary", "meter"})
        if (!j.is_object() || !j.contains(key)) throw ParseError(std::string("process: missing \"") + key + "\"");
    const Op meter = op_from_json(j["meter"], "process meter");
    require_square(meter, "process meter");
    if (!is_hermitian(meter)) throw InvalidOperatorError("process: meter is not Hermitian");
    return MeasuringProcess(j["object_dim"].get<std::size_t>(),
                            DensityState(op_from_json(j["probe_state"], "process probe_state")),
                            op_from_json(j["unitary"], "process unitary"), Observable::from_hermitian(meter));
}

json parse(const std::string &text) {
    try {
        return json::parse(text);
    } catch (const json::exception &e) {
        throw ParseError(std::string("invalid JSON: ") + e.what());
    }
}

}  // namespace detail

namespace {

template <class F>
auto guarded(F &&f) {
    try {
        return f();
    } catch (const nlohmann::json::exception &e) {
        throw ParseError(std::string("malformed JSON document: ") + e.what());
    }
}

}  // namespace

std::string instrument_to_json(const CpInstrument &inst) {
    return detail::instrument_to_json(inst).dump();
}

CpInstrument instrument_from_json(const std::string &text) {
    return guarded([&] { return detail::instrument_from_json(detail::parse(text)); });
}

std::string process_to_json(const MeasuringProcess &mp) {
    return detail::process_to_json(mp).dump();
}

MeasuringProcess process_from_json(const std::string &text) {
    return guarded([&] { return detail::process_from_json(detail::parse(text)); });
}

std::string operator_to_json(const Op &x) {
    return detail::op_to_json(x).dump();
}

Op operator_from_json(const std::string &text) {
    return guarded([&] { return detail::op_from_json(detail::parse(text), "operator"); });
}

}  // namespace qmtk
