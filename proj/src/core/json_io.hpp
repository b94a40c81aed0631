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

#ifndef QMTK_SRC_JSON_IO_HPP
#define QMTK_SRC_JSON_IO_HPP

#include <json.hpp>

#include "qmtk/instruments.hpp"

namespace qmtk::detail {

using json = nlohmann::json;

json op_to_json(const Op &x);
/// Accepts [[re, im], ...] entries or plain real numbers.
Op op_from_json(const json &j, const char *what);

json instrument_to_json(const CpInstrument &inst);
CpInstrument instrument_from_json(const json &j);

json process_to_json(const MeasuringProcess &mp);
MeasuringProcess process_from_json(const json &j);

/// Parses text, rethrowing syntax errors as ParseError.
json parse(const std::string &text);

}  // namespace qmtk::detail

#endif  // QMTK_SRC_JSON_IO_HPP
