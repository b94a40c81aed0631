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

#ifndef QMTK_SERIALIZE_HPP
#define QMTK_SERIALIZE_HPP

// JSON encodings. Complex matrices are arrays of rows, each entry a
// [re, im] pair.
//
//   instrument: {"dim": d, "outcomes": [{"value": x, "kraus": [M, ...]}, ...]}
//   process:    {"object_dim": d, "probe_state": M, "unitary": M,
//                "meter": M}

#include <string>

#include "qmtk/instruments.hpp"

namespace qmtk {

std::string instrument_to_json(const CpInstrument &inst);
CpInstrument instrument_from_json(const std::string &text);

std::string process_to_json(const MeasuringProcess &mp);
MeasuringProcess process_from_json(const std::string &text);

std::string operator_to_json(const Op &x);
Op operator_from_json(const std::string &text);

}  // namespace qmtk

#endif  // QMTK_SERIALIZE_HPP
