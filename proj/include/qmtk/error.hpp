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

#ifndef QMTK_ERROR_HPP
#define QMTK_ERROR_HPP

#include <stdexcept>
#include <string>

namespace qmtk {

enum class ErrorKind {
    Shape,
    InvalidOperator,
    InvalidState,
    Domain,
    NumericalConsistency,
    UndefinedJointDistribution,
    Usage,
    Parse,
};

/// Base class of every exception thrown by the library. The kind maps 1:1
/// onto the status codes of the C API.
class Error : public std::runtime_error {
  public:
    Error(ErrorKind kind, const std::string &what) : std::runtime_error(what), kind_(kind) {
    }
    ErrorKind kind() const noexcept {
        return kind_;
    }

  private:
    ErrorKind kind_;
};

struct ShapeError : Error {
    explicit ShapeError(const std::string &w) : Error(ErrorKind::Shape, w) {
    }
};
struct InvalidOperatorError : Error {
    explicit InvalidOperatorError(const std::string &w) : Error(ErrorKind::InvalidOperator, w) {
    }
};
struct InvalidStateError : Error {
    explicit InvalidStateError(const std::string &w) : Error(ErrorKind::InvalidState, w) {
    }
};
struct DomainError : Error {
    explicit DomainError(const std::string &w) : Error(ErrorKind::Domain, w) {
    }
};
struct NumericalConsistencyError : Error {
    explicit NumericalConsistencyError(const std::string &w) : Error(ErrorKind::NumericalConsistency, w) {
    }
};
struct UndefinedJointDistributionError : Error {
    explicit UndefinedJointDistributionError(const std::string &w)
        : Error(ErrorKind::UndefinedJointDistribution, w) {
    }
};
struct UsageError : Error {
    explicit UsageError(const std::string &w) : Error(ErrorKind::Usage, w) {
    }
};
struct ParseError : Error {
    explicit ParseError(const std::string &w) : Error(ErrorKind::Parse, w) {
    }
};

}  // namespace qmtk

#endif  // QMTK_ERROR_HPP
