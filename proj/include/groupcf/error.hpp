// Copyright 2026 The groupcf Authors
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

#ifndef GROUPCF_ERROR_HPP_
#define GROUPCF_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace groupcf {

// Error categories surfaced by the library. The numeric values are part of
// the C API (see groupcf.h) and must not be reordered.
enum class ErrorCode : int {
  kInvalidArgument = 1,
  kIo = 2,
  kParse = 3,
  kBounds = 4,
  kInfeasibleApplication = 5,
  kDegenerateTraining = 6,
  kNoCounterfactual = 7,
  kUnsupportedModel = 8,
  kInsufficientData = 9,
  kUndefinedDirection = 10,
  kInternal = 99,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Thrown by apply_delta when the result leaves a feature's feasible range.
class InfeasibleApplication : public Error {
 public:
  InfeasibleApplication(std::size_t feature, const std::string& feature_name)
      : Error(ErrorCode::kInfeasibleApplication,
              "infeasible application: feature '" + feature_name +
                  "' leaves its feasible range"),
        feature_(feature) {}

  std::size_t feature() const noexcept { return feature_; }

 private:
  std::size_t feature_;
};

const char* ErrorCodeName(ErrorCode code) noexcept;

[[noreturn]] inline void Fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

inline void Require(bool condition, const std::string& what) {
  if (!condition) Fail(ErrorCode::kInvalidArgument, what);
}

}  // namespace groupcf

#endif  // GROUPCF_ERROR_HPP_
