// Copyright 2026 The Authors.
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

#ifndef SEQSUB_ERROR_H_
#define SEQSUB_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace seqsub {

enum class ErrorCode {
  kInvalidArgument,
  kUnknownSubset,
  kNegativeWeight,
  kDimensionMismatch,
  kInvalidInstance,
  kTooLarge,
  kInfeasible,
  kInvalidDistribution,
  kNotInPolytope,
  kLayerUnnormalized,
  kCertMismatch,
  kNumericalInstability,
  kInternal,
  kGenerationRetryExhausted,
  kParse,
};

inline std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid-argument";
    case ErrorCode::kUnknownSubset: return "unknown-subset";
    case ErrorCode::kNegativeWeight: return "negative-weight";
    case ErrorCode::kDimensionMismatch: return "dimension-mismatch";
    case ErrorCode::kInvalidInstance: return "invalid-instance";
    case ErrorCode::kTooLarge: return "too-large";
    case ErrorCode::kInfeasible: return "infeasible";
    case ErrorCode::kInvalidDistribution: return "invalid-distribution";
    case ErrorCode::kNotInPolytope: return "not-in-polytope";
    case ErrorCode::kLayerUnnormalized: return "layer-unnormalized";
    case ErrorCode::kCertMismatch: return "cert-mismatch";
    case ErrorCode::kNumericalInstability: return "numerical-instability";
    case ErrorCode::kInternal: return "internal";
    case ErrorCode::kGenerationRetryExhausted:
      return "generation-retry-exhausted";
    case ErrorCode::kParse: return "parse";
  }
  return "unknown";
}

// All library failures surface as this exception. The message is prefixed
// with the module that raised it, e.g. "core: unknown-subset: ...".
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string_view module, std::string_view detail)
      : std::runtime_error(std::string(module) + ": " +
                           std::string(ErrorCodeName(code)) + ": " +
                           std::string(detail)),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace seqsub

#endif  // SEQSUB_ERROR_H_
