// Copyright 2026 The adiaband Authors
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

#include "adiaband/error.hpp"

namespace adiaband {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kNonHermitianInput: return "NonHermitianInput";
    case ErrorCode::kNonFiniteEntry: return "NonFiniteEntry";
    case ErrorCode::kConvergenceFailure: return "ConvergenceFailure";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kEmptyBand: return "EmptyBand";
    case ErrorCode::kGapCollapse: return "GapCollapse";
    case ErrorCode::kBandTrackingFailure: return "BandTrackingFailure";
    case ErrorCode::kSingularReducedOperator: return "SingularReducedOperator";
    case ErrorCode::kContourTooClose: return "ContourTooClose";
    case ErrorCode::kEndpointViolation: return "EndpointViolation";
    case ErrorCode::kDimensionTooLarge: return "DimensionTooLarge";
    case ErrorCode::kNormalizationFailure: return "NormalizationFailure";
    case ErrorCode::kNonPositiveGap: return "NonPositiveGap";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kStepLimitExceeded: return "StepLimitExceeded";
    case ErrorCode::kGridMismatch: return "GridMismatch";
    case ErrorCode::kQuadratureNotConverged: return "QuadratureNotConverged";
    case ErrorCode::kConfigError: return "ConfigError";
    case ErrorCode::kInsufficientPoints: return "InsufficientPoints";
    case ErrorCode::kNonPositiveValue: return "NonPositiveValue";
    case ErrorCode::kIoError: return "IoError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
      code_(code) {}

void Fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace adiaband
