// Copyright 2026 The skbmlfx Authors
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

#include "skbmlfx/error.hpp"

namespace skbmlfx {

std::string_view to_string(Errc code) {
  switch (code) {
    case Errc::kNotSymmetric: return "NotSymmetric";
    case Errc::kNonFinite: return "NonFinite";
    case Errc::kSingularPencil: return "SingularPencil";
    case Errc::kDimensionMismatch: return "DimensionMismatch";
    case Errc::kEmptyAllowedSet: return "EmptyAllowedSet";
    case Errc::kUnknownClass: return "UnknownClass";
    case Errc::kSizeExceedsPrototypes: return "SizeExceedsPrototypes";
    case Errc::kDuplicateIds: return "DuplicateIds";
    case Errc::kNonPositiveDistance: return "NonPositiveDistance";
    case Errc::kZeroRate: return "ZeroRate";
    case Errc::kEmptySkb: return "EmptySkb";
    case Errc::kInfeasible: return "Infeasible";
    case Errc::kDegenerateDenominator: return "DegenerateDenominator";
    case Errc::kTooLarge: return "TooLarge";
    case Errc::kMalformedAssignment: return "MalformedAssignment";
    case Errc::kConfigInvalid: return "ConfigInvalid";
    case Errc::kRejectionExhausted: return "RejectionExhausted";
    case Errc::kMalformedHeader: return "MalformedHeader";
    case Errc::kIoFailure: return "IoFailure";
    case Errc::kInvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace skbmlfx
