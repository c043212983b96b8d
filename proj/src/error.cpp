// Copyright 2026 The drcpo Authors
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

#include "drcpo/error.hpp"

namespace drcpo {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kIoFailure: return "IoFailure";
    case ErrorCode::kSizeNotMultipleOf16: return "SizeNotMultipleOf16";
    case ErrorCode::kMalformedLine: return "MalformedLine";
    case ErrorCode::kMissingCalibKey: return "MissingCalibKey";
    case ErrorCode::kBadMagic: return "BadMagic";
    case ErrorCode::kUnsupportedVersion: return "UnsupportedVersion";
    case ErrorCode::kTruncatedSection: return "TruncatedSection";
    case ErrorCode::kEmptyDatabase: return "EmptyDatabase";
    case ErrorCode::kNonCanonicalBox: return "NonCanonicalBox";
    case ErrorCode::kPointAtViewpoint: return "PointAtViewpoint";
    case ErrorCode::kPointBeyondRadius: return "PointBeyondRadius";
    case ErrorCode::kTooManyPoints: return "TooManyPoints";
    case ErrorCode::kInvalidConfig: return "InvalidConfig";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace drcpo
