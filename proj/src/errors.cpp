// Copyright 2026 The gmrc Authors.
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

#include "gmrc/errors.hpp"

namespace gmrc {

const char* ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kParse: return "parse error";
    case ErrorCode::kIo: return "i/o error";
    case ErrorCode::kConfig: return "configuration error";
    case ErrorCode::kDimension: return "dimension error";
    case ErrorCode::kNumeric: return "numeric error";
    case ErrorCode::kAlignment: return "alignment error";
    case ErrorCode::kJoin: return "join error";
    case ErrorCode::kContract: return "contract violation";
    case ErrorCode::kVocab: return "vocab error";
    case ErrorCode::kIndex: return "index error";
    case ErrorCode::kSchema: return "schema error";
    case ErrorCode::kDegenerateGraph: return "degenerate graph";
    case ErrorCode::kInstanceRejected: return "instance rejected";
  }
  return "unknown error";
}

}  // namespace gmrc
