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

#pragma once

#include <stdexcept>
#include <string>

namespace gmrc {

// Error categories. The numeric values are mirrored by gmrc_status in gmrc.h.
enum class ErrorCode : int {
  kParse = 1,
  kIo = 2,
  kConfig = 3,
  kDimension = 4,
  kNumeric = 5,
  kAlignment = 6,
  kJoin = 7,
  kContract = 8,
  kVocab = 9,
  kIndex = 10,
  kSchema = 11,
  kDegenerateGraph = 12,
  kInstanceRejected = 13,
};

const char* ErrorCodeName(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void Fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace gmrc
