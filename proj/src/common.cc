// Copyright 2026 The Omnirelay Authors
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

#include <sstream>

#include "omnirelay/error.h"
#include "omnirelay/node_set.h"

namespace omnirelay {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument:
      return "INVALID_ARGUMENT";
    case ErrorCode::kModelViolation:
      return "MODEL_VIOLATION";
    case ErrorCode::kCapacityExceeded:
      return "CAPACITY_EXCEEDED";
    case ErrorCode::kPrecondition:
      return "PRECONDITION_FAILED";
    case ErrorCode::kScheduleInvalid:
      return "SCHEDULE_INVALID";
    case ErrorCode::kDecode:
      return "DECODE_ERROR";
    case ErrorCode::kParse:
      return "PARSE_ERROR";
    case ErrorCode::kIo:
      return "IO_ERROR";
  }
  return "UNKNOWN";
}

std::string format_set(const NodeSet& s, int offset) {
  std::ostringstream os;
  os << '{';
  for (size_t k = 0; k < s.size(); ++k) {
    if (k) os << ',';
    os << s[k] + offset;
  }
  os << '}';
  return os.str();
}

}  // namespace omnirelay
