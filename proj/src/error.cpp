// Copyright 2026 The lambdarc Authors
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

#include "lambdarc/error.hpp"

namespace lambdarc {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kArgument: return "argument error";
    case ErrorKind::kParse: return "parse error";
    case ErrorKind::kTruncation: return "truncation error";
    case ErrorKind::kIo: return "I/O error";
    case ErrorKind::kFit: return "fit error";
    case ErrorKind::kNonInvertible: return "non-invertible model";
    case ErrorKind::kModelShape: return "model-shape error";
    case ErrorKind::kRange: return "range error";
    case ErrorKind::kInfeasibleBracket: return "infeasible bracket";
    case ErrorKind::kCalibration: return "calibration error";
    case ErrorKind::kConfig: return "config error";
  }
  return "error";
}

}  // namespace lambdarc
