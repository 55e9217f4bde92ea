// Copyright 2026 The genfuse Authors.
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

#include "error.hpp"

namespace genfuse {

const char* ErrorKindName(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kAlignment: return "alignment error";
    case ErrorKind::kDimension: return "dimension error";
    case ErrorKind::kDegenerateWeights: return "degenerate weights";
    case ErrorKind::kDegeneratePopulation: return "degenerate population";
    case ErrorKind::kEmptyInput: return "empty input";
    case ErrorKind::kLabelRange: return "label out of range";
    case ErrorKind::kIndex: return "index out of range";
    case ErrorKind::kConfig: return "config error";
    case ErrorKind::kBreeding: return "breeding error";
    case ErrorKind::kSplit: return "split error";
    case ErrorKind::kOracleScope: return "oracle scope error";
    case ErrorKind::kParse: return "parse error";
    case ErrorKind::kInvalidDistribution: return "invalid distribution";
    case ErrorKind::kDuplicateId: return "duplicate id";
    case ErrorKind::kUnknownName: return "unknown name";
    case ErrorKind::kIo: return "i/o error";
  }
  return "error";
}

}  // namespace genfuse
