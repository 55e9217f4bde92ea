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

#ifndef GENFUSE_ERROR_HPP_
#define GENFUSE_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace genfuse {

enum class ErrorKind {
  kAlignment,
  kDimension,
  kDegenerateWeights,
  kDegeneratePopulation,
  kEmptyInput,
  kLabelRange,
  kIndex,
  kConfig,
  kBreeding,
  kSplit,
  kOracleScope,
  kParse,
  kInvalidDistribution,
  kDuplicateId,
  kUnknownName,
  kIo,
};

const char* ErrorKindName(ErrorKind kind);

// Every failure raised by the library carries a kind so the C API can map it
// onto a status code without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const { return kind_; }
  bool is_io() const { return kind_ == ErrorKind::kIo; }

 private:
  ErrorKind kind_;
};

}  // namespace genfuse

#endif  // GENFUSE_ERROR_HPP_
