// include/pwld/error.h

// Copyright 2026  The pwld Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef PWLD_ERROR_H_
#define PWLD_ERROR_H_

#include <stdexcept>
#include <string>

namespace pwld {

enum class ErrorCode {
  kParse,
  kDuplicateSymbol,
  kDuplicateFeatureVector,
  kUnknownFeature,
  kUnknownSymbol,
  kSpaceMismatch,
  kDegenerateReference,
  kEmptyInput,
  kUndefinedCorrelation,
  kRange,
  kInvalidArgument,
  kIo,
};

const char *ErrorCodeName(ErrorCode code);

/// All library failures are reported by throwing this type.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string &message)
      : std::runtime_error(message), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace pwld

#endif  // PWLD_ERROR_H_
