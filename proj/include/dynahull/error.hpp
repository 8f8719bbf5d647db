// Copyright 2026 The DynaHull Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef DYNAHULL_ERROR_HPP_
#define DYNAHULL_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace dynahull {

enum class ErrorCode {
  kMalformedHeader,
  kNonFiniteCoordinate,
  kIoFailure,
  kInvalidArgument,
  kInvalidConfig,
  kTooFewPoints,
  kInsufficientPoints,
  kNoGroundFound,
  kEmptyCloud,
  kIndexOutOfRange,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace dynahull

#endif  // DYNAHULL_ERROR_HPP_
