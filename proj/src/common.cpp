/* Copyright 2026 The OWPL Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/
#include "owpl/common.h"

#include <charconv>
#include <utility>

namespace owpl {

std::string_view error_kind_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kMalformedHeader: return "malformed-header";
    case ErrorKind::kDimensionMismatch: return "dimension-mismatch";
    case ErrorKind::kNonFiniteValue: return "non-finite-value";
    case ErrorKind::kLabelOutOfRange: return "label-out-of-range";
    case ErrorKind::kIoFailure: return "io-failure";
    case ErrorKind::kEmptyInput: return "empty-input";
    case ErrorKind::kKTooLarge: return "k-too-large";
    case ErrorKind::kPoolTooSmall: return "pool-smaller-than-m";
    case ErrorKind::kRegionTooSmall: return "region-too-small";
    case ErrorKind::kDegenerateInput: return "degenerate-input";
    case ErrorKind::kIndexOutOfRange: return "index-out-of-range";
    case ErrorKind::kPolarityMismatch: return "polarity-mismatch";
    case ErrorKind::kNonpositiveTemperature: return "nonpositive-temperature";
    case ErrorKind::kSingleClassInput: return "single-class-input";
    case ErrorKind::kEmptyClassSet: return "empty-class-set";
    case ErrorKind::kInvalidSimplexRow: return "invalid-simplex-row";
    case ErrorKind::kInvalidSpec: return "invalid-spec";
    case ErrorKind::kConfigError: return "config-error";
    case ErrorKind::kUnsupported: return "unsupported";
    case ErrorKind::kInvalidArgument: return "invalid-argument";
  }
  return "unknown-error";
}

Error::Error(ErrorKind kind, std::string scope, const std::string& message)
    : std::runtime_error(std::string(error_kind_name(kind)) + ": " + scope +
                         ": " + message),
      kind_(kind),
      scope_(std::move(scope)) {}

void fail(ErrorKind kind, std::string scope, const std::string& message) {
  throw Error(kind, std::move(scope), message);
}

std::string format_double(double value) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

}  // namespace owpl
