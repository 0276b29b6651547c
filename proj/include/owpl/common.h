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
#ifndef OWPL_COMMON_H_
#define OWPL_COMMON_H_

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace owpl {

// Failure categories surfaced to callers and mapped to CLI exit diagnostics.
// Kept fine-grained so tests can assert the exact contract violation.
enum class ErrorKind {
  kMalformedHeader,
  kDimensionMismatch,
  kNonFiniteValue,
  kLabelOutOfRange,
  kIoFailure,
  kEmptyInput,
  kKTooLarge,
  kPoolTooSmall,
  kRegionTooSmall,
  kDegenerateInput,
  kIndexOutOfRange,
  kPolarityMismatch,
  kNonpositiveTemperature,
  kSingleClassInput,
  kEmptyClassSet,
  kInvalidSimplexRow,
  kInvalidSpec,
  kConfigError,
  kUnsupported,
  kInvalidArgument,
};

std::string_view error_kind_name(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  // `scope` names the failing operation, e.g. "pointset.load_cloud".
  Error(ErrorKind kind, std::string scope, const std::string& message);

  ErrorKind kind() const { return kind_; }
  const std::string& scope() const { return scope_; }

 private:
  ErrorKind kind_;
  std::string scope_;
};

[[noreturn]] void fail(ErrorKind kind, std::string scope,
                       const std::string& message);

inline void require(bool condition, ErrorKind kind, std::string scope,
                    const std::string& message) {
  if (!condition) fail(kind, std::move(scope), message);
}

// Shortest decimal text that round-trips the value exactly; used everywhere
// a real is written to a text artifact so reruns stay byte-identical.
std::string format_double(double value);

}  // namespace owpl

#endif  // OWPL_COMMON_H_
