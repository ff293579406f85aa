/*
Copyright 2026 The cdnwae Authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    https://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

#ifndef CDNWAE_ERROR_H_
#define CDNWAE_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace cdnwae {

enum class ErrorCode {
  // Snapshot validation.
  kDuplicateMachine,
  kMissingMachine,
  kOutOfRangeUtilization,
  kDimensionMismatch,
  kNonBinaryEntry,
  // Normalization.
  kZeroSum,
  kNegativeEntry,
  // Orchestration.
  kNoEligibleMachine,
  kNoHostingMachine,
  kLastContainerGuard,
  kInvalidArgument,
  // Oracle.
  kTooLarge,
  // Address pool.
  kPoolExhausted,
  kNotAllocated,
  kInvalidAddress,
  // Service discovery.
  kIllegalTransition,
  kInvalidRecordSet,
  // Service.
  kMalformedPayload,
  kUnknownMachine,
  kIncompleteSnapshot,
  // Configuration and IO.
  kConfigError,
  kIoError,
};

std::string_view ErrorCodeName(ErrorCode code);

// Every failure raised by the library carries one of the codes above. The
// message names the offending machine, field, or address.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace cdnwae

#endif  // CDNWAE_ERROR_H_
