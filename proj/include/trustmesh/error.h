// Copyright 2026 The Trustmesh Authors
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

#ifndef TRUSTMESH_ERROR_H_
#define TRUSTMESH_ERROR_H_

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace trustmesh {

enum class ErrorCode {
  kUnknownPrincipal,
  kUnknownTransaction,
  kInvariantViolation,
  kCorruptLog,
  kDisclosureViolation,
  kSelfOpinion,
  kBelowVerificationFloor,
  kNotAParty,
  kValueOutOfRange,
  kInvalidConfig,
};

// Stable name used on the wire (CLI stderr JSON, logs).
std::string_view error_name(ErrorCode code);

// All domain failures raised by the engine. The CLI maps every TrustError
// except kInvalidConfig to exit code 1.
class TrustError : public std::runtime_error {
 public:
  TrustError(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }
  std::string_view name() const { return error_name(code_); }

 private:
  ErrorCode code_;
};

class DisclosureViolation : public TrustError {
 public:
  explicit DisclosureViolation(std::vector<std::string> extra);

  // Requested attribute names outside the tier policy, sorted.
  const std::vector<std::string>& extra() const { return extra_; }

 private:
  std::vector<std::string> extra_;
};

class CorruptLog : public TrustError {
 public:
  CorruptLog(std::uint64_t seq, const std::string& reason)
      : TrustError(ErrorCode::kCorruptLog,
                   "corrupt log at seq " + std::to_string(seq) + ": " + reason),
        seq_(seq) {}

  // Sequence number (or 1-based line number for unparsable lines) of the
  // first bad event.
  std::uint64_t seq() const { return seq_; }

 private:
  std::uint64_t seq_;
};

}  // namespace trustmesh

#endif  // TRUSTMESH_ERROR_H_
