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

#include "trustmesh/error.h"

namespace trustmesh {

std::string_view error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kUnknownPrincipal:
      return "UnknownPrincipal";
    case ErrorCode::kUnknownTransaction:
      return "UnknownTransaction";
    case ErrorCode::kInvariantViolation:
      return "InvariantViolation";
    case ErrorCode::kCorruptLog:
      return "CorruptLog";
    case ErrorCode::kDisclosureViolation:
      return "DisclosureViolation";
    case ErrorCode::kSelfOpinion:
      return "SelfOpinion";
    case ErrorCode::kBelowVerificationFloor:
      return "BelowVerificationFloor";
    case ErrorCode::kNotAParty:
      return "NotAParty";
    case ErrorCode::kValueOutOfRange:
      return "ValueOutOfRange";
    case ErrorCode::kInvalidConfig:
      return "InvalidConfig";
  }
  return "Unknown";
}

namespace {

std::string describe_extra(const std::vector<std::string>& extra) {
  std::string out = "request asks for attributes outside the tier policy: [";
  for (size_t i = 0; i < extra.size(); ++i) {
    if (i) out += ", ";
    out += extra[i];
  }
  out += "]";
  return out;
}

}  // namespace

DisclosureViolation::DisclosureViolation(std::vector<std::string> extra)
    : TrustError(ErrorCode::kDisclosureViolation, describe_extra(extra)),
      extra_(std::move(extra)) {}

}  // namespace trustmesh
