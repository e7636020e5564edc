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

// Credential policy layer.
//
// A TierPolicy lists the attributes a service tier may ask for, each with an
// importance weight. Registration may only request those attributes
// (minimal disclosure). Verified attributes are turned into a graded score in
// [0,1] instead of an allow/deny decision, and the tier's strong attributes
// are hashed into an identity fingerprint used to link re-registrations.

#ifndef TRUSTMESH_POLICY_H_
#define TRUSTMESH_POLICY_H_

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace trustmesh {

struct WeightedAttribute {
  std::string name;
  double weight = 0.0;
};

class TierPolicy {
 public:
  // Throws TrustError(kInvalidConfig) unless weights lie in (0,1] and sum to
  // 1 within 1e-9, names are unique, and strong attributes are required ones.
  TierPolicy(std::string tier, std::vector<WeightedAttribute> required,
             std::vector<std::string> strong);

  static TierPolicy from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;

  const std::string& tier() const { return tier_; }
  const std::vector<WeightedAttribute>& required_attrs() const {
    return required_;
  }
  // Sorted by name.
  const std::vector<std::string>& strong_attrs() const { return strong_; }

  bool is_required(std::string_view name) const;
  double weight(std::string_view name) const;  // 0 when not required

 private:
  std::string tier_;
  std::vector<WeightedAttribute> required_;
  std::vector<std::string> strong_;
};

struct Credential {
  std::string value;
  bool verified = false;
};

using CredentialSet = std::map<std::string, Credential, std::less<>>;

// {"email": {"value": "...", "verified": true}, ...}
CredentialSet credentials_from_json(const nlohmann::json& j);

struct VerificationResult {
  double score = 0.0;
  std::vector<std::string> verified_attrs;  // required + verified, sorted
  std::optional<std::string> fingerprint;
};

// Requested names that the policy does not require, sorted and de-duplicated.
std::vector<std::string> excess_attributes(std::span<const std::string> requested,
                                           const TierPolicy& policy);

// Throws DisclosureViolation naming exactly excess_attributes().
void validate_disclosure_request(std::span<const std::string> requested,
                                 const TierPolicy& policy);

// Weighted coverage of verified required attributes. Attributes outside the
// policy are ignored.
VerificationResult verify_credentials(const CredentialSet& creds,
                                      const TierPolicy& policy);

// SHA-256 (lowercase hex) of "name=value\n" lines over the strong attributes
// sorted by name, values trimmed and ASCII-lowercased. Absent unless the
// policy has strong attributes and every one of them is present and verified.
std::optional<std::string> identity_fingerprint(const CredentialSet& creds,
                                                const TierPolicy& policy);

std::string normalize_attribute_value(std::string_view value);

}  // namespace trustmesh

#endif  // TRUSTMESH_POLICY_H_
