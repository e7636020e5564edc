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

#include "trustmesh/policy.h"

#include <algorithm>
#include <cmath>
#include <set>

#include "trustmesh/digest.h"
#include "trustmesh/error.h"

namespace trustmesh {

using nlohmann::json;

namespace {

[[noreturn]] void bad_policy(const std::string& tier, const std::string& why) {
  throw TrustError(ErrorCode::kInvalidConfig,
                   "tier policy '" + tier + "': " + why);
}

}  // namespace

TierPolicy::TierPolicy(std::string tier, std::vector<WeightedAttribute> required,
                       std::vector<std::string> strong)
    : tier_(std::move(tier)),
      required_(std::move(required)),
      strong_(std::move(strong)) {
  if (tier_.empty()) bad_policy(tier_, "tier name must be non-empty");
  std::set<std::string, std::less<>> names;
  double sum = 0.0;
  for (const auto& attr : required_) {
    if (attr.name.empty()) bad_policy(tier_, "attribute names must be non-empty");
    if (!names.insert(attr.name).second) {
      bad_policy(tier_, "duplicate attribute '" + attr.name + "'");
    }
    if (!(attr.weight > 0.0 && attr.weight <= 1.0)) {
      bad_policy(tier_, "weight of '" + attr.name + "' must lie in (0,1]");
    }
    sum += attr.weight;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    bad_policy(tier_, "attribute weights must sum to 1");
  }
  std::sort(strong_.begin(), strong_.end());
  if (std::adjacent_find(strong_.begin(), strong_.end()) != strong_.end()) {
    bad_policy(tier_, "duplicate strong attribute");
  }
  for (const auto& s : strong_) {
    if (!names.contains(s)) {
      bad_policy(tier_, "strong attribute '" + s + "' is not required");
    }
  }
}

TierPolicy TierPolicy::from_json(const json& j) {
  try {
    std::vector<WeightedAttribute> required;
    for (const auto& a : j.at("required_attrs")) {
      required.push_back({a.at("name").get<std::string>(),
                          a.at("weight").get<double>()});
    }
    std::vector<std::string> strong;
    if (j.contains("strong_attrs")) {
      strong = j.at("strong_attrs").get<std::vector<std::string>>();
    }
    return TierPolicy(j.at("name").get<std::string>(), std::move(required),
                      std::move(strong));
  } catch (const json::exception& e) {
    throw TrustError(ErrorCode::kInvalidConfig,
                     std::string("malformed tier policy: ") + e.what());
  }
}

json TierPolicy::to_json() const {
  json required = json::array();
  for (const auto& a : required_) {
    required.push_back({{"name", a.name}, {"weight", a.weight}});
  }
  return {{"name", tier_}, {"required_attrs", required}, {"strong_attrs", strong_}};
}

bool TierPolicy::is_required(std::string_view name) const {
  return std::any_of(required_.begin(), required_.end(),
                     [&](const WeightedAttribute& a) { return a.name == name; });
}

double TierPolicy::weight(std::string_view name) const {
  for (const auto& a : required_) {
    if (a.name == name) return a.weight;
  }
  return 0.0;
}

CredentialSet credentials_from_json(const json& j) {
  if (!j.is_object()) {
    throw TrustError(ErrorCode::kInvariantViolation,
                     "credentials must be a JSON object");
  }
  CredentialSet creds;
  for (const auto& [name, entry] : j.items()) {
    Credential c;
    if (entry.is_string()) {
      c.value = entry.get<std::string>();
    } else if (entry.is_object()) {
      c.value = entry.value("value", std::string());
      c.verified = entry.value("verified", false);
    } else {
      throw TrustError(ErrorCode::kInvariantViolation,
                       "credential '" + name + "' must be a string or object");
    }
    creds.emplace(name, std::move(c));
  }
  return creds;
}

std::vector<std::string> excess_attributes(std::span<const std::string> requested,
                                           const TierPolicy& policy) {
  std::set<std::string> extra;
  for (const auto& name : requested) {
    if (!policy.is_required(name)) extra.insert(name);
  }
  return {extra.begin(), extra.end()};
}

void validate_disclosure_request(std::span<const std::string> requested,
                                 const TierPolicy& policy) {
  auto extra = excess_attributes(requested, policy);
  if (!extra.empty()) throw DisclosureViolation(std::move(extra));
}

VerificationResult verify_credentials(const CredentialSet& creds,
                                      const TierPolicy& policy) {
  VerificationResult result;
  bool all = true;
  for (const auto& attr : policy.required_attrs()) {
    auto it = creds.find(attr.name);
    if (it != creds.end() && it->second.verified) {
      result.score += attr.weight;
      result.verified_attrs.push_back(attr.name);
    } else {
      all = false;
    }
  }
  // Weights sum to 1 only within tolerance.
  result.score = all ? 1.0 : std::clamp(result.score, 0.0, 1.0);
  std::sort(result.verified_attrs.begin(), result.verified_attrs.end());
  result.fingerprint = identity_fingerprint(creds, policy);
  return result;
}

std::string normalize_attribute_value(std::string_view value) {
  constexpr std::string_view kSpace = " \t\n\r\f\v";
  auto begin = value.find_first_not_of(kSpace);
  if (begin == std::string_view::npos) return {};
  auto end = value.find_last_not_of(kSpace);
  std::string out(value.substr(begin, end - begin + 1));
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

std::optional<std::string> identity_fingerprint(const CredentialSet& creds,
                                                const TierPolicy& policy) {
  if (policy.strong_attrs().empty()) return std::nullopt;
  std::string canonical;
  for (const auto& name : policy.strong_attrs()) {
    auto it = creds.find(name);
    if (it == creds.end() || !it->second.verified) return std::nullopt;
    canonical += name;
    canonical += '=';
    canonical += normalize_attribute_value(it->second.value);
    canonical += '\n';
  }
  return sha256_hex(canonical);
}

}  // namespace trustmesh
