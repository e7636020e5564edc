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

// Value types shared by the reputation engine and the integrator.

#ifndef TRUSTMESH_OPINION_H_
#define TRUSTMESH_OPINION_H_

#include <optional>
#include <string>

#include "json.hpp"
#include "trustmesh/context.h"
#include "trustmesh/types.h"

namespace trustmesh {

// A partial trust value. Absent iff support == 0.
struct TrustComponent {
  std::optional<double> value;
  int support = 0;

  friend bool operator==(const TrustComponent&, const TrustComponent&) = default;
};

// kUniform replaces every rater credibility by 1.0. It exists for A/B runs.
enum class CredibilityMode { kWeighted, kUniform };

struct IntegrationParams {
  double alpha = 0.2;  // verification
  double beta = 0.3;   // direct
  double gamma = 0.5;  // recommended
  double min_verification = 0.2;
  CredibilityMode credibility = CredibilityMode::kWeighted;

  // Throws TrustError(kInvalidConfig).
  void validate() const;

  static IntegrationParams from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

// Everything an opinion depends on besides repository state.
struct EngineParams {
  IntegrationParams integration;
  ContextWeights context;
  // Digest of the tier policies in force; part of the cache key so a policy
  // change can never serve a value computed under the old one.
  std::string policy_digest;

  std::string digest() const;
};

struct TrustOpinion {
  double score = 0.0;
  double verification = 0.0;
  TrustComponent direct;
  TrustComponent recommended;
  bool used_direct = false;
  bool used_recommended = false;
  RepositoryVersion repo_version = 0;

  friend bool operator==(const TrustOpinion&, const TrustOpinion&) = default;
};

// {"score", "verification", "direct": {"value", "support"}, "recommended",
//  "components_used": ["V", ...], "repo_version"}
nlohmann::json opinion_to_json(const TrustOpinion& opinion);
TrustOpinion opinion_from_json(const nlohmann::json& j);

}  // namespace trustmesh

#endif  // TRUSTMESH_OPINION_H_
