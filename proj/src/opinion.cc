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

#include "trustmesh/opinion.h"

#include <cmath>

#include "trustmesh/digest.h"
#include "trustmesh/error.h"

namespace trustmesh {

using nlohmann::json;

namespace {

[[noreturn]] void bad_params(const std::string& why) {
  throw TrustError(ErrorCode::kInvalidConfig, "integration params: " + why);
}

bool in_unit(double v) { return std::isfinite(v) && v >= 0.0 && v <= 1.0; }

json component_to_json(const TrustComponent& c) {
  return {{"value", c.value ? json(*c.value) : json(nullptr)},
          {"support", c.support}};
}

TrustComponent component_from_json(const json& j) {
  TrustComponent c;
  if (!j.at("value").is_null()) c.value = j.at("value").get<double>();
  c.support = j.at("support").get<int>();
  return c;
}

}  // namespace

void IntegrationParams::validate() const {
  if (!in_unit(alpha) || !in_unit(beta) || !in_unit(gamma)) {
    bad_params("alpha, beta, gamma must lie in [0,1]");
  }
  if (std::abs(alpha + beta + gamma - 1.0) > 1e-9) {
    bad_params("alpha + beta + gamma must equal 1");
  }
  if (!in_unit(min_verification)) bad_params("min_verification must lie in [0,1]");
}

IntegrationParams IntegrationParams::from_json(const json& j) {
  IntegrationParams p;
  try {
    p.alpha = j.value("alpha", p.alpha);
    p.beta = j.value("beta", p.beta);
    p.gamma = j.value("gamma", p.gamma);
    p.min_verification = j.value("min_verification", p.min_verification);
    const std::string cred = j.value("credibility", std::string("weighted"));
    if (cred == "weighted") {
      p.credibility = CredibilityMode::kWeighted;
    } else if (cred == "uniform") {
      p.credibility = CredibilityMode::kUniform;
    } else {
      bad_params("credibility must be 'weighted' or 'uniform'");
    }
  } catch (const json::exception& e) {
    bad_params(e.what());
  }
  p.validate();
  return p;
}

json IntegrationParams::to_json() const {
  return {{"alpha", alpha},
          {"beta", beta},
          {"gamma", gamma},
          {"min_verification", min_verification},
          {"credibility",
           credibility == CredibilityMode::kWeighted ? "weighted" : "uniform"}};
}

std::string EngineParams::digest() const {
  json j = {{"integration", integration.to_json()},
            {"context", context.to_json()},
            {"policy_digest", policy_digest}};
  return sha256_hex(j.dump());
}

json opinion_to_json(const TrustOpinion& o) {
  json used = json::array({"V"});
  if (o.used_direct) used.push_back("D");
  if (o.used_recommended) used.push_back("R");
  return {{"score", o.score},
          {"verification", o.verification},
          {"direct", component_to_json(o.direct)},
          {"recommended", component_to_json(o.recommended)},
          {"components_used", std::move(used)},
          {"repo_version", o.repo_version}};
}

TrustOpinion opinion_from_json(const json& j) {
  TrustOpinion o;
  o.score = j.at("score").get<double>();
  o.verification = j.at("verification").get<double>();
  o.direct = component_from_json(j.at("direct"));
  o.recommended = component_from_json(j.at("recommended"));
  for (const auto& c : j.at("components_used")) {
    const auto name = c.get<std::string>();
    if (name == "D") o.used_direct = true;
    if (name == "R") o.used_recommended = true;
  }
  o.repo_version = j.at("repo_version").get<RepositoryVersion>();
  return o;
}

}  // namespace trustmesh
