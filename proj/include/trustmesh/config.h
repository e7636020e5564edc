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

#ifndef TRUSTMESH_CONFIG_H_
#define TRUSTMESH_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "trustmesh/opinion.h"
#include "trustmesh/policy.h"

namespace trustmesh {

// Engine configuration file:
//
//   {
//     "tiers": [{"name": "standard",
//                "required_attrs": [{"name": "email", "weight": 0.2}, ...],
//                "strong_attrs": ["gov_id"]}],
//     "integration": {"alpha": 0.2, "beta": 0.3, "gamma": 0.5,
//                     "min_verification": 0.2, "credibility": "weighted"},
//     "context": {"w_cost": 0.5, "w_scope": 0.2, "w_delivery": 0.3,
//                 "cost_cap": "10000"},
//     "cache": {"staleness_events": 0},
//     "repository": {"path": "./repo"}
//   }
//
// Every section except "tiers" may be omitted and falls back to defaults.
struct EngineConfig {
  std::vector<TierPolicy> tiers;
  IntegrationParams integration;
  ContextWeights context;
  std::uint64_t staleness_events = 0;
  std::optional<std::filesystem::path> repository;

  // Throws TrustError(kInvalidConfig).
  static EngineConfig from_json(const nlohmann::json& j);
  static EngineConfig load(const std::filesystem::path& path);
  nlohmann::json to_json() const;

  // Throws kInvalidConfig for an unknown tier.
  const TierPolicy& tier(const std::string& name) const;
  std::string policy_digest() const;
  EngineParams engine_params() const;
};

// A small three-tier setup used by the simulator and the tests.
EngineConfig default_engine_config();

}  // namespace trustmesh

#endif  // TRUSTMESH_CONFIG_H_
