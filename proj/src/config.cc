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

#include "trustmesh/config.h"

#include <fstream>
#include <set>

#include "trustmesh/digest.h"
#include "trustmesh/error.h"

namespace trustmesh {

using nlohmann::json;

namespace {

[[noreturn]] void bad_config(const std::string& why) {
  throw TrustError(ErrorCode::kInvalidConfig, why);
}

}  // namespace

EngineConfig EngineConfig::from_json(const json& j) {
  if (!j.is_object()) bad_config("config must be a JSON object");
  static const std::set<std::string> kKnown = {"tiers", "integration", "context",
                                               "cache", "repository"};
  for (const auto& [key, value] : j.items()) {
    if (!kKnown.contains(key)) bad_config("unknown config key '" + key + "'");
  }
  EngineConfig cfg;
  if (!j.contains("tiers") || !j.at("tiers").is_array() || j.at("tiers").empty()) {
    bad_config("config needs a non-empty 'tiers' array");
  }
  std::set<std::string> names;
  for (const auto& t : j.at("tiers")) {
    TierPolicy policy = TierPolicy::from_json(t);
    if (!names.insert(policy.tier()).second) {
      bad_config("duplicate tier '" + policy.tier() + "'");
    }
    cfg.tiers.push_back(std::move(policy));
  }
  if (j.contains("integration")) {
    cfg.integration = IntegrationParams::from_json(j.at("integration"));
  }
  if (j.contains("context")) {
    cfg.context = ContextWeights::from_json(j.at("context"));
  }
  try {
    if (j.contains("cache")) {
      const json& cache = j.at("cache");
      if (cache.contains("staleness_events")) {
        const json& s = cache.at("staleness_events");
        if (!s.is_number_integer() || s.get<std::int64_t>() < 0) {
          bad_config("cache.staleness_events must be a non-negative integer");
        }
        cfg.staleness_events = s.get<std::uint64_t>();
      }
    }
    if (j.contains("repository") && j.at("repository").contains("path")) {
      cfg.repository = j.at("repository").at("path").get<std::string>();
    }
  } catch (const json::exception& e) {
    bad_config(e.what());
  }
  return cfg;
}

EngineConfig EngineConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) bad_config("cannot read config file " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    bad_config("config " + path.string() + " is not valid JSON: " + e.what());
  }
  return from_json(j);
}

json EngineConfig::to_json() const {
  json tiers_json = json::array();
  for (const auto& t : tiers) tiers_json.push_back(t.to_json());
  json j = {{"tiers", tiers_json},
            {"integration", integration.to_json()},
            {"context", context.to_json()},
            {"cache", {{"staleness_events", staleness_events}}}};
  if (repository) j["repository"] = {{"path", repository->string()}};
  return j;
}

const TierPolicy& EngineConfig::tier(const std::string& name) const {
  for (const auto& t : tiers) {
    if (t.tier() == name) return t;
  }
  bad_config("unknown tier '" + name + "'");
}

std::string EngineConfig::policy_digest() const {
  json tiers_json = json::array();
  for (const auto& t : tiers) tiers_json.push_back(t.to_json());
  return sha256_hex(tiers_json.dump());
}

EngineParams EngineConfig::engine_params() const {
  return EngineParams{integration, context, policy_digest()};
}

EngineConfig default_engine_config() {
  EngineConfig cfg;
  cfg.tiers.emplace_back("basic",
                         std::vector<WeightedAttribute>{{"email", 0.4}, {"phone", 0.6}},
                         std::vector<std::string>{});
  cfg.tiers.emplace_back(
      "standard",
      std::vector<WeightedAttribute>{{"email", 0.2}, {"payment", 0.3}, {"gov_id", 0.5}},
      std::vector<std::string>{"gov_id"});
  cfg.tiers.emplace_back(
      "merchant",
      std::vector<WeightedAttribute>{
          {"email", 0.1}, {"payment", 0.2}, {"gov_id", 0.4}, {"business_reg", 0.3}},
      std::vector<std::string>{"business_reg", "gov_id"});
  return cfg;
}

}  // namespace trustmesh
