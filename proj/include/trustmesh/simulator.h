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

// Seeded marketplace simulation with scripted attacks.
//
// Setup (tick 0, no random draws): an observer principal is registered
// first; it never trades and is the viewer for every reported opinion. Then
// each AgentProfile in declaration order registers `count` agents, then the
// attack's own agents (colluders or slanderers). Credential values are
// "<attr>-<n>" with n the registration index, so every agent has a distinct
// identity.
//
// Each tick t = 1..ticks runs, in order:
//   1. whitewash only, when t == at_tick: the fraud seller re-registers;
//   2. every market buyer (declared buyers, then colluders) in registration
//      order picks a seller and trades with it;
//   3. attack actions (colluders trade with their seller, slanderers trade
//      with and rate their target);
//   4. one metrics sample.
//
// Draw order is part of the contract. One std::mt19937_64 stream seeded with
// `seed`; uniform_below(n) is rejection sampling on raw 64-bit outputs and
// unit() is (raw >> 11) * 2^-53. Per trade:
//   a. seller choice (market trades only): uniform_below(eligible) or, with
//      trust-proportional selection, one unit() against cumulative opinions;
//   b. cost in cents: cost_min + uniform_below(cost_max - cost_min + 1);
//   c. scope: uniform_below(scopes);
//   d. promised days: lo + uniform_below(hi - lo + 1);
//   e. delay days: uniform_below(max_delay + 1);
//   f. outcome: unit() < seller honesty means satisfactory;
//   g. counter rating: unit() < buyer honesty means the seller rates 1.0.
// Forced behaviour (colluders, slanderers, the exploit seller) still consumes
// every draw so the stream stays aligned.

#ifndef TRUSTMESH_SIMULATOR_H_
#define TRUSTMESH_SIMULATOR_H_

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "trustmesh/config.h"
#include "trustmesh/repository.h"

namespace trustmesh {

enum class AgentRole { kBuyer, kSeller };

struct AgentProfile {
  AgentRole role = AgentRole::kBuyer;
  double honesty = 1.0;
  int count = 1;
  // Required attributes that verify; absent means all of them.
  std::optional<std::vector<std::string>> verified;
};

enum class AttackType { kNone, kCollusion, kSlander, kWhitewash, kContextExploit };

struct AttackConfig {
  AttackType type = AttackType::kNone;
  // Seller index (declaration order over all sellers) the attack centres on:
  // colluded seller, slander target, fraud seller, exploit seller. -1 means
  // the last seller.
  int seller = -1;
  int ring_size = 3;                // collusion
  double colluder_honesty = 0.1;    // collusion
  int attacker_count = 3;           // slander
  double attacker_honesty = 1.0;    // slander
  Tick at_tick = -1;                // whitewash; -1 means ticks / 2
  bool same_identity = true;        // whitewash
  Money cost_threshold = Money::from_cents(50'000);  // context exploit

  nlohmann::json to_json() const;
};

enum class SellerSelection { kUniform, kTrustProportional };
enum class OpinionMode { kDtc, kAtc };

struct MarketConfig {
  Money cost_min = Money::from_cents(100);
  Money cost_max = Money::from_cents(100'000);
  std::vector<std::string> scopes = {"electronics", "books", "clothing", "home"};
  int promised_min = 2;
  int promised_max = 7;
  int max_delay = 3;
  SellerSelection selection = SellerSelection::kUniform;
  std::string tier = "standard";

  nlohmann::json to_json() const;
};

struct ScenarioConfig {
  std::uint64_t seed = 0;
  Tick ticks = 0;
  std::vector<AgentProfile> agents;
  AttackConfig attack;
  MarketConfig market;
  EngineConfig engine = default_engine_config();
  OpinionMode mode = OpinionMode::kDtc;

  // Throws TrustError(kInvalidConfig).
  static ScenarioConfig from_json(const nlohmann::json& j);
  static ScenarioConfig load(const std::filesystem::path& path);
  nlohmann::json to_json() const;
  void validate() const;
};

struct ClassStats {
  double mean = 0.0;
  double min = 0.0;
  double max = 0.0;
  int count = 0;
};

struct SeriesRow {
  Tick tick = 0;
  std::string cls;
  ClassStats stats;
};

struct SellerOutcome {
  PrincipalId id;
  std::string cls;
  double honesty = 0.0;
  double score = 0.0;
};

struct ViewerOpinion {
  PrincipalId viewer;
  TrustOpinion opinion;
};

struct WhitewashReport {
  PrincipalId old_id;
  PrincipalId new_id;
  bool linked = false;
  std::vector<ViewerOpinion> pre;   // about old_id, just before re-registering
  std::vector<ViewerOpinion> post;  // about new_id, just after
};

struct MetricsReport {
  std::uint64_t seed = 0;
  Tick ticks = 0;
  nlohmann::json params;  // engine, market, attack, mode
  std::map<std::string, ClassStats> final_classes;
  // mean(honest) - mean(malicious) at the last sample; absent without both.
  std::optional<double> separation;
  std::vector<SellerOutcome> sellers;
  std::optional<SellerOutcome> subject;  // attack centre, final opinion
  int rejected_ratings = 0;              // NotAParty refusals seen
  std::optional<WhitewashReport> whitewash;
  std::vector<SeriesRow> series;
  size_t events = 0;
  std::string log_sha256;

  nlohmann::json to_json() const;
  // tick,class,mean,min,max
  std::string to_csv() const;
};

struct ScenarioResult {
  std::vector<Event> log;
  MetricsReport metrics;
  std::shared_ptr<const State> state;
  PrincipalId observer;
};

ScenarioResult run_scenario(const ScenarioConfig& config);

struct VariantResult {
  std::string name;
  MetricsReport metrics;
};

// Override document for one variant:
//   {"name": "...", "integration": {...}, "context": {...}, "cache": {...},
//    "mode": "atc"|"dtc"}
// Fields merge over the base engine config. Setting only some context
// weights rescales the unset ones proportionally so the three sum to 1.
ScenarioConfig apply_variant(const ScenarioConfig& base, const nlohmann::json& variant);

// Runs the base scenario once per variant (in parallel) with the same seed.
std::vector<VariantResult> compare_runs(const ScenarioConfig& config,
                                        const std::vector<nlohmann::json>& variants);

// variant,honest_mean,honest_min,honest_max,malicious_mean,malicious_min,
// malicious_max,separation,subject,subject_opinion,events,log_sha256
std::string comparison_csv(const std::vector<VariantResult>& results);

// Shortest round-trip decimal form, used for CSV output.
std::string format_double(double v);

}  // namespace trustmesh

#endif  // TRUSTMESH_SIMULATOR_H_
