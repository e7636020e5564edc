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

// Reputation from latest-only cross ratings.
//
// Direct trust is the viewer's own latest rating of the subject. Recommended
// trust is the mean of everyone else's latest ratings of the subject, each
// weighted by the rater's credibility (as seen by the viewer) times the
// context weight of the transaction the rating is bound to. Credibility is
// one level deep: the viewer's own rating of the rater if any, else the plain
// mean of ratings about the rater, else 0.5.
//
// Opinions come in two modes. dtc_opinion recomputes from the given state on
// every call. atc_opinion serves a cached opinion while the repository has
// moved by no more than the cache's staleness bound.

#ifndef TRUSTMESH_REPUTATION_H_
#define TRUSTMESH_REPUTATION_H_

#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <tuple>

#include "json.hpp"
#include "trustmesh/context.h"
#include "trustmesh/opinion.h"
#include "trustmesh/repository.h"

namespace trustmesh {

inline constexpr double kNeutralCredibility = 0.5;
inline constexpr double kMinRecommendationMass = 1e-12;

TrustComponent direct_trust(const State& state, const PrincipalId& viewer,
                            const PrincipalId& subject);

double rater_credibility(const State& state, const PrincipalId& viewer,
                         const PrincipalId& rater);

TrustComponent recommended_trust(
    const State& state, const PrincipalId& viewer, const PrincipalId& subject,
    const QueryContext& query, const ContextWeights& weights,
    CredibilityMode credibility = CredibilityMode::kWeighted);

TrustOpinion dtc_opinion(const State& state, const PrincipalId& viewer,
                         const PrincipalId& subject, const QueryContext& query,
                         const EngineParams& params);

class AtcCache {
 public:
  struct Key {
    PrincipalId viewer;
    PrincipalId subject;
    std::optional<std::string> scope;
    std::string params_digest;

    friend auto operator<=>(const Key&, const Key&) = default;
  };

  struct Entry {
    TrustOpinion opinion;
    RepositoryVersion version = 0;
    Tick tick = 0;
  };

  explicit AtcCache(std::uint64_t staleness_events = 0)
      : staleness_events_(staleness_events) {}

  AtcCache(const AtcCache&) = delete;
  AtcCache& operator=(const AtcCache&) = delete;

  std::uint64_t staleness_events() const { return staleness_events_; }

  // Entry usable at `current`: stored version ≤ current and lagging by at
  // most staleness_events. Counts a hit or a miss.
  std::optional<TrustOpinion> lookup(const Key& key, RepositoryVersion current);
  // Keeps whichever of the existing and new entry is newer.
  void store(const Key& key, const TrustOpinion& opinion, RepositoryVersion version,
             Tick tick);
  void clear();

  size_t size() const;
  std::uint64_t hits() const;
  std::uint64_t misses() const;

  nlohmann::json to_json() const;
  // Replaces the contents with entries read from to_json() output.
  void load_json(const nlohmann::json& j);

 private:
  const std::uint64_t staleness_events_;
  mutable std::mutex mu_;
  std::map<Key, Entry> entries_;
  std::uint64_t hits_ = 0;
  std::uint64_t misses_ = 0;
};

TrustOpinion atc_opinion(const State& state, const PrincipalId& viewer,
                         const PrincipalId& subject, const QueryContext& query,
                         AtcCache& cache, const EngineParams& params);

}  // namespace trustmesh

#endif  // TRUSTMESH_REPUTATION_H_
