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

#include "trustmesh/reputation.h"

#include <algorithm>

#include "trustmesh/integrator.h"

namespace trustmesh {

using nlohmann::json;

TrustComponent direct_trust(const State& state, const PrincipalId& viewer,
                            const PrincipalId& subject) {
  state.principal(viewer);
  state.principal(subject);
  TrustComponent c;
  if (auto r = state.latest_rating(viewer, subject)) {
    c.value = r->value;
    c.support = 1;
  }
  return c;
}

double rater_credibility(const State& state, const PrincipalId& viewer,
                         const PrincipalId& rater) {
  state.principal(viewer);
  state.principal(rater);
  if (auto r = state.latest_rating(viewer, rater)) return r->value;
  const State::RatingsByRater* about = state.incoming(rater);
  if (about == nullptr || about->empty()) return kNeutralCredibility;
  double sum = 0.0;
  for (const auto& [from, rating] : *about) sum += rating.value;
  return sum / static_cast<double>(about->size());
}

TrustComponent recommended_trust(const State& state, const PrincipalId& viewer,
                                 const PrincipalId& subject,
                                 const QueryContext& query,
                                 const ContextWeights& weights,
                                 CredibilityMode credibility) {
  const PrincipalId& self = state.resolve(viewer);
  state.principal(subject);
  TrustComponent c;
  const State::RatingsByRater* about = state.incoming(subject);
  if (about == nullptr) return c;

  double num = 0.0;
  double den = 0.0;
  double lo = 1.0;
  double hi = 0.0;
  int support = 0;
  for (const auto& [rater, rating] : *about) {
    if (rater == self) continue;
    const double cred = credibility == CredibilityMode::kUniform
                            ? 1.0
                            : rater_credibility(state, viewer, rater);
    const double cw =
        context_weight(state.transaction(rating.tx_id), query, weights);
    const double w = cred * cw;
    if (w <= 0.0) continue;
    num += w * rating.value;
    den += w;
    lo = std::min(lo, rating.value);
    hi = std::max(hi, rating.value);
    ++support;
  }
  if (support == 0 || den < kMinRecommendationMass) return c;
  // The ratio is a convex combination; clamp away last-ulp rounding.
  c.value = std::clamp(num / den, lo, hi);
  c.support = support;
  return c;
}

TrustOpinion dtc_opinion(const State& state, const PrincipalId& viewer,
                         const PrincipalId& subject, const QueryContext& query,
                         const EngineParams& params) {
  return trust_opinion(state, viewer, subject, query, params);
}

// ---------------------------------------------------------------------------
// AtcCache

std::optional<TrustOpinion> AtcCache::lookup(const Key& key,
                                             RepositoryVersion current) {
  std::lock_guard lock(mu_);
  auto it = entries_.find(key);
  if (it != entries_.end() && it->second.version <= current &&
      current - it->second.version <= staleness_events_) {
    ++hits_;
    return it->second.opinion;
  }
  ++misses_;
  return std::nullopt;
}

void AtcCache::store(const Key& key, const TrustOpinion& opinion,
                     RepositoryVersion version, Tick tick) {
  std::lock_guard lock(mu_);
  auto [it, inserted] = entries_.try_emplace(key, Entry{opinion, version, tick});
  if (!inserted && it->second.version <= version) {
    it->second = Entry{opinion, version, tick};
  }
}

void AtcCache::clear() {
  std::lock_guard lock(mu_);
  entries_.clear();
}

size_t AtcCache::size() const {
  std::lock_guard lock(mu_);
  return entries_.size();
}

std::uint64_t AtcCache::hits() const {
  std::lock_guard lock(mu_);
  return hits_;
}

std::uint64_t AtcCache::misses() const {
  std::lock_guard lock(mu_);
  return misses_;
}

json AtcCache::to_json() const {
  std::lock_guard lock(mu_);
  json entries = json::array();
  for (const auto& [key, entry] : entries_) {
    entries.push_back({{"viewer", key.viewer.str()},
                       {"subject", key.subject.str()},
                       {"scope", key.scope ? json(*key.scope) : json(nullptr)},
                       {"params", key.params_digest},
                       {"version", entry.version},
                       {"tick", entry.tick},
                       {"opinion", opinion_to_json(entry.opinion)}});
  }
  return {{"entries", std::move(entries)}};
}

void AtcCache::load_json(const json& j) {
  std::map<Key, Entry> loaded;
  for (const auto& e : j.at("entries")) {
    Key key{PrincipalId(e.at("viewer").get<std::string>()),
            PrincipalId(e.at("subject").get<std::string>()),
            e.at("scope").is_null()
                ? std::nullopt
                : std::optional<std::string>(e.at("scope").get<std::string>()),
            e.at("params").get<std::string>()};
    loaded[std::move(key)] = Entry{opinion_from_json(e.at("opinion")),
                                   e.at("version").get<RepositoryVersion>(),
                                   e.at("tick").get<Tick>()};
  }
  std::lock_guard lock(mu_);
  entries_ = std::move(loaded);
}

TrustOpinion atc_opinion(const State& state, const PrincipalId& viewer,
                         const PrincipalId& subject, const QueryContext& query,
                         AtcCache& cache, const EngineParams& params) {
  AtcCache::Key key{viewer, subject, query.scope, params.digest()};
  if (auto cached = cache.lookup(key, state.version())) return *cached;
  TrustOpinion fresh = dtc_opinion(state, viewer, subject, query, params);
  cache.store(key, fresh, state.version(), state.last_tick());
  return fresh;
}

}  // namespace trustmesh
