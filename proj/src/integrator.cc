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

#include "trustmesh/integrator.h"

#include <algorithm>
#include <cmath>

#include "trustmesh/error.h"

namespace trustmesh {

CombinedScore combine_components(double verification, const TrustComponent& direct,
                                 const TrustComponent& recommended,
                                 const IntegrationParams& params) {
  CombinedScore out;
  out.used_direct = direct.support > 0 && direct.value.has_value();
  out.used_recommended = recommended.support > 0 && recommended.value.has_value();

  double num = params.alpha * verification;
  double den = params.alpha;
  double lo = verification;
  double hi = verification;
  if (out.used_direct) {
    num += params.beta * *direct.value;
    den += params.beta;
    lo = std::min(lo, *direct.value);
    hi = std::max(hi, *direct.value);
  }
  if (out.used_recommended) {
    num += params.gamma * *recommended.value;
    den += params.gamma;
    lo = std::min(lo, *recommended.value);
    hi = std::max(hi, *recommended.value);
  }
  // Cold start, or every present component carries zero weight.
  if ((!out.used_direct && !out.used_recommended) || den <= 0.0) {
    out.score = verification;
    return out;
  }
  out.score = std::clamp(num / den, lo, hi);
  return out;
}

TrustOpinion trust_opinion(const State& state, const PrincipalId& viewer,
                           const PrincipalId& subject, const QueryContext& query,
                           const EngineParams& params) {
  if (state.resolve(viewer) == state.resolve(subject)) {
    throw TrustError(ErrorCode::kSelfOpinion,
                     "viewer '" + viewer.str() + "' and subject '" +
                         subject.str() + "' are the same principal");
  }
  const RecordEntry& record = state.record_of(subject);
  if (record.verification < params.integration.min_verification) {
    throw TrustError(ErrorCode::kBelowVerificationFloor,
                     "subject '" + subject.str() + "' has verification " +
                         std::to_string(record.verification) +
                         " below the floor " +
                         std::to_string(params.integration.min_verification));
  }

  TrustOpinion o;
  o.verification = record.verification;
  o.direct = direct_trust(state, viewer, subject);
  o.recommended = recommended_trust(state, viewer, subject, query, params.context,
                                    params.integration.credibility);
  CombinedScore combined =
      combine_components(o.verification, o.direct, o.recommended, params.integration);
  o.score = combined.score;
  o.used_direct = combined.used_direct;
  o.used_recommended = combined.used_recommended;
  o.repo_version = state.version();
  return o;
}

RegistrationOutcome register_with_rebirth_check(Repository& repo,
                                                const CredentialSet& creds,
                                                const TierPolicy& policy, Tick tick) {
  std::vector<std::string> requested;
  requested.reserve(creds.size());
  for (const auto& [name, cred] : creds) requested.push_back(name);
  validate_disclosure_request(requested, policy);

  RegistrationOutcome out;
  out.verification = verify_credentials(creds, policy);

  std::shared_ptr<const State> state = repo.snapshot();
  out.principal = state->next_principal_id();
  std::optional<PrincipalId> linked;
  if (out.verification.fingerprint) {
    linked = state->find_by_fingerprint(*out.verification.fingerprint);
  }
  out.linked = linked.has_value();
  out.record = linked.value_or(out.principal);
  state.reset();

  std::vector<EventPayload> events;
  events.emplace_back(Registered{out.principal, policy.tier(), linked});
  events.emplace_back(CredentialVerified{out.principal, out.verification.score,
                                         out.verification.verified_attrs,
                                         out.verification.fingerprint});
  repo.append_batch(std::move(events), tick);
  return out;
}

TxId complete_transaction(Repository& repo, TransactionRecord draft, Tick tick) {
  if (draft.tx_id.empty()) draft.tx_id = repo.snapshot()->next_tx_id();
  TxId id = draft.tx_id;
  draft.tick = tick;
  repo.append(TransactionCompleted{std::move(draft)}, tick);
  return id;
}

RepositoryVersion rate_after_transaction(Repository& repo, const PrincipalId& rater,
                                         const PrincipalId& ratee, const TxId& tx_id,
                                         double value, Tick tick) {
  {
    std::shared_ptr<const State> state = repo.snapshot();
    const PrincipalId& from = state->resolve(rater);
    const PrincipalId& to = state->resolve(ratee);
    const TransactionRecord& tx = state->transaction(tx_id);
    const PrincipalId& buyer = state->resolve(tx.buyer);
    const PrincipalId& seller = state->resolve(tx.seller);
    const bool parties = (from == buyer && to == seller) ||
                         (from == seller && to == buyer);
    if (!parties) {
      throw TrustError(ErrorCode::kNotAParty,
                       "'" + rater.str() + "' and '" + ratee.str() +
                           "' are not the two parties of transaction '" +
                           tx_id.str() + "'");
    }
    if (!std::isfinite(value) || value < 0.0 || value > 1.0) {
      throw TrustError(ErrorCode::kValueOutOfRange,
                       "rating value must lie in [0,1], got " + std::to_string(value));
    }
  }
  return repo.append(RatingUpserted{Rating{rater, ratee, value, tx_id, tick}}, tick);
}

}  // namespace trustmesh
