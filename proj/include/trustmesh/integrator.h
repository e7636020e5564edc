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

// Combines verification, direct and recommended trust into one opinion, and
// hosts the write paths that feed the repository: registration with the
// re-birth check, transaction completion and cross rating.

#ifndef TRUSTMESH_INTEGRATOR_H_
#define TRUSTMESH_INTEGRATOR_H_

#include "trustmesh/opinion.h"
#include "trustmesh/policy.h"
#include "trustmesh/repository.h"
#include "trustmesh/reputation.h"

namespace trustmesh {

struct CombinedScore {
  double score = 0.0;
  bool used_direct = false;
  bool used_recommended = false;
};

// Weighted mean over the present components with weights (alpha, beta,
// gamma); absent components drop out and the rest renormalize. With only the
// verification score present the result is that score, bit for bit.
CombinedScore combine_components(double verification, const TrustComponent& direct,
                                 const TrustComponent& recommended,
                                 const IntegrationParams& params);

// Fresh opinion of `viewer` about `subject`. Throws kUnknownPrincipal,
// kSelfOpinion (also for two aliases of one record) and
// kBelowVerificationFloor.
TrustOpinion trust_opinion(const State& state, const PrincipalId& viewer,
                           const PrincipalId& subject, const QueryContext& query,
                           const EngineParams& params);

struct RegistrationOutcome {
  PrincipalId principal;
  PrincipalId record;
  bool linked = false;
  VerificationResult verification;
};

// Validates disclosure, verifies, fingerprints, and registers. A fingerprint
// already bound to a record links the new id to that record.
RegistrationOutcome register_with_rebirth_check(Repository& repo,
                                                const CredentialSet& creds,
                                                const TierPolicy& policy, Tick tick);

// Assigns a tx id when draft.tx_id is empty.
TxId complete_transaction(Repository& repo, TransactionRecord draft, Tick tick);

// Throws kUnknownPrincipal, kUnknownTransaction, kNotAParty, kValueOutOfRange.
RepositoryVersion rate_after_transaction(Repository& repo, const PrincipalId& rater,
                                         const PrincipalId& ratee, const TxId& tx_id,
                                         double value, Tick tick);

}  // namespace trustmesh

#endif  // TRUSTMESH_INTEGRATOR_H_
