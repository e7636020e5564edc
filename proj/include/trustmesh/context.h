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

// Real-time transaction context: how much a rating bound to a transaction
// should count, from the transaction's cost, product scope and delivery
// punctuality.

#ifndef TRUSTMESH_CONTEXT_H_
#define TRUSTMESH_CONTEXT_H_

#include <optional>
#include <string>
#include <string_view>

#include "json.hpp"
#include "trustmesh/types.h"

namespace trustmesh {

struct ContextWeights {
  double w_cost = 0.5;
  double w_scope = 0.2;
  double w_delivery = 0.3;
  Money cost_cap = Money::from_cents(1'000'000);

  // Throws TrustError(kInvalidConfig).
  void validate() const;

  static ContextWeights from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

struct QueryContext {
  std::optional<std::string> scope;
};

// min(1, log(1+cost) / log(1+cost_cap)).
double cost_norm(Money cost, Money cost_cap);

// 1 - overrun/promised, clamped to [0,1]. Early or on time is 1.
double delivery_score(int promised_days, int actual_days);

// 1 when the query has no scope or the tags match case-insensitively.
double scope_match(std::string_view tx_scope, const QueryContext& query);

double context_weight(const TransactionRecord& tx, const QueryContext& query,
                      const ContextWeights& w);

}  // namespace trustmesh

#endif  // TRUSTMESH_CONTEXT_H_
