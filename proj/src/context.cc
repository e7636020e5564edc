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

#include "trustmesh/context.h"

#include <algorithm>
#include <cmath>

#include "trustmesh/error.h"

namespace trustmesh {

using nlohmann::json;

namespace {

[[noreturn]] void bad_weights(const std::string& why) {
  throw TrustError(ErrorCode::kInvalidConfig, "context weights: " + why);
}

bool in_unit(double v) { return std::isfinite(v) && v >= 0.0 && v <= 1.0; }

char lower(char c) {
  return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
}

}  // namespace

void ContextWeights::validate() const {
  if (!in_unit(w_cost) || !in_unit(w_scope) || !in_unit(w_delivery)) {
    bad_weights("each weight must lie in [0,1]");
  }
  if (std::abs(w_cost + w_scope + w_delivery - 1.0) > 1e-9) {
    bad_weights("w_cost + w_scope + w_delivery must equal 1");
  }
  if (cost_cap <= Money()) bad_weights("cost_cap must be positive");
}

ContextWeights ContextWeights::from_json(const json& j) {
  ContextWeights w;
  try {
    w.w_cost = j.value("w_cost", w.w_cost);
    w.w_scope = j.value("w_scope", w.w_scope);
    w.w_delivery = j.value("w_delivery", w.w_delivery);
    if (j.contains("cost_cap")) {
      const json& cap = j.at("cost_cap");
      if (cap.is_string()) {
        w.cost_cap = Money::parse(cap.get<std::string>());
      } else if (cap.is_number() && cap.get<double>() >= 0) {
        w.cost_cap = Money::from_cents(std::llround(cap.get<double>() * 100.0));
      } else {
        bad_weights("cost_cap must be a decimal string or number");
      }
    }
  } catch (const json::exception& e) {
    bad_weights(e.what());
  } catch (const TrustError& e) {
    if (e.code() == ErrorCode::kInvalidConfig) throw;
    bad_weights(e.what());
  }
  w.validate();
  return w;
}

json ContextWeights::to_json() const {
  return {{"w_cost", w_cost},
          {"w_scope", w_scope},
          {"w_delivery", w_delivery},
          {"cost_cap", cost_cap.to_string()}};
}

double cost_norm(Money cost, Money cost_cap) {
  if (cost < Money() || cost_cap <= Money()) {
    throw TrustError(ErrorCode::kInvariantViolation,
                     "cost_norm needs cost ≥ 0 and cost_cap > 0");
  }
  double ratio = std::log1p(cost.units()) / std::log1p(cost_cap.units());
  return std::min(1.0, ratio);
}

double delivery_score(int promised_days, int actual_days) {
  if (promised_days < 1) {
    throw TrustError(ErrorCode::kInvariantViolation, "promised_days ≥ 1");
  }
  const int overrun = std::max(0, actual_days - promised_days);
  const double score =
      1.0 - static_cast<double>(overrun) / static_cast<double>(promised_days);
  return std::clamp(score, 0.0, 1.0);
}

double scope_match(std::string_view tx_scope, const QueryContext& query) {
  if (!query.scope) return 1.0;
  const std::string& want = *query.scope;
  if (want.size() != tx_scope.size()) return 0.0;
  for (size_t i = 0; i < want.size(); ++i) {
    if (lower(want[i]) != lower(tx_scope[i])) return 0.0;
  }
  return 1.0;
}

double context_weight(const TransactionRecord& tx, const QueryContext& query,
                      const ContextWeights& w) {
  const double weight = w.w_cost * cost_norm(tx.cost, w.cost_cap) +
                        w.w_scope * scope_match(tx.scope, query) +
                        w.w_delivery * delivery_score(tx.promised_days, tx.actual_days);
  return std::clamp(weight, 0.0, 1.0);
}

}  // namespace trustmesh
