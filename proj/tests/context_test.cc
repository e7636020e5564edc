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

#include <gtest/gtest.h>

#include <random>

#include "trustmesh/error.h"

namespace trustmesh {
namespace {

TransactionRecord tx_with(Money cost, std::string scope, int promised, int actual) {
  TransactionRecord tx;
  tx.cost = cost;
  tx.scope = std::move(scope);
  tx.promised_days = promised;
  tx.actual_days = actual;
  return tx;
}

TEST(CostNormTest, Examples) {
  const Money cap = Money::parse("9999");
  EXPECT_EQ(cost_norm(Money(), cap), 0.0);
  EXPECT_EQ(cost_norm(cap, cap), 1.0);
  EXPECT_NEAR(cost_norm(Money::parse("99"), cap), 0.5, 1e-15);
  EXPECT_EQ(cost_norm(Money::parse("20000"), cap), 1.0);
}

TEST(DeliveryTest, Examples) {
  EXPECT_EQ(delivery_score(5, 5), 1.0);
  EXPECT_EQ(delivery_score(5, 2), 1.0);
  EXPECT_EQ(delivery_score(5, 10), 0.0);
  EXPECT_EQ(delivery_score(5, 30), 0.0);
  EXPECT_EQ(delivery_score(4, 6), 0.5);
}

TEST(ScopeTest, Examples) {
  EXPECT_EQ(scope_match("electronics", QueryContext{}), 1.0);
  EXPECT_EQ(scope_match("electronics", QueryContext{"electronics"}), 1.0);
  EXPECT_EQ(scope_match("Electronics", QueryContext{"ELECTRONICS"}), 1.0);
  EXPECT_EQ(scope_match("electronics", QueryContext{"books"}), 0.0);
}

TEST(ContextWeightTest, Examples) {
  ContextWeights w;
  w.cost_cap = Money::parse("9999");
  EXPECT_EQ(context_weight(tx_with(w.cost_cap, "books", 3, 3), QueryContext{"books"}, w), 1.0);
  EXPECT_NEAR(context_weight(tx_with(Money::parse("99"), "books", 3, 3), QueryContext{}, w), 0.75,
              1e-12);
  EXPECT_EQ(context_weight(tx_with(Money(), "books", 3, 6), QueryContext{"toys"}, w), 0.0);
}

TEST(ContextWeightTest, BoundedAndMonotoneInCost) {
  std::mt19937_64 rng(11);
  ContextWeights w;
  for (int i = 0; i < 2000; ++i) {
    const int promised = 1 + static_cast<int>(rng() % 10);
    const int actual = static_cast<int>(rng() % 25);
    const auto cost = static_cast<std::int64_t>(rng() % 2'000'000);
    QueryContext q;
    if (rng() % 2) q.scope = (rng() % 2) ? "books" : "toys";
    auto tx = tx_with(Money::from_cents(cost), "books", promised, actual);
    const double cw = context_weight(tx, q, w);
    EXPECT_GE(cw, 0.0);
    EXPECT_LE(cw, 1.0);
    auto pricier = tx_with(Money::from_cents(cost + 1 + static_cast<std::int64_t>(rng() % 100000)),
                           "books", promised, actual);
    EXPECT_GE(context_weight(pricier, q, w), cw);
  }
}

TEST(ContextWeightTest, CostIgnoredWhenItsWeightIsZero) {
  ContextWeights w{0.0, 0.4, 0.6, Money::parse("10000")};
  const double cheap = context_weight(tx_with(Money::parse("1"), "books", 4, 5), {}, w);
  const double dear = context_weight(tx_with(Money::parse("9000"), "books", 4, 5), {}, w);
  EXPECT_EQ(cheap, dear);
}

TEST(ContextWeightsTest, ValidationAndJson) {
  ContextWeights w;
  EXPECT_NO_THROW(w.validate());
  auto j = w.to_json();
  auto back = ContextWeights::from_json(j);
  EXPECT_EQ(back.to_json(), j);
  ContextWeights bad{0.5, 0.5, 0.5, Money::parse("1")};
  EXPECT_THROW(bad.validate(), TrustError);
  ContextWeights negative{-0.1, 0.6, 0.5, Money::parse("1")};
  EXPECT_THROW(negative.validate(), TrustError);
  ContextWeights zero_cap{0.5, 0.2, 0.3, Money()};
  EXPECT_THROW(zero_cap.validate(), TrustError);
}

}  // namespace
}  // namespace trustmesh
