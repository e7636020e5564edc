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

#include <gtest/gtest.h>

#include <random>

#include "test_util.h"
#include "trustmesh/config.h"

namespace trustmesh {
namespace {

using testing::add_principal;
using testing::code_of;

const TrustComponent kAbsent{std::nullopt, 0};
TrustComponent present(double v, int support = 1) { return {v, support}; }

TEST(CombineTest, HandValues) {
  IntegrationParams p;
  auto all = combine_components(1.0, present(0.5), present(0.5, 3), p);
  EXPECT_NEAR(all.score, 0.60, 1e-12);
  EXPECT_TRUE(all.used_direct);
  EXPECT_TRUE(all.used_recommended);

  auto no_r = combine_components(0.6, present(0.8), kAbsent, p);
  EXPECT_NEAR(no_r.score, 0.72, 1e-12);
  EXPECT_FALSE(no_r.used_recommended);
}

TEST(CombineTest, PresencePatterns) {
  IntegrationParams p;
  const double v = 0.37, d = 0.81, r = 0.12;
  EXPECT_EQ(combine_components(v, kAbsent, kAbsent, p).score, v);
  EXPECT_NEAR(combine_components(v, present(d), kAbsent, p).score,
              (0.2 * v + 0.3 * d) / 0.5, 1e-12);
  EXPECT_NEAR(combine_components(v, kAbsent, present(r), p).score,
              (0.2 * v + 0.5 * r) / 0.7, 1e-12);
  EXPECT_NEAR(combine_components(v, present(d), present(r), p).score,
              0.2 * v + 0.3 * d + 0.5 * r, 1e-12);
}

TEST(CombineTest, ZeroSupportCountsAsAbsent) {
  IntegrationParams p;
  EXPECT_EQ(combine_components(0.4, TrustComponent{0.9, 0}, kAbsent, p).score, 0.4);
}

TEST(CombineTest, ZeroWeightComponentsFallBackToVerification) {
  IntegrationParams p{0.0, 1.0, 0.0, 0.2, CredibilityMode::kWeighted};
  EXPECT_EQ(combine_components(0.4, kAbsent, present(0.9), p).score, 0.4);
  EXPECT_EQ(combine_components(0.4, present(0.9), kAbsent, p).score, 0.9);
}

// Scores stay in [0,1] and inside the range of the present components.
TEST(CombineTest, ScaleConsistency) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int i = 0; i < 5000; ++i) {
    double a = unit(rng), b = unit(rng) * (1 - a);
    IntegrationParams p{a, b, 1.0 - a - b, 0.0, CredibilityMode::kWeighted};
    const double v = unit(rng);
    TrustComponent d = rng() % 2 ? present(unit(rng)) : kAbsent;
    TrustComponent r = rng() % 2 ? present(unit(rng)) : kAbsent;
    const double s = combine_components(v, d, r, p).score;
    double lo = v, hi = v;
    for (const auto* c : {&d, &r}) {
      if (c->value) {
        lo = std::min(lo, *c->value);
        hi = std::max(hi, *c->value);
      }
    }
    EXPECT_GE(s, lo);
    EXPECT_LE(s, hi);
    EXPECT_GE(s, 0.0);
    EXPECT_LE(s, 1.0);
  }
}

class IntegratorTest : public ::testing::Test {
 protected:
  IntegratorTest() : config_(default_engine_config()), params_(config_.engine_params()) {}

  RegistrationOutcome enroll(const std::string& gov_id, bool verify_payment = true,
                             Tick tick = 0) {
    CredentialSet creds = {{"email", {gov_id + "@mail", true}},
                           {"payment", {"card-" + gov_id, verify_payment}},
                           {"gov_id", {gov_id, true}}};
    return register_with_rebirth_check(repo_, creds, config_.tier("standard"), tick);
  }

  TxId trade(const PrincipalId& buyer, const PrincipalId& seller) {
    TransactionRecord draft;
    draft.buyer = buyer;
    draft.seller = seller;
    draft.cost = Money::parse("25.00");
    draft.scope = "books";
    draft.promised_days = 3;
    draft.actual_days = 3;
    return complete_transaction(repo_, draft, 0);
  }

  EngineConfig config_;
  EngineParams params_;
  Repository repo_;
};

TEST_F(IntegratorTest, ColdStartPassesVerificationThrough) {
  auto viewer = enroll("V-1");
  CredentialSet creds = {{"email", {"x", true}}, {"payment", {"y", false}},
                         {"gov_id", {"G-7", true}}};
  auto seller = register_with_rebirth_check(repo_, creds, config_.tier("standard"), 0);
  EXPECT_DOUBLE_EQ(seller.verification.score, 0.7);
  auto o = trust_opinion(*repo_.snapshot(), viewer.principal, seller.principal, {}, params_);
  EXPECT_EQ(o.score, seller.verification.score);
  EXPECT_FALSE(o.used_direct);
  EXPECT_FALSE(o.used_recommended);
  EXPECT_EQ(opinion_to_json(o)["components_used"], nlohmann::json::array({"V"}));
}

TEST_F(IntegratorTest, OpinionErrors) {
  auto a = enroll("A");
  EXPECT_EQ(code_of([&] { trust_opinion(*repo_.snapshot(), a.principal, a.principal, {}, params_); }),
            ErrorCode::kSelfOpinion);
  EXPECT_EQ(code_of([&] {
              trust_opinion(*repo_.snapshot(), a.principal, PrincipalId("nobody"), {}, params_);
            }),
            ErrorCode::kUnknownPrincipal);
  CredentialSet weak = {{"email", {"w", false}}};
  auto w = register_with_rebirth_check(repo_, weak, config_.tier("standard"), 0);
  EXPECT_EQ(code_of([&] { trust_opinion(*repo_.snapshot(), a.principal, w.principal, {}, params_); }),
            ErrorCode::kBelowVerificationFloor);
}

TEST_F(IntegratorTest, CrossRatingAndOverwrite) {
  auto buyer = enroll("B").principal;
  auto seller = enroll("S").principal;
  TxId tx = trade(buyer, seller);
  rate_after_transaction(repo_, buyer, seller, tx, 0.9, 0);
  rate_after_transaction(repo_, seller, buyer, tx, 0.7, 0);
  auto s = repo_.snapshot();
  EXPECT_EQ(s->latest_rating(buyer, seller)->value, 0.9);
  EXPECT_EQ(s->latest_rating(seller, buyer)->value, 0.7);

  TxId tx2 = trade(buyer, seller);
  rate_after_transaction(repo_, buyer, seller, tx2, 0.3, 1);
  EXPECT_EQ(repo_.snapshot()->latest_rating(buyer, seller)->value, 0.3);
  EXPECT_EQ(repo_.snapshot()->latest_rating(buyer, seller)->tx_id, tx2);
  EXPECT_EQ(repo_.snapshot()->stored_rating_count(), 2u);
}

TEST_F(IntegratorTest, RatingErrors) {
  auto buyer = enroll("B").principal;
  auto seller = enroll("S").principal;
  auto outsider = enroll("O").principal;
  TxId tx = trade(buyer, seller);
  EXPECT_EQ(code_of([&] { rate_after_transaction(repo_, outsider, seller, tx, 0.1, 0); }),
            ErrorCode::kNotAParty);
  EXPECT_EQ(code_of([&] { rate_after_transaction(repo_, buyer, outsider, tx, 0.1, 0); }),
            ErrorCode::kNotAParty);
  EXPECT_EQ(code_of([&] { rate_after_transaction(repo_, buyer, seller, tx, 1.01, 0); }),
            ErrorCode::kValueOutOfRange);
  EXPECT_EQ(code_of([&] { rate_after_transaction(repo_, buyer, seller, TxId("t424242"), 0.5, 0); }),
            ErrorCode::kUnknownTransaction);
  EXPECT_EQ(code_of([&] { rate_after_transaction(repo_, PrincipalId("zz"), seller, tx, 0.5, 0); }),
            ErrorCode::kUnknownPrincipal);
  EXPECT_EQ(repo_.snapshot()->stored_rating_count(), 0u);
}

TEST_F(IntegratorTest, DisclosureIsCheckedBeforeAnythingIsWritten) {
  CredentialSet creds = {{"email", {"x", true}}, {"mother_maiden_name", {"m", true}}};
  try {
    register_with_rebirth_check(repo_, creds, config_.tier("standard"), 0);
    FAIL();
  } catch (const DisclosureViolation& e) {
    EXPECT_EQ(e.extra(), std::vector<std::string>{"mother_maiden_name"});
  }
  EXPECT_EQ(repo_.version(), 0u);
}

TEST_F(IntegratorTest, RebirthLinksToTheOldRecord) {
  auto viewer = enroll("V").principal;
  auto rater = enroll("R").principal;
  auto old = enroll("AB-123");
  EXPECT_FALSE(old.linked);
  TxId tx = trade(viewer, old.principal);
  rate_after_transaction(repo_, viewer, old.principal, tx, 0.1, 0);
  TxId tx2 = trade(rater, old.principal);
  rate_after_transaction(repo_, rater, old.principal, tx2, 0.2, 0);

  // Same gov_id with different case and spacing, different email.
  CredentialSet again = {{"email", {"fresh@mail", true}}, {"gov_id", {" ab-123 ", true}},
                         {"payment", {"new-card", true}}};
  auto reborn = register_with_rebirth_check(repo_, again, config_.tier("standard"), 1);
  EXPECT_TRUE(reborn.linked);
  EXPECT_NE(reborn.principal, old.principal);
  EXPECT_EQ(reborn.record, old.record);

  auto s = repo_.snapshot();
  for (const auto& v : {viewer, rater}) {
    EXPECT_EQ(trust_opinion(*s, v, reborn.principal, {}, params_).score,
              trust_opinion(*s, v, old.principal, {}, params_).score);
  }
  EXPECT_EQ(code_of([&] { trust_opinion(*s, reborn.principal, old.principal, {}, params_); }),
            ErrorCode::kSelfOpinion);
}

TEST_F(IntegratorTest, DifferentGovIdIsIndependent) {
  auto viewer = enroll("V").principal;
  auto old = enroll("AB-123").principal;
  TxId tx = trade(viewer, old);
  rate_after_transaction(repo_, viewer, old, tx, 0.1, 0);
  auto fresh = enroll("AB-124");
  EXPECT_FALSE(fresh.linked);
  auto o = trust_opinion(*repo_.snapshot(), viewer, fresh.principal, {}, params_);
  EXPECT_EQ(o.score, fresh.verification.score);
  EXPECT_FALSE(o.direct.value);
}

TEST_F(IntegratorTest, BasicTierNeverLinks) {
  CredentialSet creds = {{"email", {"same", true}}, {"phone", {"555", true}}};
  auto a = register_with_rebirth_check(repo_, creds, config_.tier("basic"), 0);
  auto b = register_with_rebirth_check(repo_, creds, config_.tier("basic"), 0);
  EXPECT_FALSE(a.verification.fingerprint);
  EXPECT_FALSE(b.linked);
  EXPECT_NE(a.record, b.record);
}

TEST_F(IntegratorTest, OpinionJsonRoundTrip) {
  auto buyer = enroll("B").principal;
  auto seller = enroll("S").principal;
  TxId tx = trade(buyer, seller);
  rate_after_transaction(repo_, buyer, seller, tx, 0.9, 0);
  auto o = trust_opinion(*repo_.snapshot(), buyer, seller, {}, params_);
  EXPECT_EQ(opinion_from_json(opinion_to_json(o)), o);
  EXPECT_EQ(opinion_to_json(o)["components_used"], nlohmann::json::array({"V", "D"}));
}

}  // namespace
}  // namespace trustmesh
