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

#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "test_util.h"

namespace trustmesh {
namespace {

using testing::add_principal;
using testing::rate_via_trade;

class ReputationTest : public ::testing::Test {
 protected:
  void SetUp() override {
    v_ = add_principal(repo_, "v");
    s_ = add_principal(repo_, "s");
  }
  std::shared_ptr<const State> snap() const { return repo_.snapshot(); }

  Repository repo_;
  PrincipalId v_, s_;
  ContextWeights weights_;
};

TEST_F(ReputationTest, DirectTrust) {
  EXPECT_EQ(direct_trust(*snap(), v_, s_), (TrustComponent{std::nullopt, 0}));
  rate_via_trade(repo_, v_, s_, 0.9);
  EXPECT_EQ(direct_trust(*snap(), v_, s_), (TrustComponent{0.9, 1}));
  rate_via_trade(repo_, v_, s_, 0.2);
  EXPECT_EQ(direct_trust(*snap(), v_, s_), (TrustComponent{0.2, 1}));
}

TEST_F(ReputationTest, Credibility) {
  auto c = add_principal(repo_, "c");
  EXPECT_EQ(rater_credibility(*snap(), v_, c), 0.5);

  auto x = add_principal(repo_, "x");
  auto y = add_principal(repo_, "y");
  rate_via_trade(repo_, x, c, 0.2);
  rate_via_trade(repo_, y, c, 0.8);
  EXPECT_DOUBLE_EQ(rater_credibility(*snap(), v_, c), 0.5);

  rate_via_trade(repo_, v_, c, 1.0);
  EXPECT_EQ(rater_credibility(*snap(), v_, c), 1.0);
}

TEST_F(ReputationTest, RecommendedExamples) {
  EXPECT_FALSE(recommended_trust(*snap(), v_, s_, {}, weights_).value);

  auto c1 = add_principal(repo_, "c1");
  rate_via_trade(repo_, c1, s_, 0.8);
  auto one = recommended_trust(*snap(), v_, s_, {}, weights_);
  EXPECT_EQ(one.value, 0.8);
  EXPECT_EQ(one.support, 1);

  // Second rater with equal credibility (0.5, nobody rated either) and an
  // identical transaction, hence equal context weight.
  auto c2 = add_principal(repo_, "c2");
  rate_via_trade(repo_, c2, s_, 0.6);
  rate_via_trade(repo_, c1, s_, 1.0);
  auto two = recommended_trust(*snap(), v_, s_, {}, weights_);
  EXPECT_DOUBLE_EQ(*two.value, 0.8);
  EXPECT_EQ(two.support, 2);
}

TEST_F(ReputationTest, ViewerOwnRatingIsExcluded) {
  rate_via_trade(repo_, v_, s_, 0.1);
  EXPECT_FALSE(recommended_trust(*snap(), v_, s_, {}, weights_).value);
  auto c = add_principal(repo_, "c");
  rate_via_trade(repo_, c, s_, 0.9);
  EXPECT_EQ(recommended_trust(*snap(), v_, s_, {}, weights_).value, 0.9);
}

TEST_F(ReputationTest, ZeroWeightRatingsDoNotCount) {
  auto c = add_principal(repo_, "c");
  // Scope mismatch, free, 100% late: context weight 0.
  rate_via_trade(repo_, c, s_, 0.9, Money(), "toys", 2, 4);
  EXPECT_FALSE(recommended_trust(*snap(), v_, s_, QueryContext{"books"}, weights_).value);
  EXPECT_TRUE(recommended_trust(*snap(), v_, s_, QueryContext{"toys"}, weights_).value);
}

TEST_F(ReputationTest, UniformModeIgnoresCredibility) {
  auto good = add_principal(repo_, "good");
  auto bad = add_principal(repo_, "bad");
  rate_via_trade(repo_, v_, good, 1.0);
  rate_via_trade(repo_, v_, bad, 0.0);
  rate_via_trade(repo_, good, s_, 0.9);
  rate_via_trade(repo_, bad, s_, 0.1);
  EXPECT_DOUBLE_EQ(*recommended_trust(*snap(), v_, s_, {}, weights_).value, 0.9);
  EXPECT_DOUBLE_EQ(
      *recommended_trust(*snap(), v_, s_, {}, weights_, CredibilityMode::kUniform).value, 0.5);
}

// Random populations: recommended trust stays within the range of the
// ratings it combines, adding a 1.0 rating never lowers it and adding a 0.0
// rating never raises it.
TEST(ReputationPropertyTest, ConvexAndMonotone) {
  ContextWeights weights;
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    std::mt19937_64 rng(seed);
    Repository repo;
    auto viewer = add_principal(repo, "v");
    auto subject = add_principal(repo, "s");
    std::vector<PrincipalId> raters;
    const int n = 1 + static_cast<int>(rng() % 6);
    for (int i = 0; i < n; ++i) raters.push_back(add_principal(repo, "c" + std::to_string(i)));
    double lo = 1.0, hi = 0.0;
    for (const auto& c : raters) {
      double value = (rng() % 101) / 100.0;
      lo = std::min(lo, value);
      hi = std::max(hi, value);
      rate_via_trade(repo, c, subject, value,
                     Money::from_cents(1 + static_cast<std::int64_t>(rng() % 500000)), "books",
                     3, static_cast<int>(rng() % 5));
      if (rng() % 2) rate_via_trade(repo, viewer, c, (rng() % 101) / 100.0);
    }
    auto base = recommended_trust(*repo.snapshot(), viewer, subject, {}, weights);
    ASSERT_TRUE(base.value);
    EXPECT_GE(*base.value, lo);
    EXPECT_LE(*base.value, hi);

    for (double extreme : {1.0, 0.0}) {
      Repository copy;
      for (const auto& e : repo.events()) copy.append_event(e);
      auto extra = add_principal(copy, "extra");
      rate_via_trade(copy, extra, subject, extreme);
      auto after = recommended_trust(*copy.snapshot(), viewer, subject, {}, weights);
      if (extreme == 1.0) {
        EXPECT_GE(*after.value, *base.value - 1e-15) << seed;
      } else {
        EXPECT_LE(*after.value, *base.value + 1e-15) << seed;
      }
    }
  }
}

class AtcTest : public ReputationTest {
 protected:
  EngineParams params_;
};

TEST_F(AtcTest, ZeroStalenessMatchesDtcAlways) {
  AtcCache cache(0);
  auto c = add_principal(repo_, "c");
  for (int i = 0; i < 30; ++i) {
    rate_via_trade(repo_, c, s_, (i % 11) / 10.0);
    auto s = snap();
    EXPECT_EQ(atc_opinion(*s, v_, s_, {}, cache, params_), dtc_opinion(*s, v_, s_, {}, params_));
    EXPECT_EQ(atc_opinion(*s, v_, s_, {}, cache, params_), dtc_opinion(*s, v_, s_, {}, params_));
  }
  EXPECT_EQ(cache.hits(), 30u);
}

TEST_F(AtcTest, SecondCallIsServedFromCache) {
  AtcCache cache(0);
  auto s = snap();
  auto first = atc_opinion(*s, v_, s_, {}, cache, params_);
  auto second = atc_opinion(*s, v_, s_, {}, cache, params_);
  EXPECT_EQ(first, second);
  EXPECT_EQ(cache.misses(), 1u);
  EXPECT_EQ(cache.hits(), 1u);
}

TEST_F(AtcTest, StalenessWindow) {
  AtcCache cache(5);
  auto c = add_principal(repo_, "c");
  rate_via_trade(repo_, c, s_, 1.0);
  const auto cached = atc_opinion(*snap(), v_, s_, {}, cache, params_);
  EXPECT_EQ(cached.recommended.value, 1.0);

  // Three events: a new rater, its transaction and its rating.
  auto d = add_principal(repo_, "d");  // two events
  TxId tx = testing::add_tx(repo_, d, s_);  // third
  auto after3 = atc_opinion(*snap(), v_, s_, {}, cache, params_);
  EXPECT_EQ(after3, cached);

  testing::add_rating(repo_, d, s_, tx, 0.0);
  // The fourth event moved DTC but the cache still answers.
  EXPECT_NE(dtc_opinion(*snap(), v_, s_, {}, params_).score, cached.score);
  EXPECT_EQ(atc_opinion(*snap(), v_, s_, {}, cache, params_), cached);

  auto e = add_principal(repo_, "e");  // events 5 and 6
  (void)e;
  auto after6 = atc_opinion(*snap(), v_, s_, {}, cache, params_);
  EXPECT_EQ(after6, dtc_opinion(*snap(), v_, s_, {}, params_));
  EXPECT_NE(after6.score, cached.score);
}

TEST_F(AtcTest, KeyIncludesScopeAndParams) {
  AtcCache cache(100);
  auto c = add_principal(repo_, "c");
  auto d = add_principal(repo_, "d");
  rate_via_trade(repo_, c, s_, 0.9, Money::parse("10"), "toys");
  rate_via_trade(repo_, d, s_, 0.1, Money::parse("10"), "books");
  auto s = snap();
  auto any = atc_opinion(*s, v_, s_, {}, cache, params_);
  auto books = atc_opinion(*s, v_, s_, QueryContext{"books"}, cache, params_);
  EXPECT_DOUBLE_EQ(*any.recommended.value, 0.5);
  EXPECT_LT(*books.recommended.value, *any.recommended.value);
  EXPECT_EQ(books, dtc_opinion(*s, v_, s_, QueryContext{"books"}, params_));

  EngineParams other = params_;
  other.integration.gamma = 0.6;
  other.integration.alpha = 0.1;
  EXPECT_EQ(atc_opinion(*s, v_, s_, {}, cache, other), dtc_opinion(*s, v_, s_, {}, other));
  EXPECT_EQ(cache.size(), 3u);
}

TEST_F(AtcTest, JsonRoundTrip) {
  AtcCache cache(3);
  atc_opinion(*snap(), v_, s_, {}, cache, params_);
  atc_opinion(*snap(), s_, v_, QueryContext{"books"}, cache, params_);
  AtcCache loaded(3);
  loaded.load_json(cache.to_json());
  EXPECT_EQ(loaded.to_json(), cache.to_json());
  EXPECT_EQ(loaded.size(), 2u);
}

}  // namespace
}  // namespace trustmesh
