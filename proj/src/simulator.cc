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

#include "trustmesh/simulator.h"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <future>
#include <limits>
#include <random>

#include "trustmesh/digest.h"
#include "trustmesh/error.h"
#include "trustmesh/integrator.h"
#include "trustmesh/reputation.h"

namespace trustmesh {

using nlohmann::json;

namespace {

[[noreturn]] void bad_scenario(const std::string& why) {
  throw TrustError(ErrorCode::kInvalidConfig, "scenario: " + why);
}

const char* attack_name(AttackType t) {
  switch (t) {
    case AttackType::kNone:
      return "none";
    case AttackType::kCollusion:
      return "collusion";
    case AttackType::kSlander:
      return "slander";
    case AttackType::kWhitewash:
      return "whitewash";
    case AttackType::kContextExploit:
      return "context_exploit";
  }
  return "none";
}

AttackType parse_attack(const std::string& name) {
  if (name == "none") return AttackType::kNone;
  if (name == "collusion") return AttackType::kCollusion;
  if (name == "slander") return AttackType::kSlander;
  if (name == "whitewash") return AttackType::kWhitewash;
  if (name == "context_exploit") return AttackType::kContextExploit;
  bad_scenario("unknown attack type '" + name + "'");
}

Money money_field(const json& j, const char* name, Money fallback) {
  if (!j.contains(name)) return fallback;
  const json& v = j.at(name);
  if (v.is_string()) return Money::parse(v.get<std::string>());
  if (v.is_number() && v.get<double>() >= 0) {
    return Money::from_cents(std::llround(v.get<double>() * 100.0));
  }
  bad_scenario(std::string(name) + " must be a non-negative decimal");
}

OpinionMode parse_mode(const std::string& mode) {
  if (mode == "dtc") return OpinionMode::kDtc;
  if (mode == "atc") return OpinionMode::kAtc;
  bad_scenario("mode must be 'atc' or 'dtc'");
}

const char* mode_name(OpinionMode m) { return m == OpinionMode::kDtc ? "dtc" : "atc"; }

json engine_json_with_default_tiers(json engine) {
  if (!engine.contains("tiers")) {
    engine["tiers"] = default_engine_config().to_json().at("tiers");
  }
  return engine;
}

// Seeded draw stream; see the header for the exact mapping.
class DrawStream {
 public:
  explicit DrawStream(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t max = std::numeric_limits<std::uint64_t>::max();
    const std::uint64_t limit = max - (max % n);
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % n;
  }

  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 engine_;
};

struct Agent {
  PrincipalId id;
  AgentRole role = AgentRole::kBuyer;
  double honesty = 1.0;
  std::string cls;
  CredentialSet creds;
  double verification = 0.0;
  bool traded = false;
};

ClassStats summarize(const std::vector<double>& xs) {
  ClassStats s;
  s.count = static_cast<int>(xs.size());
  if (xs.empty()) return s;
  s.min = *std::min_element(xs.begin(), xs.end());
  s.max = *std::max_element(xs.begin(), xs.end());
  double sum = 0.0;
  for (double x : xs) sum += x;
  s.mean = sum / static_cast<double>(xs.size());
  return s;
}

json stats_json(const ClassStats& s) {
  return {{"mean", s.mean}, {"min", s.min}, {"max", s.max}, {"count", s.count}};
}

json seller_json(const SellerOutcome& s) {
  return {{"id", s.id.str()}, {"class", s.cls}, {"honesty", s.honesty}, {"score", s.score}};
}

json viewer_opinions_json(const std::vector<ViewerOpinion>& v) {
  json out = json::array();
  for (const auto& vo : v) {
    out.push_back({{"viewer", vo.viewer.str()}, {"opinion", opinion_to_json(vo.opinion)}});
  }
  return out;
}

class Simulation {
 public:
  explicit Simulation(const ScenarioConfig& cfg)
      : cfg_(cfg),
        params_(cfg.engine.engine_params()),
        policy_(cfg.engine.tier(cfg.market.tier)),
        cache_(cfg.engine.staleness_events),
        rng_(cfg.seed) {}

  ScenarioResult run() {
    setup();
    sample(0);
    for (Tick t = 1; t <= cfg_.ticks; ++t) {
      if (cfg_.attack.type == AttackType::kWhitewash && t == whitewash_tick_) {
        whitewash(t);
      }
      for (size_t b : market_buyers_) {
        auto seller = pick_seller();
        if (seller) trade(agents_[b], agents_[*seller], t, std::nullopt, std::nullopt);
      }
      attack_step(t);
      sample(t);
    }
    return finish();
  }

 private:
  CredentialSet make_creds(int n, const std::optional<std::vector<std::string>>& verified,
                           const std::string& suffix = "") const {
    CredentialSet creds;
    char idx[16];
    std::snprintf(idx, sizeof(idx), "%06d", n);
    for (const auto& attr : policy_.required_attrs()) {
      bool ok = !verified || std::find(verified->begin(), verified->end(), attr.name) !=
                                 verified->end();
      creds[attr.name] = Credential{attr.name + "-" + idx + suffix, ok};
    }
    return creds;
  }

  size_t add_agent(AgentRole role, double honesty, std::string cls,
                   const std::optional<std::vector<std::string>>& verified) {
    Agent a;
    a.role = role;
    a.honesty = honesty;
    a.cls = std::move(cls);
    a.creds = make_creds(next_index_++, verified);
    RegistrationOutcome reg = register_with_rebirth_check(repo_, a.creds, policy_, 0);
    a.id = reg.principal;
    a.verification = reg.verification.score;
    agents_.push_back(std::move(a));
    return agents_.size() - 1;
  }

  bool eligible(const Agent& a) const {
    return a.verification >= params_.integration.min_verification;
  }

  void setup() {
    observer_ = agents_.size();
    add_agent(AgentRole::kBuyer, 1.0, "observer", std::nullopt);

    for (const auto& profile : cfg_.agents) {
      for (int i = 0; i < profile.count; ++i) {
        if (profile.role == AgentRole::kBuyer) {
          market_buyers_.push_back(
              add_agent(AgentRole::kBuyer, profile.honesty, "buyer", profile.verified));
        } else {
          sellers_.push_back(add_agent(AgentRole::kSeller, profile.honesty,
                                       profile.honesty >= 0.5 ? "honest" : "malicious",
                                       profile.verified));
        }
      }
    }

    const AttackConfig& attack = cfg_.attack;
    if (attack.type != AttackType::kNone) {
      subject_ = sellers_.at(attack.seller < 0 ? sellers_.size() - 1
                                               : static_cast<size_t>(attack.seller));
      if (attack.type != AttackType::kSlander) agents_[*subject_].cls = "malicious";
      if (!eligible(agents_[*subject_])) {
        bad_scenario("attack seller is below the verification floor");
      }
    }
    if (attack.type == AttackType::kCollusion) {
      for (int i = 0; i < attack.ring_size; ++i) {
        size_t c = add_agent(AgentRole::kBuyer, attack.colluder_honesty, "colluder",
                             std::nullopt);
        colluders_.push_back(c);
        market_buyers_.push_back(c);
      }
    } else if (attack.type == AttackType::kSlander) {
      for (int i = 0; i < attack.attacker_count; ++i) {
        attackers_.push_back(add_agent(AgentRole::kBuyer, attack.attacker_honesty,
                                       "slanderer", std::nullopt));
      }
    } else if (attack.type == AttackType::kWhitewash) {
      whitewash_tick_ = attack.at_tick < 0 ? std::max<Tick>(1, cfg_.ticks / 2) : attack.at_tick;
    }
  }

  double opinion_score(const State& state, const Agent& seller) {
    return opinion(state, agents_[observer_].id, seller.id).score;
  }

  TrustOpinion opinion(const State& state, const PrincipalId& viewer,
                       const PrincipalId& subject) {
    if (cfg_.mode == OpinionMode::kAtc) {
      return atc_opinion(state, viewer, subject, QueryContext{}, cache_, params_);
    }
    return dtc_opinion(state, viewer, subject, QueryContext{}, params_);
  }

  std::optional<size_t> pick_seller() {
    std::vector<size_t> pool;
    for (size_t s : sellers_) {
      if (eligible(agents_[s])) pool.push_back(s);
    }
    if (pool.empty()) return std::nullopt;
    if (cfg_.market.selection == SellerSelection::kUniform) {
      return pool[rng_.below(pool.size())];
    }
    std::shared_ptr<const State> state = repo_.snapshot();
    std::vector<double> cumulative;
    double total = 0.0;
    for (size_t s : pool) {
      total += opinion_score(*state, agents_[s]);
      cumulative.push_back(total);
    }
    const double u = rng_.unit() * total;
    for (size_t i = 0; i < pool.size(); ++i) {
      if (u < cumulative[i]) return pool[i];
    }
    return pool.back();
  }

  TxId trade(Agent& buyer, Agent& seller, Tick t, std::optional<double> buyer_rating,
             std::optional<double> seller_rating) {
    const MarketConfig& m = cfg_.market;
    const auto span = static_cast<std::uint64_t>(m.cost_max.cents() - m.cost_min.cents() + 1);
    const Money cost =
        Money::from_cents(m.cost_min.cents() + static_cast<std::int64_t>(rng_.below(span)));
    const std::string& scope = m.scopes[rng_.below(m.scopes.size())];
    const int promised = m.promised_min + static_cast<int>(rng_.below(
                                              m.promised_max - m.promised_min + 1));
    const int delay = static_cast<int>(rng_.below(m.max_delay + 1));
    const double outcome_u = rng_.unit();
    const double counter_u = rng_.unit();

    bool satisfied = outcome_u < seller.honesty;
    if (cfg_.attack.type == AttackType::kContextExploit && subject_ &&
        &seller == &agents_[*subject_]) {
      satisfied = cost < cfg_.attack.cost_threshold;
    }
    const double to_seller = buyer_rating.value_or(satisfied ? 1.0 : 0.0);
    const double to_buyer = seller_rating.value_or(counter_u < buyer.honesty ? 1.0 : 0.0);

    TransactionRecord draft;
    draft.buyer = buyer.id;
    draft.seller = seller.id;
    draft.cost = cost;
    draft.scope = scope;
    draft.promised_days = promised;
    draft.actual_days = promised + delay;
    TxId tx = complete_transaction(repo_, std::move(draft), t);
    rate_after_transaction(repo_, buyer.id, seller.id, tx, to_seller, t);
    rate_after_transaction(repo_, seller.id, buyer.id, tx, to_buyer, t);
    buyer.traded = true;
    if (subject_ && &seller == &agents_[*subject_]) last_subject_tx_ = tx;
    return tx;
  }

  void attack_step(Tick t) {
    if (!subject_) return;
    Agent& target = agents_[*subject_];
    if (cfg_.attack.type == AttackType::kCollusion) {
      for (size_t c : colluders_) trade(agents_[c], target, t, 1.0, 1.0);
    } else if (cfg_.attack.type == AttackType::kSlander) {
      for (size_t a : attackers_) {
        Agent& attacker = agents_[a];
        if (!attacker.traded && last_subject_tx_) {
          // A slanderer without a transaction of its own cites someone else's.
          try {
            rate_after_transaction(repo_, attacker.id, target.id, *last_subject_tx_, 0.0, t);
          } catch (const TrustError& e) {
            if (e.code() != ErrorCode::kNotAParty) throw;
            ++rejected_ratings_;
          }
        }
        trade(attacker, target, t, 0.0, std::nullopt);
      }
    }
  }

  std::vector<PrincipalId> viewers() const {
    std::vector<PrincipalId> out;
    for (const auto& a : agents_) {
      if (a.role == AgentRole::kBuyer) out.push_back(a.id);
    }
    return out;
  }

  void whitewash(Tick t) {
    Agent& fraud = agents_[*subject_];
    WhitewashReport report;
    report.old_id = fraud.id;
    {
      std::shared_ptr<const State> state = repo_.snapshot();
      for (const auto& v : viewers()) {
        report.pre.push_back({v, dtc_opinion(*state, v, fraud.id, QueryContext{}, params_)});
      }
    }
    CredentialSet creds = cfg_.attack.same_identity
                              ? fraud.creds
                              : make_creds(next_index_++, std::nullopt, "-reborn");
    RegistrationOutcome reg = register_with_rebirth_check(repo_, creds, policy_, t);
    report.new_id = reg.principal;
    report.linked = reg.linked;
    fraud.id = reg.principal;
    fraud.creds = std::move(creds);
    fraud.verification = reg.verification.score;
    {
      std::shared_ptr<const State> state = repo_.snapshot();
      for (const auto& v : viewers()) {
        report.post.push_back({v, dtc_opinion(*state, v, fraud.id, QueryContext{}, params_)});
      }
    }
    whitewash_ = std::move(report);
  }

  void sample(Tick t) {
    std::shared_ptr<const State> state = repo_.snapshot();
    std::map<std::string, std::vector<double>> by_class;
    last_sellers_.clear();
    for (size_t s : sellers_) {
      const Agent& a = agents_[s];
      if (!eligible(a)) continue;
      const double score = opinion_score(*state, a);
      by_class[a.cls].push_back(score);
      last_sellers_.push_back({a.id, a.cls, a.honesty, score});
    }
    for (const auto& [cls, xs] : by_class) {
      series_.push_back({t, cls, summarize(xs)});
    }
    last_classes_.clear();
    for (const auto& [cls, xs] : by_class) last_classes_[cls] = summarize(xs);
  }

  ScenarioResult finish() {
    ScenarioResult out;
    out.log = repo_.events();
    out.state = repo_.snapshot();
    out.observer = agents_[observer_].id;

    MetricsReport& m = out.metrics;
    m.seed = cfg_.seed;
    m.ticks = cfg_.ticks;
    m.params = {{"engine", cfg_.engine.to_json()},
                {"market", cfg_.market.to_json()},
                {"attack", cfg_.attack.to_json()},
                {"mode", mode_name(cfg_.mode)}};
    m.final_classes = last_classes_;
    if (last_classes_.contains("honest") && last_classes_.contains("malicious")) {
      m.separation = last_classes_["honest"].mean - last_classes_["malicious"].mean;
    }
    m.sellers = last_sellers_;
    if (subject_) {
      for (const auto& s : last_sellers_) {
        if (s.id == agents_[*subject_].id) m.subject = s;
      }
    }
    m.rejected_ratings = rejected_ratings_;
    m.whitewash = whitewash_;
    m.series = std::move(series_);
    m.events = out.log.size();
    m.log_sha256 = sha256_hex(serialize_log(out.log));
    return out;
  }

  const ScenarioConfig& cfg_;
  EngineParams params_;
  const TierPolicy& policy_;
  Repository repo_;
  AtcCache cache_;
  DrawStream rng_;

  int next_index_ = 0;
  std::vector<Agent> agents_;
  size_t observer_ = 0;
  std::vector<size_t> market_buyers_;
  std::vector<size_t> sellers_;
  std::vector<size_t> colluders_;
  std::vector<size_t> attackers_;
  std::optional<size_t> subject_;
  std::optional<TxId> last_subject_tx_;
  Tick whitewash_tick_ = -1;
  int rejected_ratings_ = 0;
  std::optional<WhitewashReport> whitewash_;
  std::vector<SeriesRow> series_;
  std::map<std::string, ClassStats> last_classes_;
  std::vector<SellerOutcome> last_sellers_;
};

}  // namespace

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

json AttackConfig::to_json() const {
  json j = {{"type", attack_name(type)}};
  switch (type) {
    case AttackType::kNone:
      break;
    case AttackType::kCollusion:
      j["seller"] = seller;
      j["ring_size"] = ring_size;
      j["colluder_honesty"] = colluder_honesty;
      break;
    case AttackType::kSlander:
      j["target"] = seller;
      j["attacker_count"] = attacker_count;
      j["attacker_honesty"] = attacker_honesty;
      break;
    case AttackType::kWhitewash:
      j["fraud_seller"] = seller;
      j["at_tick"] = at_tick;
      j["same_identity"] = same_identity;
      break;
    case AttackType::kContextExploit:
      j["seller"] = seller;
      j["cost_threshold"] = cost_threshold.to_string();
      break;
  }
  return j;
}

json MarketConfig::to_json() const {
  return {{"cost_min", cost_min.to_string()},
          {"cost_max", cost_max.to_string()},
          {"scopes", scopes},
          {"promised_days", {promised_min, promised_max}},
          {"max_delay", max_delay},
          {"selection",
           selection == SellerSelection::kUniform ? "uniform" : "trust_proportional"},
          {"tier", tier}};
}

ScenarioConfig ScenarioConfig::from_json(const json& j) {
  ScenarioConfig cfg;
  try {
    if (!j.is_object()) bad_scenario("must be a JSON object");
    cfg.seed = j.at("seed").get<std::uint64_t>();
    cfg.ticks = j.at("ticks").get<Tick>();
    for (const auto& a : j.at("agents")) {
      AgentProfile p;
      const auto role = a.at("role").get<std::string>();
      if (role == "buyer") {
        p.role = AgentRole::kBuyer;
      } else if (role == "seller") {
        p.role = AgentRole::kSeller;
      } else {
        bad_scenario("agent role must be 'buyer' or 'seller'");
      }
      p.honesty = a.value("honesty", 1.0);
      p.count = a.value("count", 1);
      if (a.contains("verified")) p.verified = a.at("verified").get<std::vector<std::string>>();
      cfg.agents.push_back(std::move(p));
    }
    if (j.contains("attack")) {
      const json& a = j.at("attack");
      AttackConfig& at = cfg.attack;
      at.type = parse_attack(a.value("type", std::string("none")));
      for (const char* key : {"seller", "target", "fraud_seller"}) {
        if (a.contains(key)) at.seller = a.at(key).get<int>();
      }
      at.ring_size = a.value("ring_size", at.ring_size);
      at.colluder_honesty = a.value("colluder_honesty", at.colluder_honesty);
      at.attacker_count = a.value("attacker_count", at.attacker_count);
      at.attacker_honesty = a.value("attacker_honesty", at.attacker_honesty);
      at.at_tick = a.value("at_tick", at.at_tick);
      at.same_identity = a.value("same_identity", at.same_identity);
      at.cost_threshold = money_field(a, "cost_threshold", at.cost_threshold);
    }
    if (j.contains("market")) {
      const json& m = j.at("market");
      MarketConfig& mc = cfg.market;
      mc.cost_min = money_field(m, "cost_min", mc.cost_min);
      mc.cost_max = money_field(m, "cost_max", mc.cost_max);
      if (m.contains("scopes")) mc.scopes = m.at("scopes").get<std::vector<std::string>>();
      if (m.contains("promised_days")) {
        auto range = m.at("promised_days").get<std::vector<int>>();
        if (range.size() != 2) bad_scenario("promised_days must be [min, max]");
        mc.promised_min = range[0];
        mc.promised_max = range[1];
      }
      mc.max_delay = m.value("max_delay", mc.max_delay);
      const auto sel = m.value("selection", std::string("uniform"));
      if (sel == "uniform") {
        mc.selection = SellerSelection::kUniform;
      } else if (sel == "trust_proportional") {
        mc.selection = SellerSelection::kTrustProportional;
      } else {
        bad_scenario("selection must be 'uniform' or 'trust_proportional'");
      }
      mc.tier = m.value("tier", mc.tier);
    }
    if (j.contains("engine")) {
      cfg.engine = EngineConfig::from_json(engine_json_with_default_tiers(j.at("engine")));
    }
    if (j.contains("mode")) cfg.mode = parse_mode(j.at("mode").get<std::string>());
  } catch (const json::exception& e) {
    bad_scenario(e.what());
  } catch (const TrustError& e) {
    if (e.code() == ErrorCode::kInvalidConfig) throw;
    bad_scenario(e.what());
  }
  cfg.validate();
  return cfg;
}

ScenarioConfig ScenarioConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) bad_scenario("cannot read " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    bad_scenario(path.string() + " is not valid JSON: " + e.what());
  }
  return from_json(j);
}

json ScenarioConfig::to_json() const {
  json agents_json = json::array();
  for (const auto& a : agents) {
    json p = {{"role", a.role == AgentRole::kBuyer ? "buyer" : "seller"},
              {"honesty", a.honesty},
              {"count", a.count}};
    if (a.verified) p["verified"] = *a.verified;
    agents_json.push_back(std::move(p));
  }
  return {{"seed", seed},
          {"ticks", ticks},
          {"agents", agents_json},
          {"attack", attack.to_json()},
          {"market", market.to_json()},
          {"engine", engine.to_json()},
          {"mode", mode_name(mode)}};
}

void ScenarioConfig::validate() const {
  if (ticks < 0) bad_scenario("ticks must be ≥ 0");
  const TierPolicy& policy = engine.tier(market.tier);
  int sellers = 0;
  for (const auto& a : agents) {
    if (!(a.honesty >= 0.0 && a.honesty <= 1.0)) bad_scenario("honesty must lie in [0,1]");
    if (a.count < 0) bad_scenario("agent count must be ≥ 0");
    if (a.verified) {
      for (const auto& name : *a.verified) {
        if (!policy.is_required(name)) {
          bad_scenario("verified attribute '" + name + "' is not in tier '" +
                       market.tier + "'");
        }
      }
    }
    if (a.role == AgentRole::kSeller) sellers += a.count;
  }
  if (market.cost_min > market.cost_max) bad_scenario("cost_min must be ≤ cost_max");
  if (market.scopes.empty()) bad_scenario("scopes must be non-empty");
  for (const auto& s : market.scopes) {
    if (s.empty()) bad_scenario("scopes must be non-empty tags");
  }
  if (market.promised_min < 1 || market.promised_max < market.promised_min) {
    bad_scenario("promised_days must satisfy 1 ≤ min ≤ max");
  }
  if (market.max_delay < 0) bad_scenario("max_delay must be ≥ 0");
  if (attack.type != AttackType::kNone) {
    if (sellers == 0) bad_scenario("attacks need at least one seller");
    if (attack.seller >= sellers || attack.seller < -1) {
      bad_scenario("attack seller index out of range");
    }
  }
  if (attack.type == AttackType::kCollusion && attack.ring_size < 1) {
    bad_scenario("ring_size must be ≥ 1");
  }
  if (attack.type == AttackType::kSlander && attack.attacker_count < 1) {
    bad_scenario("attacker_count must be ≥ 1");
  }
  for (double h : {attack.colluder_honesty, attack.attacker_honesty}) {
    if (!(h >= 0.0 && h <= 1.0)) bad_scenario("attack honesty must lie in [0,1]");
  }
  if (attack.type == AttackType::kWhitewash && attack.at_tick != -1 &&
      (attack.at_tick < 1 || attack.at_tick > ticks)) {
    bad_scenario("whitewash at_tick must lie in [1, ticks]");
  }
}

json MetricsReport::to_json() const {
  json classes = json::object();
  for (const auto& [cls, s] : final_classes) classes[cls] = stats_json(s);
  json sellers_json = json::array();
  for (const auto& s : sellers) sellers_json.push_back(seller_json(s));
  json series_json = json::array();
  for (const auto& row : series) {
    series_json.push_back({{"tick", row.tick},
                           {"class", row.cls},
                           {"mean", row.stats.mean},
                           {"min", row.stats.min},
                           {"max", row.stats.max}});
  }
  json attack = {{"rejected_ratings", rejected_ratings}};
  if (whitewash) {
    attack["whitewash"] = {{"old_id", whitewash->old_id.str()},
                           {"new_id", whitewash->new_id.str()},
                           {"linked", whitewash->linked},
                           {"pre", viewer_opinions_json(whitewash->pre)},
                           {"post", viewer_opinions_json(whitewash->post)}};
  }
  return {{"run",
           {{"seed", seed}, {"ticks", ticks}, {"events", events},
            {"log_sha256", log_sha256}, {"params", params}}},
          {"final", classes},
          {"separation", separation ? json(*separation) : json(nullptr)},
          {"sellers", sellers_json},
          {"subject", subject ? seller_json(*subject) : json(nullptr)},
          {"attack", attack},
          {"series", series_json}};
}

std::string MetricsReport::to_csv() const {
  std::string out = "tick,class,mean,min,max\n";
  for (const auto& row : series) {
    out += std::to_string(row.tick) + "," + row.cls + "," + format_double(row.stats.mean) +
           "," + format_double(row.stats.min) + "," + format_double(row.stats.max) + "\n";
  }
  return out;
}

ScenarioResult run_scenario(const ScenarioConfig& config) {
  config.validate();
  Simulation sim(config);
  return sim.run();
}

ScenarioConfig apply_variant(const ScenarioConfig& base, const json& variant) {
  if (!variant.is_object()) bad_scenario("variant must be a JSON object");
  ScenarioConfig cfg = base;
  json engine = base.engine.to_json();
  try {
    if (variant.contains("integration")) {
      engine["integration"].merge_patch(variant.at("integration"));
    }
    if (variant.contains("context")) {
      const json& over = variant.at("context");
      json& ctx = engine["context"];
      static const char* kWeights[] = {"w_cost", "w_scope", "w_delivery"};
      double given = 0.0;
      double rest = 0.0;
      int unset = 0;
      for (const char* k : kWeights) {
        if (over.contains(k)) {
          given += over.at(k).get<double>();
        } else {
          rest += ctx.at(k).get<double>();
          ++unset;
        }
      }
      for (const char* k : kWeights) {
        if (over.contains(k)) {
          ctx[k] = over.at(k);
        } else if (unset > 0 && unset < 3) {
          const double base_w = ctx.at(k).get<double>();
          ctx[k] = rest > 0.0 ? base_w * (1.0 - given) / rest : (1.0 - given) / unset;
        }
      }
      if (over.contains("cost_cap")) ctx["cost_cap"] = over.at("cost_cap");
    }
    if (variant.contains("cache")) engine["cache"].merge_patch(variant.at("cache"));
    if (variant.contains("mode")) cfg.mode = parse_mode(variant.at("mode").get<std::string>());
  } catch (const json::exception& e) {
    bad_scenario(std::string("bad variant: ") + e.what());
  }
  cfg.engine = EngineConfig::from_json(engine);
  cfg.validate();
  return cfg;
}

std::vector<VariantResult> compare_runs(const ScenarioConfig& config,
                                        const std::vector<json>& variants) {
  std::vector<ScenarioConfig> configs;
  std::vector<std::string> names;
  for (size_t i = 0; i < variants.size(); ++i) {
    configs.push_back(apply_variant(config, variants[i]));
    names.push_back(variants[i].value("name", "variant" + std::to_string(i)));
  }
  std::vector<std::future<ScenarioResult>> runs;
  for (const auto& c : configs) {
    runs.push_back(std::async(std::launch::async, [&c] { return run_scenario(c); }));
  }
  std::vector<VariantResult> out;
  for (size_t i = 0; i < runs.size(); ++i) {
    out.push_back({names[i], runs[i].get().metrics});
  }
  return out;
}

std::string comparison_csv(const std::vector<VariantResult>& results) {
  std::string out =
      "variant,honest_mean,honest_min,honest_max,malicious_mean,malicious_min,"
      "malicious_max,separation,subject,subject_opinion,events,log_sha256\n";
  auto cell = [](const std::map<std::string, ClassStats>& classes, const char* cls,
                 double ClassStats::*field) {
    auto it = classes.find(cls);
    return it == classes.end() ? std::string() : format_double(it->second.*field);
  };
  for (const auto& r : results) {
    const MetricsReport& m = r.metrics;
    out += r.name + "," + cell(m.final_classes, "honest", &ClassStats::mean) + "," +
           cell(m.final_classes, "honest", &ClassStats::min) + "," +
           cell(m.final_classes, "honest", &ClassStats::max) + "," +
           cell(m.final_classes, "malicious", &ClassStats::mean) + "," +
           cell(m.final_classes, "malicious", &ClassStats::min) + "," +
           cell(m.final_classes, "malicious", &ClassStats::max) + "," +
           (m.separation ? format_double(*m.separation) : std::string()) + "," +
           (m.subject ? m.subject->id.str() : std::string()) + "," +
           (m.subject ? format_double(m.subject->score) : std::string()) + "," +
           std::to_string(m.events) + "," + m.log_sha256 + "\n";
  }
  return out;
}

}  // namespace trustmesh
