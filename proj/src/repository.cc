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

#include "trustmesh/repository.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "trustmesh/error.h"

namespace trustmesh {

using nlohmann::json;

namespace {

[[noreturn]] void violation(const std::string& rule) {
  throw TrustError(ErrorCode::kInvariantViolation, rule);
}

[[noreturn]] void unknown_principal(const PrincipalId& id) {
  throw TrustError(ErrorCode::kUnknownPrincipal,
                   "unknown principal '" + id.str() + "'");
}

[[noreturn]] void unknown_transaction(const TxId& id) {
  throw TrustError(ErrorCode::kUnknownTransaction,
                   "unknown transaction '" + id.str() + "'");
}

json optional_id(const std::optional<PrincipalId>& id) {
  return id ? json(id->str()) : json(nullptr);
}

template <typename T>
T field(const json& j, const char* name) {
  try {
    return j.at(name).get<T>();
  } catch (const json::exception& e) {
    violation(std::string("malformed field '") + name + "': " + e.what());
  }
}

std::optional<std::string> optional_string(const json& j, const char* name) {
  if (!j.contains(name) || j.at(name).is_null()) return std::nullopt;
  return field<std::string>(j, name);
}

json payload_to_json(const Registered& e) {
  return {{"principal", e.principal.str()},
          {"tier", e.tier},
          {"linked_to", optional_id(e.linked_to)}};
}

json payload_to_json(const CredentialVerified& e) {
  return {{"principal", e.principal.str()},
          {"score", e.score},
          {"verified_attrs", e.verified_attrs},
          {"fingerprint", e.fingerprint ? json(*e.fingerprint) : json(nullptr)}};
}

json payload_to_json(const TransactionCompleted& e) {
  const TransactionRecord& tx = e.tx;
  return {{"tx_id", tx.tx_id.str()},
          {"buyer", tx.buyer.str()},
          {"seller", tx.seller.str()},
          {"cost", tx.cost.to_string()},
          {"scope", tx.scope},
          {"promised_days", tx.promised_days},
          {"actual_days", tx.actual_days}};
}

json payload_to_json(const RatingUpserted& e) {
  const Rating& r = e.rating;
  return {{"rater", r.rater.str()},
          {"ratee", r.ratee.str()},
          {"value", r.value},
          {"tx_id", r.tx_id.str()}};
}

void check_unit_interval(double v, const char* what) {
  if (!std::isfinite(v) || v < 0.0 || v > 1.0) {
    violation(std::string(what) + " must lie in [0,1]");
  }
}

}  // namespace

std::string_view event_kind_name(EventKind kind) {
  switch (kind) {
    case EventKind::kRegistered:
      return "Registered";
    case EventKind::kCredentialVerified:
      return "CredentialVerified";
    case EventKind::kTransactionCompleted:
      return "TransactionCompleted";
    case EventKind::kRatingUpserted:
      return "RatingUpserted";
  }
  return "Unknown";
}

json event_to_json(const Event& event) {
  json payload = std::visit([](const auto& p) { return payload_to_json(p); },
                            event.payload);
  return {{"seq", event.seq},
          {"kind", event_kind_name(event.kind())},
          {"tick", event.tick},
          {"payload", std::move(payload)}};
}

Event event_from_json(const json& j) {
  if (!j.is_object()) violation("event must be a JSON object");
  Event event;
  event.seq = field<std::uint64_t>(j, "seq");
  event.tick = field<Tick>(j, "tick");
  const auto kind = field<std::string>(j, "kind");
  if (!j.contains("payload") || !j.at("payload").is_object()) {
    violation("event payload must be an object");
  }
  const json& p = j.at("payload");
  if (kind == "Registered") {
    Registered e;
    e.principal = PrincipalId(field<std::string>(p, "principal"));
    e.tier = field<std::string>(p, "tier");
    if (auto linked = optional_string(p, "linked_to")) {
      e.linked_to = PrincipalId(*linked);
    }
    event.payload = std::move(e);
  } else if (kind == "CredentialVerified") {
    CredentialVerified e;
    e.principal = PrincipalId(field<std::string>(p, "principal"));
    e.score = field<double>(p, "score");
    e.verified_attrs = field<std::vector<std::string>>(p, "verified_attrs");
    e.fingerprint = optional_string(p, "fingerprint");
    event.payload = std::move(e);
  } else if (kind == "TransactionCompleted") {
    TransactionCompleted e;
    e.tx.tx_id = TxId(field<std::string>(p, "tx_id"));
    e.tx.buyer = PrincipalId(field<std::string>(p, "buyer"));
    e.tx.seller = PrincipalId(field<std::string>(p, "seller"));
    e.tx.cost = Money::parse(field<std::string>(p, "cost"));
    e.tx.scope = field<std::string>(p, "scope");
    e.tx.promised_days = field<int>(p, "promised_days");
    e.tx.actual_days = field<int>(p, "actual_days");
    e.tx.tick = event.tick;
    event.payload = std::move(e);
  } else if (kind == "RatingUpserted") {
    RatingUpserted e;
    e.rating.rater = PrincipalId(field<std::string>(p, "rater"));
    e.rating.ratee = PrincipalId(field<std::string>(p, "ratee"));
    e.rating.value = field<double>(p, "value");
    e.rating.tx_id = TxId(field<std::string>(p, "tx_id"));
    e.rating.tick = event.tick;
    event.payload = std::move(e);
  } else {
    violation("unknown event kind '" + kind + "'");
  }
  return event;
}

// ---------------------------------------------------------------------------
// State

const PrincipalEntry& State::principal(const PrincipalId& id) const {
  auto it = principals_.find(id);
  if (it == principals_.end()) unknown_principal(id);
  return it->second;
}

const PrincipalId& State::resolve(const PrincipalId& id) const {
  return principal(id).record;
}

const RecordEntry& State::record_of(const PrincipalId& id) const {
  return records_.at(resolve(id));
}

std::optional<PrincipalId> State::find_by_fingerprint(
    const std::string& fp) const {
  auto it = fingerprints_.find(fp);
  if (it == fingerprints_.end()) return std::nullopt;
  return it->second;
}

const TransactionRecord& State::transaction(const TxId& id) const {
  auto it = transactions_.find(id);
  if (it == transactions_.end()) unknown_transaction(id);
  return it->second;
}

std::optional<Rating> State::latest_rating(const PrincipalId& rater,
                                           const PrincipalId& ratee) const {
  if (!has_principal(rater) || !has_principal(ratee)) return std::nullopt;
  const RatingsByRater* by_rater = incoming(ratee);
  if (by_rater == nullptr) return std::nullopt;
  auto it = by_rater->find(resolve(rater));
  if (it == by_rater->end()) return std::nullopt;
  return it->second;
}

std::vector<Rating> State::ratings_about(const PrincipalId& ratee) const {
  std::vector<Rating> out;
  if (const RatingsByRater* by_rater = incoming(ratee)) {
    out.reserve(by_rater->size());
    for (const auto& [rater, rating] : *by_rater) out.push_back(rating);
  }
  return out;
}

const State::RatingsByRater* State::incoming(const PrincipalId& ratee) const {
  auto p = principals_.find(ratee);
  if (p == principals_.end()) return nullptr;
  auto it = ratings_.find(p->second.record);
  return it == ratings_.end() ? nullptr : &it->second;
}

size_t State::stored_rating_count() const {
  size_t n = 0;
  for (const auto& [ratee, by_rater] : ratings_) n += by_rater.size();
  return n;
}

PrincipalId State::next_principal_id() const {
  for (size_t n = principals_.size() + 1;; ++n) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "p%06zu", n);
    PrincipalId id(buf);
    if (!principals_.contains(id)) return id;
  }
}

TxId State::next_tx_id() const {
  for (size_t n = transactions_.size() + 1;; ++n) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "t%06zu", n);
    TxId id(buf);
    if (!transactions_.contains(id)) return id;
  }
}

void State::validate(const Event& event) const {
  if (event.tick < 0) violation("tick must be non-negative");
  if (event.tick < last_tick_) violation("tick must not decrease");

  struct Validator {
    const State& s;

    void operator()(const Registered& e) const {
      if (e.principal.empty()) violation("principal id must be non-empty");
      if (s.has_principal(e.principal)) {
        violation("principal id must be unique: '" + e.principal.str() + "'");
      }
      if (e.tier.empty()) violation("tier must be non-empty");
      if (e.linked_to) s.resolve(*e.linked_to);
    }

    void operator()(const CredentialVerified& e) const {
      const PrincipalId& record = s.resolve(e.principal);
      check_unit_interval(e.score, "verification score");
      if (e.fingerprint) {
        if (e.fingerprint->empty()) violation("fingerprint must be non-empty");
        auto owner = s.find_by_fingerprint(*e.fingerprint);
        if (owner && *owner != record) {
          violation("fingerprint is bound to another record '" + owner->str() +
                    "'");
        }
      }
    }

    void operator()(const TransactionCompleted& e) const {
      const TransactionRecord& tx = e.tx;
      if (tx.tx_id.empty()) violation("tx_id must be non-empty");
      if (s.has_transaction(tx.tx_id)) {
        violation("tx_id must be unique: '" + tx.tx_id.str() + "'");
      }
      if (s.resolve(tx.buyer) == s.resolve(tx.seller)) {
        violation("buyer ≠ seller");
      }
      if (tx.cost < Money()) violation("cost ≥ 0");
      if (tx.promised_days < 1) violation("promised_days ≥ 1");
      if (tx.actual_days < 0) violation("actual_days ≥ 0");
      if (tx.scope.empty()) violation("scope must be non-empty");
    }

    void operator()(const RatingUpserted& e) const {
      const Rating& r = e.rating;
      const PrincipalId& rater = s.resolve(r.rater);
      const PrincipalId& ratee = s.resolve(r.ratee);
      if (rater == ratee) violation("rater ≠ ratee");
      check_unit_interval(r.value, "rating value");
      const TransactionRecord& tx = s.transaction(r.tx_id);
      const PrincipalId& buyer = s.resolve(tx.buyer);
      const PrincipalId& seller = s.resolve(tx.seller);
      bool parties = (rater == buyer && ratee == seller) ||
                     (rater == seller && ratee == buyer);
      if (!parties) {
        violation("rater and ratee must be the two parties of transaction '" +
                  r.tx_id.str() + "'");
      }
    }
  };
  std::visit(Validator{*this}, event.payload);
}

void State::apply(const Event& event) {
  validate(event);
  commit(event);
}

void State::commit(const Event& event) {
  struct Committer {
    State& s;
    Tick tick;

    void operator()(const Registered& e) const {
      PrincipalId record = e.linked_to ? s.resolve(*e.linked_to) : e.principal;
      s.principals_[e.principal] = PrincipalEntry{e.principal, e.tier, record, tick};
      RecordEntry& entry = s.records_[record];
      entry.id = record;
      auto pos = std::lower_bound(entry.aliases.begin(), entry.aliases.end(),
                                  e.principal);
      entry.aliases.insert(pos, e.principal);
    }

    void operator()(const CredentialVerified& e) const {
      const PrincipalId record = s.resolve(e.principal);
      RecordEntry& entry = s.records_.at(record);
      entry.verified = true;
      entry.verification = e.score;
      entry.verified_attrs = e.verified_attrs;
      std::sort(entry.verified_attrs.begin(), entry.verified_attrs.end());
      entry.verified_attrs.erase(
          std::unique(entry.verified_attrs.begin(), entry.verified_attrs.end()),
          entry.verified_attrs.end());
      entry.fingerprint = e.fingerprint;
      if (e.fingerprint) s.fingerprints_[*e.fingerprint] = record;
    }

    void operator()(const TransactionCompleted& e) const {
      TransactionRecord tx = e.tx;
      tx.tick = tick;
      s.transactions_[tx.tx_id] = std::move(tx);
    }

    void operator()(const RatingUpserted& e) const {
      Rating r = e.rating;
      r.rater = s.resolve(r.rater);
      r.ratee = s.resolve(r.ratee);
      r.tick = tick;
      s.ratings_[r.ratee][r.rater] = std::move(r);
    }
  };
  std::visit(Committer{*this, event.tick}, event.payload);
  ++version_;
  last_tick_ = event.tick;
}

json State::export_json() const {
  json principals = json::object();
  for (const auto& [id, p] : principals_) {
    principals[id.str()] = {{"tier", p.tier},
                            {"record", p.record.str()},
                            {"registered_at", p.registered_at}};
  }
  json records = json::object();
  for (const auto& [id, r] : records_) {
    json aliases = json::array();
    for (const auto& a : r.aliases) aliases.push_back(a.str());
    records[id.str()] = {
        {"aliases", std::move(aliases)},
        {"verified", r.verified},
        {"verification", r.verification},
        {"verified_attrs", r.verified_attrs},
        {"fingerprint", r.fingerprint ? json(*r.fingerprint) : json(nullptr)}};
  }
  json transactions = json::object();
  for (const auto& [id, tx] : transactions_) {
    transactions[id.str()] = {{"buyer", tx.buyer.str()},
                              {"seller", tx.seller.str()},
                              {"cost", tx.cost.to_string()},
                              {"scope", tx.scope},
                              {"promised_days", tx.promised_days},
                              {"actual_days", tx.actual_days},
                              {"tick", tx.tick}};
  }
  json ratings = json::object();
  for (const auto& [ratee, by_rater] : ratings_) {
    json row = json::object();
    for (const auto& [rater, r] : by_rater) {
      row[rater.str()] = {
          {"value", r.value}, {"tx_id", r.tx_id.str()}, {"tick", r.tick}};
    }
    ratings[ratee.str()] = std::move(row);
  }
  return {{"version", version_},
          {"last_tick", last_tick_},
          {"principals", std::move(principals)},
          {"records", std::move(records)},
          {"transactions", std::move(transactions)},
          {"ratings", std::move(ratings)}};
}

std::string State::export_canonical() const { return export_json().dump(); }

State replay(std::span<const Event> events) {
  State state;
  for (const Event& event : events) {
    const std::uint64_t expected = state.version() + 1;
    if (event.seq != expected) {
      throw CorruptLog(event.seq,
                       "expected seq " + std::to_string(expected));
    }
    try {
      state.apply(event);
    } catch (const CorruptLog&) {
      throw;
    } catch (const TrustError& e) {
      throw CorruptLog(event.seq, e.what());
    }
  }
  return state;
}

std::string serialize_log(std::span<const Event> events) {
  std::string out;
  for (const Event& e : events) {
    out += event_to_json(e).dump();
    out += '\n';
  }
  return out;
}

std::vector<Event> read_log(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CorruptLog(0, "cannot open " + path.string());
  std::vector<Event> events;
  std::string line;
  std::uint64_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      events.push_back(event_from_json(json::parse(line)));
    } catch (const json::exception& e) {
      throw CorruptLog(line_no, e.what());
    } catch (const TrustError& e) {
      throw CorruptLog(line_no, e.what());
    }
  }
  return events;
}

void write_log(const std::filesystem::path& path,
               std::span<const Event> events) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << serialize_log(events);
}

// ---------------------------------------------------------------------------
// Repository

Repository::Repository() : state_(std::make_shared<State>()) {}

Repository::Repository(std::filesystem::path dir)
    : state_(std::make_shared<State>()), dir_(std::move(dir)) {}

std::unique_ptr<Repository> Repository::create(
    const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  if (std::filesystem::exists(dir / kLogFile)) {
    throw TrustError(ErrorCode::kInvariantViolation,
                     "repository already exists at " + dir.string());
  }
  std::unique_ptr<Repository> repo(new Repository(dir));
  { std::ofstream touch(dir / kLogFile, std::ios::binary); }
  repo->sink_.open(dir / kLogFile, std::ios::binary | std::ios::app);
  repo->write_state_export();
  return repo;
}

std::unique_ptr<Repository> Repository::open(const std::filesystem::path& dir) {
  std::vector<Event> events = read_log(dir / kLogFile);
  std::unique_ptr<Repository> repo(new Repository(dir));
  *repo->state_ = replay(events);
  repo->log_ = std::move(events);
  repo->sink_.open(dir / kLogFile, std::ios::binary | std::ios::app);
  return repo;
}

State& Repository::writable_state() {
  if (state_.use_count() > 1) state_ = std::make_shared<State>(*state_);
  return *state_;
}

void Repository::persist(std::span<const Event> events) {
  if (!dir_) return;
  sink_ << serialize_log(events);
  sink_.flush();
}

RepositoryVersion Repository::append(EventPayload payload, Tick tick) {
  std::lock_guard lock(mu_);
  Event event{state_->version() + 1, tick, std::move(payload)};
  state_->validate(event);
  writable_state().apply(event);
  log_.push_back(event);
  persist(std::span(&log_.back(), 1));
  return state_->version();
}

RepositoryVersion Repository::append_event(const Event& event) {
  std::lock_guard lock(mu_);
  if (event.seq != state_->version() + 1) {
    violation("seq must be " + std::to_string(state_->version() + 1));
  }
  state_->validate(event);
  writable_state().apply(event);
  log_.push_back(event);
  persist(std::span(&log_.back(), 1));
  return state_->version();
}

RepositoryVersion Repository::append_batch(std::vector<EventPayload> payloads,
                                           Tick tick) {
  std::lock_guard lock(mu_);
  auto scratch = std::make_shared<State>(*state_);
  std::vector<Event> batch;
  batch.reserve(payloads.size());
  for (auto& payload : payloads) {
    Event event{scratch->version() + 1, tick, std::move(payload)};
    scratch->apply(event);
    batch.push_back(std::move(event));
  }
  state_ = std::move(scratch);
  const size_t first = log_.size();
  log_.insert(log_.end(), batch.begin(), batch.end());
  persist(std::span(log_).subspan(first));
  return state_->version();
}

std::shared_ptr<const State> Repository::snapshot() const {
  std::lock_guard lock(mu_);
  return state_;
}

RepositoryVersion Repository::version() const {
  std::lock_guard lock(mu_);
  return state_->version();
}

std::vector<Event> Repository::events() const {
  std::lock_guard lock(mu_);
  return log_;
}

void Repository::write_state_export() const {
  if (!dir_) return;
  std::shared_ptr<const State> s = snapshot();
  std::ofstream out(*dir_ / kStateFile, std::ios::binary | std::ios::trunc);
  out << s->export_canonical() << '\n';
}

}  // namespace trustmesh
