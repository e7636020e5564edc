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

// Event-sourced store of principals, credentials, transactions and ratings.
//
// Every mutation is an Event appended to a log; the derived State is a pure
// function of that log. Ratings follow latest-only semantics: at most one
// rating is stored per ordered (rater, ratee) pair of reputation records, and
// a new rating replaces the previous one. Transactions are never replaced.
//
// Principals registered with a fingerprint that matches an existing record
// are aliases of that record; all rating and transaction lookups resolve ids
// to their record first.

#ifndef TRUSTMESH_REPOSITORY_H_
#define TRUSTMESH_REPOSITORY_H_

#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"
#include "trustmesh/types.h"

namespace trustmesh {

enum class EventKind {
  kRegistered,
  kCredentialVerified,
  kTransactionCompleted,
  kRatingUpserted,
};

std::string_view event_kind_name(EventKind kind);

struct Registered {
  PrincipalId principal;
  std::string tier;
  // Existing reputation record this registration is bound to, if any.
  std::optional<PrincipalId> linked_to;

  friend bool operator==(const Registered&, const Registered&) = default;
};

struct CredentialVerified {
  PrincipalId principal;
  double score = 0.0;
  std::vector<std::string> verified_attrs;
  std::optional<std::string> fingerprint;

  friend bool operator==(const CredentialVerified&,
                         const CredentialVerified&) = default;
};

struct TransactionCompleted {
  TransactionRecord tx;

  friend bool operator==(const TransactionCompleted&,
                         const TransactionCompleted&) = default;
};

struct RatingUpserted {
  Rating rating;

  friend bool operator==(const RatingUpserted&,
                         const RatingUpserted&) = default;
};

using EventPayload = std::variant<Registered, CredentialVerified,
                                  TransactionCompleted, RatingUpserted>;

struct Event {
  std::uint64_t seq = 0;
  Tick tick = 0;
  EventPayload payload;

  EventKind kind() const { return static_cast<EventKind>(payload.index()); }

  friend bool operator==(const Event&, const Event&) = default;
};

nlohmann::json event_to_json(const Event& event);
// Throws TrustError(kInvariantViolation) on malformed input.
Event event_from_json(const nlohmann::json& j);

struct PrincipalEntry {
  PrincipalId id;
  std::string tier;
  PrincipalId record;
  Tick registered_at = 0;
};

// One reputation record. Aliases share it.
struct RecordEntry {
  PrincipalId id;
  std::vector<PrincipalId> aliases;  // includes id, ascending
  bool verified = false;             // a CredentialVerified has been applied
  double verification = 0.0;
  std::vector<std::string> verified_attrs;
  std::optional<std::string> fingerprint;
};

// Derived state. Immutable once handed out as a snapshot.
class State {
 public:
  using RatingsByRater = std::map<PrincipalId, Rating>;

  RepositoryVersion version() const { return version_; }
  Tick last_tick() const { return last_tick_; }

  bool has_principal(const PrincipalId& id) const {
    return principals_.contains(id);
  }
  // Throw kUnknownPrincipal.
  const PrincipalEntry& principal(const PrincipalId& id) const;
  const PrincipalId& resolve(const PrincipalId& id) const;
  const RecordEntry& record_of(const PrincipalId& id) const;

  std::optional<PrincipalId> find_by_fingerprint(const std::string& fp) const;

  // Throws kUnknownTransaction.
  const TransactionRecord& transaction(const TxId& id) const;
  bool has_transaction(const TxId& id) const {
    return transactions_.contains(id);
  }

  // Both ids are resolved to their records. Unknown ids yield absent.
  std::optional<Rating> latest_rating(const PrincipalId& rater,
                                      const PrincipalId& ratee) const;
  // Ascending rater (record) id.
  std::vector<Rating> ratings_about(const PrincipalId& ratee) const;
  // Allocation-free view for hot paths; nullptr when nobody rated ratee.
  const RatingsByRater* incoming(const PrincipalId& ratee) const;
  size_t stored_rating_count() const;

  const std::map<PrincipalId, PrincipalEntry>& principals() const {
    return principals_;
  }
  const std::map<PrincipalId, RecordEntry>& records() const { return records_; }
  const std::map<TxId, TransactionRecord>& transactions() const {
    return transactions_;
  }

  // Next ids a writer should hand out; deterministic in the event count.
  PrincipalId next_principal_id() const;
  TxId next_tx_id() const;

  // Rejects an event that may not be applied to this state. Throws
  // kUnknownPrincipal, kUnknownTransaction or kInvariantViolation.
  void validate(const Event& event) const;
  // validate() then mutate. Leaves the state untouched on failure.
  void apply(const Event& event);

  // Canonical JSON (sorted keys); byte equality of dump() is state equality.
  nlohmann::json export_json() const;
  std::string export_canonical() const;

 private:
  void commit(const Event& event);

  RepositoryVersion version_ = 0;
  Tick last_tick_ = 0;
  std::map<PrincipalId, PrincipalEntry> principals_;
  std::map<PrincipalId, RecordEntry> records_;
  std::map<std::string, PrincipalId> fingerprints_;
  std::map<TxId, TransactionRecord> transactions_;
  // ratee record -> rater record -> latest rating
  std::map<PrincipalId, RatingsByRater> ratings_;
};

// Rebuilds state from a log. Throws CorruptLog naming the first bad seq.
State replay(std::span<const Event> events);

// JSON-lines log I/O.
std::vector<Event> read_log(const std::filesystem::path& path);
void write_log(const std::filesystem::path& path, std::span<const Event> events);
std::string serialize_log(std::span<const Event> events);

// Single-writer store. Readers take immutable snapshots and may use them from
// any thread; the writer copies the state only when a snapshot is still
// referenced.
class Repository {
 public:
  static constexpr const char* kLogFile = "events.jsonl";
  static constexpr const char* kStateFile = "state.json";

  Repository();  // in-memory
  Repository(Repository&&) = delete;
  Repository& operator=(Repository&&) = delete;

  // Creates <dir>/events.jsonl (empty) and <dir>/state.json. Fails if a log
  // already exists there.
  static std::unique_ptr<Repository> create(const std::filesystem::path& dir);
  // Replays <dir>/events.jsonl and appends subsequent events to it.
  static std::unique_ptr<Repository> open(const std::filesystem::path& dir);

  // Appends a payload at the given tick; seq is assigned. Returns the new
  // version.
  RepositoryVersion append(EventPayload payload, Tick tick);
  // Appends a fully formed event; its seq must be version() + 1.
  RepositoryVersion append_event(const Event& event);
  // All-or-nothing append of several payloads at one tick.
  RepositoryVersion append_batch(std::vector<EventPayload> payloads, Tick tick);

  std::shared_ptr<const State> snapshot() const;
  RepositoryVersion version() const;
  std::vector<Event> events() const;

  // Writes <dir>/state.json from the current state. No-op when in-memory.
  void write_state_export() const;

 private:
  explicit Repository(std::filesystem::path dir);
  void persist(std::span<const Event> events);
  State& writable_state();

  mutable std::mutex mu_;
  std::shared_ptr<State> state_;
  std::vector<Event> log_;
  std::optional<std::filesystem::path> dir_;
  std::ofstream sink_;
};

}  // namespace trustmesh

#endif  // TRUSTMESH_REPOSITORY_H_
