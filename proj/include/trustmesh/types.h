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

#ifndef TRUSTMESH_TYPES_H_
#define TRUSTMESH_TYPES_H_

#include <compare>
#include <cstdint>
#include <functional>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>

namespace trustmesh {

// Opaque string identifier; the tag keeps principal and transaction ids from
// being mixed up.
template <typename Tag>
class StrongId {
 public:
  StrongId() = default;
  explicit StrongId(std::string value) : value_(std::move(value)) {}

  const std::string& str() const { return value_; }
  bool empty() const { return value_.empty(); }

  friend auto operator<=>(const StrongId&, const StrongId&) = default;
  friend bool operator==(const StrongId&, const StrongId&) = default;

  friend std::ostream& operator<<(std::ostream& os, const StrongId& id) {
    return os << id.value_;
  }

 private:
  std::string value_;
};

struct PrincipalTag {};
struct TransactionTag {};

using PrincipalId = StrongId<PrincipalTag>;
using TxId = StrongId<TransactionTag>;

// Logical time. Never wall-clock.
using Tick = std::int64_t;

// Number of successfully applied events.
using RepositoryVersion = std::uint64_t;

// Non-negative currency amount held in hundredths so that persisted costs
// never drift through binary floating point.
class Money {
 public:
  constexpr Money() = default;

  static constexpr Money from_cents(std::int64_t cents) { return Money(cents); }

  // Accepts "12", "12.5", "12.50". Rejects signs, exponents, and more than
  // two fractional digits.
  static Money parse(std::string_view text);

  constexpr std::int64_t cents() const { return cents_; }
  double units() const { return static_cast<double>(cents_) / 100.0; }

  // Always two fractional digits: "12.50".
  std::string to_string() const;

  friend constexpr auto operator<=>(Money, Money) = default;

 private:
  constexpr explicit Money(std::int64_t cents) : cents_(cents) {}
  std::int64_t cents_ = 0;
};

struct TransactionRecord {
  TxId tx_id;
  PrincipalId buyer;
  PrincipalId seller;
  Money cost;
  std::string scope;
  int promised_days = 1;
  int actual_days = 0;
  Tick tick = 0;

  friend bool operator==(const TransactionRecord&,
                         const TransactionRecord&) = default;
};

struct Rating {
  PrincipalId rater;
  PrincipalId ratee;
  double value = 0.0;
  TxId tx_id;
  Tick tick = 0;

  friend bool operator==(const Rating&, const Rating&) = default;
};

}  // namespace trustmesh

template <typename Tag>
struct std::hash<trustmesh::StrongId<Tag>> {
  size_t operator()(const trustmesh::StrongId<Tag>& id) const noexcept {
    return std::hash<std::string>{}(id.str());
  }
};

#endif  // TRUSTMESH_TYPES_H_
