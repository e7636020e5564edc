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

#include <cstdio>
#include <limits>

#include "trustmesh/error.h"
#include "trustmesh/types.h"

namespace trustmesh {

namespace {

[[noreturn]] void bad_amount(std::string_view text) {
  throw TrustError(ErrorCode::kInvariantViolation,
                   "cost must be a non-negative decimal with at most two "
                   "fractional digits, got '" +
                       std::string(text) + "'");
}

}  // namespace

Money Money::parse(std::string_view text) {
  if (text.empty()) bad_amount(text);
  constexpr std::int64_t kMaxWhole = std::numeric_limits<std::int64_t>::max() / 100 - 1;
  std::int64_t whole = 0;
  size_t i = 0;
  size_t digits = 0;
  for (; i < text.size() && text[i] != '.'; ++i) {
    char c = text[i];
    if (c < '0' || c > '9') bad_amount(text);
    whole = whole * 10 + (c - '0');
    if (whole > kMaxWhole) bad_amount(text);
    ++digits;
  }
  if (digits == 0) bad_amount(text);
  std::int64_t frac = 0;
  if (i < text.size()) {
    ++i;  // '.'
    size_t frac_digits = 0;
    for (; i < text.size(); ++i) {
      char c = text[i];
      if (c < '0' || c > '9' || frac_digits == 2) bad_amount(text);
      frac = frac * 10 + (c - '0');
      ++frac_digits;
    }
    if (frac_digits == 0) bad_amount(text);
    if (frac_digits == 1) frac *= 10;
  }
  return Money(whole * 100 + frac);
}

std::string Money::to_string() const {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%lld.%02lld",
                static_cast<long long>(cents_ / 100),
                static_cast<long long>(cents_ % 100));
  return buf;
}

}  // namespace trustmesh
