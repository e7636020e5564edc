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

#ifndef TRUSTMESH_CLI_H_
#define TRUSTMESH_CLI_H_

#include <ostream>

namespace trustmesh {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDomainError = 1;
inline constexpr int kExitUsage = 2;

inline constexpr const char* kConfigEnvVar = "TRUST_CONFIG";
inline constexpr const char* kAtcCacheFile = "atc_cache.json";

// trustctl entry point. Results go to `out` as JSON (CSV for `compare`);
// errors go to `err` as {"error": <name>, "message": <text>}.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace trustmesh

#endif  // TRUSTMESH_CLI_H_
