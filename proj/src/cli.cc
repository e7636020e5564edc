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

#include "trustmesh/cli.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "trustmesh/config.h"
#include "trustmesh/error.h"
#include "trustmesh/integrator.h"
#include "trustmesh/repository.h"
#include "trustmesh/reputation.h"
#include "trustmesh/simulator.h"

namespace trustmesh {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Usage problems that are not engine errors: missing config, bad flags.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CommonOptions {
  std::string config;
  std::string repo;
  std::optional<Tick> tick;
};

void write_error(std::ostream& err, std::string_view name, const std::string& message) {
  err << json{{"error", name}, {"message", message}}.dump() << '\n';
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw UsageError("cannot write " + path.string());
  out << content;
}

std::optional<EngineConfig> load_config(const CommonOptions& opts, bool required) {
  std::string path = opts.config;
  if (path.empty()) {
    if (const char* env = std::getenv(kConfigEnvVar)) path = env;
  }
  if (path.empty()) {
    if (required) throw UsageError("no config: pass --config or set TRUST_CONFIG");
    return std::nullopt;
  }
  return EngineConfig::load(path);
}

fs::path repo_path(const CommonOptions& opts, const std::optional<EngineConfig>& cfg) {
  if (!opts.repo.empty()) return opts.repo;
  if (cfg && cfg->repository) return *cfg->repository;
  throw UsageError("no repository: pass --repo or set repository.path in the config");
}

Tick next_tick(const CommonOptions& opts, const Repository& repo) {
  return opts.tick.value_or(repo.snapshot()->last_tick() + 1);
}

void add_common(CLI::App* cmd, CommonOptions& opts) {
  cmd->add_option("--config", opts.config, "Engine config JSON (default: $TRUST_CONFIG)");
  cmd->add_option("--repo", opts.repo, "Repository directory");
}

void add_tick(CLI::App* cmd, CommonOptions& opts) {
  cmd->add_option("--tick", opts.tick, "Logical tick (default: last tick + 1)");
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"trustctl: integrated policy and reputation trust engine"};
  app.require_subcommand(1);
  CommonOptions opts;

  auto* init = app.add_subcommand("init", "Create an empty repository");
  add_common(init, opts);

  auto* reg = app.add_subcommand("register", "Register a principal");
  add_common(reg, opts);
  add_tick(reg, opts);
  std::string attrs;
  std::string tier;
  reg->add_option("--attrs", attrs, "Credentials JSON, or @file")->required();
  reg->add_option("--tier", tier, "Tier policy name")->required();

  auto* tx = app.add_subcommand("tx", "Record a completed transaction");
  add_common(tx, opts);
  add_tick(tx, opts);
  std::string buyer, seller, cost, scope;
  int promised = 0;
  int actual = 0;
  tx->add_option("--buyer", buyer)->required();
  tx->add_option("--seller", seller)->required();
  tx->add_option("--cost", cost)->required();
  tx->add_option("--scope", scope)->required();
  tx->add_option("--promised", promised)->required();
  tx->add_option("--actual", actual)->required();

  auto* rate = app.add_subcommand("rate", "Rate the other party of a transaction");
  add_common(rate, opts);
  add_tick(rate, opts);
  std::string rater, ratee, tx_id;
  double value = 0.0;
  rate->add_option("--rater", rater)->required();
  rate->add_option("--ratee", ratee)->required();
  rate->add_option("--tx", tx_id)->required();
  rate->add_option("--value", value)->required();

  auto* opinion = app.add_subcommand("opinion", "Trust opinion of viewer about subject");
  add_common(opinion, opts);
  std::string viewer, subject, query_scope, mode = "dtc";
  opinion->add_option("--viewer", viewer)->required();
  opinion->add_option("--subject", subject)->required();
  opinion->add_option("--scope", query_scope, "Product scope to weight ratings by");
  opinion->add_option("--mode", mode)->check(CLI::IsMember({"atc", "dtc"}));

  auto* simulate = app.add_subcommand("simulate", "Run a scenario");
  std::string scenario_path, out_dir = "sim-out";
  simulate->add_option("--scenario", scenario_path)->required();
  simulate->add_option("--out-dir", out_dir);

  auto* compare = app.add_subcommand("compare", "A/B a scenario across parameter variants");
  std::string variants_path;
  compare->add_option("--scenario", scenario_path)->required();
  compare->add_option("--variants", variants_path)->required();

  auto* replay_cmd = app.add_subcommand("replay", "Replay a repository log");
  add_common(replay_cmd, opts);
  bool verify = false;
  replay_cmd->add_flag("--verify", verify, "Compare against the state export");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    write_error(err, "UsageError", e.what());
    return kExitUsage;
  }

  try {
    if (init->parsed()) {
      auto cfg = load_config(opts, true);
      fs::path path = repo_path(opts, cfg);
      auto repo = Repository::create(path);
      out << json{{"repo", path.string()}, {"version", repo->version()}}.dump() << '\n';
    } else if (reg->parsed()) {
      auto cfg = load_config(opts, true);
      auto repo = Repository::open(repo_path(opts, cfg));
      std::string doc = attrs.starts_with("@") ? read_file(attrs.substr(1)) : attrs;
      json creds_json;
      try {
        creds_json = json::parse(doc);
      } catch (const json::exception& e) {
        throw UsageError(std::string("--attrs is not valid JSON: ") + e.what());
      }
      RegistrationOutcome r = register_with_rebirth_check(
          *repo, credentials_from_json(creds_json), cfg->tier(tier), next_tick(opts, *repo));
      repo->write_state_export();
      const auto& v = r.verification;
      out << json{{"principal", r.principal.str()},
                  {"record", r.record.str()},
                  {"linked", r.linked},
                  {"verification", v.score},
                  {"verified_attrs", v.verified_attrs},
                  {"fingerprint", v.fingerprint ? json(*v.fingerprint) : json(nullptr)}}
                 .dump()
          << '\n';
    } else if (tx->parsed()) {
      auto cfg = load_config(opts, false);
      auto repo = Repository::open(repo_path(opts, cfg));
      TransactionRecord draft;
      draft.buyer = PrincipalId(buyer);
      draft.seller = PrincipalId(seller);
      draft.cost = Money::parse(cost);
      draft.scope = scope;
      draft.promised_days = promised;
      draft.actual_days = actual;
      TxId id = complete_transaction(*repo, std::move(draft), next_tick(opts, *repo));
      repo->write_state_export();
      out << json{{"tx_id", id.str()}, {"version", repo->version()}}.dump() << '\n';
    } else if (rate->parsed()) {
      auto cfg = load_config(opts, false);
      auto repo = Repository::open(repo_path(opts, cfg));
      RepositoryVersion version =
          rate_after_transaction(*repo, PrincipalId(rater), PrincipalId(ratee),
                                 TxId(tx_id), value, next_tick(opts, *repo));
      repo->write_state_export();
      out << json{{"version", version}}.dump() << '\n';
    } else if (opinion->parsed()) {
      auto cfg = load_config(opts, true);
      fs::path path = repo_path(opts, cfg);
      auto repo = Repository::open(path);
      auto state = repo->snapshot();
      QueryContext query;
      if (!query_scope.empty()) query.scope = query_scope;
      EngineParams params = cfg->engine_params();
      TrustOpinion o;
      if (mode == "atc") {
        AtcCache cache(cfg->staleness_events);
        const fs::path cache_file = path / kAtcCacheFile;
        if (fs::exists(cache_file)) {
          try {
            cache.load_json(json::parse(read_file(cache_file)));
          } catch (const json::exception&) {
            // Unreadable cache is dropped; it only holds recomputable values.
          }
        }
        o = atc_opinion(*state, PrincipalId(viewer), PrincipalId(subject), query, cache,
                        params);
        write_file(cache_file, cache.to_json().dump() + "\n");
      } else {
        o = dtc_opinion(*state, PrincipalId(viewer), PrincipalId(subject), query, params);
      }
      out << opinion_to_json(o).dump() << '\n';
    } else if (simulate->parsed()) {
      ScenarioConfig scenario = ScenarioConfig::load(scenario_path);
      ScenarioResult result = run_scenario(scenario);
      fs::create_directories(out_dir);
      const fs::path dir(out_dir);
      write_log(dir / Repository::kLogFile, result.log);
      write_file(dir / Repository::kStateFile, result.state->export_canonical() + "\n");
      write_file(dir / "metrics.json", result.metrics.to_json().dump(2) + "\n");
      write_file(dir / "metrics.csv", result.metrics.to_csv());
      const auto& m = result.metrics;
      out << json{{"out_dir", dir.string()},
                  {"events", m.events},
                  {"log_sha256", m.log_sha256},
                  {"separation", m.separation ? json(*m.separation) : json(nullptr)}}
                 .dump()
          << '\n';
    } else if (compare->parsed()) {
      ScenarioConfig scenario = ScenarioConfig::load(scenario_path);
      json doc;
      try {
        doc = json::parse(read_file(variants_path));
      } catch (const json::exception& e) {
        throw TrustError(ErrorCode::kInvalidConfig,
                         std::string("variants file is not valid JSON: ") + e.what());
      }
      const json& list = doc.is_object() && doc.contains("variants") ? doc.at("variants") : doc;
      if (!list.is_array()) {
        throw TrustError(ErrorCode::kInvalidConfig, "variants must be a JSON array");
      }
      std::vector<json> variants(list.begin(), list.end());
      out << comparison_csv(compare_runs(scenario, variants));
    } else if (replay_cmd->parsed()) {
      auto cfg = load_config(opts, false);
      fs::path path = repo_path(opts, cfg);
      std::vector<Event> events = read_log(path / Repository::kLogFile);
      State state = replay(events);
      bool match = true;
      if (verify) {
        std::string exported = read_file(path / Repository::kStateFile);
        match = exported == state.export_canonical() + "\n";
      }
      if (!match) {
        write_error(err, "ReplayMismatch",
                    "replayed state differs from " +
                        (path / Repository::kStateFile).string());
        return kExitDomainError;
      }
      out << json{{"version", state.version()}, {"verified", verify}}.dump() << '\n';
    }
  } catch (const UsageError& e) {
    write_error(err, "UsageError", e.what());
    return kExitUsage;
  } catch (const TrustError& e) {
    write_error(err, e.name(), e.what());
    return e.code() == ErrorCode::kInvalidConfig ? kExitUsage : kExitDomainError;
  } catch (const std::exception& e) {
    write_error(err, "InternalError", e.what());
    return kExitDomainError;
  }
  return kExitOk;
}

}  // namespace trustmesh
