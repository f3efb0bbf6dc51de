// Copyright 2026 The qcx Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "qcx/serialize.hpp"
#include "qcx/targets.hpp"

namespace qcx {

inline constexpr int kSchemaVersion = 1;

enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,
  kExitConfig = 2,
  kExitInconclusive = 3,
  kExitUsage = 64,
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string_view library_version();

/// Subcommands that produce a run record.
const std::vector<std::string>& run_subcommands();
bool is_run_subcommand(std::string_view name);

/// Overrides `path` (dot separated) in `config`, creating objects as needed.
/// The value is parsed as JSON when possible and kept as a string otherwise.
void set_config_path(Json& config, std::string_view path, std::string_view value);

/// Merges the user config over the subcommand defaults and materializes
/// every default. Unknown keys and malformed values throw ConfigError.
Json resolve_config(std::string_view subcommand, const Json& user, std::uint64_t seed);

/// Builds the target described by a resolved "target" object.
Target build_target(const Json& resolved_target);

struct RunRecord {
  int schema_version = kSchemaVersion;
  std::string subcommand;
  Json config;
  std::uint64_t seed = 1;
  int workers = 1;
  std::string started;
  std::string finished;
  std::string version;
  Json outputs;
  int exit_code = 0;
};

Json to_json(const RunRecord& record);
RunRecord record_from_json(const Json& j);
RunRecord load_record(const std::filesystem::path& path);

struct ExecContext {
  int workers = 1;
  std::filesystem::path out_dir = "qcx-out";
  /// Progress messages for long runs; may be empty.
  std::function<void(const std::string&)> log;
};

struct RunOutput {
  Json outputs;
  std::string summary_csv;
  std::optional<std::string> pulses_csv;
  int exit_code = kExitOk;
};

/// Runs a resolved config. Suites write their member runs below ctx.out_dir.
RunOutput execute(std::string_view subcommand, const Json& resolved, std::uint64_t seed, const ExecContext& ctx);

/// execute() plus record.json, summary.csv and pulses.csv in ctx.out_dir.
RunRecord run_and_write(std::string_view subcommand, const Json& resolved, std::uint64_t seed,
                        const ExecContext& ctx);

struct SuiteEntry {
  std::string name;
  std::string subcommand;
  /// Config delta over the subcommand defaults.
  Json config;
  bool slow = false;
};

struct ExperimentSuite {
  std::string name;
  std::string description;
  std::vector<SuiteEntry> entries;
};

const std::vector<ExperimentSuite>& builtin_suites();
const ExperimentSuite& find_suite(std::string_view name);

enum class TableKind { one, two };
TableKind table_kind_from_string(std::string_view s);

/// Gate-count table (one) from synth-search records or minimum-time table
/// (two) from min-time records. Missing cells are blank; two records disagreeing on a cell throw.
std::string regenerate_table(const std::vector<RunRecord>& records, TableKind table);

/// Every record.json below the given files or directories.
std::vector<RunRecord> collect_records(const std::vector<std::filesystem::path>& paths);

struct ReplayResult {
  bool identical = false;
  std::vector<std::string> differences;
  Json outputs;
};

/// Re-runs a record serially in a scratch directory and compares outputs.
ReplayResult replay(const RunRecord& record);

/// Paths at which two JSON values differ (exact comparison).
std::vector<std::string> json_differences(const Json& a, const Json& b, const std::string& prefix = "");

}  // namespace qcx
