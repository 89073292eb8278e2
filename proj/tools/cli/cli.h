//
// Copyright 2026 The privgames Authors
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
//

// Config-driven runner behind the privgames binary: config parsing, report
// serialization and trial logs.

#ifndef PRIVGAMES_TOOLS_CLI_CLI_H_
#define PRIVGAMES_TOOLS_CLI_CLI_H_

#include <ostream>
#include <string>

#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "privgames/experiments.h"
#include "privgames/params.h"

namespace privgames::cli {

inline constexpr int kExitPass = 0;
inline constexpr int kExitConfigError = 1;
inline constexpr int kExitFail = 2;
inline constexpr int kExitInconclusive = 3;

inline constexpr char kWorkersEnv[] = "PRIVGAMES_WORKERS";

struct RunConfig {
  std::string experiment;
  Params params;  // experiment parameters, top-level keys removed
  RunOptions options;
  std::string out;         // report path; empty writes to the stream
  std::string trials_out;  // CSV path; defaults to <out>.trials.csv
  bool emit_trials = false;
};

// Splits the top-level keys (experiment, trials, master_seed, workers, out,
// trials_out, emit_trials) from experiment parameters. `default_workers`
// applies when the config has no workers key.
absl::StatusOr<RunConfig> ParseRunConfig(const Params& raw, int default_workers = 1);

// Worker count from PRIVGAMES_WORKERS, else 1.
absl::StatusOr<int> DefaultWorkers();

// One JSON object. Numeric fields depend only on (experiment, params,
// master_seed, trials); the wall-time field is omitted when
// `include_wall_time` is false.
std::string ReportToJson(const ExperimentReport& report, bool include_wall_time = true);

// Header estimate,trial_index,secret_bit,guess_bit,win,loss_value; absent
// values are empty cells.
std::string TrialsToCsv(const ExperimentReport& report);

// Runs the experiment, writes outputs, and returns the exit status.
// Diagnostics and, without `out`, the report go to `stream`.
int RunConfigMain(const RunConfig& config, std::ostream& stream, std::ostream& diag);

int ExitCodeFor(Verdict v);

// Text for `list` and `describe`.
std::string ListText();
absl::StatusOr<std::string> DescribeText(absl::string_view id);

}  // namespace privgames::cli

#endif  // PRIVGAMES_TOOLS_CLI_CLI_H_
