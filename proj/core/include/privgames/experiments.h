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

// Packaged checks of reductions, separations, the DP bound and the mixture
// decomposition. Each run yields a report with a PASS/FAIL/INCONCLUSIVE
// verdict.

#ifndef PRIVGAMES_EXPERIMENTS_H_
#define PRIVGAMES_EXPERIMENTS_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "privgames/adversaries.h"
#include "privgames/games.h"
#include "privgames/metrics.h"
#include "privgames/params.h"
#include "privgames/pipeline.h"

namespace privgames {

inline constexpr double kExactTolerance = 1e-12;
// A run whose degenerate trials exceed this fraction cannot PASS.
inline constexpr double kMaxDegenerateFraction = 0.01;
// Artifact policy for the "vulnerable side" of separations.
inline constexpr double kDefaultVulnerableThreshold = 0.9;

enum class Verdict { kPass, kFail, kInconclusive };

absl::string_view VerdictName(Verdict v);

// A <= B where both sides are intervals (a point is a zero-width interval).
// With D = A - B: FAIL if D surely exceeds 0, PASS if D is surely <= 0,
// INCONCLUSIVE otherwise.
Verdict CheckLessEqual(Interval a, Interval b);
// PASS iff |mid(A) - mid(B)| is within the sum of the half-widths.
Verdict CheckClose(Interval a, Interval b);
Verdict CheckExactEqual(double a, double b, double tol = kExactTolerance);
Verdict CheckExactLessEqual(double a, double b, double tol = kExactTolerance);
// Any FAIL wins, then any INCONCLUSIVE; an empty list passes.
Verdict CombineVerdicts(std::span<const Verdict> verdicts);

struct NamedEstimate {
  std::string name;
  // CENTERED / CONDITIONAL / BASELINE, RATE for plain proportions, or an
  // EXACT_ prefix for enumerated values.
  std::string mode;
  double point = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  uint64_t trials = 0;
};

struct Check {
  std::string name;
  Verdict verdict = Verdict::kPass;
  std::string detail;
};

struct TrialLog {
  std::string name;
  std::vector<TrialRecord> records;
};

struct ExperimentReport {
  std::string experiment;
  std::string theorem_ref;
  std::vector<std::pair<std::string, std::string>> params;
  uint64_t master_seed = 0;
  uint64_t trials = 0;
  std::vector<NamedEstimate> estimates;
  std::optional<double> bound;
  double constant_c = 1.0;
  Verdict verdict = Verdict::kPass;
  uint64_t degenerate_trials = 0;
  double wall_time_seconds = 0.0;
  std::vector<Check> checks;
  std::vector<TrialLog> trial_logs;  // only with RunOptions::keep_trials

  const NamedEstimate* Find(absl::string_view name) const;
};

struct RunOptions {
  uint64_t trials = 100'000;
  uint64_t master_seed = 0;
  int workers = 1;
  bool keep_trials = false;
};

struct ParamDoc {
  std::string key;
  std::string fallback;
  std::string doc;
};

struct ExperimentInfo {
  std::string id;
  std::string theorem_ref;
  std::string summary;
  std::vector<ParamDoc> params;
};

std::vector<ExperimentInfo> ListExperiments();
absl::StatusOr<ExperimentInfo> DescribeExperiment(absl::string_view id);

// InvalidArgument for unknown ids or keys, bad values and trials < 1;
// FailedPrecondition for capability mismatches and violated premises.
absl::StatusOr<ExperimentReport> RunExperiment(absl::string_view id, const Params& params,
                                               const RunOptions& options);

// Builders over dotted keys below `prefix` (e.g. "game.").
absl::StatusOr<GameDef> BuildGame(const Params& params, absl::string_view prefix);
absl::StatusOr<Trainer> BuildTrainer(const Params& params, absl::string_view prefix,
                                     Sigma2Convention convention);
absl::StatusOr<AdversaryPtr> BuildAdversary(const Params& params, absl::string_view prefix);

}  // namespace privgames

#endif  // PRIVGAMES_EXPERIMENTS_H_
