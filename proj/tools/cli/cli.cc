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

#include "cli/cli.h"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "absl/container/flat_hash_set.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "nlohmann/json.hpp"
#include "privgames/adversaries.h"
#include "privgames/games.h"
#include "privgames/pipeline.h"
#include "privgames/status_macros.h"

namespace privgames::cli {
namespace {

using Json = nlohmann::ordered_json;

const absl::flat_hash_set<std::string>& TopLevelKeys() {
  static const auto* keys = new absl::flat_hash_set<std::string>{
      "experiment", "trials", "master_seed", "workers", "out", "trials_out", "emit_trials"};
  return *keys;
}

Json Number(double x) {
  // JSON has no infinities or NaN.
  if (!std::isfinite(x)) return Json(nullptr);
  return Json(x);
}

absl::Status WriteFile(const std::string& path, absl::string_view field,
                       const std::string& body) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) return absl::InvalidArgumentError(absl::StrCat(field, ": cannot open '", path, "'"));
  f << body;
  f.close();
  if (!f) return absl::InvalidArgumentError(absl::StrCat(field, ": cannot write '", path, "'"));
  return absl::OkStatus();
}

}  // namespace

absl::StatusOr<int> DefaultWorkers() {
  const char* env = std::getenv(kWorkersEnv);
  if (env == nullptr || *env == '\0') return 1;
  Params p;
  p.Set(kWorkersEnv, env);
  PRIVGAMES_ASSIGN_OR_RETURN(const uint64_t w, p.GetUint(kWorkersEnv, std::nullopt));
  if (w < 1 || w > 1024) {
    return absl::InvalidArgumentError(absl::StrCat(kWorkersEnv, ": must be in [1, 1024]"));
  }
  return static_cast<int>(w);
}

absl::StatusOr<RunConfig> ParseRunConfig(const Params& raw, int default_workers) {
  RunConfig c;
  PRIVGAMES_ASSIGN_OR_RETURN(c.experiment, raw.GetString("experiment", std::nullopt));
  PRIVGAMES_ASSIGN_OR_RETURN(const int64_t trials, raw.GetInt("trials", 100'000));
  if (trials < 1) return absl::InvalidArgumentError("trials must be ≥ 1");
  c.options.trials = static_cast<uint64_t>(trials);
  PRIVGAMES_ASSIGN_OR_RETURN(c.options.master_seed, raw.GetUint("master_seed", 0));
  PRIVGAMES_ASSIGN_OR_RETURN(const uint64_t workers,
                             raw.GetUint("workers", static_cast<uint64_t>(default_workers)));
  if (workers < 1 || workers > 1024) {
    return absl::InvalidArgumentError("workers: must be in [1, 1024]");
  }
  c.options.workers = static_cast<int>(workers);
  PRIVGAMES_ASSIGN_OR_RETURN(c.out, raw.GetString("out", std::string()));
  PRIVGAMES_ASSIGN_OR_RETURN(c.emit_trials, raw.GetBool("emit_trials", false));
  PRIVGAMES_ASSIGN_OR_RETURN(c.trials_out, raw.GetString("trials_out", std::string()));
  if (c.trials_out.empty() && !c.out.empty()) c.trials_out = absl::StrCat(c.out, ".trials.csv");
  if (c.emit_trials && c.trials_out.empty()) {
    return absl::InvalidArgumentError("trials_out: required when emit_trials is set without out");
  }
  c.options.keep_trials = c.emit_trials;
  for (const auto& [k, v] : raw.entries()) {
    if (!TopLevelKeys().contains(k)) c.params.Set(k, v);
  }
  return c;
}

std::string ReportToJson(const ExperimentReport& r, bool include_wall_time) {
  Json j;
  j["experiment"] = r.experiment;
  j["theorem_ref"] = r.theorem_ref;
  Json params = Json::object();
  for (const auto& [k, v] : r.params) params[k] = v;
  j["params"] = params;
  j["master_seed"] = r.master_seed;
  j["trials"] = r.trials;
  Json estimates = Json::array();
  for (const NamedEstimate& e : r.estimates) {
    estimates.push_back({{"name", e.name},
                         {"mode", e.mode},
                         {"point", Number(e.point)},
                         {"ci_low", Number(e.ci_low)},
                         {"ci_high", Number(e.ci_high)},
                         {"trials", e.trials}});
  }
  j["estimates"] = estimates;
  j["bound"] = r.bound ? Number(*r.bound) : Json(nullptr);
  j["constant_c"] = Number(r.constant_c);
  j["verdict"] = std::string(VerdictName(r.verdict));
  j["degenerate_trials"] = r.degenerate_trials;
  Json checks = Json::array();
  for (const Check& c : r.checks) {
    checks.push_back(
        {{"name", c.name}, {"verdict", std::string(VerdictName(c.verdict))}, {"detail", c.detail}});
  }
  j["checks"] = checks;
  // Point values by name, for direct lookup.
  for (const NamedEstimate& e : r.estimates) {
    if (!j.contains(e.name)) j[e.name] = Number(e.point);
  }
  if (include_wall_time) j["wall_time_seconds"] = r.wall_time_seconds;
  return j.dump(2) + "\n";
}

std::string TrialsToCsv(const ExperimentReport& r) {
  std::string out = "estimate,trial_index,secret_bit,guess_bit,win,loss_value\n";
  for (const TrialLog& log : r.trial_logs) {
    for (const TrialRecord& t : log.records) {
      absl::StrAppend(&out, log.name, ",", t.trial_index, ",",
                      t.secret_bit ? absl::StrCat(*t.secret_bit) : "", ",",
                      t.guess_bit ? absl::StrCat(*t.guess_bit) : "", ",", t.win, ",",
                      t.loss_value ? absl::StrFormat("%.17g", *t.loss_value) : "", "\n");
    }
  }
  return out;
}

int ExitCodeFor(Verdict v) {
  switch (v) {
    case Verdict::kPass: return kExitPass;
    case Verdict::kFail: return kExitFail;
    case Verdict::kInconclusive: return kExitInconclusive;
  }
  return kExitConfigError;
}

int RunConfigMain(const RunConfig& config, std::ostream& stream, std::ostream& diag) {
  absl::StatusOr<ExperimentReport> report =
      RunExperiment(config.experiment, config.params, config.options);
  if (!report.ok()) {
    diag << "error: " << report.status().message() << "\n";
    return kExitConfigError;
  }
  const std::string json = ReportToJson(*report);
  if (config.out.empty()) {
    stream << json;
  } else if (absl::Status s = WriteFile(config.out, "out", json); !s.ok()) {
    diag << "error: " << s.message() << "\n";
    return kExitConfigError;
  }
  if (config.emit_trials) {
    if (absl::Status s = WriteFile(config.trials_out, "trials_out", TrialsToCsv(*report));
        !s.ok()) {
      diag << "error: " << s.message() << "\n";
      return kExitConfigError;
    }
  }
  diag << report->experiment << ": " << VerdictName(report->verdict) << "\n";
  return ExitCodeFor(report->verdict);
}

std::string ListText() {
  std::string out = "experiments:\n";
  for (const ExperimentInfo& e : ListExperiments()) {
    absl::StrAppend(&out, "  ", e.id, "  ", e.summary, "\n");
  }
  absl::StrAppend(&out, "adversaries:\n");
  for (const AdversaryInfo& a : ListAdversaryKinds()) {
    absl::StrAppend(&out, "  ", a.kind, "  ", a.summary,
                    a.params.empty() ? "" : absl::StrCat(" [", a.params, "]"), "\n");
  }
  absl::StrAppend(&out, "trainers:\n");
  for (TrainerKind k : {TrainerKind::kSum, TrainerKind::kNoisySum, TrainerKind::kMemorizer,
                        TrainerKind::kFeatureProjector, TrainerKind::kCountModel,
                        TrainerKind::kConstant}) {
    absl::StrAppend(&out, "  ", TrainerKindName(k), "\n");
  }
  absl::StrAppend(&out, "games:\n");
  for (GameVariant v : AllGameVariants()) absl::StrAppend(&out, "  ", GameVariantName(v), "\n");
  return out;
}

absl::StatusOr<std::string> DescribeText(absl::string_view id) {
  PRIVGAMES_ASSIGN_OR_RETURN(ExperimentInfo info, DescribeExperiment(id));
  std::string out = absl::StrCat(info.id, "\n  ", info.theorem_ref, "\n  ", info.summary,
                                 "\nparameters:\n");
  for (const ParamDoc& p : info.params) {
    absl::StrAppend(&out, "  ", p.key, " = ", p.fallback.empty() ? "(none)" : p.fallback, "  ",
                    p.doc, "\n");
  }
  absl::StrAppend(&out, "run-level keys: experiment, trials, master_seed, workers, out, "
                        "trials_out, emit_trials, sigma2_convention\n");
  return out;
}

}  // namespace privgames::cli
