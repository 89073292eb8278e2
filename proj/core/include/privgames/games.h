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

// The challenger side of every privacy game, the two-phase adversary
// interface, and the trial runners (Monte Carlo and exact enumeration).

#ifndef PRIVGAMES_GAMES_H_
#define PRIVGAMES_GAMES_H_

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "privgames/pipeline.h"
#include "privgames/prob.h"

namespace privgames {

enum class GameVariant {
  kMiSampled,  // S ~ D^n; z from S or from D; theta = T(S).
  kMi,      // S ~ D^(n-1); z0, z1 ~ D; theta = T(S + z_b); adversary sees z0.
  kMiSkew,
  kMiAdv,
  kMiBb,
  kMiDiff,
  kMiPois,
  kMiUser,
  kMiSubj,
  kMiSq,
  kMiInformed,
  kAi,
  kAiInformed,
  kInv,
  kRcFixed,
  kRcRan,
  kRcUntarg,
  kRcTarg,
  kPi,
  kPiGen,
  kDpd,
  kSmi,
  kMm,
  kMmG0,
  kMmG1,
};

absl::string_view GameVariantName(GameVariant v);
absl::StatusOr<GameVariant> ParseGameVariant(absl::string_view name);
std::vector<GameVariant> AllGameVariants();

// Games whose secret is a bit b and whose guess is a bit.
bool IsBitGame(GameVariant v);
// Games whose adversary only gets oracle (or single-output) access.
bool IsBlackBoxGame(GameVariant v);
bool IsReconstructionGame(GameVariant v);
bool IsAttributeGame(GameVariant v);

enum class LossKind {
  kDiscrete,  // 0 on equality, 1 otherwise.
  kL1,        // Sum of absolute attribute differences.
};

absl::StatusOr<LossKind> ParseLossKind(absl::string_view name);
absl::string_view LossKindName(LossKind k);

// ⊥ (or an arity/label mismatch) costs 1 under the discrete loss and
// +infinity under L1.
double Loss(LossKind kind, const Example& z, const Example& zhat);

// True when neither is ⊥, the arities agree and the attributes at `idx` match.
bool SameProjection(const Example& a, const Example& b, const std::vector<size_t>& idx);

// Canary s[r]: `tmpl` with each hole position overwritten by one base-`radix`
// digit of r. The randomness space is [0, radix^|holes|).
struct CanaryFormat {
  Example tmpl;
  std::vector<size_t> holes;
  AttrValue radix = 10;

  uint64_t SpaceSize() const;
  Example Fill(uint64_t r) const;
};

struct GameDef {
  GameVariant variant = GameVariant::kMi;
  size_t n = 1;
  // Prior probability of b = 0 (MI_SKEW).
  double p = 0.5;
  // D; D0 for PI / PI_GEN (for PI it is the pre-materialized G0(D)).
  std::optional<DataDistribution> dist;
  // D1 for PI / PI_GEN; D* for MI_SUBJ.
  std::optional<DataDistribution> dist_alt;
  // User/subject meta-distribution (MI_USER, MI_SUBJ) or the K mixture
  // components (MM, MM_G0, MM_G1; sampled uniformly).
  std::optional<MetaDistribution> meta;
  // Reconstruction prior; RC_RAN falls back to `dist`.
  std::optional<DataDistribution> prior;
  // User count (MI_USER, MI_SUBJ) or canary repetitions (RC_TARG).
  size_t m = 1;
  std::vector<Example> universe;  // MI_DIFF, MI_POIS
  size_t n_pois = 0;              // MI_POIS
  std::optional<Dataset> fixed_S;  // SMI, RC_FIXED: |S| = n - 1
  std::optional<Example> fixed_z0;
  std::optional<Example> fixed_z1;
  std::optional<Dataset> fixed_Sstar;  // MI_USER
  // Attribute projections for the AI family; disjoint index sets.
  std::vector<size_t> phi;
  std::vector<size_t> pi_proj;
  std::optional<CanaryFormat> canary;  // RC_TARG
  double eta = 0.0;
  LossKind loss = LossKind::kDiscrete;
  std::optional<int64_t> budget;

  const DataDistribution* rc_prior() const {
    return prior ? &*prior : (dist ? &*dist : nullptr);
  }
};

// Checks that the fields demanded by the variant are present and coherent.
absl::Status Validate(const GameDef& game);

enum class Access { kWhiteBox, kBlackBox };

// Inputs to the adversary's choose phase.
struct ChooseContext {
  const GameDef* game = nullptr;
  const Trainer* trainer = nullptr;
};

// Outputs of the choose phase. DPD: S (|S| = n-1), z0, z1. MI_ADV: z0.
// MI_POIS: S is the poison set S'. MI_SQ: `points` (2n examples).
struct ChooseResult {
  Dataset S;
  Example z0 = Example::Absent();
  Example z1 = Example::Absent();
  std::vector<Example> points;
};

// Everything the challenger hands to the guess phase. Fields a variant does
// not provide stay empty.
struct Observation {
  const GameDef* game = nullptr;
  const Trainer* trainer = nullptr;
  const Model* model = nullptr;  // white-box games
  Oracle* oracle = nullptr;      // black-box games
  std::optional<Example> z;      // challenge (z0 in MI, DPD, SMI)
  std::optional<Example> z1;     // MI_INFORMED, DPD, SMI
  const Dataset* known_S = nullptr;  // RC, DPD, SMI, AI_INFORMED, MI_POIS (S'), MI_USER (S*)
  std::optional<Example> phi_view;   // phi(z) for the AI family
  const std::vector<Example>* sq_points = nullptr;
  size_t sq_j = 0;
  std::optional<double> sq_output;  // theta(z_j)

  GameVariant variant() const { return game->variant; }
};

struct GuessResult {
  std::optional<int> bit;
  std::optional<Example> value;
  std::vector<Example> set;      // RC_UNTARG
  std::vector<Example> ranking;  // RC_TARG, best first
};

// A two-phase adversary. Per-trial state lives in the instance; the runner
// calls Fresh() on a prototype at the start of every trial.
class Adversary {
 public:
  virtual ~Adversary() = default;

  virtual std::string kind() const = 0;
  virtual Access access() const = 0;
  virtual bool Supports(GameVariant v) const = 0;
  virtual std::unique_ptr<Adversary> Fresh() const = 0;

  virtual absl::StatusOr<ChooseResult> Choose(const ChooseContext& ctx,
                                              RandomSource& rng);
  virtual absl::StatusOr<GuessResult> Guess(const Observation& obs,
                                            RandomSource& rng) = 0;
};

struct TrialRecord {
  GameVariant game = GameVariant::kMi;
  RngPath seed_path;
  uint64_t trial_index = 0;
  std::optional<int> secret_bit;
  std::optional<int> guess_bit;
  std::optional<Example> secret_value;
  std::optional<Example> guess_value;
  int win = 0;
  std::optional<double> loss_value;
  std::optional<std::vector<Example>> guessed_set;
  // Position of the secret canary in the adversary's ranking (RC_TARG);
  // equals the ranking length when absent from it.
  std::optional<size_t> secret_rank;
};

// Attempts allowed when sampling from D \ S or U \ S.
inline constexpr int kRejectionCap = 10'000;

// Runs one trial. Substreams are derived from `rng` in the fixed order
// dataset, secret, challenge, trainer, adversary. Returns ResourceExhausted
// for a degenerate trial (empty complement when sampling outside S),
// FailedPrecondition for capability mismatches.
absl::StatusOr<TrialRecord> RunTrial(const GameDef& game, const Trainer& trainer,
                                     const Adversary& prototype, RandomSource rng);

// Rejects adversaries whose access model or supported variants do not fit.
absl::Status CheckCompatible(const GameDef& game, const Adversary& adversary);

struct TrialBatch {
  std::vector<TrialRecord> records;  // successful trials in index order
  uint64_t degenerate = 0;
};

// Trial i uses master.Derive("trial", i); results do not depend on `workers`.
absl::StatusOr<TrialBatch> RunTrials(const GameDef& game, const Trainer& trainer,
                                     const Adversary& prototype, uint64_t trials,
                                     const RngStream& master, int workers);

// Calls `on_outcome(record, probability)` for every atom of the game's
// probability tree. Degenerate atoms are reported with a null record.
absl::Status EnumerateGame(
    const GameDef& game, const Trainer& trainer, const Adversary& prototype,
    const std::function<void(const TrialRecord*, double)>& on_outcome,
    uint64_t max_atoms = 10'000'000);

}  // namespace privgames

#endif  // PRIVGAMES_GAMES_H_
