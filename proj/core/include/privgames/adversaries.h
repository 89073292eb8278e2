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

// Built-in attackers and the wrappers that turn an attacker for one game
// into an attacker for another.

#ifndef PRIVGAMES_ADVERSARIES_H_
#define PRIVGAMES_ADVERSARIES_H_

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "privgames/games.h"
#include "privgames/prob.h"

namespace privgames {

using AdversaryPtr = std::unique_ptr<Adversary>;

// Uniform guesses: a coin for bit games, a uniform support point (or
// universe element, or canary) for value games.
AdversaryPtr MakeRandomAdversary();
AdversaryPtr MakeConstantAdversary(int bit);

// Likelihood-ratio test on a (noisy) sum model. The null hypothesis is that
// the challenge is in the training set; the distribution of the remaining
// n-1 points is the game's D, or Bernoulli(p) when `p` is given. Gaussian
// noise of the trainer's variance is folded into both likelihoods. Ties are
// broken by a fair coin. Plays MI_SAMPLED, MI, MI_SKEW and MI_INFORMED.
AdversaryPtr MakeBayesSumMi(std::optional<double> p = std::nullopt);

// DPD: chooses z0 = 0, z1 = 1 and S = n-1 zeros, then thresholds
// theta - sum(S) at 1/2.
AdversaryPtr MakeDpdSumExact();

// PI / PI_GEN on a sum model: picks the b whose mean is closer to theta / n.
AdversaryPtr MakePiMean();

// Reconstruction on a sum model over one-attribute examples:
// returns round(theta - sum(S)).
AdversaryPtr MakeRcSumSubtract();

// Membership by lookup in an example-set model. Under MI_ADV it chooses the
// least likely support point as the challenge.
AdversaryPtr MakeMiSetMember();

// Black-box membership via the oracle: MI_BB, MI_DIFF, MI_POIS, MI_USER,
// MI_SQ.
AdversaryPtr MakeOracleMember();

// Ignores the model; guesses 0 iff the challenge equals x0 (default: the
// most likely support point).
AdversaryPtr MakeMiPointPrior(std::optional<Example> x0 = std::nullopt);

// Mixture games: estimates the training component as the one whose mean is
// closest to theta / n, then guesses 0 iff the challenge is at least as
// likely under that component as on average under the others.
AdversaryPtr MakeMmMeanThreshold();

// PI over example-set or frequency models of labeled data: majority label
// among the visible items, coin on ties or when no labels are visible.
AdversaryPtr MakePiLabelVote();

// Attribute inference against an example-set model: a uniform pick among
// stored items that agree with phi(z), else the most likely consistent
// support point.
AdversaryPtr MakeAiSetLookup();

// DPD against an example-set model: S = n-1 copies of `fill`, challenges
// z0, z1; guesses 0 iff z0 is in the model. Also plays SMI.
AdversaryPtr MakeDpdSetMember(Example z0, Example z1, Example fill);

// RC_TARG: queries every canary and ranks by oracle output, best first.
AdversaryPtr MakeCanaryRanker();

// RC_UNTARG: returns the support points of D that the oracle reports as
// present.
AdversaryPtr MakeUntargetedExtractor();

// Guesses 1 iff the scalar model is >= threshold.
AdversaryPtr MakeScalarThreshold(double threshold);

// --- Reduction wrappers ---

// SMI from a reconstruction adversary: reconstruct, then answer 0 iff the
// reconstruction is strictly closer to z0 than to z1.
AdversaryPtr MakeSmiFromRc(AdversaryPtr inner, LossKind loss);

// DPD from a reconstruction adversary: chooses the fixed S and z0, z1 ~ prior;
// flips a coin when loss(z0, z1) <= 2 eta, otherwise acts as SmiFromRc.
AdversaryPtr MakeDpdFromRc(AdversaryPtr inner, DataDistribution prior, Dataset S,
                           LossKind loss, double eta);

// DPD from an MI adversary: S ~ D^(n-1), z0, z1 ~ D; the inner adversary
// sees (theta, z0) as in MI.
AdversaryPtr MakeDpdFromMi(AdversaryPtr inner, DataDistribution dist);

// Reconstruction from an MI adversary: z' uniform on supp(D); returns z' if
// the inner adversary calls it a member, else ⊥.
AdversaryPtr MakeRcFromMi(AdversaryPtr inner, DataDistribution dist);

// MI from an AI adversary: guess 0 iff the inferred attributes match.
AdversaryPtr MakeMiFromAi(AdversaryPtr inner, std::vector<size_t> phi,
                          std::vector<size_t> pi_proj);

enum class AiFromMiScheme {
  // Pick one candidate completion uniformly, ask the inner adversary, output
  // it if accepted and ⊥ otherwise.
  kSample,
  // Ask about every candidate; output a uniform accepted one, falling back
  // to a uniform candidate when none is accepted.
  kEnumerate,
};

// AI from an MI adversary over the candidate completions of phi(z).
AdversaryPtr MakeAiFromMi(AdversaryPtr inner, AiFromMiScheme scheme);

// MI_i from an MM adversary: forwards (theta, z) together with the mixture.
AdversaryPtr MakeMmMiForward(AdversaryPtr inner, GameDef mm_game);

// PI_{i,j} from an MM adversary: draws z ~ D_i (the game's D0) and forwards.
AdversaryPtr MakeMmPiForward(AdversaryPtr inner, GameDef mm_game);

struct AdversaryInfo {
  std::string kind;
  std::string summary;
  std::string params;
};

// Every builtin and wrapper kind with a one-line summary.
std::vector<AdversaryInfo> ListAdversaryKinds();

}  // namespace privgames

#endif  // PRIVGAMES_ADVERSARIES_H_
