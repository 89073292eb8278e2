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

#include "privgames/adversaries.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <tuple>
#include <utility>

#include "absl/container/flat_hash_map.h"
#include "absl/strings/str_cat.h"
#include "privgames/status_macros.h"

namespace privgames {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
// Relative tolerance under which two log-likelihoods count as a tie.
constexpr double kTieTolerance = 1e-12;
constexpr uint64_t kMaxCanaries = 1'000'000;

GuessResult BitGuess(int bit) {
  GuessResult g;
  g.bit = bit;
  return g;
}

GuessResult ValueGuess(Example value) {
  GuessResult g;
  g.value = std::move(value);
  return g;
}

absl::Status Unsupported(absl::string_view kind, const Observation& obs) {
  return absl::FailedPreconditionError(
      absl::StrCat(kind, " cannot play ", GameVariantName(obs.variant())));
}

absl::StatusOr<double> ScalarOf(const Observation& obs, absl::string_view kind) {
  if (obs.model == nullptr) {
    return absl::FailedPreconditionError(absl::StrCat(kind, " needs white-box access"));
  }
  const auto* s = std::get_if<ScalarModel>(obs.model);
  if (s == nullptr) {
    return absl::FailedPreconditionError(absl::StrCat(kind, " needs a scalar model"));
  }
  return s->value;
}

absl::StatusOr<const DataDistribution*> DistOf(const GameDef& game, absl::string_view kind) {
  if (!game.dist) {
    return absl::FailedPreconditionError(
        absl::StrCat(kind, " needs game.dist in ", GameVariantName(game.variant)));
  }
  return &*game.dist;
}

// Index of the most likely support point; first wins ties.
size_t ModeIndex(const DataDistribution& dist) {
  const auto probs = dist.probs();
  return static_cast<size_t>(std::max_element(probs.begin(), probs.end()) - probs.begin());
}

absl::StatusOr<ChooseResult> DefaultChoose(const ChooseContext& ctx, RandomSource& rng,
                                           absl::string_view kind) {
  const GameDef& g = *ctx.game;
  ChooseResult out;
  switch (g.variant) {
    case GameVariant::kDpd:
      out.S.assign(g.n - 1, Example::Scalar(0));
      out.z0 = Example::Scalar(0);
      out.z1 = Example::Scalar(1);
      return out;
    case GameVariant::kMiAdv:
      out.z0 = SampleExample(*g.dist, rng);
      return out;
    case GameVariant::kMiPois:
      out.S = SampleDataset(*g.dist, g.n_pois, rng);
      return out;
    case GameVariant::kMiSq: {
      const size_t total = 2 * g.n;
      if (!g.dist) {
        for (size_t i = 0; i < total; ++i) {
          out.points.push_back(Example::Scalar(static_cast<AttrValue>(i)));
        }
      } else if (g.dist->size() >= total) {
        out.points.assign(g.dist->support().begin(), g.dist->support().begin() + total);
      } else {
        out.points = SampleDataset(*g.dist, total, rng);
      }
      return out;
    }
    default:
      return absl::FailedPreconditionError(absl::StrCat(
          "adversary ", kind, " has no choose phase for ", GameVariantName(g.variant)));
  }
}

// Base for adversaries whose per-trial state is plain copyable data.
template <typename Derived>
class Copyable : public Adversary {
 public:
  std::unique_ptr<Adversary> Fresh() const override {
    return std::make_unique<Derived>(static_cast<const Derived&>(*this));
  }
  absl::StatusOr<ChooseResult> Choose(const ChooseContext& ctx, RandomSource& rng) override {
    return DefaultChoose(ctx, rng, kind());
  }
};

// Owning pointer to an inner adversary that copies via Fresh().
class Inner {
 public:
  explicit Inner(AdversaryPtr p) : p_(std::move(p)) {}
  Inner(const Inner& other) : p_(other.p_->Fresh()) {}
  Inner& operator=(const Inner& other) {
    p_ = other.p_->Fresh();
    return *this;
  }
  Adversary* operator->() const { return p_.get(); }
  Adversary& operator*() const { return *p_; }

 private:
  AdversaryPtr p_;
};

class RandomAdversary : public Copyable<RandomAdversary> {
 public:
  std::string kind() const override { return "RANDOM"; }
  Access access() const override { return Access::kBlackBox; }
  bool Supports(GameVariant) const override { return true; }

  absl::StatusOr<GuessResult> Guess(const Observation& obs, RandomSource& rng) override {
    const GameDef& g = *obs.game;
    if (IsBitGame(g.variant)) return BitGuess(rng.Bit(0.5));
    switch (g.variant) {
      case GameVariant::kMiDiff:
      case GameVariant::kMiPois:
        return ValueGuess(g.universe[rng.UniformIndex(g.universe.size())]);
      case GameVariant::kAi:
      case GameVariant::kAiInformed:
      case GameVariant::kInv:
        return ValueGuess(g.dist->support()[rng.UniformIndex(g.dist->size())]);
      case GameVariant::kRcFixed:
      case GameVariant::kRcRan: {
        const DataDistribution& prior = *g.rc_prior();
        return ValueGuess(prior.support()[rng.UniformIndex(prior.size())]);
      }
      case GameVariant::kRcUntarg: {
        GuessResult out;
        out.set.push_back(g.dist->support()[rng.UniformIndex(g.dist->size())]);
        return out;
      }
      case GameVariant::kRcTarg: {
        GuessResult out;
        out.ranking.push_back(g.canary->Fill(rng.UniformIndex(g.canary->SpaceSize())));
        return out;
      }
      default:
        return Unsupported(kind(), obs);
    }
  }
};

class ConstantAdversary : public Copyable<ConstantAdversary> {
 public:
  explicit ConstantAdversary(int bit) : bit_(bit) {}
  std::string kind() const override { return absl::StrCat("CONSTANT(", bit_, ")"); }
  Access access() const override { return Access::kBlackBox; }
  bool Supports(GameVariant v) const override { return IsBitGame(v); }
  absl::StatusOr<GuessResult> Guess(const Observation&, RandomSource&) override {
    return BitGuess(bit_);
  }

 private:
  int bit_;
};

// Probability mass function over a contiguous integer range.
struct IntPmf {
  int64_t offset = 0;
  std::vector<double> p;

  double At(int64_t x) const {
    const int64_t i = x - offset;
    return i < 0 || i >= static_cast<int64_t>(p.size()) ? 0.0 : p[static_cast<size_t>(i)];
  }
};

IntPmf Convolve(const IntPmf& a, const IntPmf& b) {
  IntPmf out;
  out.offset = a.offset + b.offset;
  out.p.assign(a.p.size() + b.p.size() - 1, 0.0);
  for (size_t i = 0; i < a.p.size(); ++i) {
    if (a.p[i] == 0.0) continue;
    for (size_t j = 0; j < b.p.size(); ++j) out.p[i + j] += a.p[i] * b.p[j];
  }
  return out;
}

// Sums of k iid draws, memoized across trials (shared by Fresh() copies).
class SumPmfCache {
 public:
  const IntPmf& Power(const IntPmf& base, size_t k) {
    std::lock_guard<std::mutex> lock(mu_);
    auto key = std::make_tuple(base.offset, base.p, k);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    IntPmf acc{0, {1.0}};
    for (size_t i = 0; i < k; ++i) acc = Convolve(acc, base);
    return cache_.emplace(std::move(key), std::move(acc)).first->second;
  }

 private:
  std::mutex mu_;
  std::map<std::tuple<int64_t, std::vector<double>, size_t>, IntPmf> cache_;
};

class BayesSumMi : public Copyable<BayesSumMi> {
 public:
  explicit BayesSumMi(std::optional<double> p)
      : p_(p), cache_(std::make_shared<SumPmfCache>()) {}

  std::string kind() const override { return "BAYES_SUM_MI"; }
  Access access() const override { return Access::kWhiteBox; }
  bool Supports(GameVariant v) const override {
    return v == GameVariant::kMiSampled || v == GameVariant::kMi || v == GameVariant::kMiSkew ||
           v == GameVariant::kMiInformed;
  }

  absl::StatusOr<GuessResult> Guess(const Observation& obs, RandomSource& rng) override {
    if (!Supports(obs.variant())) return Unsupported(kind(), obs);
    PRIVGAMES_ASSIGN_OR_RETURN(const double theta, ScalarOf(obs, kind()));
    const size_t attr = obs.trainer->attr_index();
    PRIVGAMES_ASSIGN_OR_RETURN(IntPmf base, Base(*obs.game, attr));
    const double sigma2 =
        obs.trainer->kind() == TrainerKind::kNoisySum ? obs.trainer->sigma2() : 0.0;
    const size_t n = obs.game->n;
    const IntPmf& rest = cache_->Power(base, n - 1);
    PRIVGAMES_ASSIGN_OR_RETURN(const double z0, AttrOf(*obs.z, attr));
    double log0 = LogLikelihood(rest, theta - z0, sigma2);
    double log1;
    if (obs.variant() == GameVariant::kMiInformed) {
      PRIVGAMES_ASSIGN_OR_RETURN(const double z1, AttrOf(*obs.z1, attr));
      log1 = LogLikelihood(rest, theta - z1, sigma2);
    } else {
      log1 = LogLikelihood(cache_->Power(base, n), theta, sigma2);
    }
    if (obs.variant() == GameVariant::kMiSkew) {
      log0 += std::log(obs.game->p);
      log1 += std::log(1.0 - obs.game->p);
    }
    const bool tie = log0 == log1 || (std::isfinite(log0) && std::isfinite(log1) &&
                                      std::abs(log0 - log1) <=
                                          kTieTolerance * std::max(1.0, std::abs(log0)));
    if (tie) {
      return BitGuess(rng.Bit(0.5));
    }
    return BitGuess(log0 > log1 ? 0 : 1);
  }

 private:
  absl::StatusOr<IntPmf> Base(const GameDef& game, size_t attr) const {
    DataDistribution dist = DataDistribution::PointMass(Example::Scalar(0));
    if (p_) {
      PRIVGAMES_ASSIGN_OR_RETURN(dist, DataDistribution::Bernoulli(*p_));
    } else {
      PRIVGAMES_ASSIGN_OR_RETURN(const DataDistribution* d, DistOf(game, kind()));
      dist = *d;
    }
    int64_t lo = std::numeric_limits<int64_t>::max();
    int64_t hi = std::numeric_limits<int64_t>::min();
    for (const Example& z : dist.support()) {
      PRIVGAMES_ASSIGN_OR_RETURN(const double v, AttrOf(z, attr));
      lo = std::min<int64_t>(lo, static_cast<int64_t>(v));
      hi = std::max<int64_t>(hi, static_cast<int64_t>(v));
    }
    IntPmf base;
    base.offset = lo;
    base.p.assign(static_cast<size_t>(hi - lo + 1), 0.0);
    for (size_t i = 0; i < dist.size(); ++i) {
      base.p[static_cast<size_t>(dist.support()[i].attr(attr) - lo)] += dist.probs()[i];
    }
    return base;
  }

  absl::StatusOr<double> AttrOf(const Example& z, size_t attr) const {
    if (z.absent() || attr >= z.arity()) {
      return absl::InvalidArgumentError(
          absl::StrCat(kind(), " cannot read attribute ", attr, " of ", z.ToString()));
    }
    return static_cast<double>(z.attr(attr));
  }

  // log P(sum = x), or the log-density of sum + N(0, sigma2) at x up to a
  // constant shared by both hypotheses.
  static double LogLikelihood(const IntPmf& pmf, double x, double sigma2) {
    if (sigma2 <= 0.0) {
      const double r = std::round(x);
      if (std::abs(x - r) > 1e-9) return kNegInf;
      const double mass = pmf.At(static_cast<int64_t>(r));
      return mass > 0.0 ? std::log(mass) : kNegInf;
    }
    double peak = kNegInf;
    std::vector<double> terms(pmf.p.size(), kNegInf);
    for (size_t i = 0; i < pmf.p.size(); ++i) {
      if (pmf.p[i] <= 0.0) continue;
      const double k = static_cast<double>(pmf.offset + static_cast<int64_t>(i));
      terms[i] = std::log(pmf.p[i]) - (x - k) * (x - k) / (2.0 * sigma2);
      peak = std::max(peak, terms[i]);
    }
    if (peak == kNegInf) return kNegInf;
    double acc = 0.0;
    for (double t : terms) {
      if (t != kNegInf) acc += std::exp(t - peak);
    }
    return peak + std::log(acc);
  }

  std::optional<double> p_;
  std::shared_ptr<SumPmfCache> cache_;
};

class DpdSumExact : public Copyable<DpdSumExact> {
 public:
  std::string kind() const override { return "DPD_SUM_EXACT"; }
  Access access() const override { return Access::kWhiteBox; }
  bool Supports(GameVariant v) const override { return v == GameVariant::kDpd; }

  absl::StatusOr<ChooseResult> Choose(const ChooseContext& ctx, RandomSource& rng) override {
    return DefaultChoose(ctx, rng, kind());
  }

  absl::StatusOr<GuessResult> Guess(const Observation& obs, RandomSource&) override {
    PRIVGAMES_ASSIGN_OR_RETURN(const double theta, ScalarOf(obs, kind()));
    double base = 0.0;
    for (const Example& x : *obs.known_S) base += x.attr(0);
    return BitGuess(theta - base >= 0.5 ? 1 : 0);
  }
};

class PiMean : public Copyable<PiMean> {
 public:
  std::string kind() const override { return "PI_MEAN"; }
  Access access() const override { return Access::kWhiteBox; }
  bool Supports(GameVariant v) const override {
    return v == GameVariant::kPi || v == GameVariant::kPiGen;
  }

  absl::StatusOr<GuessResult> Guess(const Observation& obs, RandomSource& rng) override {
    PRIVGAMES_ASSIGN_OR_RETURN(const double theta, ScalarOf(obs, kind()));
    const size_t attr = obs.trainer->attr_index();
    const double mean = theta / static_cast<double>(obs.game->n);
    const double d0 = std::abs(mean - obs.game->dist->Mean(attr));
    const double d1 = std::abs(mean - obs.game->dist_alt->Mean(attr));
    if (d0 == d1) return BitGuess(rng.Bit(0.5));
    return BitGuess(d0 < d1 ? 0 : 1);
  }
};

class RcSumSubtract : public Copyable<RcSumSubtract> {
 public:
  std::string kind() const override { return "RC_SUM_SUBTRACT"; }
  Access access() const override { return Access::kWhiteBox; }
  bool Supports(GameVariant v) const override {
    return v == GameVariant::kRcFixed || v == GameVariant::kRcRan ||
           v == GameVariant::kAiInformed;
  }

  absl::StatusOr<GuessResult> Guess(const Observation& obs, RandomSource&) override {
    PRIVGAMES_ASSIGN_OR_RETURN(const double theta, ScalarOf(obs, kind()));
    const size_t attr = obs.trainer->attr_index();
    double rest = 0.0;
    for (const Example& x : *obs.known_S) rest += x.attr(attr);
    return ValueGuess(Example::Scalar(static_cast<AttrValue>(std::llround(theta - rest))));
  }
};

absl::StatusOr<double> Present(const Observation& obs, const Example& x,
                               absl::string_view kind) {
  if (obs.model != nullptr) return Query(*obs.model, x);
  if (obs.oracle != nullptr) {
    PRIVGAMES_ASSIGN_OR_RETURN(std::optional<double> y, obs.oracle->Query(x));
    return y.value_or(0.0);
  }
  return absl::FailedPreconditionError(absl::StrCat(kind, " needs model or oracle access"));
}

bool IsMembershipWithChallenge(GameVariant v) {
  switch (v) {
    case GameVariant::kMiSampled:
    case GameVariant::kMi:
    case GameVariant::kMiSkew:
    case GameVariant::kMiAdv:
    case GameVariant::kMiInformed:
    case GameVariant::kMm:
    case GameVariant::kMmG0:
    case GameVariant::kMmG1:
      return true;
    default:
      return false;
  }
}

class MiSetMember : public Copyable<MiSetMember> {
 public:
  std::string kind() const override { return "MI_SET_MEMBER"; }
  Access access() const override { return Access::kWhiteBox; }
  bool Supports(GameVariant v) const override { return IsMembershipWithChallenge(v); }

  absl::StatusOr<ChooseResult> Choose(const ChooseContext& ctx, RandomSource& rng) override {
    if (ctx.game->variant != GameVariant::kMiAdv) return DefaultChoose(ctx, rng, kind());
    const auto probs = ctx.game->dist->probs();
    const size_t rare =
        static_cast<size_t>(std::min_element(probs.begin(), probs.end()) - probs.begin());
    ChooseResult out;
    out.z0 = ctx.game->dist->support()[rare];
    return out;
  }

  absl::StatusOr<GuessResult> Guess(const Observation& obs, RandomSource&) override {
    if (obs.model == nullptr || std::holds_alternative<ScalarModel>(*obs.model)) {
      return absl::FailedPreconditionError(
          absl::StrCat(kind(), " needs an example-set or frequency model"));
    }
    PRIVGAMES_ASSIGN_OR_RETURN(const double y, Query(*obs.model, *obs.z));
    return BitGuess(y > 0.0 ? 0 : 1);
  }
};

class OracleMember : public Copyable<OracleMember> {
 public:
  std::string kind() const override { return "ORACLE_MEMBER"; }
  Access access() const override { return Access::kBlackBox; }
  bool Supports(GameVariant v) const override {
    return v == GameVariant::kMiBb || v == GameVariant::kMiDiff || v == GameVariant::kMiPois ||
           v == GameVariant::kMiUser || v == GameVariant::kMiSq;
  }

  absl::StatusOr<GuessResult> Guess(const Observation& obs, RandomSource&) override {
    switch (obs.variant()) {
      case GameVariant::kMiBb: {
        PRIVGAMES_ASSIGN_OR_RETURN(const double y, Present(obs, *obs.z, kind()));
        return BitGuess(y > 0.0 ? 0 : 1);
      }
      case GameVariant::kMiSq:
        return BitGuess(obs.sq_output.value_or(0.0) > 0.0 ? 0 : 1);
      case GameVariant::kMiUser: {
        for (const Example& x : *obs.known_S) {
          PRIVGAMES_ASSIGN_OR_RETURN(const double y, Present(obs, x, kind()));
          if (!(y > 0.0)) return BitGuess(1);
        }
        return BitGuess(0);
      }
      case GameVariant::kMiDiff:
      case GameVariant::kMiPois: {
        const auto& universe = obs.game->universe;
        std::optional<Example> fallback;
        for (const Example& u : universe) {
          if (u.absent()) {
            fallback = u;
            continue;
          }
          PRIVGAMES_ASSIGN_OR_RETURN(const double y, Present(obs, u, kind()));
          if (y > 0.0) return ValueGuess(u);
        }
        return ValueGuess(fallback.value_or(universe.front()));
      }
      default:
        return Unsupported(kind(), obs);
    }
  }
};

class MiPointPrior : public Copyable<MiPointPrior> {
 public:
  explicit MiPointPrior(std::optional<Example> x0) : x0_(std::move(x0)) {}
  std::string kind() const override { return "MI_POINT_PRIOR"; }
  Access access() const override { return Access::kBlackBox; }
  bool Supports(GameVariant v) const override {
    return v == GameVariant::kMiBb || (IsMembershipWithChallenge(v) && v != GameVariant::kMiAdv);
  }

  absl::StatusOr<GuessResult> Guess(const Observation& obs, RandomSource&) override {
    Example target;
    if (x0_) {
      target = *x0_;
    } else if (obs.game->dist) {
      target = obs.game->dist->support()[ModeIndex(*obs.game->dist)];
    } else {
      return absl::FailedPreconditionError(absl::StrCat(kind(), " needs x0 or game.dist"));
    }
    return BitGuess(*obs.z == target ? 0 : 1);
  }

 private:
  std::optional<Example> x0_;
};

class MmMeanThreshold : public Copyable<MmMeanThreshold> {
 public:
  std::string kind() const override { return "MM_MEAN_THRESHOLD"; }
  Access access() const override { return Access::kWhiteBox; }
  bool Supports(GameVariant v) const override {
    return v == GameVariant::kMm || v == GameVariant::kMmG0 || v == GameVariant::kMmG1;
  }

  absl::StatusOr<GuessResult> Guess(const Observation& obs, RandomSource&) override {
    PRIVGAMES_ASSIGN_OR_RETURN(const double theta, ScalarOf(obs, kind()));
    const auto comps = obs.game->meta->support();
    const size_t attr = obs.trainer->attr_index();
    const double mean = theta / static_cast<double>(obs.game->n);
    size_t khat = 0;
    double best = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < comps.size(); ++i) {
      const double d = std::abs(comps[i].Mean(attr) - mean);
      if (d < best) {
        best = d;
        khat = i;
      }
    }
    double others = 0.0;
    for (size_t j = 0; j < comps.size(); ++j) {
      if (j != khat) others += comps[j].Mass(*obs.z);
    }
    others /= static_cast<double>(comps.size() - 1);
    return BitGuess(comps[khat].Mass(*obs.z) >= others ? 0 : 1);
  }
};

class PiLabelVote : public Copyable<PiLabelVote> {
 public:
  std::string kind() const override { return "PI_LABEL_VOTE"; }
  Access access() const override { return Access::kWhiteBox; }
  bool Supports(GameVariant v) const override {
    return v == GameVariant::kPi || v == GameVariant::kPiGen;
  }

  absl::StatusOr<GuessResult> Guess(const Observation& obs, RandomSource& rng) override {
    int64_t votes[2] = {0, 0};
    auto tally = [&](const Example& x, int64_t weight) {
      if (x.label() && (*x.label() == 0 || *x.label() == 1)) votes[*x.label()] += weight;
    };
    if (const auto* set = std::get_if<ExampleSetModel>(obs.model)) {
      for (const Example& x : set->items) tally(x, 1);
    } else if (const auto* table = std::get_if<FrequencyTableModel>(obs.model)) {
      for (const auto& [x, c] : table->counts) tally(x, c);
    }
    if (votes[0] == votes[1]) return BitGuess(rng.Bit(0.5));
    return BitGuess(votes[0] > votes[1] ? 0 : 1);
  }
};

class AiSetLookup : public Copyable<AiSetLookup> {
 public:
  std::string kind() const override { return "AI_SET_LOOKUP"; }
  Access access() const override { return Access::kWhiteBox; }
  bool Supports(GameVariant v) const override { return IsAttributeGame(v); }

  absl::StatusOr<GuessResult> Guess(const Observation& obs, RandomSource& rng) override {
    const auto* set = std::get_if<ExampleSetModel>(obs.model);
    if (set == nullptr) {
      return absl::FailedPreconditionError(absl::StrCat(kind(), " needs an example-set model"));
    }
    const GameDef& g = *obs.game;
    const size_t arity = g.dist->schema().arity();
    std::vector<Example> matches;
    for (const Example& x : set->items) {
      if (x.arity() == arity && Project(x, g.phi) == *obs.phi_view) matches.push_back(x);
    }
    if (!matches.empty()) {
      std::sort(matches.begin(), matches.end());
      return ValueGuess(matches[rng.UniformIndex(matches.size())]);
    }
    std::optional<size_t> best;
    for (size_t i = 0; i < g.dist->size(); ++i) {
      if (Project(g.dist->support()[i], g.phi) != *obs.phi_view) continue;
      if (!best || g.dist->probs()[i] > g.dist->probs()[*best]) best = i;
    }
    return ValueGuess(best ? g.dist->support()[*best] : Example::Absent());
  }
};

class DpdSetMember : public Copyable<DpdSetMember> {
 public:
  DpdSetMember(Example z0, Example z1, Example fill)
      : z0_(std::move(z0)), z1_(std::move(z1)), fill_(std::move(fill)) {}
  std::string kind() const override { return "DPD_SET_MEMBER"; }
  Access access() const override { return Access::kWhiteBox; }
  bool Supports(GameVariant v) const override {
    return v == GameVariant::kDpd || v == GameVariant::kSmi;
  }

  absl::StatusOr<ChooseResult> Choose(const ChooseContext& ctx, RandomSource&) override {
    ChooseResult out;
    out.S.assign(ctx.game->n - 1, fill_);
    out.z0 = z0_;
    out.z1 = z1_;
    return out;
  }

  absl::StatusOr<GuessResult> Guess(const Observation& obs, RandomSource&) override {
    if (obs.model == nullptr || std::holds_alternative<ScalarModel>(*obs.model)) {
      return absl::FailedPreconditionError(
          absl::StrCat(kind(), " needs an example-set or frequency model"));
    }
    PRIVGAMES_ASSIGN_OR_RETURN(const double y, Query(*obs.model, *obs.z));
    return BitGuess(y > 0.0 ? 0 : 1);
  }

 private:
  Example z0_, z1_, fill_;
};

class CanaryRanker : public Copyable<CanaryRanker> {
 public:
  std::string kind() const override { return "CANARY_RANKER"; }
  Access access() const override { return Access::kBlackBox; }
  bool Supports(GameVariant v) const override { return v == GameVariant::kRcTarg; }

  absl::StatusOr<GuessResult> Guess(const Observation& obs, RandomSource&) override {
    const CanaryFormat& fmt = *obs.game->canary;
    const uint64_t space = fmt.SpaceSize();
    if (space > kMaxCanaries) {
      return absl::FailedPreconditionError(absl::StrCat(
          kind(), " ranks at most ", kMaxCanaries, " canaries, space has ", space));
    }
    std::vector<std::pair<double, uint64_t>> scored;
    scored.reserve(space);
    for (uint64_t r = 0; r < space; ++r) {
      PRIVGAMES_ASSIGN_OR_RETURN(std::optional<double> y, obs.oracle->Query(fmt.Fill(r)));
      scored.emplace_back(y.value_or(kNegInf), r);
    }
    std::stable_sort(scored.begin(), scored.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });
    GuessResult out;
    out.ranking.reserve(space);
    for (const auto& [score, r] : scored) out.ranking.push_back(fmt.Fill(r));
    return out;
  }
};

class UntargetedExtractor : public Copyable<UntargetedExtractor> {
 public:
  std::string kind() const override { return "UNTARGETED_EXTRACTOR"; }
  Access access() const override { return Access::kBlackBox; }
  bool Supports(GameVariant v) const override { return v == GameVariant::kRcUntarg; }

  absl::StatusOr<GuessResult> Guess(const Observation& obs, RandomSource&) override {
    GuessResult out;
    for (const Example& x : obs.game->dist->support()) {
      PRIVGAMES_ASSIGN_OR_RETURN(std::optional<double> y, obs.oracle->Query(x));
      if (y && *y > 0.0) out.set.push_back(x);
    }
    return out;
  }
};

class ScalarThreshold : public Copyable<ScalarThreshold> {
 public:
  explicit ScalarThreshold(double t) : t_(t) {}
  std::string kind() const override { return absl::StrCat("SCALAR_THRESHOLD(", t_, ")"); }
  Access access() const override { return Access::kWhiteBox; }
  bool Supports(GameVariant v) const override {
    return v == GameVariant::kPi || v == GameVariant::kPiGen || v == GameVariant::kMiSubj ||
           v == GameVariant::kSmi;
  }
  absl::StatusOr<GuessResult> Guess(const Observation& obs, RandomSource&) override {
    PRIVGAMES_ASSIGN_OR_RETURN(const double theta, ScalarOf(obs, kind()));
    return BitGuess(theta >= t_ ? 1 : 0);
  }

 private:
  double t_;
};

// --- Wrappers ---

absl::StatusOr<int> InnerBit(Adversary& inner, const Observation& obs, RandomSource& rng) {
  PRIVGAMES_ASSIGN_OR_RETURN(GuessResult g, inner.Guess(obs, rng));
  if (!g.bit) {
    return absl::InvalidArgumentError(absl::StrCat("inner adversary ", inner.kind(),
                                                   " returned no bit"));
  }
  return *g.bit;
}

// Runs the reconstruction adversary on (theta, S) and compares its output's
// loss against z0 and z1.
absl::StatusOr<int> DecideByReconstruction(Adversary& inner, const GameDef& rc_game,
                                           const Observation& obs, LossKind loss,
                                           RandomSource& rng) {
  Observation inner_obs;
  inner_obs.game = &rc_game;
  inner_obs.trainer = obs.trainer;
  inner_obs.model = obs.model;
  inner_obs.known_S = obs.known_S;
  PRIVGAMES_ASSIGN_OR_RETURN(GuessResult g, inner.Guess(inner_obs, rng));
  const Example zhat = g.value.value_or(Example::Absent());
  return Loss(loss, *obs.z, zhat) < Loss(loss, *obs.z1, zhat) ? 0 : 1;
}

class SmiFromRc : public Adversary {
 public:
  SmiFromRc(AdversaryPtr inner, LossKind loss) : inner_(std::move(inner)), loss_(loss) {}
  std::string kind() const override { return absl::StrCat("SMI_FROM_RC[", inner_->kind(), "]"); }
  Access access() const override { return inner_->access(); }
  bool Supports(GameVariant v) const override { return v == GameVariant::kSmi; }
  AdversaryPtr Fresh() const override { return std::make_unique<SmiFromRc>(*this); }

  absl::StatusOr<GuessResult> Guess(const Observation& obs, RandomSource& rng) override {
    GameDef rc;
    rc.variant = GameVariant::kRcFixed;
    rc.n = obs.game->n;
    rc.fixed_S = *obs.known_S;
    rc.loss = loss_;
    if (*obs.z == *obs.z1) {
      rc.prior = DataDistribution::PointMass(*obs.z);
    } else {
      PRIVGAMES_ASSIGN_OR_RETURN(rc.prior, DataDistribution::Uniform({*obs.z, *obs.z1}));
    }
    PRIVGAMES_ASSIGN_OR_RETURN(const int bit,
                               DecideByReconstruction(*inner_, rc, obs, loss_, rng));
    return BitGuess(bit);
  }

 private:
  Inner inner_;
  LossKind loss_;
};

class DpdFromRc : public Adversary {
 public:
  DpdFromRc(AdversaryPtr inner, DataDistribution prior, Dataset S, LossKind loss, double eta)
      : inner_(std::move(inner)), loss_(loss), eta_(eta) {
    rc_.variant = GameVariant::kRcFixed;
    rc_.prior = std::move(prior);
    rc_.fixed_S = std::move(S);
    rc_.n = rc_.fixed_S->size() + 1;
    rc_.loss = loss;
    rc_.eta = eta;
  }
  std::string kind() const override { return absl::StrCat("DPD_FROM_RC[", inner_->kind(), "]"); }
  Access access() const override { return inner_->access(); }
  bool Supports(GameVariant v) const override { return v == GameVariant::kDpd; }
  AdversaryPtr Fresh() const override { return std::make_unique<DpdFromRc>(*this); }

  absl::StatusOr<ChooseResult> Choose(const ChooseContext&, RandomSource& rng) override {
    ChooseResult out;
    out.S = *rc_.fixed_S;
    out.z0 = SampleExample(*rc_.prior, rng);
    out.z1 = SampleExample(*rc_.prior, rng);
    return out;
  }

  absl::StatusOr<GuessResult> Guess(const Observation& obs, RandomSource& rng) override {
    if (Loss(loss_, *obs.z, *obs.z1) <= 2.0 * eta_) return BitGuess(rng.Bit(0.5));
    PRIVGAMES_ASSIGN_OR_RETURN(const int bit,
                               DecideByReconstruction(*inner_, rc_, obs, loss_, rng));
    return BitGuess(bit);
  }

 private:
  Inner inner_;
  GameDef rc_;
  LossKind loss_;
  double eta_;
};

GameDef MembershipGame(GameVariant variant, const DataDistribution& dist, size_t n) {
  GameDef g;
  g.variant = variant;
  g.dist = dist;
  g.n = n;
  return g;
}

class DpdFromMi : public Adversary {
 public:
  DpdFromMi(AdversaryPtr inner, DataDistribution dist)
      : inner_(std::move(inner)), dist_(std::move(dist)) {}
  std::string kind() const override { return absl::StrCat("DPD_FROM_MI[", inner_->kind(), "]"); }
  Access access() const override { return inner_->access(); }
  bool Supports(GameVariant v) const override { return v == GameVariant::kDpd; }
  AdversaryPtr Fresh() const override { return std::make_unique<DpdFromMi>(*this); }

  absl::StatusOr<ChooseResult> Choose(const ChooseContext& ctx, RandomSource& rng) override {
    ChooseResult out;
    out.S = SampleDataset(dist_, ctx.game->n - 1, rng);
    out.z0 = SampleExample(dist_, rng);
    out.z1 = SampleExample(dist_, rng);
    return out;
  }

  absl::StatusOr<GuessResult> Guess(const Observation& obs, RandomSource& rng) override {
    const GameDef mi = MembershipGame(GameVariant::kMi, dist_, obs.game->n);
    Observation inner_obs;
    inner_obs.game = &mi;
    inner_obs.trainer = obs.trainer;
    inner_obs.model = obs.model;
    inner_obs.z = obs.z;
    PRIVGAMES_ASSIGN_OR_RETURN(const int bit, InnerBit(*inner_, inner_obs, rng));
    return BitGuess(bit);
  }

 private:
  Inner inner_;
  DataDistribution dist_;
};

class RcFromMi : public Adversary {
 public:
  RcFromMi(AdversaryPtr inner, DataDistribution dist)
      : inner_(std::move(inner)), dist_(std::move(dist)) {}
  std::string kind() const override { return absl::StrCat("RC_FROM_MI[", inner_->kind(), "]"); }
  Access access() const override { return inner_->access(); }
  bool Supports(GameVariant v) const override {
    return v == GameVariant::kRcFixed || v == GameVariant::kRcRan ||
           v == GameVariant::kAiInformed;
  }
  AdversaryPtr Fresh() const override { return std::make_unique<RcFromMi>(*this); }

  absl::StatusOr<GuessResult> Guess(const Observation& obs, RandomSource& rng) override {
    const Example candidate = dist_.support()[rng.UniformIndex(dist_.size())];
    const GameDef mi = MembershipGame(GameVariant::kMi, dist_, obs.game->n);
    Observation inner_obs;
    inner_obs.game = &mi;
    inner_obs.trainer = obs.trainer;
    inner_obs.model = obs.model;
    inner_obs.z = candidate;
    PRIVGAMES_ASSIGN_OR_RETURN(const int bit, InnerBit(*inner_, inner_obs, rng));
    return ValueGuess(bit == 0 ? candidate : Example::Absent());
  }

 private:
  Inner inner_;
  DataDistribution dist_;
};

class MiFromAi : public Adversary {
 public:
  MiFromAi(AdversaryPtr inner, std::vector<size_t> phi, std::vector<size_t> pi_proj)
      : inner_(std::move(inner)), phi_(std::move(phi)), pi_(std::move(pi_proj)) {}
  std::string kind() const override { return absl::StrCat("MI_FROM_AI[", inner_->kind(), "]"); }
  Access access() const override { return inner_->access(); }
  bool Supports(GameVariant v) const override { return v == GameVariant::kMiSampled; }
  AdversaryPtr Fresh() const override { return std::make_unique<MiFromAi>(*this); }

  absl::StatusOr<GuessResult> Guess(const Observation& obs, RandomSource& rng) override {
    GameDef ai = MembershipGame(GameVariant::kAi, *obs.game->dist, obs.game->n);
    ai.phi = phi_;
    ai.pi_proj = pi_;
    Observation inner_obs;
    inner_obs.game = &ai;
    inner_obs.trainer = obs.trainer;
    inner_obs.model = obs.model;
    inner_obs.phi_view = Project(*obs.z, phi_);
    PRIVGAMES_ASSIGN_OR_RETURN(GuessResult g, inner_->Guess(inner_obs, rng));
    const Example ahat = g.value.value_or(Example::Absent());
    return BitGuess(SameProjection(ahat, *obs.z, pi_) ? 0 : 1);
  }

 private:
  Inner inner_;
  std::vector<size_t> phi_;
  std::vector<size_t> pi_;
};

class AiFromMi : public Adversary {
 public:
  AiFromMi(AdversaryPtr inner, AiFromMiScheme scheme)
      : inner_(std::move(inner)), scheme_(scheme) {}
  std::string kind() const override {
    return absl::StrCat("AI_FROM_MI[", inner_->kind(), "]",
                        scheme_ == AiFromMiScheme::kSample ? "" : "(enumerate)");
  }
  Access access() const override { return inner_->access(); }
  bool Supports(GameVariant v) const override {
    return v == GameVariant::kAi || v == GameVariant::kInv;
  }
  AdversaryPtr Fresh() const override { return std::make_unique<AiFromMi>(*this); }

  absl::StatusOr<GuessResult> Guess(const Observation& obs, RandomSource& rng) override {
    const GameDef& g = *obs.game;
    // One completion per distinct pi-value among support points that agree
    // with phi(z); the first such support point represents its value.
    std::vector<Example> candidates;
    absl::flat_hash_map<Example, size_t> seen;
    for (const Example& s : g.dist->support()) {
      if (Project(s, g.phi) != *obs.phi_view) continue;
      if (seen.emplace(Project(s, g.pi_proj), candidates.size()).second) {
        candidates.push_back(s);
      }
    }
    if (candidates.empty()) return ValueGuess(Example::Absent());
    const GameDef mi = MembershipGame(GameVariant::kMiSampled, *g.dist, g.n);
    auto accepts = [&](const Example& z) -> absl::StatusOr<bool> {
      Observation inner_obs;
      inner_obs.game = &mi;
      inner_obs.trainer = obs.trainer;
      inner_obs.model = obs.model;
      inner_obs.z = z;
      PRIVGAMES_ASSIGN_OR_RETURN(const int bit, InnerBit(*inner_, inner_obs, rng));
      return bit == 0;
    };
    if (scheme_ == AiFromMiScheme::kSample) {
      const Example& z = candidates[rng.UniformIndex(candidates.size())];
      PRIVGAMES_ASSIGN_OR_RETURN(const bool ok, accepts(z));
      return ValueGuess(ok ? z : Example::Absent());
    }
    std::vector<Example> accepted;
    for (const Example& z : candidates) {
      PRIVGAMES_ASSIGN_OR_RETURN(const bool ok, accepts(z));
      if (ok) accepted.push_back(z);
    }
    const std::vector<Example>& pool = accepted.empty() ? candidates : accepted;
    return ValueGuess(pool[rng.UniformIndex(pool.size())]);
  }

 private:
  Inner inner_;
  AiFromMiScheme scheme_;
};

class MmMiForward : public Adversary {
 public:
  MmMiForward(AdversaryPtr inner, GameDef mm) : inner_(std::move(inner)), mm_(std::move(mm)) {}
  std::string kind() const override { return absl::StrCat("MM_MI_FORWARD[", inner_->kind(), "]"); }
  Access access() const override { return inner_->access(); }
  bool Supports(GameVariant v) const override { return v == GameVariant::kMiSampled; }
  AdversaryPtr Fresh() const override { return std::make_unique<MmMiForward>(*this); }

  absl::StatusOr<GuessResult> Guess(const Observation& obs, RandomSource& rng) override {
    Observation inner_obs = obs;
    inner_obs.game = &mm_;
    PRIVGAMES_ASSIGN_OR_RETURN(const int bit, InnerBit(*inner_, inner_obs, rng));
    return BitGuess(bit);
  }

 private:
  Inner inner_;
  GameDef mm_;
};

class MmPiForward : public Adversary {
 public:
  MmPiForward(AdversaryPtr inner, GameDef mm) : inner_(std::move(inner)), mm_(std::move(mm)) {}
  std::string kind() const override { return absl::StrCat("MM_PI_FORWARD[", inner_->kind(), "]"); }
  Access access() const override { return inner_->access(); }
  bool Supports(GameVariant v) const override {
    return v == GameVariant::kPi || v == GameVariant::kPiGen;
  }
  AdversaryPtr Fresh() const override { return std::make_unique<MmPiForward>(*this); }

  absl::StatusOr<GuessResult> Guess(const Observation& obs, RandomSource& rng) override {
    Observation inner_obs = obs;
    inner_obs.game = &mm_;
    inner_obs.z = SampleExample(*obs.game->dist, rng);
    PRIVGAMES_ASSIGN_OR_RETURN(const int bit, InnerBit(*inner_, inner_obs, rng));
    return BitGuess(bit);
  }

 private:
  Inner inner_;
  GameDef mm_;
};

}  // namespace

AdversaryPtr MakeRandomAdversary() { return std::make_unique<RandomAdversary>(); }
AdversaryPtr MakeConstantAdversary(int bit) { return std::make_unique<ConstantAdversary>(bit); }
AdversaryPtr MakeBayesSumMi(std::optional<double> p) { return std::make_unique<BayesSumMi>(p); }
AdversaryPtr MakeDpdSumExact() { return std::make_unique<DpdSumExact>(); }
AdversaryPtr MakePiMean() { return std::make_unique<PiMean>(); }
AdversaryPtr MakeRcSumSubtract() { return std::make_unique<RcSumSubtract>(); }
AdversaryPtr MakeMiSetMember() { return std::make_unique<MiSetMember>(); }
AdversaryPtr MakeOracleMember() { return std::make_unique<OracleMember>(); }
AdversaryPtr MakeMiPointPrior(std::optional<Example> x0) {
  return std::make_unique<MiPointPrior>(std::move(x0));
}
AdversaryPtr MakeMmMeanThreshold() { return std::make_unique<MmMeanThreshold>(); }
AdversaryPtr MakePiLabelVote() { return std::make_unique<PiLabelVote>(); }
AdversaryPtr MakeAiSetLookup() { return std::make_unique<AiSetLookup>(); }
AdversaryPtr MakeDpdSetMember(Example z0, Example z1, Example fill) {
  return std::make_unique<DpdSetMember>(std::move(z0), std::move(z1), std::move(fill));
}
AdversaryPtr MakeCanaryRanker() { return std::make_unique<CanaryRanker>(); }
AdversaryPtr MakeUntargetedExtractor() { return std::make_unique<UntargetedExtractor>(); }
AdversaryPtr MakeScalarThreshold(double threshold) {
  return std::make_unique<ScalarThreshold>(threshold);
}

AdversaryPtr MakeSmiFromRc(AdversaryPtr inner, LossKind loss) {
  return std::make_unique<SmiFromRc>(std::move(inner), loss);
}
AdversaryPtr MakeDpdFromRc(AdversaryPtr inner, DataDistribution prior, Dataset S,
                           LossKind loss, double eta) {
  return std::make_unique<DpdFromRc>(std::move(inner), std::move(prior), std::move(S), loss,
                                     eta);
}
AdversaryPtr MakeDpdFromMi(AdversaryPtr inner, DataDistribution dist) {
  return std::make_unique<DpdFromMi>(std::move(inner), std::move(dist));
}
AdversaryPtr MakeRcFromMi(AdversaryPtr inner, DataDistribution dist) {
  return std::make_unique<RcFromMi>(std::move(inner), std::move(dist));
}
AdversaryPtr MakeMiFromAi(AdversaryPtr inner, std::vector<size_t> phi,
                          std::vector<size_t> pi_proj) {
  return std::make_unique<MiFromAi>(std::move(inner), std::move(phi), std::move(pi_proj));
}
AdversaryPtr MakeAiFromMi(AdversaryPtr inner, AiFromMiScheme scheme) {
  return std::make_unique<AiFromMi>(std::move(inner), scheme);
}
AdversaryPtr MakeMmMiForward(AdversaryPtr inner, GameDef mm_game) {
  return std::make_unique<MmMiForward>(std::move(inner), std::move(mm_game));
}
AdversaryPtr MakeMmPiForward(AdversaryPtr inner, GameDef mm_game) {
  return std::make_unique<MmPiForward>(std::move(inner), std::move(mm_game));
}

std::vector<AdversaryInfo> ListAdversaryKinds() {
  return {
      {"RANDOM", "uniform guess in any game", ""},
      {"CONSTANT", "always outputs the same bit", "bit"},
      {"BAYES_SUM_MI", "likelihood-ratio membership test on (noisy) sums", "p (optional)"},
      {"DPD_SUM_EXACT", "DPD on sums with z0=0, z1=1, S all zeros", ""},
      {"PI_MEAN", "property inference by nearest mean", ""},
      {"RC_SUM_SUBTRACT", "reconstruct z as theta - sum(S)", ""},
      {"MI_SET_MEMBER", "membership by lookup in the stored set", ""},
      {"ORACLE_MEMBER", "membership through oracle queries", ""},
      {"MI_POINT_PRIOR", "guess member iff the challenge equals x0", "x0 (optional)"},
      {"MM_MEAN_THRESHOLD", "mixture membership via the nearest component mean", ""},
      {"PI_LABEL_VOTE", "property inference by majority stored label", ""},
      {"AI_SET_LOOKUP", "attribute inference by matching stored items", ""},
      {"DPD_SET_MEMBER", "DPD by testing z0 in the stored set", "z0, z1, fill"},
      {"CANARY_RANKER", "rank every canary by oracle output", ""},
      {"UNTARGETED_EXTRACTOR", "return every support point the oracle reports", ""},
      {"SCALAR_THRESHOLD", "guess 1 iff the scalar model is >= t", "t"},
      {"SMI_FROM_RC", "SMI from a reconstruction adversary", "inner, loss"},
      {"DPD_FROM_RC", "DPD from a reconstruction adversary", "inner, prior, S, loss, eta"},
      {"DPD_FROM_MI", "DPD from an MI adversary", "inner, dist"},
      {"RC_FROM_MI", "reconstruction from an MI adversary", "inner, dist"},
      {"MI_FROM_AI", "MI from an attribute-inference adversary", "inner, phi, pi"},
      {"AI_FROM_MI", "attribute inference from an MI adversary", "inner, scheme"},
      {"MM_MI_FORWARD", "MI_i from a mixture adversary", "inner, meta"},
      {"MM_PI_FORWARD", "PI_{i,j} from a mixture adversary", "inner, meta"},
  };
}

}  // namespace privgames
