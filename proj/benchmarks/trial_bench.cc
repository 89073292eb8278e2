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


#include <cstdint>

#include "benchmark/benchmark.h"
#include "privgames/adversaries.h"
#include "privgames/experiments.h"
#include "privgames/games.h"
#include "privgames/metrics.h"
#include "privgames/params.h"
#include "privgames/pipeline.h"

namespace privgames {
namespace {

GameDef SumGame(GameVariant v, size_t n) {
  GameDef g;
  g.variant = v;
  g.n = n;
  g.dist = *DataDistribution::Bernoulli(0.5);
  return g;
}

// Cost of one Bayes-optimal membership trial as n grows.
void BM_BayesSumTrials(benchmark::State& state) {
  const GameDef g = SumGame(GameVariant::kMiInformed, static_cast<size_t>(state.range(0)));
  const Trainer t = *Trainer::Sum();
  const AdversaryPtr adv = MakeBayesSumMi();
  const RngStream master(1);
  for (auto _ : state) {
    auto batch = RunTrials(g, t, *adv, 1000, master, 1);
    benchmark::DoNotOptimize(batch);
  }
  state.SetItemsProcessed(state.iterations() * 1000);
}
BENCHMARK(BM_BayesSumTrials)->Arg(16)->Arg(64)->Arg(256);

void BM_NoisyDpdTrials(benchmark::State& state) {
  GameDef g;
  g.variant = GameVariant::kDpd;
  g.n = 64;
  const Trainer t = *Trainer::NoisySum(1.0, 1e-5);
  const AdversaryPtr adv = MakeDpdSumExact();
  const RngStream master(2);
  for (auto _ : state) {
    auto batch = RunTrials(g, t, *adv, 1000, master, static_cast<int>(state.range(0)));
    benchmark::DoNotOptimize(batch);
  }
  state.SetItemsProcessed(state.iterations() * 1000);
}
BENCHMARK(BM_NoisyDpdTrials)->Arg(1)->Arg(4)->UseRealTime();

// Full enumeration of a membership game with a memorizer.
void BM_EnumerateMembership(benchmark::State& state) {
  GameDef g;
  g.variant = GameVariant::kMi;
  g.n = static_cast<size_t>(state.range(0));
  g.dist = *DataDistribution::UniformRange(4);
  const AdversaryPtr adv = MakeMiSetMember();
  for (auto _ : state) {
    auto out = EnumerateOutcome(g, Trainer::Memorizer(), *adv);
    benchmark::DoNotOptimize(out);
  }
}
BENCHMARK(BM_EnumerateMembership)->Arg(2)->Arg(4)->Arg(6);

void BM_CaseStudyExperiment(benchmark::State& state) {
  RunOptions o;
  o.trials = static_cast<uint64_t>(state.range(0));
  for (auto _ : state) {
    auto r = RunExperiment("CASE_STUDY_MM", Params(), o);
    benchmark::DoNotOptimize(r);
  }
}
BENCHMARK(BM_CaseStudyExperiment)->Arg(2000)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace privgames

BENCHMARK_MAIN();
