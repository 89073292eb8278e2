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

// Toy training pipelines and the black-box oracle through which some games
// expose the trained model.

#ifndef PRIVGAMES_PIPELINE_H_
#define PRIVGAMES_PIPELINE_H_

#include <cstdint>
#include <optional>
#include <string>
#include <variant>

#include "absl/container/flat_hash_map.h"
#include "absl/container/flat_hash_set.h"
#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "privgames/prob.h"

namespace privgames {

enum class TrainerKind {
  kSum,
  kNoisySum,
  kMemorizer,
  kFeatureProjector,
  kCountModel,
  // Ignores its input and always emits Scalar(0).
  kConstant,
};

absl::string_view TrainerKindName(TrainerKind kind);
absl::StatusOr<TrainerKind> ParseTrainerKind(absl::string_view name);

// How NOISY_SUM derives its noise variance from (epsilon, delta).
enum class Sigma2Convention {
  // 2 ln(1.25/delta) / epsilon^2, the Gaussian-mechanism calibration.
  kStandard,
  // 2 ln(1.25/delta) / epsilon.
  kPaperText,
};

absl::StatusOr<Sigma2Convention> ParseSigma2Convention(absl::string_view name);
absl::string_view Sigma2ConventionName(Sigma2Convention c);
double GaussianSigma2(double epsilon, double delta, Sigma2Convention convention);

struct ScalarModel {
  double value = 0.0;
};

struct ExampleSetModel {
  absl::flat_hash_set<Example> items;
  // Items carry attributes only; queries drop the label before lookup.
  bool attrs_only = false;

  bool Contains(const Example& x) const;
};

struct FrequencyTableModel {
  absl::flat_hash_map<Example, int64_t> counts;
  int64_t total = 0;
};

using Model = std::variant<ScalarModel, ExampleSetModel, FrequencyTableModel>;

// Scalar: its value. ExampleSet: 1 if x is a member, else 0.
// FrequencyTable: count(x) / total; fails when total is 0.
absl::StatusOr<double> Query(const Model& model, const Example& x);

// Canonical text form; equal models have equal fingerprints.
std::string Fingerprint(const Model& model);

class Trainer {
 public:
  static absl::StatusOr<Trainer> Sum(size_t attr_index = 0);
  static absl::StatusOr<Trainer> NoisySum(
      double epsilon, double delta, size_t attr_index = 0,
      Sigma2Convention convention = Sigma2Convention::kStandard);
  static Trainer Memorizer() { return Trainer(TrainerKind::kMemorizer); }
  static Trainer FeatureProjector() { return Trainer(TrainerKind::kFeatureProjector); }
  static Trainer CountModel() { return Trainer(TrainerKind::kCountModel); }
  static Trainer Constant() { return Trainer(TrainerKind::kConstant); }

  TrainerKind kind() const { return kind_; }
  size_t attr_index() const { return attr_index_; }
  double epsilon() const { return epsilon_; }
  double delta() const { return delta_; }
  double sigma2() const { return sigma2_; }
  Sigma2Convention convention() const { return convention_; }
  std::string Describe() const;

  // Fails with InvalidArgument when an item lacks the aggregated attribute,
  // and with FailedPrecondition when NOISY_SUM runs under enumeration.
  absl::StatusOr<Model> Train(const Dataset& data, RandomSource& rng) const;

 private:
  explicit Trainer(TrainerKind kind) : kind_(kind) {}

  TrainerKind kind_;
  size_t attr_index_ = 0;
  double epsilon_ = 0.0;
  double delta_ = 0.0;
  double sigma2_ = 0.0;
  Sigma2Convention convention_ = Sigma2Convention::kStandard;
};

// Query access to a model with an optional budget N. The q-th query is
// answered while q <= N; later queries return nullopt (⊥).
class Oracle {
 public:
  explicit Oracle(Model model, std::optional<int64_t> budget = std::nullopt,
                  bool post_process = false)
      : model_(std::move(model)), budget_(budget), post_process_(post_process) {}

  absl::StatusOr<std::optional<double>> Query(const Example& x);

  int64_t used() const { return used_; }
  std::optional<int64_t> budget() const { return budget_; }
  // Label-only post-processing is recorded but is the identity for every
  // model kind here, whose outputs are already label-like.
  bool post_process() const { return post_process_; }

 private:
  Model model_;
  std::optional<int64_t> budget_;
  bool post_process_;
  int64_t used_ = 0;
};

}  // namespace privgames

#endif  // PRIVGAMES_PIPELINE_H_
