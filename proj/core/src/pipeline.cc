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

#include "privgames/pipeline.h"

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_join.h"

namespace privgames {

absl::string_view TrainerKindName(TrainerKind kind) {
  switch (kind) {
    case TrainerKind::kSum: return "SUM";
    case TrainerKind::kNoisySum: return "NOISY_SUM";
    case TrainerKind::kMemorizer: return "MEMORIZER";
    case TrainerKind::kFeatureProjector: return "FEATURE_PROJECTOR";
    case TrainerKind::kCountModel: return "COUNT_MODEL";
    case TrainerKind::kConstant: return "CONSTANT";
  }
  return "?";
}

absl::StatusOr<TrainerKind> ParseTrainerKind(absl::string_view name) {
  for (TrainerKind k : {TrainerKind::kSum, TrainerKind::kNoisySum,
                        TrainerKind::kMemorizer, TrainerKind::kFeatureProjector,
                        TrainerKind::kCountModel, TrainerKind::kConstant}) {
    if (TrainerKindName(k) == name) return k;
  }
  return absl::InvalidArgumentError(absl::StrCat("unknown trainer kind '", name, "'"));
}

absl::StatusOr<Sigma2Convention> ParseSigma2Convention(absl::string_view name) {
  if (name == "standard") return Sigma2Convention::kStandard;
  if (name == "paper_text") return Sigma2Convention::kPaperText;
  return absl::InvalidArgumentError(
      absl::StrCat("sigma2_convention must be standard or paper_text, got '", name, "'"));
}

absl::string_view Sigma2ConventionName(Sigma2Convention c) {
  return c == Sigma2Convention::kStandard ? "standard" : "paper_text";
}

double GaussianSigma2(double epsilon, double delta, Sigma2Convention convention) {
  const double numerator = 2.0 * std::log(1.25 / delta);
  return convention == Sigma2Convention::kStandard ? numerator / (epsilon * epsilon)
                                                   : numerator / epsilon;
}

bool ExampleSetModel::Contains(const Example& x) const {
  return items.contains(attrs_only ? x.WithoutLabel() : x);
}

absl::StatusOr<double> Query(const Model& model, const Example& x) {
  if (const auto* s = std::get_if<ScalarModel>(&model)) return s->value;
  if (const auto* set = std::get_if<ExampleSetModel>(&model)) {
    return set->Contains(x) ? 1.0 : 0.0;
  }
  const auto& table = std::get<FrequencyTableModel>(model);
  if (table.total == 0) {
    return absl::FailedPreconditionError("degenerate model: frequency table is empty");
  }
  auto it = table.counts.find(x);
  const int64_t count = it == table.counts.end() ? 0 : it->second;
  return static_cast<double>(count) / static_cast<double>(table.total);
}

std::string Fingerprint(const Model& model) {
  if (const auto* s = std::get_if<ScalarModel>(&model)) {
    return absl::StrFormat("scalar:%.17g", s->value);
  }
  if (const auto* set = std::get_if<ExampleSetModel>(&model)) {
    std::vector<Example> items(set->items.begin(), set->items.end());
    std::sort(items.begin(), items.end());
    return absl::StrCat("set:", absl::StrJoin(items, ";", [](std::string* out, const Example& e) {
                          out->append(e.ToString());
                        }));
  }
  const auto& table = std::get<FrequencyTableModel>(model);
  std::vector<std::pair<Example, int64_t>> entries(table.counts.begin(), table.counts.end());
  std::sort(entries.begin(), entries.end());
  std::string out = absl::StrCat("table:", table.total);
  for (const auto& [e, c] : entries) absl::StrAppend(&out, ";", e.ToString(), "=", c);
  return out;
}

absl::StatusOr<Trainer> Trainer::Sum(size_t attr_index) {
  Trainer t(TrainerKind::kSum);
  t.attr_index_ = attr_index;
  return t;
}

absl::StatusOr<Trainer> Trainer::NoisySum(double epsilon, double delta,
                                          size_t attr_index,
                                          Sigma2Convention convention) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    return absl::InvalidArgumentError(absl::StrCat("epsilon must be > 0, got ", epsilon));
  }
  if (!(delta > 0.0 && delta < 1.0)) {
    return absl::InvalidArgumentError(absl::StrCat("delta must lie in (0,1), got ", delta));
  }
  Trainer t(TrainerKind::kNoisySum);
  t.attr_index_ = attr_index;
  t.epsilon_ = epsilon;
  t.delta_ = delta;
  t.convention_ = convention;
  t.sigma2_ = GaussianSigma2(epsilon, delta, convention);
  return t;
}

std::string Trainer::Describe() const {
  switch (kind_) {
    case TrainerKind::kSum:
      return absl::StrCat("SUM(attr=", attr_index_, ")");
    case TrainerKind::kNoisySum:
      return absl::StrFormat("NOISY_SUM(attr=%d, epsilon=%g, delta=%g, sigma2=%.6g, %s)",
                             attr_index_, epsilon_, delta_, sigma2_,
                             Sigma2ConventionName(convention_));
    default:
      return std::string(TrainerKindName(kind_));
  }
}

absl::StatusOr<Model> Trainer::Train(const Dataset& data, RandomSource& rng) const {
  switch (kind_) {
    case TrainerKind::kSum:
    case TrainerKind::kNoisySum: {
      double sum = 0.0;
      for (const Example& z : data) {
        if (z.absent() || attr_index_ >= z.arity()) {
          return absl::InvalidArgumentError(absl::StrCat(
              TrainerKindName(kind_), " aggregates attribute ", attr_index_,
              " but example ", z.ToString(), " has arity ", z.arity()));
        }
        sum += z.attr(attr_index_);
      }
      if (kind_ == TrainerKind::kNoisySum) {
        if (rng.enumerating()) {
          return absl::FailedPreconditionError(
              "non-enumerable component: NOISY_SUM gaussian noise is continuous");
        }
        absl::StatusOr<double> noise = rng.Gaussian(sigma2_);
        if (!noise.ok()) return noise.status();
        sum += *noise;
      }
      return ScalarModel{sum};
    }
    case TrainerKind::kMemorizer:
    case TrainerKind::kFeatureProjector: {
      ExampleSetModel set;
      set.attrs_only = kind_ == TrainerKind::kFeatureProjector;
      for (const Example& z : data) {
        if (z.absent()) continue;
        set.items.insert(set.attrs_only ? z.WithoutLabel() : z);
      }
      return set;
    }
    case TrainerKind::kCountModel: {
      FrequencyTableModel table;
      for (const Example& z : data) {
        if (z.absent()) continue;
        ++table.counts[z];
        ++table.total;
      }
      return table;
    }
    case TrainerKind::kConstant:
      return ScalarModel{0.0};
  }
  return absl::InternalError("unhandled trainer kind");
}

absl::StatusOr<std::optional<double>> Oracle::Query(const Example& x) {
  ++used_;
  if (budget_.has_value() && used_ > *budget_) return std::optional<double>();
  absl::StatusOr<double> y = privgames::Query(model_, x);
  if (!y.ok()) return y.status();
  return std::optional<double>(*y);
}

}  // namespace privgames
