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

#include "privgames/prob.h"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "absl/container/flat_hash_set.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"

namespace privgames {
namespace {

constexpr double kSumTolerance = 1e-12;

// SplitMix64 finalizer.
uint64_t Mix(uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

uint64_t HashLabel(absl::string_view label) {
  uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
  for (unsigned char c : label) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::vector<double> Cumulative(std::span<const double> probs) {
  std::vector<double> out(probs.size());
  double acc = 0.0;
  for (size_t i = 0; i < probs.size(); ++i) {
    acc += probs[i];
    out[i] = acc;
  }
  return out;
}

absl::Status CheckProbabilities(std::span<const double> probs) {
  if (probs.empty()) return absl::InvalidArgumentError("empty support");
  double sum = 0.0;
  for (double p : probs) {
    if (!std::isfinite(p) || p < 0.0) {
      return absl::InvalidArgumentError(
          absl::StrCat("probability ", p, " is not a non-negative real"));
    }
    sum += p;
  }
  if (std::abs(sum - 1.0) > kSumTolerance) {
    return absl::InvalidArgumentError(
        absl::StrCat("probabilities sum to ", sum, ", not 1"));
  }
  return absl::OkStatus();
}

size_t LastPositive(std::span<const double> probs) {
  for (size_t i = probs.size(); i-- > 0;) {
    if (probs[i] > 0.0) return i;
  }
  return 0;
}

}  // namespace

// --- Example -----------------------------------------------------------------

Example Example::Absent() {
  Example e;
  e.absent_ = true;
  return e;
}

Example Example::WithoutLabel() const {
  Example e = *this;
  e.label_.reset();
  return e;
}

Example Example::WithLabel(AttrValue label) const {
  Example e = *this;
  e.label_ = label;
  return e;
}

Example Example::WithAttr(size_t i, AttrValue v) const {
  Example e = *this;
  e.attrs_[i] = v;
  return e;
}

std::string Example::ToString() const {
  if (absent_) return "bot";
  std::string out = attrs_.size() == 1
                        ? absl::StrCat(attrs_[0])
                        : absl::StrCat("(", absl::StrJoin(attrs_, ","), ")");
  if (label_) absl::StrAppend(&out, "|", *label_);
  return out;
}

bool operator<(const Example& a, const Example& b) {
  if (a.absent_ != b.absent_) return a.absent_ < b.absent_;
  if (a.attrs_ != b.attrs_) {
    return std::lexicographical_compare(a.attrs_.begin(), a.attrs_.end(),
                                        b.attrs_.begin(), b.attrs_.end());
  }
  return a.label_ < b.label_;
}

Example Project(const Example& z, std::span<const size_t> indices) {
  Example::Attrs attrs;
  attrs.reserve(indices.size());
  for (size_t i : indices) attrs.push_back(z.attr(i));
  return Example(std::move(attrs));
}

// --- Schema ------------------------------------------------------------------

bool Schema::Admits(const Example& z) const {
  if (z.absent() || z.arity() != cardinalities.size()) return false;
  for (size_t i = 0; i < z.arity(); ++i) {
    if (z.attr(i) < 0 || z.attr(i) >= cardinalities[i]) return false;
  }
  if (label_cardinality.has_value() != z.label().has_value()) return false;
  return !z.label() || (*z.label() >= 0 && *z.label() < *label_cardinality);
}

Schema Schema::Infer(std::span<const Example> support) {
  Schema s;
  if (support.empty()) return s;
  s.cardinalities.assign(support.front().arity(), 1);
  for (const Example& z : support) {
    for (size_t i = 0; i < std::min(z.arity(), s.cardinalities.size()); ++i) {
      s.cardinalities[i] = std::max(s.cardinalities[i], z.attr(i) + 1);
    }
    if (z.label()) {
      s.label_cardinality = std::max(s.label_cardinality.value_or(1), *z.label() + 1);
    }
  }
  return s;
}

// --- DataDistribution --------------------------------------------------------

DataDistribution::DataDistribution(Schema schema, std::vector<Example> support,
                                   std::vector<double> probs)
    : schema_(std::move(schema)),
      support_(std::move(support)),
      probs_(std::move(probs)),
      cumulative_(Cumulative(probs_)) {}

absl::StatusOr<DataDistribution> DataDistribution::Create(
    Schema schema, std::vector<Example> support, std::vector<double> probs) {
  if (support.size() != probs.size()) {
    return absl::InvalidArgumentError("support and probs differ in length");
  }
  if (absl::Status s = CheckProbabilities(probs); !s.ok()) return s;
  absl::flat_hash_set<Example> seen;
  for (const Example& z : support) {
    if (!schema.Admits(z)) {
      return absl::InvalidArgumentError(
          absl::StrCat("example ", z.ToString(), " violates the schema"));
    }
    if (!seen.insert(z).second) {
      return absl::InvalidArgumentError(
          absl::StrCat("duplicate support entry ", z.ToString()));
    }
  }
  return DataDistribution(std::move(schema), std::move(support), std::move(probs));
}

absl::StatusOr<DataDistribution> DataDistribution::Create(
    std::vector<Example> support, std::vector<double> probs) {
  Schema schema = Schema::Infer(support);
  return Create(std::move(schema), std::move(support), std::move(probs));
}

DataDistribution DataDistribution::PointMass(Example z) {
  Schema schema = Schema::Infer(std::span<const Example>(&z, 1));
  return DataDistribution(std::move(schema), {std::move(z)}, {1.0});
}

absl::StatusOr<DataDistribution> DataDistribution::Bernoulli(double p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    return absl::InvalidArgumentError(absl::StrCat("bernoulli p=", p, " outside [0,1]"));
  }
  return Create(Schema{{2}, std::nullopt}, {Example::Scalar(0), Example::Scalar(1)},
                {1.0 - p, p});
}

absl::StatusOr<DataDistribution> DataDistribution::UniformRange(AttrValue k) {
  if (k < 1) return absl::InvalidArgumentError("uniform range needs k >= 1");
  std::vector<Example> support;
  for (AttrValue v = 0; v < k; ++v) support.push_back(Example::Scalar(v));
  return Create(Schema{{k}, std::nullopt}, std::move(support),
                std::vector<double>(static_cast<size_t>(k), 1.0 / k));
}

absl::StatusOr<DataDistribution> DataDistribution::Uniform(std::vector<Example> support) {
  const size_t k = support.size();
  if (k == 0) return absl::InvalidArgumentError("empty support");
  return Create(std::move(support), std::vector<double>(k, 1.0 / static_cast<double>(k)));
}

absl::StatusOr<DataDistribution> DataDistribution::Product(
    std::span<const DataDistribution> factors) {
  if (factors.empty()) return absl::InvalidArgumentError("empty product");
  Schema schema;
  std::vector<Example> support = {Example()};
  std::vector<double> probs = {1.0};
  for (const DataDistribution& f : factors) {
    schema.cardinalities.insert(schema.cardinalities.end(),
                                f.schema().cardinalities.begin(),
                                f.schema().cardinalities.end());
    std::vector<Example> next_support;
    std::vector<double> next_probs;
    for (size_t i = 0; i < support.size(); ++i) {
      for (size_t j = 0; j < f.size(); ++j) {
        Example::Attrs attrs(support[i].attrs().begin(), support[i].attrs().end());
        attrs.insert(attrs.end(), f.support()[j].attrs().begin(),
                     f.support()[j].attrs().end());
        next_support.emplace_back(std::move(attrs));
        next_probs.push_back(probs[i] * f.probs()[j]);
      }
    }
    support = std::move(next_support);
    probs = std::move(next_probs);
  }
  // Renormalize the accumulated rounding so the sum check is exact enough.
  double sum = 0.0;
  for (double p : probs) sum += p;
  for (double& p : probs) p /= sum;
  return Create(std::move(schema), std::move(support), std::move(probs));
}

double DataDistribution::Mass(const Example& z) const {
  std::optional<size_t> i = IndexOf(z);
  return i ? probs_[*i] : 0.0;
}

std::optional<size_t> DataDistribution::IndexOf(const Example& z) const {
  for (size_t i = 0; i < support_.size(); ++i) {
    if (support_[i] == z) return i;
  }
  return std::nullopt;
}

DataDistribution DataDistribution::Labeled(AttrValue y,
                                           AttrValue label_cardinality) const {
  Schema schema = schema_;
  schema.label_cardinality = label_cardinality;
  std::vector<Example> support;
  support.reserve(support_.size());
  for (const Example& z : support_) support.push_back(z.WithLabel(y));
  return DataDistribution(std::move(schema), std::move(support), probs_);
}

double DataDistribution::Mean(size_t attr) const {
  double m = 0.0;
  for (size_t i = 0; i < support_.size(); ++i) m += probs_[i] * support_[i].attr(attr);
  return m;
}

// --- MetaDistribution --------------------------------------------------------

MetaDistribution::MetaDistribution(std::vector<DataDistribution> support,
                                   std::vector<double> probs)
    : support_(std::move(support)),
      probs_(std::move(probs)),
      cumulative_(Cumulative(probs_)) {}

absl::StatusOr<MetaDistribution> MetaDistribution::Create(
    std::vector<DataDistribution> support, std::vector<double> probs) {
  if (support.size() != probs.size()) {
    return absl::InvalidArgumentError("support and probs differ in length");
  }
  if (absl::Status s = CheckProbabilities(probs); !s.ok()) return s;
  for (size_t i = 1; i < support.size(); ++i) {
    if (support[i].schema() != support[0].schema()) {
      return absl::InvalidArgumentError("meta-distribution components differ in schema");
    }
  }
  return MetaDistribution(std::move(support), std::move(probs));
}

absl::StatusOr<MetaDistribution> MetaDistribution::Uniform(
    std::vector<DataDistribution> support) {
  const size_t k = support.size();
  if (k == 0) return absl::InvalidArgumentError("empty meta-distribution");
  return Create(std::move(support), std::vector<double>(k, 1.0 / static_cast<double>(k)));
}

bool MetaDistribution::IsUniform() const {
  for (double p : probs_) {
    if (std::abs(p - probs_.front()) > kSumTolerance) return false;
  }
  return true;
}

// --- RngStream ---------------------------------------------------------------

RngStream::RngStream(uint64_t master_seed)
    : master_seed_(master_seed), key_(Mix(master_seed ^ 0x5851f42d4c957f2dULL)) {}

RngStream RngStream::Derive(absl::string_view label, uint64_t index) const {
  RngStream child(*this);
  child.key_ = Mix(Mix(key_ ^ HashLabel(label)) + index);
  child.counter_ = 0;
  child.path_.push_back({std::string(label), index});
  return child;
}

uint64_t RngStream::NextU64() { return Mix(key_ + Mix(counter_++)); }

double RngStream::NextUniform() {
  return static_cast<double>(NextU64() >> 11) * 0x1.0p-53;
}

RngStream DeriveSubstream(const RngStream& rng, absl::string_view label,
                          uint64_t index) {
  return rng.Derive(label, index);
}

// --- RandomSource ------------------------------------------------------------

RandomSource RandomSource::Derive(absl::string_view label, uint64_t index) const {
  if (enumerator_ != nullptr) return RandomSource(enumerator_);
  return RandomSource(stream_.Derive(label, index));
}

size_t RandomSource::Choose(std::span<const double> probs,
                            std::span<const double> cumulative) {
  if (enumerator_ != nullptr) return enumerator_->Take(probs);
  const double u = stream_.NextUniform();
  auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
  if (it == cumulative.end()) return LastPositive(probs);
  return static_cast<size_t>(it - cumulative.begin());
}

size_t RandomSource::Choose(std::span<const double> probs) {
  if (enumerator_ != nullptr) return enumerator_->Take(probs);
  const std::vector<double> cumulative = Cumulative(probs);
  return Choose(probs, cumulative);
}

size_t RandomSource::UniformIndex(size_t n) {
  if (enumerator_ != nullptr) {
    const std::vector<double> probs(n, 1.0 / static_cast<double>(n));
    return enumerator_->Take(probs);
  }
  const size_t i = static_cast<size_t>(stream_.NextUniform() * static_cast<double>(n));
  return std::min(i, n - 1);
}

int RandomSource::Bit(double p) {
  if (enumerator_ != nullptr) {
    const double probs[2] = {p, 1.0 - p};
    return static_cast<int>(enumerator_->Take(probs));
  }
  return stream_.NextUniform() < p ? 0 : 1;
}

absl::StatusOr<double> RandomSource::Gaussian(double variance) {
  if (enumerator_ != nullptr) {
    return absl::FailedPreconditionError(
        "non-enumerable component: continuous gaussian draw");
  }
  const double u1 = 1.0 - stream_.NextUniform();  // (0, 1]
  const double u2 = stream_.NextUniform();
  return std::sqrt(variance) * std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

// --- Enumerator --------------------------------------------------------------

size_t Enumerator::Take(std::span<const double> probs) {
  if (depth_ < trace_.size()) {
    const Branch& b = trace_[depth_++];
    weight_ *= b.probs[b.choice];
    return b.choice;
  }
  Branch b;
  b.probs.assign(probs.begin(), probs.end());
  b.choice = 0;
  while (b.choice + 1 < b.probs.size() && !(b.probs[b.choice] > 0.0)) ++b.choice;
  weight_ *= b.probs[b.choice];
  trace_.push_back(std::move(b));
  ++depth_;
  return trace_.back().choice;
}

bool Enumerator::Advance() {
  while (!trace_.empty()) {
    Branch& b = trace_.back();
    for (size_t j = b.choice + 1; j < b.probs.size(); ++j) {
      if (b.probs[j] > 0.0) {
        b.choice = j;
        return true;
      }
    }
    trace_.pop_back();
  }
  return false;
}

// --- Sampling ----------------------------------------------------------------

Example SampleExample(const DataDistribution& dist, RandomSource& rng) {
  return dist.support()[rng.Choose(dist.probs(), dist.cumulative())];
}

Dataset SampleDataset(const DataDistribution& dist, size_t n, RandomSource& rng) {
  Dataset out;
  out.reserve(n);
  for (size_t i = 0; i < n; ++i) out.push_back(SampleExample(dist, rng));
  return out;
}

absl::StatusOr<int> SampleBit(double p, RandomSource& rng) {
  if (!(p >= 0.0 && p <= 1.0)) {
    return absl::InvalidArgumentError(absl::StrCat("bit probability ", p, " outside [0,1]"));
  }
  return rng.Bit(p);
}

}  // namespace privgames
