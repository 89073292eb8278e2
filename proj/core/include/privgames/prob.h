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

// Discrete data model shared by every game: examples, finite distributions
// over them, datasets, and the deterministic randomness that drives trials.

#ifndef PRIVGAMES_PROB_H_
#define PRIVGAMES_PROB_H_

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "absl/container/inlined_vector.h"
#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"

namespace privgames {

using AttrValue = int32_t;

// A record with a fixed-length vector of small non-negative attributes and an
// optional label. The distinguished absent value (written ⊥) stands for "no
// example": it is never a member of any dataset and never equals a real
// example.
class Example {
 public:
  using Attrs = absl::InlinedVector<AttrValue, 4>;

  Example() = default;
  explicit Example(Attrs attrs, std::optional<AttrValue> label = std::nullopt)
      : attrs_(std::move(attrs)), label_(label) {}
  Example(std::initializer_list<AttrValue> attrs,
          std::optional<AttrValue> label = std::nullopt)
      : attrs_(attrs), label_(label) {}

  static Example Absent();
  static Example Scalar(AttrValue v) { return Example({v}); }

  bool absent() const { return absent_; }
  size_t arity() const { return attrs_.size(); }
  AttrValue attr(size_t i) const { return attrs_[i]; }
  std::span<const AttrValue> attrs() const { return {attrs_.data(), attrs_.size()}; }
  const std::optional<AttrValue>& label() const { return label_; }

  Example WithoutLabel() const;
  Example WithLabel(AttrValue label) const;
  Example WithAttr(size_t i, AttrValue v) const;

  // "(a,b,...)" with an optional "|label" suffix; "bot" for ⊥.
  std::string ToString() const;

  friend bool operator==(const Example& a, const Example& b) {
    return a.absent_ == b.absent_ && a.attrs_ == b.attrs_ && a.label_ == b.label_;
  }
  friend bool operator<(const Example& a, const Example& b);

  template <typename H>
  friend H AbslHashValue(H h, const Example& e) {
    return H::combine(std::move(h), e.absent_, e.attrs_, e.label_);
  }

 private:
  Attrs attrs_;
  std::optional<AttrValue> label_;
  bool absent_ = false;
};

// Ordered multiset of examples; duplicates are kept.
using Dataset = std::vector<Example>;

// Per-attribute cardinalities; attribute i takes values in
// [0, cardinalities[i]). A schema with a label cardinality requires labels.
struct Schema {
  std::vector<AttrValue> cardinalities;
  std::optional<AttrValue> label_cardinality;

  size_t arity() const { return cardinalities.size(); }
  bool Admits(const Example& z) const;

  // Smallest schema admitting every example in `support`.
  static Schema Infer(std::span<const Example> support);

  friend bool operator==(const Schema&, const Schema&) = default;
};

// A finite distribution over distinct examples.
class DataDistribution {
 public:
  // Probabilities must be non-negative and sum to 1 within 1e-12; support
  // entries must be distinct and admitted by the schema.
  static absl::StatusOr<DataDistribution> Create(Schema schema,
                                                 std::vector<Example> support,
                                                 std::vector<double> probs);
  static absl::StatusOr<DataDistribution> Create(std::vector<Example> support,
                                                 std::vector<double> probs);

  static DataDistribution PointMass(Example z);
  // Over single-attribute examples {0, 1}; mass p on 1.
  static absl::StatusOr<DataDistribution> Bernoulli(double p);
  // Uniform over single-attribute examples {0, ..., k-1}.
  static absl::StatusOr<DataDistribution> UniformRange(AttrValue k);
  static absl::StatusOr<DataDistribution> Uniform(std::vector<Example> support);
  // Independent product; attributes are concatenated, labels dropped.
  static absl::StatusOr<DataDistribution> Product(
      std::span<const DataDistribution> factors);

  const Schema& schema() const { return schema_; }
  std::span<const Example> support() const { return support_; }
  std::span<const double> probs() const { return probs_; }
  std::span<const double> cumulative() const { return cumulative_; }
  size_t size() const { return support_.size(); }

  // Probability mass at z; 0 outside the support.
  double Mass(const Example& z) const;
  std::optional<size_t> IndexOf(const Example& z) const;
  // Every support point with label y attached (schema gains a label).
  DataDistribution Labeled(AttrValue y, AttrValue label_cardinality) const;
  double Mean(size_t attr) const;

 private:
  DataDistribution(Schema schema, std::vector<Example> support,
                   std::vector<double> probs);

  Schema schema_;
  std::vector<Example> support_;
  std::vector<double> probs_;
  std::vector<double> cumulative_;
};

// A finite distribution over data distributions.
class MetaDistribution {
 public:
  static absl::StatusOr<MetaDistribution> Create(
      std::vector<DataDistribution> support, std::vector<double> probs);
  static absl::StatusOr<MetaDistribution> Uniform(
      std::vector<DataDistribution> support);

  std::span<const DataDistribution> support() const { return support_; }
  std::span<const double> probs() const { return probs_; }
  std::span<const double> cumulative() const { return cumulative_; }
  size_t size() const { return support_.size(); }
  bool IsUniform() const;

 private:
  MetaDistribution(std::vector<DataDistribution> support,
                   std::vector<double> probs);

  std::vector<DataDistribution> support_;
  std::vector<double> probs_;
  std::vector<double> cumulative_;
};

struct RngPathEntry {
  std::string label;
  uint64_t index = 0;
  friend bool operator==(const RngPathEntry&, const RngPathEntry&) = default;
};
using RngPath = std::vector<RngPathEntry>;

// Counter-based splittable stream. The key is a hash of (master_seed, path);
// output i is a mix of (key, i). Streams with equal (master_seed, path) emit
// identical sequences regardless of which thread consumes them.
class RngStream {
 public:
  explicit RngStream(uint64_t master_seed);

  RngStream Derive(absl::string_view label, uint64_t index) const;

  uint64_t NextU64();
  // Uniform on [0, 1) with 53 bits of precision.
  double NextUniform();

  uint64_t master_seed() const { return master_seed_; }
  const RngPath& path() const { return path_; }

 private:
  uint64_t master_seed_;
  uint64_t key_;
  uint64_t counter_ = 0;
  RngPath path_;
};

class Enumerator;

// The randomness seen by games, trainers and adversaries. Backed either by an
// RngStream (Monte Carlo) or by an Enumerator, in which case every discrete
// draw becomes a branch point of the exact probability tree and the same
// game code is replayed once per atom.
class RandomSource {
 public:
  explicit RandomSource(RngStream stream) : stream_(std::move(stream)) {}
  explicit RandomSource(Enumerator* enumerator)
      : stream_(0), enumerator_(enumerator) {}

  RandomSource Derive(absl::string_view label, uint64_t index) const;

  // Index i with probability probs[i]; `cumulative` holds the running sums.
  size_t Choose(std::span<const double> probs, std::span<const double> cumulative);
  size_t Choose(std::span<const double> probs);
  size_t UniformIndex(size_t n);
  // 0 with probability p, 1 otherwise. p must lie in [0, 1].
  int Bit(double p);

  // Draw from N(0, variance) by Box-Muller. Fails when enumerating.
  absl::StatusOr<double> Gaussian(double variance);

  bool enumerating() const { return enumerator_ != nullptr; }
  // Meaningful only for stream-backed sources.
  const RngStream& stream() const { return stream_; }

 private:
  RngStream stream_;
  Enumerator* enumerator_ = nullptr;
};

// Depth-first enumeration of every path through a probabilistic program
// whose randomness is drawn from a RandomSource bound to this enumerator.
// The program is re-run from scratch for each atom; choices along the
// current prefix are replayed, and the first unexplored branch is taken.
class Enumerator {
 public:
  explicit Enumerator(uint64_t max_atoms = 10'000'000) : max_atoms_(max_atoms) {}

  // `run` executes the program once using `source`. Its status aborts the
  // enumeration when not OK. `on_atom` receives the probability of the
  // path just executed.
  template <typename Run, typename OnAtom>
  absl::Status ForEachAtom(Run&& run, OnAtom&& on_atom);

  uint64_t atoms() const { return atoms_; }

 private:
  friend class RandomSource;

  struct Branch {
    std::vector<double> probs;
    size_t choice = 0;
  };

  size_t Take(std::span<const double> probs);
  bool Advance();

  uint64_t max_atoms_;
  uint64_t atoms_ = 0;
  std::vector<Branch> trace_;
  size_t depth_ = 0;
  double weight_ = 1.0;
};

template <typename Run, typename OnAtom>
absl::Status Enumerator::ForEachAtom(Run&& run, OnAtom&& on_atom) {
  trace_.clear();
  atoms_ = 0;
  do {
    if (atoms_ >= max_atoms_) {
      return absl::ResourceExhaustedError(
          "enumeration exceeds the atom limit of " + std::to_string(max_atoms_));
    }
    depth_ = 0;
    weight_ = 1.0;
    RandomSource source(this);
    if (absl::Status s = run(source); !s.ok()) return s;
    if (depth_ != trace_.size()) {
      return absl::InternalError("program is not replayable: branch count changed");
    }
    ++atoms_;
    on_atom(weight_);
  } while (Advance());
  return absl::OkStatus();
}

// Free-function forms of the sampling operations.
Example SampleExample(const DataDistribution& dist, RandomSource& rng);
Dataset SampleDataset(const DataDistribution& dist, size_t n, RandomSource& rng);
absl::StatusOr<int> SampleBit(double p, RandomSource& rng);
RngStream DeriveSubstream(const RngStream& rng, absl::string_view label,
                          uint64_t index);
inline double Mass(const DataDistribution& dist, const Example& z) {
  return dist.Mass(z);
}

// z restricted to the given attribute indices (label dropped).
Example Project(const Example& z, std::span<const size_t> indices);

}  // namespace privgames

#endif  // PRIVGAMES_PROB_H_
