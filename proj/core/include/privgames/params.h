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

// Flat dotted-key parameters and the value grammar used in them.
//
//   example      := (INT | "(" INT ("," INT)* ")") ["|" INT] | "bot"
//   dist         := "bernoulli(" P ")" | "uniform(" K ")" | "point(" example ")"
//                 | "uniform_over(" example (";" example)* ")"
//                 | "pmf(" example ":" P (";" example ":" P)* ")"
//                 | "product(" dist ("," dist)* ")"
//                 | "labeled(" dist "," Y "," CARD ")"
//   mixture      := "mixture(" dist ("," dist)* ")"      (uniform weights)
//   dataset      := "[" [example (";" example)*] "]" | "repeat(" example "," K ")"
//   index list   := INT ("," INT)* | ""

#ifndef PRIVGAMES_PARAMS_H_
#define PRIVGAMES_PARAMS_H_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "privgames/prob.h"

namespace privgames {

absl::StatusOr<Example> ParseExample(absl::string_view text);
absl::StatusOr<DataDistribution> ParseDistribution(absl::string_view text);
absl::StatusOr<MetaDistribution> ParseMixture(absl::string_view text);
absl::StatusOr<Dataset> ParseDataset(absl::string_view text);
absl::StatusOr<std::vector<size_t>> ParseIndexList(absl::string_view text);

// Ordered key -> raw value map. Typed getters fall back to a default when
// the key is absent and prefix parse errors with the key name.
class Params {
 public:
  // One "key=value" per line; blank lines and lines starting with '#' are
  // skipped. Later duplicates override earlier ones.
  static absl::StatusOr<Params> Parse(absl::string_view text);

  void Set(absl::string_view key, absl::string_view value);
  bool Has(absl::string_view key) const;
  const std::map<std::string, std::string>& entries() const { return entries_; }

  absl::StatusOr<std::string> GetString(absl::string_view key,
                                        std::optional<std::string> fallback) const;
  absl::StatusOr<int64_t> GetInt(absl::string_view key, std::optional<int64_t> fallback) const;
  absl::StatusOr<uint64_t> GetUint(absl::string_view key,
                                   std::optional<uint64_t> fallback) const;
  absl::StatusOr<double> GetDouble(absl::string_view key, std::optional<double> fallback) const;
  absl::StatusOr<bool> GetBool(absl::string_view key, std::optional<bool> fallback) const;
  absl::StatusOr<Example> GetExample(absl::string_view key,
                                     std::optional<Example> fallback) const;
  absl::StatusOr<DataDistribution> GetDistribution(absl::string_view key,
                                                   std::optional<std::string> fallback) const;
  absl::StatusOr<MetaDistribution> GetMixture(absl::string_view key,
                                              std::optional<std::string> fallback) const;
  absl::StatusOr<Dataset> GetDataset(absl::string_view key,
                                     std::optional<std::string> fallback) const;
  absl::StatusOr<std::vector<size_t>> GetIndexList(absl::string_view key,
                                                   std::optional<std::string> fallback) const;

 private:
  absl::StatusOr<std::string> Raw(absl::string_view key,
                                  const std::optional<std::string>& fallback) const;

  std::map<std::string, std::string> entries_;
};

}  // namespace privgames

#endif  // PRIVGAMES_PARAMS_H_
