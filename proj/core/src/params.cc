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

#include "privgames/params.h"

#include <cctype>
#include <utility>

#include "absl/strings/ascii.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_split.h"
#include "privgames/status_macros.h"

namespace privgames {
namespace {

class Cursor {
 public:
  explicit Cursor(absl::string_view text) : s_(text) {}

  void SkipSpace() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool AtEnd() {
    SkipSpace();
    return pos_ >= s_.size();
  }
  bool Peek(char c) {
    SkipSpace();
    return pos_ < s_.size() && s_[pos_] == c;
  }
  bool TryConsume(char c) {
    if (!Peek(c)) return false;
    ++pos_;
    return true;
  }
  absl::Status Expect(char c) {
    if (TryConsume(c)) return absl::OkStatus();
    return Error(absl::StrCat("expected '", std::string(1, c), "'"));
  }
  std::string Word() {
    SkipSpace();
    const size_t start = pos_;
    while (pos_ < s_.size() &&
           (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) {
      ++pos_;
    }
    return std::string(s_.substr(start, pos_ - start));
  }
  // A number token: everything up to the next delimiter.
  std::string Token() {
    SkipSpace();
    const size_t start = pos_;
    while (pos_ < s_.size() && s_[pos_] != ',' && s_[pos_] != ';' && s_[pos_] != ':' &&
           s_[pos_] != ')' && s_[pos_] != ']' && s_[pos_] != '|' &&
           !std::isspace(static_cast<unsigned char>(s_[pos_]))) {
      ++pos_;
    }
    return std::string(s_.substr(start, pos_ - start));
  }
  absl::StatusOr<int64_t> Int() {
    const std::string t = Token();
    int64_t v;
    if (!absl::SimpleAtoi(t, &v)) return Error(absl::StrCat("expected an integer, got '", t, "'"));
    return v;
  }
  absl::StatusOr<double> Number() {
    const std::string t = Token();
    double v;
    if (!absl::SimpleAtod(t, &v)) return Error(absl::StrCat("expected a number, got '", t, "'"));
    return v;
  }
  absl::Status Error(absl::string_view what) const {
    return absl::InvalidArgumentError(
        absl::StrCat(what, " at offset ", pos_, " in '", s_, "'"));
  }

 private:
  absl::string_view s_;
  size_t pos_ = 0;
};

absl::StatusOr<AttrValue> AttrInt(Cursor& c) {
  PRIVGAMES_ASSIGN_OR_RETURN(const int64_t v, c.Int());
  return static_cast<AttrValue>(v);
}

absl::StatusOr<Example> ExampleAt(Cursor& c) {
  if (c.Peek('b')) {
    const std::string w = c.Word();
    if (w != "bot") return c.Error(absl::StrCat("unknown example token '", w, "'"));
    return Example::Absent();
  }
  Example::Attrs attrs;
  if (c.TryConsume('(')) {
    do {
      PRIVGAMES_ASSIGN_OR_RETURN(const AttrValue v, AttrInt(c));
      attrs.push_back(v);
    } while (c.TryConsume(','));
    PRIVGAMES_RETURN_IF_ERROR(c.Expect(')'));
  } else {
    PRIVGAMES_ASSIGN_OR_RETURN(const AttrValue v, AttrInt(c));
    attrs.push_back(v);
  }
  std::optional<AttrValue> label;
  if (c.TryConsume('|')) {
    PRIVGAMES_ASSIGN_OR_RETURN(label, AttrInt(c));
  }
  return Example(std::move(attrs), label);
}

absl::StatusOr<DataDistribution> DistAt(Cursor& c) {
  const std::string head = c.Word();
  PRIVGAMES_RETURN_IF_ERROR(c.Expect('('));
  absl::StatusOr<DataDistribution> out = c.Error(absl::StrCat("unknown distribution '", head, "'"));
  if (head == "bernoulli") {
    PRIVGAMES_ASSIGN_OR_RETURN(const double p, c.Number());
    out = DataDistribution::Bernoulli(p);
  } else if (head == "uniform") {
    PRIVGAMES_ASSIGN_OR_RETURN(const AttrValue k, AttrInt(c));
    out = DataDistribution::UniformRange(k);
  } else if (head == "point") {
    PRIVGAMES_ASSIGN_OR_RETURN(Example z, ExampleAt(c));
    out = DataDistribution::PointMass(std::move(z));
  } else if (head == "uniform_over") {
    std::vector<Example> support;
    do {
      PRIVGAMES_ASSIGN_OR_RETURN(Example z, ExampleAt(c));
      support.push_back(std::move(z));
    } while (c.TryConsume(';'));
    out = DataDistribution::Uniform(std::move(support));
  } else if (head == "pmf") {
    std::vector<Example> support;
    std::vector<double> probs;
    do {
      PRIVGAMES_ASSIGN_OR_RETURN(Example z, ExampleAt(c));
      PRIVGAMES_RETURN_IF_ERROR(c.Expect(':'));
      PRIVGAMES_ASSIGN_OR_RETURN(const double p, c.Number());
      support.push_back(std::move(z));
      probs.push_back(p);
    } while (c.TryConsume(';'));
    out = DataDistribution::Create(std::move(support), std::move(probs));
  } else if (head == "product") {
    std::vector<DataDistribution> factors;
    do {
      PRIVGAMES_ASSIGN_OR_RETURN(DataDistribution d, DistAt(c));
      factors.push_back(std::move(d));
    } while (c.TryConsume(','));
    out = DataDistribution::Product(factors);
  } else if (head == "labeled") {
    PRIVGAMES_ASSIGN_OR_RETURN(DataDistribution base, DistAt(c));
    PRIVGAMES_RETURN_IF_ERROR(c.Expect(','));
    PRIVGAMES_ASSIGN_OR_RETURN(const AttrValue y, AttrInt(c));
    PRIVGAMES_RETURN_IF_ERROR(c.Expect(','));
    PRIVGAMES_ASSIGN_OR_RETURN(const AttrValue card, AttrInt(c));
    if (y < 0 || y >= card) return c.Error(absl::StrCat("label ", y, " outside [0,", card, ")"));
    out = base.Labeled(y, card);
  }
  if (!out.ok()) return out.status();
  PRIVGAMES_RETURN_IF_ERROR(c.Expect(')'));
  return out;
}

template <typename T, typename F>
absl::StatusOr<T> ParseWhole(absl::string_view text, F&& f) {
  Cursor c(text);
  PRIVGAMES_ASSIGN_OR_RETURN(T value, f(c));
  if (!c.AtEnd()) return c.Error("trailing characters");
  return value;
}

absl::Status Keyed(absl::string_view key, const absl::Status& s) {
  return absl::Status(s.code(), absl::StrCat(key, ": ", s.message()));
}

}  // namespace

absl::StatusOr<Example> ParseExample(absl::string_view text) {
  return ParseWhole<Example>(text, ExampleAt);
}

absl::StatusOr<DataDistribution> ParseDistribution(absl::string_view text) {
  return ParseWhole<DataDistribution>(text, DistAt);
}

absl::StatusOr<MetaDistribution> ParseMixture(absl::string_view text) {
  return ParseWhole<MetaDistribution>(text, [](Cursor& c) -> absl::StatusOr<MetaDistribution> {
    const std::string head = c.Word();
    if (head != "mixture") return c.Error("expected mixture(...)");
    PRIVGAMES_RETURN_IF_ERROR(c.Expect('('));
    std::vector<DataDistribution> comps;
    do {
      PRIVGAMES_ASSIGN_OR_RETURN(DataDistribution d, DistAt(c));
      comps.push_back(std::move(d));
    } while (c.TryConsume(','));
    PRIVGAMES_RETURN_IF_ERROR(c.Expect(')'));
    return MetaDistribution::Uniform(std::move(comps));
  });
}

absl::StatusOr<Dataset> ParseDataset(absl::string_view text) {
  return ParseWhole<Dataset>(text, [](Cursor& c) -> absl::StatusOr<Dataset> {
    Dataset out;
    if (c.TryConsume('[')) {
      if (c.TryConsume(']')) return out;
      do {
        PRIVGAMES_ASSIGN_OR_RETURN(Example z, ExampleAt(c));
        out.push_back(std::move(z));
      } while (c.TryConsume(';'));
      PRIVGAMES_RETURN_IF_ERROR(c.Expect(']'));
      return out;
    }
    const std::string head = c.Word();
    if (head != "repeat") return c.Error("expected [..] or repeat(example, k)");
    PRIVGAMES_RETURN_IF_ERROR(c.Expect('('));
    PRIVGAMES_ASSIGN_OR_RETURN(Example z, ExampleAt(c));
    PRIVGAMES_RETURN_IF_ERROR(c.Expect(','));
    PRIVGAMES_ASSIGN_OR_RETURN(const int64_t k, c.Int());
    if (k < 0) return c.Error("repeat count must be >= 0");
    PRIVGAMES_RETURN_IF_ERROR(c.Expect(')'));
    out.assign(static_cast<size_t>(k), z);
    return out;
  });
}

absl::StatusOr<std::vector<size_t>> ParseIndexList(absl::string_view text) {
  std::vector<size_t> out;
  if (absl::StripAsciiWhitespace(text).empty()) return out;
  for (absl::string_view part : absl::StrSplit(text, ',')) {
    size_t v;
    if (!absl::SimpleAtoi(absl::StripAsciiWhitespace(part), &v)) {
      return absl::InvalidArgumentError(absl::StrCat("bad index '", part, "' in '", text, "'"));
    }
    out.push_back(v);
  }
  return out;
}

absl::StatusOr<Params> Params::Parse(absl::string_view text) {
  Params out;
  int line_no = 0;
  for (absl::string_view line : absl::StrSplit(text, '\n')) {
    ++line_no;
    line = absl::StripAsciiWhitespace(line);
    if (line.empty() || line.front() == '#') continue;
    const size_t eq = line.find('=');
    if (eq == absl::string_view::npos) {
      return absl::InvalidArgumentError(
          absl::StrCat("line ", line_no, ": expected key=value, got '", line, "'"));
    }
    const absl::string_view key = absl::StripAsciiWhitespace(line.substr(0, eq));
    if (key.empty()) {
      return absl::InvalidArgumentError(absl::StrCat("line ", line_no, ": empty key"));
    }
    out.Set(key, absl::StripAsciiWhitespace(line.substr(eq + 1)));
  }
  return out;
}

void Params::Set(absl::string_view key, absl::string_view value) {
  entries_[std::string(key)] = std::string(value);
}

bool Params::Has(absl::string_view key) const { return entries_.count(std::string(key)) > 0; }

absl::StatusOr<std::string> Params::Raw(absl::string_view key,
                                        const std::optional<std::string>& fallback) const {
  auto it = entries_.find(std::string(key));
  if (it != entries_.end()) return it->second;
  if (fallback) return *fallback;
  return absl::InvalidArgumentError(absl::StrCat("missing required parameter '", key, "'"));
}

absl::StatusOr<std::string> Params::GetString(absl::string_view key,
                                              std::optional<std::string> fallback) const {
  return Raw(key, fallback);
}

absl::StatusOr<int64_t> Params::GetInt(absl::string_view key,
                                       std::optional<int64_t> fallback) const {
  if (!Has(key) && fallback) return *fallback;
  PRIVGAMES_ASSIGN_OR_RETURN(const std::string raw, Raw(key, std::nullopt));
  int64_t v;
  if (!absl::SimpleAtoi(raw, &v)) {
    return absl::InvalidArgumentError(absl::StrCat(key, ": expected an integer, got '", raw, "'"));
  }
  return v;
}

absl::StatusOr<uint64_t> Params::GetUint(absl::string_view key,
                                         std::optional<uint64_t> fallback) const {
  if (!Has(key) && fallback) return *fallback;
  PRIVGAMES_ASSIGN_OR_RETURN(const std::string raw, Raw(key, std::nullopt));
  uint64_t v;
  if (!absl::SimpleAtoi(raw, &v)) {
    return absl::InvalidArgumentError(
        absl::StrCat(key, ": expected a non-negative integer, got '", raw, "'"));
  }
  return v;
}

absl::StatusOr<double> Params::GetDouble(absl::string_view key,
                                         std::optional<double> fallback) const {
  if (!Has(key) && fallback) return *fallback;
  PRIVGAMES_ASSIGN_OR_RETURN(const std::string raw, Raw(key, std::nullopt));
  double v;
  if (!absl::SimpleAtod(raw, &v)) {
    return absl::InvalidArgumentError(absl::StrCat(key, ": expected a number, got '", raw, "'"));
  }
  return v;
}

absl::StatusOr<bool> Params::GetBool(absl::string_view key, std::optional<bool> fallback) const {
  if (!Has(key) && fallback) return *fallback;
  PRIVGAMES_ASSIGN_OR_RETURN(const std::string raw, Raw(key, std::nullopt));
  bool v;
  if (!absl::SimpleAtob(raw, &v)) {
    return absl::InvalidArgumentError(absl::StrCat(key, ": expected a boolean, got '", raw, "'"));
  }
  return v;
}

absl::StatusOr<Example> Params::GetExample(absl::string_view key,
                                           std::optional<Example> fallback) const {
  if (!Has(key) && fallback) return *fallback;
  PRIVGAMES_ASSIGN_OR_RETURN(const std::string raw, Raw(key, std::nullopt));
  absl::StatusOr<Example> v = ParseExample(raw);
  if (!v.ok()) return Keyed(key, v.status());
  return v;
}

absl::StatusOr<DataDistribution> Params::GetDistribution(
    absl::string_view key, std::optional<std::string> fallback) const {
  PRIVGAMES_ASSIGN_OR_RETURN(const std::string raw, Raw(key, fallback));
  absl::StatusOr<DataDistribution> v = ParseDistribution(raw);
  if (!v.ok()) return Keyed(key, v.status());
  return v;
}

absl::StatusOr<MetaDistribution> Params::GetMixture(absl::string_view key,
                                                    std::optional<std::string> fallback) const {
  PRIVGAMES_ASSIGN_OR_RETURN(const std::string raw, Raw(key, fallback));
  absl::StatusOr<MetaDistribution> v = ParseMixture(raw);
  if (!v.ok()) return Keyed(key, v.status());
  return v;
}

absl::StatusOr<Dataset> Params::GetDataset(absl::string_view key,
                                           std::optional<std::string> fallback) const {
  PRIVGAMES_ASSIGN_OR_RETURN(const std::string raw, Raw(key, fallback));
  absl::StatusOr<Dataset> v = ParseDataset(raw);
  if (!v.ok()) return Keyed(key, v.status());
  return v;
}

absl::StatusOr<std::vector<size_t>> Params::GetIndexList(
    absl::string_view key, std::optional<std::string> fallback) const {
  PRIVGAMES_ASSIGN_OR_RETURN(const std::string raw, Raw(key, fallback));
  absl::StatusOr<std::vector<size_t>> v = ParseIndexList(raw);
  if (!v.ok()) return Keyed(key, v.status());
  return v;
}

}  // namespace privgames
