// include/pwld/phoneset.h

// Copyright 2026  The pwld Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef PWLD_PHONESET_H_
#define PWLD_PHONESET_H_

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace pwld {

/// Name of the pseudo-feature that is 1 for every phone. It gives every edit
/// operation a constant, trainable cost component.
inline constexpr std::string_view kOpBias = "op-bias";

/// The IPA length mark.
inline constexpr std::string_view kLengthMark = "ː";

/// Ordered, immutable list of binary articulatory feature names.
class FeatureSpace {
 public:
  /// Throws Error(kParse) on empty or repeated names. `op-bias` is appended
  /// when the caller does not list it.
  explicit FeatureSpace(std::vector<std::string> names);

  /// The shipped 56-dimensional space (55 articulatory descriptors + op-bias).
  static std::shared_ptr<const FeatureSpace> Default();

  std::size_t size() const { return names_.size(); }
  const std::vector<std::string> &names() const { return names_; }
  const std::string &name(std::size_t i) const { return names_[i]; }
  std::size_t bias_index() const { return bias_index_; }

  std::optional<std::size_t> Find(std::string_view name) const;
  /// Throws Error(kUnknownFeature).
  std::size_t IndexOf(std::string_view name) const;

  bool operator==(const FeatureSpace &other) const {
    return names_ == other.names_;
  }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, std::size_t> index_;
  std::size_t bias_index_ = 0;
};

using FeatureSpacePtr = std::shared_ptr<const FeatureSpace>;
using FeatureVector = std::vector<std::uint8_t>;

/// True when both spaces are the same object or list the same names.
bool SameSpace(const FeatureSpacePtr &a, const FeatureSpacePtr &b);
/// Throws Error(kSpaceMismatch) unless SameSpace(a, b).
void CheckSameSpace(const FeatureSpacePtr &a, const FeatureSpacePtr &b);

struct Phone {
  std::string symbol;
  FeatureSpacePtr space;
  FeatureVector features;

  bool Has(std::string_view feature) const;

  friend bool operator==(const Phone &a, const Phone &b) {
    return a.symbol == b.symbol && a.features == b.features;
  }
};

using PhoneSequence = std::vector<Phone>;

/// Set of phonetic units, each bound to a distinct binary feature vector.
/// Immutable after construction.
class PhoneInventory {
 public:
  /// A phone is given as a symbol plus the names of the features it carries.
  struct Entry {
    std::string symbol;
    std::vector<std::string> features;
  };

  PhoneInventory(FeatureSpacePtr space, const std::vector<Entry> &entries);

  /// Reads a file in either the tab-separated or the JSON format.
  static PhoneInventory Load(const std::string &path);
  /// Detects the format from the first non-blank character.
  static PhoneInventory Parse(std::string_view text);
  static PhoneInventory ParseTsv(std::string_view text);
  static PhoneInventory ParseJson(std::string_view text);

  std::string ToTsv() const;
  std::string ToJson() const;

  const FeatureSpacePtr &space() const { return space_; }
  const std::vector<Phone> &phones() const { return phones_; }
  std::size_t size() const { return phones_.size(); }
  std::size_t max_symbol_bytes() const { return max_symbol_bytes_; }

  const Phone *Find(std::string_view symbol) const;
  /// Throws Error(kUnknownSymbol).
  const Phone &at(std::string_view symbol) const;

 private:
  FeatureSpacePtr space_;
  std::vector<Phone> phones_;
  std::unordered_map<std::string, std::size_t> by_symbol_;
  std::size_t max_symbol_bytes_ = 0;
};

/// Non-fatal consistency checks (length feature vs. length mark). Each string
/// is one warning.
std::vector<std::string> LintInventory(const PhoneInventory &inventory);

enum class TokenizeMode {
  kSeparated,    // whitespace-separated symbols
  kUnsegmented,  // greedy longest match, left to right
};

/// Throws Error(kUnknownSymbol) naming the offending text and its byte offset.
PhoneSequence Tokenize(const PhoneInventory &inventory, std::string_view text,
                       TokenizeMode mode = TokenizeMode::kSeparated);

std::string JoinSymbols(const PhoneSequence &phones,
                        std::string_view separator = " ");

/// Component-wise XOR of the two feature vectors, with op-bias forced to 1.
FeatureVector FeatureDiff(const Phone &a, const Phone &b);

}  // namespace pwld

#endif  // PWLD_PHONESET_H_
