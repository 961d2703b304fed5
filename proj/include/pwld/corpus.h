// include/pwld/corpus.h

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

#ifndef PWLD_CORPUS_H_
#define PWLD_CORPUS_H_

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "pwld/editdist.h"
#include "pwld/nbest.h"
#include "pwld/phoneset.h"

namespace pwld {

struct CorpusLoadOptions {
  /// Strict loading throws on the first bad line; lenient loading skips it.
  bool strict = true;
  double score_range = 5.0;
  TokenizeMode mode = TokenizeMode::kSeparated;
};

struct LineIssue {
  int line = 0;
  std::string message;
};

struct LoadedCorpus {
  std::vector<UtteranceRecord> records;
  std::vector<LineIssue> skipped;
};

/// JSON Lines, one record per line:
///   {"id": "...", "reference": "f ɹ ɛ n d", "hypotheses": ["p r ɛ nː t"],
///    "annotation": 2.8}
/// Errors name the 1-based line number.
LoadedCorpus ParseCorpus(std::string_view text, const PhoneInventory &inventory,
                         const CorpusLoadOptions &options = {});
LoadedCorpus LoadCorpus(const std::string &path, const PhoneInventory &inventory,
                        const CorpusLoadOptions &options = {});

struct AnnotationEntry {
  std::string id;
  std::optional<double> annotation;
};

/// Reads only ids and annotations from a corpus file; phones are not checked.
std::vector<AnnotationEntry> ReadAnnotations(const std::string &path);

std::string RecordToJson(const UtteranceRecord &record);
std::string CorpusToJsonl(const std::vector<UtteranceRecord> &records);
void WriteCorpus(const std::vector<UtteranceRecord> &records,
                 const std::string &path);

/// Per-phone corruption probabilities. An insertion adds a random phone after
/// the current one, which is kept.
struct ErrorRates {
  double substitute = 0.0;
  double insert = 0.0;
  double remove = 0.0;
};

struct SynthConfig {
  int n_utterances = 100;
  int min_length = 3;
  int max_length = 8;
  int n_best_depth = 3;
  ErrorRates error_rate;
  WeightSet planted_weights;
  double label_noise_std = 0.0;
  std::uint64_t seed = 0;

  void Validate() const;
};

/// {"n_utterances", "phrase_length_range": [min, max], "n_best_depth",
///  "error_rate": {"substitute", "insert", "delete"}, "planted_weights":
///  <weight object> | "planted_weights_file": path, "label_noise_std", "seed"}
/// A relative planted_weights_file is resolved against `base_dir`.
SynthConfig ParseSynthConfig(std::string_view json_text,
                             const std::string &base_dir = ".");
std::string SynthConfigToJson(const SynthConfig &config);

struct CorruptionCounts {
  std::size_t phones = 0;
  std::size_t substituted = 0;
  std::size_t inserted = 0;
  std::size_t removed = 0;
};

/// Corrupts phone sequences the way a confusable recognizer would:
/// substitutions favour articulatorily close phones, with probability
/// proportional to exp(-number of differing features).
class Corrupter {
 public:
  explicit Corrupter(const PhoneInventory &inventory);

  PhoneSequence Corrupt(const PhoneSequence &reference, const ErrorRates &rates,
                        std::mt19937_64 &rng,
                        CorruptionCounts *counts = nullptr) const;

 private:
  std::size_t IndexOf(const Phone &phone) const;

  const PhoneInventory &inventory_;
  std::vector<std::vector<double>> neighbour_cdf_;
};

/// Seeded synthetic corpus: random references, N-best hypotheses of
/// increasing corruption, and annotations from the planted weights applied to
/// the cheapest hypothesis plus Gaussian label noise, clamped to [0, r].
/// Throws Error(kInvalidArgument) if the inventory has fewer than 2 phones.
std::vector<UtteranceRecord> GenerateSynthetic(const SynthConfig &config,
                                               const PhoneInventory &inventory);

}  // namespace pwld

#endif  // PWLD_CORPUS_H_
