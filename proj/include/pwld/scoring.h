// include/pwld/scoring.h

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

#ifndef PWLD_SCORING_H_
#define PWLD_SCORING_H_

#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pwld/editdist.h"
#include "pwld/phoneset.h"

namespace pwld {

/// ref_length^l. Throws Error(kDegenerateReference) for ref_length < 1.
double LengthCompensation(const WeightSet &weights, int ref_length);

/// r * (1 - tanh(a * distance / ref_length^l)).
double MapScore(const WeightSet &weights, double distance, int ref_length);

/// Feature-pair to phrase table used to explain substitutions.
///
/// Text format, one directive per line, '#' starts a comment:
///   group <name> <feature> <feature> ...   (groups are described in order)
///   pair <ref-feature> <hyp-feature> <phrase>
///   add <feature> <phrase>                  (feature only in the attempt)
///   remove <feature> <phrase>               (feature only in the target)
/// Within a group the first matching `pair` wins; otherwise the phrase is
/// built from `add`/`remove` entries or "<new> instead of <old>".
class DescriptionTable {
 public:
  static const DescriptionTable &Default();
  static DescriptionTable Parse(std::string_view text);
  static DescriptionTable Load(const std::string &path);

  std::string Describe(const EditOp &op) const;

 private:
  struct Group {
    std::string name;
    std::vector<std::string> features;
  };
  struct PairRule {
    std::string ref_feature;
    std::string hyp_feature;
    std::string phrase;
  };

  std::vector<Group> groups_;
  std::vector<PairRule> pairs_;
  std::map<std::string, std::string> added_;
  std::map<std::string, std::string> removed_;
};

/// Human-readable description of a non-match operation.
std::string DescribeOp(const EditOp &op,
                       const DescriptionTable &table = DescriptionTable::Default());

struct BreakdownEntry {
  EditOp op;
  std::string description;
  double cost = 0.0;
};

struct ScoreResult {
  PhoneSequence reference;
  PhoneSequence hypothesis;
  EditScript script;
  double distance = 0.0;
  int ref_length = 0;
  double compensation = 1.0;
  double score = 0.0;
  std::vector<BreakdownEntry> breakdown;  // every non-match op, in order
};

ScoreResult ScoreUtterance(
    const WeightSet &weights, const PhoneInventory &inventory,
    const PhoneSequence &reference, const PhoneSequence &hypothesis,
    const DescriptionTable &table = DescriptionTable::Default());

/// Plain-text report in the layout shown to learners and teachers.
std::string RenderText(const ScoreResult &result);
/// {"target", "attempt", "total_errors", "compensation", "score", "breakdown"}
std::string RenderJson(const ScoreResult &result);

}  // namespace pwld

#endif  // PWLD_SCORING_H_
