// include/pwld/editdist.h

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

#ifndef PWLD_EDITDIST_H_
#define PWLD_EDITDIST_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pwld/phoneset.h"

namespace pwld {

enum class OpKind { kMatch, kSubstitute, kInsert, kDelete };

const char *OpKindName(OpKind kind);

/// Trainable cost parameters: per-feature costs for substitution, insertion
/// and deletion, plus the score mapping scale `a`, length exponent `l` and
/// score range `r`.
struct WeightSet {
  FeatureSpacePtr space;
  std::vector<double> f_sub;
  std::vector<double> f_ins;
  std::vector<double> f_del;
  double a = 1.0;
  double l = 1.0;
  double r = 5.0;

  /// All three vectors zero except op-bias = 1, so every edit costs 1.
  static WeightSet UnitCost(FeatureSpacePtr space);

  /// Throws Error(kRange) or Error(kInvalidArgument) when an invariant fails:
  /// non-negative weights, a > 0, 0 <= l <= 2, r > 0, vector sizes.
  void Validate() const;

  /// Copy with all three F vectors multiplied by k.
  WeightSet ScaledCosts(double k) const;
};

/// Weight file: {"features": [...], "f_sub": [...], "f_ins": [...],
/// "f_del": [...], "a": x, "l": x, "r": x}.
WeightSet ParseWeights(std::string_view json_text);
WeightSet LoadWeights(const std::string &path);
std::string WeightsToJson(const WeightSet &weights);
void SaveWeights(const WeightSet &weights, const std::string &path);

struct EditOp {
  OpKind kind = OpKind::kMatch;
  std::optional<Phone> ref;  // absent for insert
  std::optional<Phone> hyp;  // absent for delete
  double cost = 0.0;
};

struct EditScript {
  std::vector<EditOp> ops;
  double total_cost = 0.0;

  std::size_t CountOf(OpKind kind) const;
};

/// Per-utterance feature counts of the substitutions, insertions and
/// deletions in a script. Distance is the dot product with the weights.
struct OperationFeatures {
  std::vector<int> o_sub;
  std::vector<int> o_ins;
  std::vector<int> o_del;

  bool operator==(const OperationFeatures &) const = default;
};

/// Cost of one edit under `weights`. `ref` must be present unless kind is
/// insert, `hyp` unless kind is delete. Throws Error(kSpaceMismatch) or
/// Error(kInvalidArgument).
double OpCost(const WeightSet &weights, OpKind kind, const Phone *ref,
              const Phone *hyp);

/// Minimal-cost weighted Levenshtein alignment. Equal-cost alternatives are
/// resolved in the order match > substitute > delete > insert at every cell
/// of the backtrace.
EditScript Align(const WeightSet &weights, const PhoneSequence &reference,
                 const PhoneSequence &hypothesis);

OperationFeatures ExtractFeatures(const EditScript &script,
                                  const FeatureSpace &space);

/// dot(f_sub, o_sub) + dot(f_ins, o_ins) + dot(f_del, o_del).
double WeightedDistance(const WeightSet &weights,
                        const OperationFeatures &features);

/// Applies the script to `reference`. Throws Error(kInvalidArgument) if the
/// script does not fit the reference.
PhoneSequence Replay(const PhoneSequence &reference, const EditScript &script);

}  // namespace pwld

#endif  // PWLD_EDITDIST_H_
