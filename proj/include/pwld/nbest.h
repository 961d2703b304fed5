// include/pwld/nbest.h

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

#ifndef PWLD_NBEST_H_
#define PWLD_NBEST_H_

#include <optional>
#include <string>
#include <vector>

#include "pwld/editdist.h"
#include "pwld/phoneset.h"

namespace pwld {

/// One scored attempt: the target phones, the recognizer's N-best list and
/// an optional human score in [0, r].
struct UtteranceRecord {
  std::string id;
  PhoneSequence reference;
  std::vector<PhoneSequence> hypotheses;
  std::optional<double> annotation;

  /// Throws Error(kEmptyInput) or Error(kRange).
  void Validate(double score_range) const;
};

struct Selection {
  std::size_t index = 0;
  EditScript script;
  /// One message per hypothesis that could not be aligned.
  std::vector<std::string> hypothesis_errors;
};

/// Picks the hypothesis with the lowest alignment cost, ties going to the
/// lower index. Hypotheses that fail to align are skipped and reported; if
/// none aligns, throws the first error.
Selection SelectBest(const WeightSet &weights, const UtteranceRecord &record);

/// Same as SelectBest but tokenizes the hypotheses first, so unknown phones
/// in individual hypotheses are collected instead of aborting.
Selection SelectBestFromText(const WeightSet &weights,
                             const PhoneInventory &inventory,
                             const PhoneSequence &reference,
                             const std::vector<std::string> &hypotheses);

/// Baseline PWLD weights: substitution cost is the number of differing
/// articulatory features; insertion and deletion cost a constant equal to
/// the mean substitution cost over all distinct phone pairs of `inventory`.
/// a = 1, l = 1, r = 5.
WeightSet FontanWeights(const PhoneInventory &inventory);

}  // namespace pwld

#endif  // PWLD_NBEST_H_
