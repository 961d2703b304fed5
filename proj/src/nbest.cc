// src/nbest.cc

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

#include "pwld/nbest.h"

#include <cmath>

#include "pwld/error.h"

namespace pwld {

void UtteranceRecord::Validate(double score_range) const {
  if (reference.empty())
    throw Error(ErrorCode::kEmptyInput, "utterance '" + id + "': empty reference");
  if (hypotheses.empty())
    throw Error(ErrorCode::kEmptyInput, "utterance '" + id + "': no hypotheses");
  if (annotation && !(*annotation >= 0.0 && *annotation <= score_range))
    throw Error(ErrorCode::kRange, "utterance '" + id + "': annotation " +
                                       std::to_string(*annotation) +
                                       " outside [0, " +
                                       std::to_string(score_range) + "]");
}

Selection SelectBest(const WeightSet &weights, const UtteranceRecord &record) {
  if (record.hypotheses.empty())
    throw Error(ErrorCode::kEmptyInput,
                "utterance '" + record.id + "': no hypotheses");
  Selection best;
  bool found = false;
  std::optional<Error> first_error;
  for (std::size_t k = 0; k < record.hypotheses.size(); ++k) {
    try {
      EditScript script = Align(weights, record.reference, record.hypotheses[k]);
      if (!found || script.total_cost < best.script.total_cost) {
        best.index = k;
        best.script = std::move(script);
        found = true;
      }
    } catch (const Error &e) {
      if (!first_error) first_error = e;
      best.hypothesis_errors.push_back("hypothesis " + std::to_string(k) +
                                       ": " + e.what());
    }
  }
  if (!found) throw *first_error;
  return best;
}

Selection SelectBestFromText(const WeightSet &weights,
                             const PhoneInventory &inventory,
                             const PhoneSequence &reference,
                             const std::vector<std::string> &hypotheses) {
  UtteranceRecord record;
  record.reference = reference;
  std::vector<std::size_t> original;
  std::vector<std::string> errors;
  std::optional<Error> first_error;
  for (std::size_t k = 0; k < hypotheses.size(); ++k) {
    try {
      record.hypotheses.push_back(Tokenize(inventory, hypotheses[k]));
      original.push_back(k);
    } catch (const Error &e) {
      if (!first_error) first_error = e;
      errors.push_back("hypothesis " + std::to_string(k) + ": " + e.what());
    }
  }
  if (record.hypotheses.empty()) {
    if (first_error) throw *first_error;
    throw Error(ErrorCode::kEmptyInput, "no hypotheses");
  }
  Selection s = SelectBest(weights, record);
  s.index = original[s.index];
  errors.insert(errors.end(), s.hypothesis_errors.begin(),
                s.hypothesis_errors.end());
  s.hypothesis_errors = std::move(errors);
  return s;
}

WeightSet FontanWeights(const PhoneInventory &inventory) {
  const FeatureSpacePtr &space = inventory.space();
  const std::size_t bias = space->bias_index();
  WeightSet w;
  w.space = space;
  w.f_sub.assign(space->size(), 1.0);
  w.f_sub[bias] = 0.0;
  w.f_ins.assign(space->size(), 0.0);
  w.f_del.assign(space->size(), 0.0);

  const auto &phones = inventory.phones();
  double total = 0.0;
  std::size_t pairs = 0;
  for (std::size_t i = 0; i < phones.size(); ++i)
    for (std::size_t j = i + 1; j < phones.size(); ++j, ++pairs)
      total += OpCost(w, OpKind::kSubstitute, &phones[i], &phones[j]);
  double mean = pairs ? total / static_cast<double>(pairs) : 1.0;
  w.f_ins[bias] = mean;
  w.f_del[bias] = mean;
  w.a = 1.0;
  w.l = 1.0;
  w.r = 5.0;
  return w;
}

}  // namespace pwld
