// include/pwld/training.h

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

#ifndef PWLD_TRAINING_H_
#define PWLD_TRAINING_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pwld/editdist.h"
#include "pwld/nbest.h"
#include "pwld/phoneset.h"

namespace pwld {

enum class TrainMode {
  kDdpwld,        // fit F_sub, F_ins, F_del, a and l
  kPwldBaseline,  // keep the baseline feature costs, fit a and l only
};

const char *TrainModeName(TrainMode mode);
/// Accepts "ddpwld", "pwld" and "pwld-baseline".
TrainMode ParseTrainMode(const std::string &name);

struct Bounds {
  double lo = 0.0;
  double hi = 0.0;
};

struct TrainConfig {
  TrainMode mode = TrainMode::kDdpwld;
  Bounds weight_bounds{0.0, 10.0};
  Bounds a_bounds{0.0, 10.0};  // lower end is exclusive
  Bounds l_bounds{0.0, 2.0};
  double cauchy_scale = 1.0;
  double dev_fraction = 0.1;
  std::uint64_t seed = 0;
  int max_iters = 5000;
  double tolerance = 1e-10;
  bool shuffled_control = false;
  /// Re-pick best hypotheses with the trained weights and train once more.
  bool reselect = false;

  void Validate() const;
};

/// Cached regression input for one utterance.
struct TrainingSample {
  OperationFeatures features;
  int ref_length = 0;
  double annotation = 0.0;
};

struct SelectedPath {
  std::size_t record = 0;      // index into the corpus
  std::size_t hypothesis = 0;  // index into that record's N-best list
  OperationFeatures features;
};

struct TrainResult {
  WeightSet weights;
  double train_loss = 0.0;
  double dev_correlation = 0.0;
  int iterations = 0;
  bool converged = false;
  std::optional<double> control_correlation;
  /// Best objective value after every accepted optimizer step.
  std::vector<double> loss_trace;
  std::size_t n_train = 0;
  std::size_t n_dev = 0;
  /// Paths the weights were fitted on (training split).
  std::vector<SelectedPath> train_paths;
  std::vector<std::string> warnings;
};

/// Sum over samples of log(1 + ((prediction - annotation) / c)^2).
/// Throws Error(kEmptyInput) for no samples.
double Objective(const WeightSet &weights,
                 std::span<const TrainingSample> samples, double cauchy_scale);

/// Baseline feature costs with a = 1 and l = 1 for both modes.
WeightSet InitializeWeights(TrainMode mode, const PhoneInventory &inventory);

/// Selects the best hypothesis of every record under `weights` and caches its
/// operation features. Records must be annotated.
std::vector<SelectedPath> SelectPaths(const WeightSet &weights,
                                      std::span<const UtteranceRecord> corpus,
                                      std::span<const std::size_t> records);

/// Splits off a development set, fits the weights to the annotations by
/// minimizing the Cauchy loss with BFGS, and reports the development-set
/// correlation. Throws Error(kEmptyInput) for fewer than 20 annotated
/// records and Error(kUndefinedCorrelation) if all annotations are equal.
TrainResult Train(const TrainConfig &config,
                  const std::vector<UtteranceRecord> &corpus,
                  const PhoneInventory &inventory);

/// JSON run report: losses, correlations, iterations, seed and config.
std::string TrainReportToJson(const TrainConfig &config,
                              const TrainResult &result);

}  // namespace pwld

#endif  // PWLD_TRAINING_H_
