// include/pwld/eval.h

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

#ifndef PWLD_EVAL_H_
#define PWLD_EVAL_H_

#include <span>
#include <string>
#include <utility>
#include <vector>

namespace pwld {

/// Pearson product-moment correlation. Throws Error(kInvalidArgument) on
/// length mismatch or fewer than two items, Error(kUndefinedCorrelation) when
/// either vector is constant.
double Pearson(std::span<const double> x, std::span<const double> y);

struct ErrorStats {
  double mean = 0.0;
  double std = 0.0;  // population standard deviation
};

ErrorStats ComputeErrorStats(std::span<const double> errors);

/// Item i is an outlier when at least `k_models_required` models have
/// error[i] > mean + z * std of their own errors.
std::vector<bool> MarkOutliers(
    const std::vector<std::vector<double>> &errors_by_model,
    int k_models_required = 2, double z = 2.0);

struct ModelPredictions {
  std::string name;
  std::vector<double> predictions;
};

struct ModelReport {
  std::string name;
  double correlation_all = 0.0;
  double correlation_clean = 0.0;
  ErrorStats errors;  // absolute prediction errors, all items
};

struct EvalReport {
  std::size_t n_total = 0;
  std::size_t n_outliers = 0;
  std::vector<ModelReport> models;
  std::vector<bool> outliers;
};

/// Correlations with and without outliers for every model. Outlier removal
/// needs at least `k_models_required` models and is skipped otherwise.
EvalReport Evaluate(const std::vector<ModelPredictions> &models,
                    std::span<const double> annotations,
                    int k_models_required = 2, double z = 2.0);

std::string EvalReportToJson(const EvalReport &report);
/// Two-column table: correlation on all items and with outliers removed.
std::string EvalReportToText(const EvalReport &report);

}  // namespace pwld

#endif  // PWLD_EVAL_H_
