// src/eval.cc

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

#include "pwld/eval.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "json.hpp"
#include "pwld/error.h"

namespace pwld {

double Pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size())
    throw Error(ErrorCode::kInvalidArgument, "correlation inputs differ in length");
  const std::size_t n = x.size();
  if (n < 2)
    throw Error(ErrorCode::kInvalidArgument, "correlation needs at least two items");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double dx = x[i] - mx, dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx <= 0.0 || syy <= 0.0)
    throw Error(ErrorCode::kUndefinedCorrelation,
                "correlation undefined for a constant vector");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

ErrorStats ComputeErrorStats(std::span<const double> errors) {
  ErrorStats s;
  if (errors.empty()) return s;
  for (double e : errors) s.mean += e;
  s.mean /= static_cast<double>(errors.size());
  double var = 0.0;
  for (double e : errors) var += (e - s.mean) * (e - s.mean);
  s.std = std::sqrt(var / static_cast<double>(errors.size()));
  return s;
}

std::vector<bool> MarkOutliers(
    const std::vector<std::vector<double>> &errors_by_model,
    int k_models_required, double z) {
  if (k_models_required < 1 ||
      errors_by_model.size() < static_cast<std::size_t>(k_models_required))
    throw Error(ErrorCode::kInvalidArgument,
                "outlier marking needs at least " +
                    std::to_string(k_models_required) + " models, got " +
                    std::to_string(errors_by_model.size()));
  const std::size_t n = errors_by_model.front().size();
  std::vector<int> votes(n, 0);
  for (const auto &errors : errors_by_model) {
    if (errors.size() != n)
      throw Error(ErrorCode::kInvalidArgument, "models differ in item count");
    ErrorStats s = ComputeErrorStats(errors);
    double threshold = s.mean + z * s.std;
    for (std::size_t i = 0; i < n; ++i)
      if (errors[i] > threshold) ++votes[i];
  }
  std::vector<bool> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = votes[i] >= k_models_required;
  return out;
}

EvalReport Evaluate(const std::vector<ModelPredictions> &models,
                    std::span<const double> annotations, int k_models_required,
                    double z) {
  if (models.empty()) throw Error(ErrorCode::kEmptyInput, "no models to evaluate");
  const std::size_t n = annotations.size();
  std::vector<std::vector<double>> errors;
  for (const ModelPredictions &m : models) {
    if (m.predictions.size() != n)
      throw Error(ErrorCode::kInvalidArgument,
                  "model '" + m.name + "' has " +
                      std::to_string(m.predictions.size()) +
                      " predictions for " + std::to_string(n) + " annotations");
    std::vector<double> e(n);
    for (std::size_t i = 0; i < n; ++i)
      e[i] = std::abs(m.predictions[i] - annotations[i]);
    errors.push_back(std::move(e));
  }

  EvalReport report;
  report.n_total = n;
  report.outliers.assign(n, false);
  if (models.size() >= static_cast<std::size_t>(std::max(k_models_required, 2)))
    report.outliers = MarkOutliers(errors, k_models_required, z);
  for (bool o : report.outliers) report.n_outliers += o;

  std::vector<double> clean_y;
  for (std::size_t i = 0; i < n; ++i)
    if (!report.outliers[i]) clean_y.push_back(annotations[i]);
  for (std::size_t k = 0; k < models.size(); ++k) {
    ModelReport r;
    r.name = models[k].name;
    r.correlation_all = Pearson(models[k].predictions, annotations);
    std::vector<double> clean_p;
    for (std::size_t i = 0; i < n; ++i)
      if (!report.outliers[i]) clean_p.push_back(models[k].predictions[i]);
    r.correlation_clean = Pearson(clean_p, clean_y);
    r.errors = ComputeErrorStats(errors[k]);
    report.models.push_back(std::move(r));
  }
  return report;
}

std::string EvalReportToJson(const EvalReport &report) {
  nlohmann::ordered_json doc;
  doc["n_total"] = report.n_total;
  doc["n_outliers"] = report.n_outliers;
  doc["models"] = nlohmann::ordered_json::array();
  for (const ModelReport &m : report.models) {
    nlohmann::ordered_json item;
    item["name"] = m.name;
    item["correlation_all"] = m.correlation_all;
    item["correlation_clean"] = m.correlation_clean;
    item["error_mean"] = m.errors.mean;
    item["error_std"] = m.errors.std;
    doc["models"].push_back(item);
  }
  return doc.dump(1) + "\n";
}

std::string EvalReportToText(const EvalReport &report) {
  std::size_t width = 6;
  for (const ModelReport &m : report.models) width = std::max(width, m.name.size());
  std::ostringstream out;
  char buf[256];
  std::snprintf(buf, sizeof buf, "%-*s  %6s  %16s\n", static_cast<int>(width),
                "System", "All", "Outliers removed");
  out << buf;
  for (const ModelReport &m : report.models) {
    std::snprintf(buf, sizeof buf, "%-*s  %6.2f  %16.2f\n",
                  static_cast<int>(width), m.name.c_str(), m.correlation_all,
                  m.correlation_clean);
    out << buf;
  }
  out << report.n_outliers << " of " << report.n_total
      << " items marked as outliers\n";
  return out.str();
}

}  // namespace pwld
