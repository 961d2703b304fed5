// src/training.cc

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

#include "pwld/training.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <thread>

#include "json.hpp"
#include "pwld/error.h"
#include "pwld/eval.h"
#include "pwld/optimizer.h"
#include "pwld/scoring.h"

namespace pwld {

const char *TrainModeName(TrainMode mode) {
  return mode == TrainMode::kDdpwld ? "ddpwld" : "pwld";
}

TrainMode ParseTrainMode(const std::string &name) {
  if (name == "ddpwld") return TrainMode::kDdpwld;
  if (name == "pwld" || name == "pwld-baseline") return TrainMode::kPwldBaseline;
  throw Error(ErrorCode::kInvalidArgument, "unknown training mode '" + name + "'");
}

void TrainConfig::Validate() const {
  if (!(dev_fraction > 0.0 && dev_fraction < 0.5))
    throw Error(ErrorCode::kRange, "dev_fraction must lie in (0, 0.5)");
  for (const Bounds *b : {&weight_bounds, &a_bounds, &l_bounds})
    if (!(b->lo <= b->hi))
      throw Error(ErrorCode::kRange, "bounds need lo <= hi");
  if (weight_bounds.lo < 0.0)
    throw Error(ErrorCode::kRange, "feature costs cannot be negative");
  if (a_bounds.lo < 0.0 || !(a_bounds.hi > 0.0))
    throw Error(ErrorCode::kRange, "a must be bounded inside (0, inf)");
  if (l_bounds.lo < 0.0 || l_bounds.hi > 2.0)
    throw Error(ErrorCode::kRange, "l bounds must lie within [0, 2]");
  if (!(cauchy_scale > 0.0))
    throw Error(ErrorCode::kRange, "cauchy_scale must be positive");
  if (max_iters < 1) throw Error(ErrorCode::kRange, "max_iters must be positive");
}

double Objective(const WeightSet &weights,
                 std::span<const TrainingSample> samples, double cauchy_scale) {
  if (samples.empty())
    throw Error(ErrorCode::kEmptyInput, "objective over an empty sample set");
  double loss = 0.0;
  for (const TrainingSample &s : samples) {
    double prediction =
        MapScore(weights, WeightedDistance(weights, s.features), s.ref_length);
    double z = (prediction - s.annotation) / cauchy_scale;
    loss += std::log1p(z * z);
  }
  return loss;
}

WeightSet InitializeWeights(TrainMode, const PhoneInventory &inventory) {
  // Both modes start from the baseline costs; they differ in what is free.
  WeightSet w = FontanWeights(inventory);
  w.a = 1.0;
  w.l = 1.0;
  return w;
}

std::vector<SelectedPath> SelectPaths(const WeightSet &weights,
                                      std::span<const UtteranceRecord> corpus,
                                      std::span<const std::size_t> records) {
  std::vector<SelectedPath> out;
  out.reserve(records.size());
  for (std::size_t idx : records) {
    Selection s = SelectBest(weights, corpus[idx]);
    out.push_back({idx, s.index, ExtractFeatures(s.script, *weights.space)});
  }
  return out;
}

namespace {

// Operation features flattened to (parameter index, count) pairs over the
// concatenation [f_sub | f_ins | f_del].
struct PackedSample {
  std::vector<std::pair<std::uint32_t, double>> terms;
  double log_length = 0.0;
  double annotation = 0.0;
  double fixed_distance = 0.0;  // baseline mode only
};

PackedSample Pack(const OperationFeatures &f, int ref_length, double annotation) {
  PackedSample p;
  const std::size_t n = f.o_sub.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (f.o_sub[i]) p.terms.emplace_back(i, f.o_sub[i]);
    if (f.o_ins[i]) p.terms.emplace_back(n + i, f.o_ins[i]);
    if (f.o_del[i]) p.terms.emplace_back(2 * n + i, f.o_del[i]);
  }
  std::sort(p.terms.begin(), p.terms.end());
  p.log_length = std::log(static_cast<double>(ref_length));
  p.annotation = annotation;
  return p;
}

// Start points on a bound are moved this fraction of the box width inside,
// where the logistic transform is invertible.
constexpr double kInteriorMargin = 1e-2;

double CauchyTerm(double prediction, double annotation, double c) {
  double z = (prediction - annotation) / c;
  return std::log1p(z * z);
}

struct FitOutcome {
  WeightSet weights;
  BfgsResult bfgs;
};

// Cauchy loss over packed samples as a function of unconstrained coordinates
// u, with x = box(u) laid out as [f_sub | f_ins | f_del | a | l] (ddpwld) or
// [a | l] (baseline).
class CauchyFit {
 public:
  CauchyFit(const std::vector<PackedSample> &samples, const BoxTransform &box,
            bool full, std::size_t n_weights, double r, double c)
      : samples_(samples), box_(box), full_(full), r_(r), c_(c) {
    if (full_) {
      postings_.resize(n_weights);
      for (std::size_t s = 0; s < samples_.size(); ++s)
        for (const auto &[idx, count] : samples_[s].terms)
          postings_[idx].emplace_back(s, count);
    }
  }

  double Loss(const Eigen::VectorXd &u) const {
    Eigen::VectorXd x = box_.ToBox(u);
    double total = 0.0;
    for (const PackedSample &s : samples_)
      total += Term(Distance(s, x), Scale(s, x), s.annotation);
    return total;
  }

  // Central differences with step h in u. For a feature cost only the
  // samples that use the feature change, so only those are re-evaluated.
  Eigen::VectorXd Gradient(const Eigen::VectorXd &u, double h) const {
    const Eigen::Index n = u.size();
    Eigen::VectorXd g(n);
    Eigen::VectorXd x = box_.ToBox(u);
    std::vector<double> distance(samples_.size()), scale(samples_.size());
    for (std::size_t s = 0; s < samples_.size(); ++s) {
      distance[s] = Distance(samples_[s], x);
      scale[s] = Scale(samples_[s], x);
    }
    for (std::size_t i = 0; i < postings_.size(); ++i) {
      double up = box_.ToBox(i, u[i] + h) - x[i];
      double down = box_.ToBox(i, u[i] - h) - x[i];
      double diff = 0.0;
      for (const auto &[s, count] : postings_[i])
        diff += Term(distance[s] + up * count, scale[s], samples_[s].annotation) -
                Term(distance[s] + down * count, scale[s], samples_[s].annotation);
      g[i] = diff / (2.0 * h);
    }
    for (Eigen::Index i = static_cast<Eigen::Index>(postings_.size()); i < n; ++i) {
      Eigen::VectorXd probe = u;
      probe[i] = u[i] + h;
      double up = Loss(probe);
      probe[i] = u[i] - h;
      double down = Loss(probe);
      g[i] = (up - down) / (2.0 * h);
    }
    return g;
  }

 private:
  double Distance(const PackedSample &s, const Eigen::VectorXd &x) const {
    if (!full_) return s.fixed_distance;
    double d = 0.0;
    for (const auto &[idx, count] : s.terms) d += x[idx] * count;
    return d;
  }
  double Scale(const PackedSample &s, const Eigen::VectorXd &x) const {
    const double a = x[x.size() - 2];
    const double l = x[x.size() - 1];
    return a * std::exp(-l * s.log_length);
  }
  double Term(double distance, double scale, double annotation) const {
    double prediction = r_ * (1.0 - std::tanh(scale * distance));
    return CauchyTerm(prediction, annotation, c_);
  }

  const std::vector<PackedSample> &samples_;
  const BoxTransform &box_;
  bool full_;
  double r_;
  double c_;
  std::vector<std::vector<std::pair<std::size_t, double>>> postings_;
};

FitOutcome Fit(const TrainConfig &config, const WeightSet &start,
               const std::vector<PackedSample> &samples) {
  const std::size_t n = start.space->size();
  const bool full = config.mode == TrainMode::kDdpwld;
  BfgsOptions options;
  options.max_iters = config.max_iters;
  options.tolerance = config.tolerance;

  std::vector<double> lo, hi;
  Eigen::VectorXd x0;
  if (full) {
    lo.assign(3 * n, config.weight_bounds.lo);
    hi.assign(3 * n, config.weight_bounds.hi);
    x0.resize(3 * n + 2);
    for (std::size_t i = 0; i < n; ++i) {
      x0[i] = start.f_sub[i];
      x0[n + i] = start.f_ins[i];
      x0[2 * n + i] = start.f_del[i];
    }
  } else {
    x0.resize(2);
  }
  lo.push_back(config.a_bounds.lo);
  hi.push_back(config.a_bounds.hi);
  lo.push_back(config.l_bounds.lo);
  hi.push_back(config.l_bounds.hi);
  x0[x0.size() - 2] = start.a;
  x0[x0.size() - 1] = start.l;
  BoxTransform box(lo, hi);

  CauchyFit problem(samples, box, full, full ? 3 * n : 0, start.r,
                    config.cauchy_scale);
  ObjectiveFn loss = [&](const Eigen::VectorXd &u) { return problem.Loss(u); };
  GradientFn gradient = [&](const Eigen::VectorXd &u) {
    return problem.Gradient(u, options.gradient_step);
  };

  FitOutcome out;
  out.bfgs = MinimizeBfgs(loss, gradient, box.FromBox(x0, kInteriorMargin), options);
  Eigen::VectorXd x = box.ToBox(out.bfgs.x);
  out.weights = start;
  if (full) {
    for (std::size_t i = 0; i < n; ++i) {
      out.weights.f_sub[i] = x[i];
      out.weights.f_ins[i] = x[n + i];
      out.weights.f_del[i] = x[2 * n + i];
    }
  }
  out.weights.a = x[x.size() - 2];
  out.weights.l = x[x.size() - 1];
  return out;
}

std::vector<PackedSample> PackPaths(const std::vector<SelectedPath> &paths,
                                    const std::vector<UtteranceRecord> &corpus,
                                    const std::vector<double> &labels,
                                    const WeightSet &fixed) {
  std::vector<PackedSample> out;
  out.reserve(paths.size());
  for (const SelectedPath &p : paths) {
    const UtteranceRecord &rec = corpus[p.record];
    PackedSample s = Pack(p.features, static_cast<int>(rec.reference.size()),
                          labels[p.record]);
    s.fixed_distance = WeightedDistance(fixed, p.features);
    out.push_back(std::move(s));
  }
  return out;
}

double DevCorrelation(const WeightSet &weights,
                      const std::vector<SelectedPath> &paths,
                      const std::vector<UtteranceRecord> &corpus,
                      const std::vector<double> &labels) {
  std::vector<double> predictions, annotations;
  for (const SelectedPath &p : paths) {
    const UtteranceRecord &rec = corpus[p.record];
    predictions.push_back(MapScore(weights, WeightedDistance(weights, p.features),
                                   static_cast<int>(rec.reference.size())));
    annotations.push_back(labels[p.record]);
  }
  return Pearson(predictions, annotations);
}

// One complete fit on a fixed split with the given label vector.
TrainResult RunOnce(const TrainConfig &config,
                    const std::vector<UtteranceRecord> &corpus,
                    const PhoneInventory &inventory,
                    const std::vector<std::size_t> &train_idx,
                    const std::vector<std::size_t> &dev_idx,
                    const std::vector<double> &labels) {
  const WeightSet baseline = FontanWeights(inventory);
  WeightSet start = InitializeWeights(config.mode, inventory);

  auto train_paths = SelectPaths(baseline, corpus, train_idx);
  auto dev_paths = SelectPaths(baseline, corpus, dev_idx);

  TrainResult result;
  result.n_train = train_idx.size();
  result.n_dev = dev_idx.size();
  int passes = config.reselect ? 2 : 1;
  for (int pass = 0; pass < passes; ++pass) {
    if (pass > 0) {
      train_paths = SelectPaths(start, corpus, train_idx);
      dev_paths = SelectPaths(start, corpus, dev_idx);
    }
    auto packed = PackPaths(train_paths, corpus, labels, baseline);
    FitOutcome fit = Fit(config, start, packed);
    start = fit.weights;
    result.iterations += fit.bfgs.iterations;
    result.converged = fit.bfgs.converged;
    // Reselection changes the objective, so only the last pass's trace is
    // comparable step to step.
    result.loss_trace = fit.bfgs.trace;
    result.train_loss = fit.bfgs.value;
  }
  result.weights = start;
  result.weights.Validate();
  result.train_paths = std::move(train_paths);
  if (!result.converged)
    result.warnings.push_back("optimizer stopped at max_iters=" +
                              std::to_string(config.max_iters) +
                              " before converging; weights are the best found");
  result.dev_correlation = DevCorrelation(result.weights, dev_paths, corpus, labels);
  return result;
}

}  // namespace

TrainResult Train(const TrainConfig &config,
                  const std::vector<UtteranceRecord> &corpus,
                  const PhoneInventory &inventory) {
  config.Validate();
  std::vector<std::size_t> annotated;
  std::vector<double> labels(corpus.size(), 0.0);
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    corpus[i].Validate(5.0);
    if (corpus[i].annotation) {
      annotated.push_back(i);
      labels[i] = *corpus[i].annotation;
    }
  }
  if (annotated.size() < 20)
    throw Error(ErrorCode::kEmptyInput,
                "training needs at least 20 annotated records, got " +
                    std::to_string(annotated.size()));
  bool all_equal = std::all_of(annotated.begin(), annotated.end(), [&](std::size_t i) {
    return labels[i] == labels[annotated.front()];
  });
  if (all_equal)
    throw Error(ErrorCode::kUndefinedCorrelation,
                "all annotations are equal; correlation is undefined");

  std::mt19937_64 rng(config.seed);
  std::vector<std::size_t> order = annotated;
  std::shuffle(order.begin(), order.end(), rng);
  std::size_t n_dev = static_cast<std::size_t>(
      std::llround(config.dev_fraction * static_cast<double>(order.size())));
  n_dev = std::clamp<std::size_t>(n_dev, 2, order.size() - 2);
  std::vector<std::size_t> dev_idx(order.begin(), order.begin() + n_dev);
  std::vector<std::size_t> train_idx(order.begin() + n_dev, order.end());
  std::sort(dev_idx.begin(), dev_idx.end());
  std::sort(train_idx.begin(), train_idx.end());

  TrainResult result = RunOnce(config, corpus, inventory, train_idx, dev_idx, labels);

  if (config.shuffled_control) {
    std::vector<double> permuted = labels;
    std::vector<double> values;
    for (std::size_t i : annotated) values.push_back(labels[i]);
    std::shuffle(values.begin(), values.end(), rng);
    for (std::size_t k = 0; k < annotated.size(); ++k)
      permuted[annotated[k]] = values[k];
    TrainResult control =
        RunOnce(config, corpus, inventory, train_idx, dev_idx, permuted);
    result.control_correlation = control.dev_correlation;
  }
  return result;
}

std::string TrainReportToJson(const TrainConfig &config,
                              const TrainResult &result) {
  nlohmann::ordered_json doc;
  nlohmann::ordered_json cfg;
  cfg["mode"] = TrainModeName(config.mode);
  cfg["weight_bounds"] = {config.weight_bounds.lo, config.weight_bounds.hi};
  cfg["a_bounds"] = {config.a_bounds.lo, config.a_bounds.hi};
  cfg["l_bounds"] = {config.l_bounds.lo, config.l_bounds.hi};
  cfg["cauchy_scale"] = config.cauchy_scale;
  cfg["dev_fraction"] = config.dev_fraction;
  cfg["seed"] = config.seed;
  cfg["max_iters"] = config.max_iters;
  cfg["tolerance"] = config.tolerance;
  cfg["shuffled_control"] = config.shuffled_control;
  cfg["reselect"] = config.reselect;
  doc["config"] = cfg;
  doc["seed"] = config.seed;
  doc["n_train"] = result.n_train;
  doc["n_dev"] = result.n_dev;
  doc["train_loss"] = result.train_loss;
  doc["dev_correlation"] = result.dev_correlation;
  doc["control_correlation"] = result.control_correlation
                                   ? nlohmann::ordered_json(*result.control_correlation)
                                   : nlohmann::ordered_json(nullptr);
  doc["iterations"] = result.iterations;
  doc["converged"] = result.converged;
  doc["loss_trace"] = result.loss_trace;
  doc["warnings"] = result.warnings;
  return doc.dump(1) + "\n";
}

}  // namespace pwld
