// include/pwld/optimizer.h

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

#ifndef PWLD_OPTIMIZER_H_
#define PWLD_OPTIMIZER_H_

#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace pwld {

using ObjectiveFn = std::function<double(const Eigen::VectorXd &)>;
using GradientFn = std::function<Eigen::VectorXd(const Eigen::VectorXd &)>;

struct BfgsOptions {
  int max_iters = 500;
  /// Stop when an accepted step lowers the objective by less than
  /// tolerance * (1 + |f|).
  double tolerance = 1e-10;
  double gradient_tolerance = 1e-9;
  /// Central-difference step.
  double gradient_step = 1e-5;
};

struct BfgsResult {
  Eigen::VectorXd x;
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
  /// Objective after the start point and after every accepted step.
  std::vector<double> trace;
};

/// (f(x + h e_i) - f(x - h e_i)) / 2h for every coordinate i.
Eigen::VectorXd CentralDifferenceGradient(const ObjectiveFn &f,
                                          const Eigen::VectorXd &x, double step);

/// Unconstrained BFGS with an Armijo backtracking line search and numerical
/// gradients. Coordinates are differentiated in parallel when `threads` > 1;
/// results do not depend on the thread count.
BfgsResult MinimizeBfgs(const ObjectiveFn &f, const Eigen::VectorXd &x0,
                        const BfgsOptions &options, int threads = 1);

/// Same, with a caller-supplied gradient.
BfgsResult MinimizeBfgs(const ObjectiveFn &f, const GradientFn &gradient,
                        const Eigen::VectorXd &x0, const BfgsOptions &options);

/// Maps unconstrained coordinates onto boxes [lo_i, hi_i] through a logistic
/// function, so the box constraints hold for any coordinate value.
class BoxTransform {
 public:
  BoxTransform(std::vector<double> lo, std::vector<double> hi);

  std::size_t size() const { return lo_.size(); }
  Eigen::VectorXd ToBox(const Eigen::VectorXd &u) const;
  double ToBox(std::size_t i, double u) const;
  /// Inverse of ToBox. Points on or outside a bound are first pulled inside
  /// by `margin` of the box width.
  Eigen::VectorXd FromBox(const Eigen::VectorXd &x, double margin = 1e-3) const;

 private:
  std::vector<double> lo_;
  std::vector<double> hi_;
};

}  // namespace pwld

#endif  // PWLD_OPTIMIZER_H_
