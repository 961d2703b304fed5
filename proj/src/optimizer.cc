// src/optimizer.cc

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

#include "pwld/optimizer.h"

#include <algorithm>
#include <cmath>
#include <thread>

#include "pwld/error.h"

namespace pwld {

Eigen::VectorXd CentralDifferenceGradient(const ObjectiveFn &f,
                                          const Eigen::VectorXd &x,
                                          double step) {
  Eigen::VectorXd g(x.size());
  Eigen::VectorXd probe = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    probe[i] = x[i] + step;
    double up = f(probe);
    probe[i] = x[i] - step;
    double down = f(probe);
    probe[i] = x[i];
    g[i] = (up - down) / (2.0 * step);
  }
  return g;
}

namespace {

Eigen::VectorXd Gradient(const ObjectiveFn &f, const Eigen::VectorXd &x,
                         double step, int threads) {
  if (threads <= 1 || x.size() < 2 * threads)
    return CentralDifferenceGradient(f, x, step);
  Eigen::VectorXd g(x.size());
  std::vector<std::thread> workers;
  for (int t = 0; t < threads; ++t) {
    workers.emplace_back([&, t] {
      Eigen::VectorXd probe = x;
      for (Eigen::Index i = t; i < x.size(); i += threads) {
        probe[i] = x[i] + step;
        double up = f(probe);
        probe[i] = x[i] - step;
        double down = f(probe);
        probe[i] = x[i];
        g[i] = (up - down) / (2.0 * step);
      }
    });
  }
  for (auto &w : workers) w.join();
  return g;
}

}  // namespace

BfgsResult MinimizeBfgs(const ObjectiveFn &f, const Eigen::VectorXd &x0,
                        const BfgsOptions &options, int threads) {
  GradientFn gradient = [&](const Eigen::VectorXd &x) {
    return Gradient(f, x, options.gradient_step, threads);
  };
  return MinimizeBfgs(f, gradient, x0, options);
}

BfgsResult MinimizeBfgs(const ObjectiveFn &f, const GradientFn &gradient,
                        const Eigen::VectorXd &x0, const BfgsOptions &options) {
  const Eigen::Index n = x0.size();
  BfgsResult result;
  result.x = x0;
  result.value = f(x0);
  result.trace.push_back(result.value);
  if (!std::isfinite(result.value))
    throw Error(ErrorCode::kInvalidArgument, "objective is not finite at the start point");

  Eigen::VectorXd g = gradient(result.x);
  Eigen::MatrixXd h = Eigen::MatrixXd::Identity(n, n);
  bool scaled = false;

  for (int iter = 0; iter < options.max_iters; ++iter) {
    if (g.lpNorm<Eigen::Infinity>() < options.gradient_tolerance) {
      result.converged = true;
      break;
    }
    Eigen::VectorXd p = -h * g;
    double slope = g.dot(p);
    if (!(slope < 0.0)) {
      h.setIdentity();
      p = -g;
      slope = -g.squaredNorm();
    }
    // Keep the very first step modest: the identity metric knows nothing
    // about the objective's scale.
    double alpha = scaled ? 1.0 : std::min(1.0, 1.0 / p.lpNorm<Eigen::Infinity>());
    Eigen::VectorXd x_new;
    double f_new = result.value;
    bool accepted = false;
    for (int k = 0; k < 60; ++k, alpha *= 0.5) {
      x_new = result.x + alpha * p;
      f_new = f(x_new);
      if (std::isfinite(f_new) && f_new <= result.value + 1e-4 * alpha * slope) {
        accepted = true;
        break;
      }
    }
    result.iterations = iter + 1;
    if (!accepted || f_new >= result.value) {
      result.converged = true;
      break;
    }

    Eigen::VectorXd g_new = gradient(x_new);
    Eigen::VectorXd s = x_new - result.x;
    Eigen::VectorXd y = g_new - g;
    double decrease = result.value - f_new;
    result.x = x_new;
    result.value = f_new;
    result.trace.push_back(f_new);
    g = g_new;

    double sy = s.dot(y);
    if (sy > 1e-12 * s.norm() * y.norm()) {
      if (!scaled) {
        h *= sy / y.squaredNorm();
        scaled = true;
      }
      double rho = 1.0 / sy;
      Eigen::VectorXd hy = h * y;
      // H' = (I - rho s y^T) H (I - rho y s^T) + rho s s^T, expanded.
      h += (rho * rho * y.dot(hy) + rho) * (s * s.transpose()) -
           rho * (hy * s.transpose() + s * hy.transpose());
    }
    if (decrease <= options.tolerance * (1.0 + std::abs(f_new))) {
      result.converged = true;
      break;
    }
  }
  return result;
}

BoxTransform::BoxTransform(std::vector<double> lo, std::vector<double> hi)
    : lo_(std::move(lo)), hi_(std::move(hi)) {
  if (lo_.size() != hi_.size())
    throw Error(ErrorCode::kInvalidArgument, "bound vectors differ in length");
  for (std::size_t i = 0; i < lo_.size(); ++i)
    if (!(lo_[i] <= hi_[i]))
      throw Error(ErrorCode::kInvalidArgument, "lower bound above upper bound");
}

double BoxTransform::ToBox(std::size_t i, double u) const {
  double s = 1.0 / (1.0 + std::exp(-u));
  return std::clamp(lo_[i] + (hi_[i] - lo_[i]) * s, lo_[i], hi_[i]);
}

Eigen::VectorXd BoxTransform::ToBox(const Eigen::VectorXd &u) const {
  Eigen::VectorXd x(u.size());
  for (Eigen::Index i = 0; i < u.size(); ++i)
    x[i] = ToBox(static_cast<std::size_t>(i), u[i]);
  return x;
}

Eigen::VectorXd BoxTransform::FromBox(const Eigen::VectorXd &x,
                                      double margin) const {
  Eigen::VectorXd u(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    double width = hi_[i] - lo_[i];
    if (width <= 0.0) {
      u[i] = 0.0;
      continue;
    }
    double frac = std::clamp((x[i] - lo_[i]) / width, margin, 1.0 - margin);
    u[i] = std::log(frac / (1.0 - frac));
  }
  return u;
}

}  // namespace pwld
