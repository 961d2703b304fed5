// tests/test_optimizer.cc

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

#include <cmath>

#include "doctest.h"
#include "pwld/optimizer.h"

namespace pwld {
namespace {

double Rosenbrock(const Eigen::VectorXd &x) {
  double s = 0;
  for (int i = 0; i + 1 < x.size(); ++i)
    s += 100 * std::pow(x[i + 1] - x[i] * x[i], 2) + std::pow(1 - x[i], 2);
  return s;
}

TEST_CASE("central differences match an analytic gradient") {
  Eigen::VectorXd x(3);
  x << 0.3, -1.2, 2.0;
  auto g = CentralDifferenceGradient(Rosenbrock, x, 1e-5);
  // d/dx0 = -400 x0 (x1 - x0^2) - 2 (1 - x0)
  double g0 = -400 * x[0] * (x[1] - x[0] * x[0]) - 2 * (1 - x[0]);
  CHECK(g[0] == doctest::Approx(g0).epsilon(1e-6));
}

TEST_CASE("bfgs solves a convex quadratic") {
  Eigen::VectorXd target(4);
  target << 1, -2, 3, 0.5;
  auto f = [&](const Eigen::VectorXd &x) {
    Eigen::VectorXd d = x - target;
    return d.dot(d) + 0.5 * d[0] * d[1];
  };
  BfgsOptions opts;
  auto result = MinimizeBfgs(f, Eigen::VectorXd::Zero(4), opts);
  CHECK((result.x - target).norm() < 1e-4);
  CHECK(result.value < 1e-8);
}

TEST_CASE("bfgs solves the rosenbrock valley") {
  BfgsOptions opts;
  opts.max_iters = 2000;
  opts.tolerance = 1e-14;
  Eigen::VectorXd x0(2);
  x0 << -1.2, 1.0;
  auto result = MinimizeBfgs(Rosenbrock, x0, opts);
  CHECK(result.x[0] == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(result.x[1] == doctest::Approx(1.0).epsilon(1e-3));
  REQUIRE(result.trace.size() >= 2);
  for (std::size_t i = 1; i < result.trace.size(); ++i)
    CHECK(result.trace[i] <= result.trace[i - 1]);
  CHECK(result.trace.back() == result.value);
}

TEST_CASE("thread count does not change the result") {
  Eigen::VectorXd x0(3);
  x0 << -1, 0.5, 2;
  BfgsOptions opts;
  auto one = MinimizeBfgs(Rosenbrock, x0, opts, 1);
  auto three = MinimizeBfgs(Rosenbrock, x0, opts, 3);
  CHECK(one.x == three.x);
  CHECK(one.iterations == three.iterations);
}

TEST_CASE("box transform") {
  BoxTransform box({0.0, -1.0}, {10.0, 2.0});
  Eigen::VectorXd x(2);
  x << 3.5, 0.25;
  auto back = box.ToBox(box.FromBox(x));
  CHECK(back[0] == doctest::Approx(3.5).epsilon(1e-12));
  CHECK(back[1] == doctest::Approx(0.25).epsilon(1e-12));

  for (double u : {-1e6, -30.0, 0.0, 30.0, 1e6}) {
    double v = box.ToBox(0, u);
    CHECK(v >= 0.0);
    CHECK(v <= 10.0);
  }
  Eigen::VectorXd edge(2);
  edge << 0.0, 2.0;
  auto inside = box.ToBox(box.FromBox(edge, 0.01));
  CHECK(inside[0] == doctest::Approx(0.1));
  CHECK(inside[1] == doctest::Approx(1.97));
}

}  // namespace
}  // namespace pwld
