// Copyright 2026 The qsop-lab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qsop/usd.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qsop {

namespace {

void check_theta(double theta) {
  if (!(theta >= 0.0 && theta <= std::numbers::pi / 4 + 1e-15)) {
    throw std::invalid_argument("usd: theta must lie in [0, pi/4]");
  }
}

Eigen::Index dim(UsdVariant v) { return v == UsdVariant::Ancilla ? 4 : 3; }

}  // namespace

Eigen::MatrixXd usd_unitary(double theta, UsdVariant variant) {
  check_theta(theta);
  const double t = std::tan(theta);
  const double r = std::sqrt(std::max(0.0, std::cos(2 * theta))) / std::cos(theta);
  Eigen::MatrixXd u = Eigen::MatrixXd::Identity(dim(variant), dim(variant));
  // |anc 0, q 0> and |anc 1, q 0> mix; |anc *, q 1> are untouched.
  u(0, 0) = t;
  u(2, 0) = r;
  u(0, 2) = r;
  u(2, 2) = -t;
  return u;
}

Eigen::VectorXcd usd_input(double theta, int bit, UsdVariant variant) {
  check_theta(theta);
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(dim(variant));
  v(0) = std::cos(theta);
  v(1) = (bit == 0 ? 1.0 : -1.0) * std::sin(theta);
  return v;
}

UsdDistribution usd_measure(double theta, UsdVariant variant, const Eigen::VectorXcd& input) {
  const Eigen::MatrixXd u = usd_unitary(theta, variant);
  if (input.size() != u.cols()) throw std::invalid_argument("usd: input has wrong dimension");
  const Eigen::VectorXcd out = u.cast<std::complex<double>>() * input;
  const double s = std::sqrt(0.5);
  UsdDistribution d;
  d.conclusive0 = std::norm(s * (out(0) + out(1)));
  d.conclusive1 = std::norm(s * (out(0) - out(1)));
  for (Eigen::Index i = 2; i < out.size(); ++i) d.inconclusive += std::norm(out(i));
  return d;
}

}  // namespace qsop
