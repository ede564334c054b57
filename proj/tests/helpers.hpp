/* Copyright 2026 The mce Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/


// Conversions between the library types and the plain nested vectors used
// by the oracles.

#pragma once

#include "mce/core.hpp"
#include "oracles.hpp"

namespace testing_helpers {

inline oracle::Mat to_mat(const mce::StochasticMatrix& p) {
  oracle::Mat m = oracle::zeros(p.size());
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = 0; j < p.size(); ++j) m[i][j] = p(i, j);
  return m;
}

inline mce::StochasticMatrix from_mat(const oracle::Mat& m) {
  const auto n = static_cast<Eigen::Index>(m.size());
  Eigen::MatrixXd e(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) e(i, j) = m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  return mce::StochasticMatrix::normalized(std::move(e));
}

inline mce::StochasticMatrix two_state(double a, double b) {
  Eigen::MatrixXd m(2, 2);
  m << 1 - a, a, b, 1 - b;
  return mce::StochasticMatrix(std::move(m));
}

}  // namespace testing_helpers
