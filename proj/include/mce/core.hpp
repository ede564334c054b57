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

// Core domain types: finite state spaces, stochastic vectors and matrices,
// trajectory data, and the norms used to measure estimation error.

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace mce {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A value lies outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

using State = std::uint32_t;
using Count = std::int64_t;

/// Absolute tolerance on the sum of a stochastic vector or matrix row.
inline constexpr double kStochasticTolerance = 1e-12;

class StateSpace {
 public:
  explicit StateSpace(std::size_t size) : size_(size) {
    if (size == 0) throw DomainError("state space must contain at least one state");
  }
  std::size_t size() const { return size_; }
  bool contains(std::size_t s) const { return s < size_; }
  friend bool operator==(StateSpace, StateSpace) = default;

 private:
  std::size_t size_;
};

namespace detail {

inline void check_stochastic_row(std::span<const double> w, const char* what) {
  double sum = 0.0;
  for (double x : w) {
    if (!(x >= 0.0)) throw DomainError(std::string(what) + ": negative or NaN entry");
    sum += x;
  }
  if (std::abs(sum - 1.0) > kStochasticTolerance)
    throw DomainError(std::string(what) + ": entries sum to " + std::to_string(sum) + ", not 1");
}

}  // namespace detail

/// A stochastic vector over a finite state space.
///
/// The constructor validates and never rescales; use `normalized` to build
/// one from arbitrary nonnegative weights.
class Distribution {
 public:
  explicit Distribution(std::vector<double> weights) : w_(std::move(weights)) {
    if (w_.empty()) throw DomainError("distribution over an empty state space");
    detail::check_stochastic_row(w_, "distribution");
  }

  static Distribution normalized(std::vector<double> weights) {
    double sum = 0.0;
    for (double x : weights) {
      if (!(x >= 0.0)) throw DomainError("cannot normalize negative or NaN weights");
      sum += x;
    }
    if (!(sum > 0.0)) throw DomainError("cannot normalize weights with zero sum");
    for (double& x : weights) x /= sum;
    return Distribution(std::move(weights));
  }

  static Distribution uniform(std::size_t n) {
    if (n == 0) throw DomainError("distribution over an empty state space");
    return Distribution(std::vector<double>(n, 1.0 / static_cast<double>(n)));
  }

  static Distribution point_mass(std::size_t n, std::size_t state) {
    if (state >= n) throw DomainError("point mass outside the state space");
    std::vector<double> w(n, 0.0);
    w[state] = 1.0;
    return Distribution(std::move(w));
  }

  std::size_t size() const { return w_.size(); }
  double operator[](std::size_t i) const { return w_[i]; }
  std::span<const double> weights() const { return w_; }
  const std::vector<double>& vector() const { return w_; }
  double min() const { return *std::min_element(w_.begin(), w_.end()); }

  friend bool operator==(const Distribution&, const Distribution&) = default;

 private:
  std::vector<double> w_;
};

/// A square row-stochastic matrix.
class StochasticMatrix {
 public:
  explicit StochasticMatrix(Eigen::MatrixXd m) : m_(std::move(m)) {
    if (m_.rows() == 0) throw DomainError("stochastic matrix over an empty state space");
    if (m_.rows() != m_.cols()) throw DimensionError("stochastic matrix must be square");
    std::vector<double> row(static_cast<std::size_t>(m_.cols()));
    for (Eigen::Index i = 0; i < m_.rows(); ++i) {
      for (Eigen::Index j = 0; j < m_.cols(); ++j) row[static_cast<std::size_t>(j)] = m_(i, j);
      detail::check_stochastic_row(row, "stochastic matrix row");
    }
  }

  /// Rescales every row to sum to one. Rows must be nonnegative with a
  /// positive sum.
  static StochasticMatrix normalized(Eigen::MatrixXd m) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      if ((m.row(i).array() < 0.0).any() || m.row(i).hasNaN())
        throw DomainError("cannot normalize a row with negative or NaN entries");
      const double s = m.row(i).sum();
      if (!(s > 0.0)) throw DomainError("cannot normalize a row with zero sum");
      m.row(i) /= s;
    }
    return StochasticMatrix(std::move(m));
  }

  static StochasticMatrix identity(std::size_t n) {
    const auto k = static_cast<Eigen::Index>(n);
    return StochasticMatrix(Eigen::MatrixXd::Identity(k, k));
  }

  static StochasticMatrix uniform(std::size_t n) {
    const auto k = static_cast<Eigen::Index>(n);
    return StochasticMatrix(Eigen::MatrixXd::Constant(k, k, 1.0 / static_cast<double>(n)));
  }

  std::size_t size() const { return static_cast<std::size_t>(m_.rows()); }
  double operator()(std::size_t i, std::size_t j) const {
    return m_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }
  const Eigen::MatrixXd& matrix() const { return m_; }
  Distribution row(std::size_t i) const {
    const auto r = m_.row(static_cast<Eigen::Index>(i));
    return Distribution(std::vector<double>(r.begin(), r.end()));
  }

  friend bool operator==(const StochasticMatrix& a, const StochasticMatrix& b) {
    return a.m_.rows() == b.m_.rows() && a.m_ == b.m_;
  }

 private:
  Eigen::MatrixXd m_;
};

/// The M x (T+1) data matrix of observed states, column t = 0..T.
class TrajectoryMatrix {
 public:
  TrajectoryMatrix(std::size_t chains, std::size_t horizon, std::size_t states,
                   std::vector<State> data)
      : chains_(chains), horizon_(horizon), states_(states), data_(std::move(data)) {
    if (chains_ < 1) throw DomainError("trajectory matrix needs at least one chain");
    if (horizon_ < 1) throw DomainError("trajectory matrix needs horizon T >= 1");
    if (states_ < 1) throw DomainError("trajectory matrix needs at least one state");
    if (data_.size() != chains_ * (horizon_ + 1))
      throw DimensionError("trajectory data has " + std::to_string(data_.size()) +
                           " entries, expected M*(T+1) = " +
                           std::to_string(chains_ * (horizon_ + 1)));
    for (State s : data_)
      if (s >= states_) throw DomainError("trajectory state " + std::to_string(s) + " out of range");
  }

  std::size_t chain_count() const { return chains_; }
  std::size_t horizon() const { return horizon_; }
  std::size_t state_count() const { return states_; }
  StateSpace state_space() const { return StateSpace(states_); }

  std::span<const State> row(std::size_t m) const {
    return std::span<const State>(data_).subspan(m * (horizon_ + 1), horizon_ + 1);
  }
  State operator()(std::size_t m, std::size_t t) const { return data_[m * (horizon_ + 1) + t]; }
  const std::vector<State>& data() const { return data_; }

  friend bool operator==(const TrajectoryMatrix&, const TrajectoryMatrix&) = default;

 private:
  std::size_t chains_;
  std::size_t horizon_;
  std::size_t states_;
  std::vector<State> data_;
};

// ---------------------------------------------------------------------------
// Norms
// ---------------------------------------------------------------------------

/// Maximum row sum norm of a - b, i.e. max_i ||a_i - b_i||_1. For two
/// stochastic matrices this is twice the largest rowwise total variation.
inline double sup_norm_matrix(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw DimensionError("sup_norm_matrix: dimension mismatch");
  // Neumaier-compensated row sums; plain summation drifts by a few ulp on
  // long rows.
  double best = 0.0;
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    double sum = 0.0, comp = 0.0;
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      const double x = std::abs(a(i, j) - b(i, j));
      const double t = sum + x;
      comp += std::abs(sum) >= x ? (sum - t) + x : (x - t) + sum;
      sum = t;
    }
    best = std::max(best, sum + comp);
  }
  return best;
}

inline double sup_norm_matrix(const StochasticMatrix& a, const StochasticMatrix& b) {
  return sup_norm_matrix(a.matrix(), b.matrix());
}

/// max_i |a_i - b_i|
inline double sup_norm_vector(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw DimensionError("sup_norm_vector: dimension mismatch");
  double best = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) best = std::max(best, std::abs(a[i] - b[i]));
  return best;
}

inline double sup_norm_vector(const Distribution& a, const Distribution& b) {
  return sup_norm_vector(a.weights(), b.weights());
}

// ---------------------------------------------------------------------------
// Irreducibility and aperiodicity
// ---------------------------------------------------------------------------

namespace detail {

// States reachable from `start` along positive entries (start included).
inline std::vector<bool> reachable(const Eigen::MatrixXd& m, std::size_t start, bool transpose) {
  const auto n = static_cast<std::size_t>(m.rows());
  std::vector<bool> seen(n, false);
  std::vector<std::size_t> stack{start};
  seen[start] = true;
  while (!stack.empty()) {
    const auto i = stack.back();
    stack.pop_back();
    for (std::size_t j = 0; j < n; ++j) {
      const double w = transpose ? m(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i))
                                 : m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      if (w > 0.0 && !seen[j]) {
        seen[j] = true;
        stack.push_back(j);
      }
    }
  }
  return seen;
}

}  // namespace detail

/// True iff the support graph of P is strongly connected.
inline bool is_irreducible(const StochasticMatrix& p) {
  const auto fwd = detail::reachable(p.matrix(), 0, false);
  const auto bwd = detail::reachable(p.matrix(), 0, true);
  return std::all_of(fwd.begin(), fwd.end(), [](bool b) { return b; }) &&
         std::all_of(bwd.begin(), bwd.end(), [](bool b) { return b; });
}

/// True iff P is irreducible and aperiodic.
///
/// Irreducibility is a strong-connectivity check on the support graph. The
/// period is the gcd over support edges (i, j) of level(i) + 1 - level(j),
/// where level is the BFS distance from state 0; the chain is aperiodic iff
/// that gcd equals 1. Equivalent to P being primitive.
inline bool validate_irreducible_aperiodic(const StochasticMatrix& p) {
  if (!is_irreducible(p)) return false;
  const auto n = p.size();
  const auto& m = p.matrix();
  std::vector<std::int64_t> level(n, -1);
  std::vector<std::size_t> queue{0};
  level[0] = 0;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const auto i = queue[head];
    for (std::size_t j = 0; j < n; ++j)
      if (m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) > 0.0 && level[j] < 0) {
        level[j] = level[i] + 1;
        queue.push_back(j);
      }
  }
  std::int64_t period = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) > 0.0)
        period = std::gcd(period, std::abs(level[i] + 1 - level[j]));
  return period == 1;
}

}  // namespace mce
