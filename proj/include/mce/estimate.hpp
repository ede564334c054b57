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

// Visit and transition counts, the empirical transition matrix, the
// empirical distribution and the visit-weighted mean transition matrix.

#pragma once

#include "mce/core.hpp"
#include "mce/parallel.hpp"
#include "mce/simulate.hpp"

#include <memory>
#include <optional>
#include <ranges>

namespace mce {

/// Aggregated counts over the first T steps of every chain:
///   N_i      visits to i at times t-1 = 0..T-1
///   N_ij     transitions i -> j between t-1 and t
///   N_mi     visits of chain m to i
///   N_mij    transitions of chain m (only when requested)
struct CountTables {
  std::size_t states = 0;
  std::size_t chains = 0;
  std::size_t horizon = 0;
  std::vector<Count> state_counts;
  std::vector<Count> transition_counts;  // row-major S x S
  std::vector<Count> per_chain_state;    // row-major M x S
  std::optional<std::vector<Count>> per_chain_transition;  // M x S x S

  static CountTables zeros(std::size_t states, std::size_t chains, std::size_t horizon, bool per_chain_transitions) {
    CountTables c;
    c.states = states;
    c.chains = chains;
    c.horizon = horizon;
    c.state_counts.assign(states, 0);
    c.transition_counts.assign(states * states, 0);
    c.per_chain_state.assign(chains * states, 0);
    if (per_chain_transitions) c.per_chain_transition.emplace(chains * states * states, 0);
    return c;
  }

  Count visits(std::size_t i) const { return state_counts[i]; }
  Count transitions(std::size_t i, std::size_t j) const { return transition_counts[i * states + j]; }
  Count chain_visits(std::size_t m, std::size_t i) const { return per_chain_state[m * states + i]; }
  Count chain_transitions(std::size_t m, std::size_t i, std::size_t j) const {
    if (!per_chain_transition) throw DomainError("per-chain transition counts were not materialized");
    return (*per_chain_transition)[(m * states + i) * states + j];
  }
  /// M T, the number of counted transitions.
  Count total() const { return static_cast<Count>(chains * horizon); }

  /// Appends another batch of chains with the same state space and horizon.
  CountTables& operator+=(const CountTables& other) {
    if (other.states != states || other.horizon != horizon)
      throw DimensionError("cannot merge count tables with different shapes");
    for (std::size_t i = 0; i < state_counts.size(); ++i) state_counts[i] += other.state_counts[i];
    for (std::size_t i = 0; i < transition_counts.size(); ++i) transition_counts[i] += other.transition_counts[i];
    per_chain_state.insert(per_chain_state.end(), other.per_chain_state.begin(), other.per_chain_state.end());
    if (per_chain_transition && other.per_chain_transition)
      per_chain_transition->insert(per_chain_transition->end(), other.per_chain_transition->begin(),
                                   other.per_chain_transition->end());
    else
      per_chain_transition.reset();
    chains += other.chains;
    return *this;
  }

  friend bool operator==(const CountTables&, const CountTables&) = default;
};

struct CountOptions {
  bool per_chain_transitions = false;
  std::size_t threads = 1;
};

/// Counts over the listed rows only (in the given order).
inline CountTables count_rows(const TrajectoryMatrix& data, std::span<const std::size_t> rows,
                              const CountOptions& options = {}) {
  const auto s = data.state_count();
  const auto horizon = data.horizon();
  for (const auto m : rows)
    if (m >= data.chain_count()) throw DomainError("row index " + std::to_string(m) + " out of range");
  auto out = CountTables::zeros(s, rows.size(), horizon, options.per_chain_transitions);

  // Per-worker partial aggregates; per-chain tables are written in place.
  const auto workers = std::min(resolve_threads(options.threads), std::max<std::size_t>(rows.size(), 1));
  std::vector<std::vector<Count>> part_state(workers, std::vector<Count>(s, 0));
  std::vector<std::vector<Count>> part_trans(workers, std::vector<Count>(s * s, 0));
  parallel_for(rows.size(), workers, [&](std::size_t w, std::size_t k) {
    const auto row = data.row(rows[k]);
    auto* chain_state = &out.per_chain_state[k * s];
    auto* chain_trans = out.per_chain_transition ? &(*out.per_chain_transition)[k * s * s] : nullptr;
    for (std::size_t t = 1; t <= horizon; ++t) {
      const auto from = row[t - 1];
      const auto to = row[t];
      ++part_state[w][from];
      ++part_trans[w][from * s + to];
      ++chain_state[from];
      if (chain_trans) ++chain_trans[from * s + to];
    }
  });
  for (std::size_t w = 0; w < workers; ++w) {
    for (std::size_t i = 0; i < s; ++i) out.state_counts[i] += part_state[w][i];
    for (std::size_t i = 0; i < s * s; ++i) out.transition_counts[i] += part_trans[w][i];
  }
  return out;
}

inline CountTables count(const TrajectoryMatrix& data, const CountOptions& options = {}) {
  std::vector<std::size_t> rows(data.chain_count());
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  return count_rows(data, rows, options);
}

/// P_hat(i, j) = N_ij / N_i, or 1/|Omega| on rows with N_i = 0.
inline StochasticMatrix empirical_transition_matrix(const CountTables& c) {
  const auto n = static_cast<Eigen::Index>(c.states);
  Eigen::MatrixXd p(n, n);
  for (std::size_t i = 0; i < c.states; ++i) {
    const auto ni = c.visits(i);
    for (std::size_t j = 0; j < c.states; ++j)
      p(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          ni > 0 ? static_cast<double>(c.transitions(i, j)) / static_cast<double>(ni)
                 : 1.0 / static_cast<double>(c.states);
  }
  return StochasticMatrix(std::move(p));
}

/// pi_hat(i) = N_i / (M T).
inline Distribution empirical_distribution(const CountTables& c) {
  if (c.total() == 0) throw DomainError("empirical distribution of an empty sample");
  std::vector<double> w(c.states);
  const auto total = static_cast<double>(c.total());
  for (std::size_t i = 0; i < c.states; ++i) w[i] = static_cast<double>(c.visits(i)) / total;
  return Distribution(std::move(w));
}

namespace detail {

inline const StochasticMatrix& as_matrix(const StochasticMatrix& p) { return p; }
inline const StochasticMatrix& as_matrix(const std::shared_ptr<const StochasticMatrix>& p) { return *p; }
inline const StochasticMatrix& as_matrix(const ChainSpec& c) { return *c.transition; }

}  // namespace detail

/// P_tilde(i, :) = sum_m (N_mi / N_i) P_m(i, :), or uniform when N_i = 0.
///
/// `chains` is any range whose elements are StochasticMatrix, shared
/// pointers to one, or ChainSpec, one per counted chain.
template <std::ranges::input_range Range>
StochasticMatrix mean_transition_matrix(const CountTables& c, const Range& chains) {
  std::vector<const StochasticMatrix*> pm;
  for (const auto& x : chains) pm.push_back(&detail::as_matrix(x));
  if (pm.size() != c.chains) throw DimensionError("mean_transition_matrix: one matrix per chain required");
  for (const auto* p : pm)
    if (p->size() != c.states) throw DimensionError("mean_transition_matrix: state space mismatch");
  const auto n = static_cast<Eigen::Index>(c.states);
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t i = 0; i < c.states; ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    const auto ni = c.visits(i);
    if (ni == 0) {
      out.row(ii).setConstant(1.0 / static_cast<double>(c.states));
      continue;
    }
    for (std::size_t m = 0; m < pm.size(); ++m) {
      const auto nmi = c.chain_visits(m, i);
      if (nmi != 0)
        out.row(ii) += (static_cast<double>(nmi) / static_cast<double>(ni)) * pm[m]->matrix().row(ii);
    }
  }
  return StochasticMatrix(std::move(out));
}

/// Estimators on the uncorrupted rows alongside the full-data estimators.
struct SplitEstimate {
  CountTables clean_counts;      // N^(0)
  CountTables corrupted_counts;  // N^(1)
  StochasticMatrix clean_transition;               // P_hat^(0)
  std::optional<Distribution> clean_distribution;  // pi_hat^(0); absent when every row is corrupted
  StochasticMatrix transition;                     // P_hat
  Distribution distribution;                       // pi_hat
};

inline SplitEstimate split_estimate(const TrajectoryMatrix& data, std::span<const std::size_t> corrupted) {
  std::vector<bool> bad(data.chain_count(), false);
  for (const auto m : corrupted) {
    if (m >= data.chain_count()) throw DomainError("corrupted row index " + std::to_string(m) + " out of range");
    if (bad[m]) throw DomainError("corrupted row index " + std::to_string(m) + " listed twice");
    bad[m] = true;
  }
  std::vector<std::size_t> clean_rows, bad_rows;
  for (std::size_t m = 0; m < data.chain_count(); ++m) (bad[m] ? bad_rows : clean_rows).push_back(m);

  auto clean = count_rows(data, clean_rows);
  auto dirty = count_rows(data, bad_rows);
  auto all = clean;
  all += dirty;
  std::optional<Distribution> clean_pi;
  if (!clean_rows.empty()) clean_pi = empirical_distribution(clean);
  auto p0 = empirical_transition_matrix(clean);
  auto p = empirical_transition_matrix(all);
  auto pi = empirical_distribution(all);
  return {std::move(clean), std::move(dirty), std::move(p0), std::move(clean_pi), std::move(p), std::move(pi)};
}

/// Evaluates ||P_hat - P||_inf for many data sets against one fixed P
/// without materializing P_hat: unvisited rows use a precomputed distance
/// from the uniform row, visited rows cost O(number of distinct successors).
class TransitionErrorEvaluator {
 public:
  explicit TransitionErrorEvaluator(const StochasticMatrix& p) : p_(&p), uniform_distance_(p.size()) {
    const double u = 1.0 / static_cast<double>(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
      double d = 0.0;
      for (std::size_t j = 0; j < p.size(); ++j) d += std::abs(u - p(i, j));
      uniform_distance_[i] = d;
    }
  }

  double operator()(const TrajectoryMatrix& data) const {
    const auto n = p_->size();
    if (data.state_count() != n) throw DimensionError("trajectory and matrix state spaces differ");
    std::vector<std::uint64_t> pairs;
    pairs.reserve(data.chain_count() * data.horizon());
    for (std::size_t m = 0; m < data.chain_count(); ++m) {
      const auto row = data.row(m);
      for (std::size_t t = 1; t < row.size(); ++t)
        pairs.push_back(static_cast<std::uint64_t>(row[t - 1]) << 32 | row[t]);
    }
    std::sort(pairs.begin(), pairs.end());

    std::vector<bool> visited(n, false);
    double worst = 0.0;
    for (std::size_t a = 0; a < pairs.size();) {
      const auto from = static_cast<std::size_t>(pairs[a] >> 32);
      std::size_t b = a;
      while (b < pairs.size() && (pairs[b] >> 32) == from) ++b;
      const double ni = static_cast<double>(b - a);
      // Start from sum_j P_ij and swap in |N_ij/N_i - P_ij| for observed j.
      double d = 0.0;
      for (std::size_t j = 0; j < n; ++j) d += (*p_)(from, j);
      for (std::size_t c = a; c < b;) {
        const auto to = static_cast<std::size_t>(pairs[c] & 0xffffffffULL);
        std::size_t e = c;
        while (e < b && pairs[e] == pairs[c]) ++e;
        const double pij = (*p_)(from, to);
        d += std::abs(static_cast<double>(e - c) / ni - pij) - pij;
        c = e;
      }
      visited[from] = true;
      worst = std::max(worst, d);
      a = b;
    }
    for (std::size_t i = 0; i < n; ++i)
      if (!visited[i]) worst = std::max(worst, uniform_distance_[i]);
    return worst;
  }

 private:
  const StochasticMatrix* p_;
  std::vector<double> uniform_distance_;
};

}  // namespace mce
