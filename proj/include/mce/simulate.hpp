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

// Model builders, random perturbation of transition matrices, seeded
// ensemble simulation and corrupted-row injection.

#pragma once

#include "mce/core.hpp"
#include "mce/parallel.hpp"
#include "mce/random.hpp"
#include "mce/spectral.hpp"

#include <map>
#include <numbers>
#include <memory>
#include <optional>
#include <string_view>

namespace mce {

// ---------------------------------------------------------------------------
// Model builders
// ---------------------------------------------------------------------------

/// Random walk on a cycle: move to each neighbour with probability gamma/2,
/// hold with probability 1 - gamma. Accepts any size >= 1 and gamma in
/// (0, 1]; on cycles of length 1 or 2 the neighbour probabilities coincide
/// and are accumulated.
inline StochasticMatrix cycle_walk(std::size_t size, double gamma) {
  if (size < 1) throw DomainError("cycle_walk: size must be >= 1");
  if (!(gamma > 0.0) || gamma > 1.0) throw DomainError("cycle_walk: gamma must lie in (0, 1]");
  const auto n = static_cast<Eigen::Index>(size);
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    m(i, i) += 1.0 - gamma;
    m(i, (i + 1) % n) += gamma / 2.0;
    m(i, (i + n - 1) % n) += gamma / 2.0;
  }
  return StochasticMatrix(std::move(m));
}

/// The lazy cycle walk in the regime gamma <= 1/2 (all eigenvalues
/// nonnegative), on at least three vertices.
inline StochasticMatrix lazy_cycle(std::size_t size, double gamma) {
  if (size < 3) throw DomainError("lazy_cycle: size must be >= 3");
  if (!(gamma > 0.0) || gamma > 0.5) throw DomainError("lazy_cycle: gamma must lie in (0, 1/2]");
  return cycle_walk(size, gamma);
}

/// Absolute spectral gap gamma (1 - cos(2 pi / n)) of the lazy cycle walk.
inline double lazy_cycle_gamma_abs(std::size_t size, double gamma) {
  return gamma * (1.0 - std::cos(2.0 * std::numbers::pi / static_cast<double>(size)));
}

struct CompleteGraphPair {
  StochasticMatrix target;     // P(i, j) = 1/n, self-loops allowed
  StochasticMatrix perturbed;  // P_m(i, j) = 1(j != i) / (n - 1)
};

inline CompleteGraphPair complete_graph_pair(std::size_t n) {
  if (n < 3) throw DomainError("complete_graph_pair: n must be >= 3");
  const auto k = static_cast<Eigen::Index>(n);
  Eigen::MatrixXd no_loops = Eigen::MatrixXd::Constant(k, k, 1.0 / static_cast<double>(n - 1));
  no_loops.diagonal().setZero();
  return {StochasticMatrix::uniform(n), StochasticMatrix(std::move(no_loops))};
}

// ---------------------------------------------------------------------------
// Uniform-noise perturbation
// ---------------------------------------------------------------------------

namespace detail {

// Adds noise, truncates at zero and renormalizes; an all-zero row becomes
// uniform.
inline void perturb_row_in_place(std::span<double> row, auto&& noise_for_column) {
  double sum = 0.0;
  for (std::size_t j = 0; j < row.size(); ++j) {
    row[j] = std::max(0.0, row[j] + noise_for_column(j));
    sum += row[j];
  }
  if (sum > 0.0) {
    for (double& x : row) x /= sum;
  } else {
    std::fill(row.begin(), row.end(), 1.0 / static_cast<double>(row.size()));
  }
}

}  // namespace detail

/// Applies an explicit additive noise matrix with truncation and row
/// renormalization.
inline StochasticMatrix perturb_with_noise(const StochasticMatrix& p, const Eigen::MatrixXd& noise) {
  if (noise.rows() != p.matrix().rows() || noise.cols() != p.matrix().cols())
    throw DimensionError("perturb_with_noise: noise has the wrong shape");
  const auto n = p.size();
  Eigen::MatrixXd out(p.matrix().rows(), p.matrix().cols());
  std::vector<double> row(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) row[j] = p(i, j);
    detail::perturb_row_in_place(row, [&](std::size_t j) {
      return noise(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    });
    for (std::size_t j = 0; j < n; ++j) out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = row[j];
  }
  return StochasticMatrix(std::move(out));
}

/// Row `i` of perturb_uniform(p, eps, seed), computed without touching the
/// other rows. Entry (i, j) uses draw i*n + j of the stream keyed by `seed`.
inline std::vector<double> perturbed_row(const StochasticMatrix& p, double eps, std::uint64_t seed, std::size_t i) {
  const auto n = p.size();
  std::vector<double> row(n);
  for (std::size_t j = 0; j < n; ++j) row[j] = p(i, j);
  if (eps == 0.0) return row;
  const CounterRng rng(seed);
  detail::perturb_row_in_place(row, [&](std::size_t j) {
    return eps * (2.0 * rng.uniform_at(static_cast<std::uint64_t>(i * n + j)) - 1.0);
  });
  return row;
}

/// Adds i.i.d. Uniform(-eps, eps) noise to every entry (row-major draw
/// order), truncates negatives to zero and renormalizes each row.
inline StochasticMatrix perturb_uniform(const StochasticMatrix& p, double eps, std::uint64_t seed) {
  if (!(eps >= 0.0)) throw DomainError("perturb_uniform: eps must be >= 0");
  if (eps == 0.0) return p;
  const auto n = p.size();
  Eigen::MatrixXd out(p.matrix().rows(), p.matrix().cols());
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = perturbed_row(p, eps, seed, i);
    for (std::size_t j = 0; j < n; ++j) out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = row[j];
  }
  return StochasticMatrix(std::move(out));
}

// ---------------------------------------------------------------------------
// Sampling
// ---------------------------------------------------------------------------

namespace detail {

inline std::vector<double> cumulative(std::span<const double> w) {
  std::vector<double> c(w.size());
  std::partial_sum(w.begin(), w.end(), c.begin());
  return c;
}

// Inverse-CDF lookup. Zero-probability states are never returned: if u
// lands beyond the (rounded) total, the last state with positive mass wins.
inline State sample_cumulative(std::span<const double> cum, double u) {
  const auto it = std::upper_bound(cum.begin(), cum.end(), u * cum.back());
  if (it != cum.end()) return static_cast<State>(it - cum.begin());
  std::size_t j = cum.size() - 1;
  while (j > 0 && cum[j] == cum[j - 1]) --j;
  return static_cast<State>(j);
}

}  // namespace detail

/// Precomputed per-row cumulative sums of a dense transition matrix.
class ChainSampler {
 public:
  explicit ChainSampler(const StochasticMatrix& p) : n_(p.size()), cum_(n_ * n_) {
    for (std::size_t i = 0; i < n_; ++i) {
      double acc = 0.0;
      for (std::size_t j = 0; j < n_; ++j) cum_[i * n_ + j] = (acc += p(i, j));
    }
  }
  std::size_t size() const { return n_; }
  State next(State from, double u) const { return detail::sample_cumulative(row(from), u); }

 private:
  std::span<const double> row(State i) const { return std::span<const double>(cum_).subspan(i * n_, n_); }
  std::size_t n_;
  std::vector<double> cum_;
};

/// Samples transitions of perturb_uniform(p, eps, seed) while only
/// materializing the rows that the path actually visits.
class LazyPerturbedSampler {
 public:
  LazyPerturbedSampler(const StochasticMatrix& p, double eps, std::uint64_t seed)
      : p_(&p), eps_(eps), seed_(seed), rows_(p.size()) {}
  std::size_t size() const { return p_->size(); }
  State next(State from, double u) {
    auto& r = rows_[from];
    if (r.empty()) r = detail::cumulative(perturbed_row(*p_, eps_, seed_, from));
    return detail::sample_cumulative(r, u);
  }

 private:
  const StochasticMatrix* p_;
  double eps_;
  std::uint64_t seed_;
  std::vector<std::vector<double>> rows_;
};

/// Fills out[0..T] with X_0 ~ init and X_t ~ P(X_{t-1}, .), one uniform draw
/// per state.
template <class Sampler>
void sample_path(Sampler& sampler, std::span<const double> init_cumulative, CounterRng& rng, std::span<State> out) {
  out[0] = detail::sample_cumulative(init_cumulative, rng.uniform());
  for (std::size_t t = 1; t < out.size(); ++t) out[t] = sampler.next(out[t - 1], rng.uniform());
}

// ---------------------------------------------------------------------------
// Ensembles
// ---------------------------------------------------------------------------

struct ChainSpec {
  std::shared_ptr<const StochasticMatrix> transition;
  Distribution initial;
};

struct EnsemblePlan {
  std::vector<ChainSpec> chains;
  std::size_t horizon = 1;
  std::uint64_t master_seed = 0;
};

/// Simulates every chain of the ensemble. Row m draws from the stream
/// child_seed(master_seed, m), so the output does not depend on `threads`.
inline TrajectoryMatrix simulate_ensemble(const EnsemblePlan& plan, std::size_t threads = 1) {
  if (plan.chains.empty()) throw DomainError("simulate_ensemble: no chains");
  if (plan.horizon < 1) throw DomainError("simulate_ensemble: horizon must be >= 1");
  const auto n = plan.chains.front().transition->size();
  std::map<const StochasticMatrix*, std::size_t> index;
  std::vector<ChainSampler> samplers;
  for (const auto& c : plan.chains) {
    if (!c.transition) throw DomainError("simulate_ensemble: chain without transition matrix");
    if (c.transition->size() != n || c.initial.size() != n)
      throw DimensionError("simulate_ensemble: chains must share one state space");
    if (index.emplace(c.transition.get(), samplers.size()).second) samplers.emplace_back(*c.transition);
  }
  const auto width = plan.horizon + 1;
  std::vector<State> data(plan.chains.size() * width);
  // Samplers are stateless after construction, so sharing them is safe.
  parallel_for(plan.chains.size(), threads, [&](std::size_t, std::size_t m) {
    const auto& c = plan.chains[m];
    const auto& sampler = samplers[index.at(c.transition.get())];
    CounterRng rng(child_seed(plan.master_seed, m));
    const auto init = detail::cumulative(c.initial.weights());
    sample_path(sampler, init, rng, std::span<State>(data).subspan(m * width, width));
  });
  return TrajectoryMatrix(plan.chains.size(), plan.horizon, n, std::move(data));
}

// ---------------------------------------------------------------------------
// Initial-distribution policy
// ---------------------------------------------------------------------------

struct InitPolicy {
  enum class Kind { Stationary, Uniform, Point };
  Kind kind = Kind::Stationary;
  State point = 0;

  /// Parses "stationary", "uniform" or "point:<i>".
  static InitPolicy parse(std::string_view text) {
    if (text == "stationary") return {Kind::Stationary, 0};
    if (text == "uniform") return {Kind::Uniform, 0};
    if (text.starts_with("point:")) {
      const auto rest = std::string(text.substr(6));
      std::size_t used = 0;
      unsigned long v = 0;
      try {
        v = std::stoul(rest, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used == rest.size() && used > 0) return {Kind::Point, static_cast<State>(v)};
    }
    throw DomainError("unknown init policy '" + std::string(text) + "'");
  }

  std::string to_string() const {
    switch (kind) {
      case Kind::Stationary: return "stationary";
      case Kind::Uniform: return "uniform";
      case Kind::Point: return "point:" + std::to_string(point);
    }
    return {};
  }

  Distribution resolve(const StochasticMatrix& reference) const {
    switch (kind) {
      case Kind::Stationary: return stationary_distribution(reference);
      case Kind::Uniform: return Distribution::uniform(reference.size());
      case Kind::Point: return Distribution::point_mass(reference.size(), point);
    }
    throw DomainError("invalid init policy");
  }
};

// ---------------------------------------------------------------------------
// Corruption
// ---------------------------------------------------------------------------

enum class CorruptionMode { Constant, AdversarialCycle, IidUniform };

inline CorruptionMode parse_corruption_mode(std::string_view s) {
  if (s == "constant") return CorruptionMode::Constant;
  if (s == "adversarial-cycle") return CorruptionMode::AdversarialCycle;
  if (s == "iid-uniform") return CorruptionMode::IidUniform;
  throw DomainError("unknown corruption mode '" + std::string(s) + "'");
}

inline std::string to_string(CorruptionMode mode) {
  switch (mode) {
    case CorruptionMode::Constant: return "constant";
    case CorruptionMode::AdversarialCycle: return "adversarial-cycle";
    case CorruptionMode::IidUniform: return "iid-uniform";
  }
  return {};
}

struct CorruptedData {
  TrajectoryMatrix data;
  std::vector<std::size_t> corrupted;  // ascending row indices
};

/// Overwrites m1 rows, chosen uniformly without replacement, with
/// non-Markov content:
///   constant           every entry equals `constant_state`
///   adversarial-cycle  the sweep 0, 1, 2, ... modulo |Omega|
///   iid-uniform        i.i.d. uniform states
inline CorruptedData inject_corrupted_rows(const TrajectoryMatrix& data, std::size_t m1, CorruptionMode mode,
                                           std::uint64_t seed, State constant_state = 0) {
  const auto rows = data.chain_count();
  const auto width = data.horizon() + 1;
  const auto states = data.state_count();
  if (m1 > rows) throw DomainError("inject_corrupted_rows: more corrupted rows than chains");
  if (constant_state >= states) throw DomainError("inject_corrupted_rows: constant state out of range");

  std::vector<std::size_t> order(rows);
  std::iota(order.begin(), order.end(), std::size_t{0});
  CounterRng pick(child_seed(seed, 0));
  for (std::size_t k = 0; k < m1; ++k) std::swap(order[k], order[k + pick.below(rows - k)]);
  std::vector<std::size_t> chosen(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(m1));
  std::sort(chosen.begin(), chosen.end());

  auto out = data.data();
  for (const auto m : chosen) {
    CounterRng rng(child_seed(seed, 1 + m));
    for (std::size_t t = 0; t < width; ++t) {
      State s = 0;
      switch (mode) {
        case CorruptionMode::Constant: s = constant_state; break;
        case CorruptionMode::AdversarialCycle: s = static_cast<State>(t % states); break;
        case CorruptionMode::IidUniform: s = static_cast<State>(rng.below(states)); break;
      }
      out[m * width + t] = s;
    }
  }
  return {TrajectoryMatrix(rows, data.horizon(), states, std::move(out)), std::move(chosen)};
}

}  // namespace mce
