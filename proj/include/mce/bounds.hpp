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

// Heterogeneity metrics of a chain ensemble, Renyi divergences, and
// evaluators for the finite-sample concentration and error bounds of the
// empirical estimators. All logarithms are natural.

#pragma once

#include "mce/core.hpp"
#include "mce/spectral.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <string>

namespace mce {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

// ---------------------------------------------------------------------------
// Renyi divergence
// ---------------------------------------------------------------------------

/// D_alpha(p || q) = log(sum_i p_i^alpha q_i^(1-alpha)) / (alpha - 1), and
/// +infinity when some p_i > 0 has q_i = 0.
inline double renyi_divergence(std::span<const double> p, std::span<const double> q, double alpha) {
  if (!(alpha > 1.0)) throw DomainError("renyi_divergence: alpha must be > 1");
  if (p.size() != q.size()) throw DimensionError("renyi_divergence: dimension mismatch");
  if (std::equal(p.begin(), p.end(), q.begin())) return 0.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] == 0.0) continue;
    if (q[i] == 0.0) return kInfinity;
    sum += std::pow(p[i], alpha) * std::pow(q[i], 1.0 - alpha);
  }
  return std::log(sum) / (alpha - 1.0);
}

inline double renyi_divergence(const Distribution& p, const Distribution& q, double alpha) {
  return renyi_divergence(p.weights(), q.weights(), alpha);
}

// ---------------------------------------------------------------------------
// Heterogeneity metrics
// ---------------------------------------------------------------------------

/// One row of the data model: transition matrix P_m, its stationary law
/// pi_m, initial law mu_m, and optionally its pseudo-spectral gap.
struct ChainModel {
  std::shared_ptr<const StochasticMatrix> transition;
  Distribution stationary;
  Distribution initial;
  std::optional<double> gamma;

  /// A chain started from its own stationary law.
  static ChainModel stationary_start(std::shared_ptr<const StochasticMatrix> p) {
    auto pi = stationary_distribution(*p);
    return {std::move(p), pi, pi, std::nullopt};
  }
};

struct HeterogeneityMetrics {
  double delta1 = 0.0;     // mean_m ||P_m - P||_inf
  double delta_inf = 0.0;  // max_m ||P_m - P||_inf
  Distribution pi_bar;     // mean_m pi_m
  double pi_bar_min = 0.0;
  double eta = 0.0;        // mean_m D_2(mu_m || pi_m)
  double gamma_min = 1.0;  // min_m pseudo-spectral gap
  double t_prime = 0.0;    // effective time
};

/// Metrics of an ensemble relative to the target matrix. Missing gaps are
/// computed with pseudo_spectral_gap, once per distinct matrix object. Chains
/// whose initial law equals their stationary law contribute exactly 0 to eta.
inline HeterogeneityMetrics heterogeneity_metrics(const StochasticMatrix& target, std::span<const ChainModel> chains,
                                                  double horizon) {
  if (chains.empty()) throw DomainError("heterogeneity_metrics: no chains");
  const auto n = target.size();
  const auto count = static_cast<double>(chains.size());
  // Means are accumulated as offsets from the first chain so that an ensemble
  // of identical chains averages to exactly the common value.
  const auto& first = chains.front();
  if (!first.transition || first.transition->size() != n || first.stationary.size() != n)
    throw DimensionError("heterogeneity_metrics: state space mismatch");
  const double delta_ref = sup_norm_matrix(*first.transition, target);
  std::vector<double> pi_bar(n, 0.0);
  double delta_sum = 0.0, delta_max = 0.0, eta_sum = 0.0, gamma_min = kInfinity;
  std::map<const StochasticMatrix*, double> gap_cache;
  for (const auto& c : chains) {
    if (!c.transition) throw DomainError("heterogeneity_metrics: chain without transition matrix");
    const auto& pm = *c.transition;
    if (pm.size() != n || c.stationary.size() != n || c.initial.size() != n)
      throw DimensionError("heterogeneity_metrics: state space mismatch");
    if (detail::stationary_residual(pm.matrix(), c.stationary.weights()) > 1e-8)
      throw DomainError("heterogeneity_metrics: pi_m is not stationary for P_m");

    const double d = sup_norm_matrix(pm, target);
    delta_sum += d - delta_ref;
    delta_max = std::max(delta_max, d);
    for (std::size_t i = 0; i < n; ++i) pi_bar[i] += c.stationary[i] - first.stationary[i];
    if (!(c.initial == c.stationary)) eta_sum += renyi_divergence(c.initial, c.stationary, 2.0);

    double g = 0.0;
    if (c.gamma) {
      g = *c.gamma;
    } else if (auto it = gap_cache.find(&pm); it != gap_cache.end()) {
      g = it->second;
    } else {
      g = pseudo_spectral_gap(pm).gamma;
      gap_cache.emplace(&pm, g);
    }
    gamma_min = std::min(gamma_min, g);
  }
  for (std::size_t i = 0; i < n; ++i) pi_bar[i] = first.stationary[i] + pi_bar[i] / count;
  HeterogeneityMetrics out{delta_ref + delta_sum / count, delta_max, Distribution(std::move(pi_bar)), 0.0,
                           eta_sum / count, gamma_min, 0.0};
  out.pi_bar_min = out.pi_bar.min();
  out.t_prime = effective_time(gamma_min, horizon);
  return out;
}

// ---------------------------------------------------------------------------
// Concentration tail bounds
// ---------------------------------------------------------------------------

/// A probability bound prefactor * exp(exponent), reported both raw and
/// clamped to [0, 1].
struct TailBound {
  double prefactor = 1.0;
  double exponent = 0.0;
  double value = 1.0;  // min(1, prefactor * exp(exponent))

  static TailBound make(double prefactor, double exponent) {
    const double raw = exponent == -kInfinity ? 0.0 : prefactor * std::exp(exponent);
    return {prefactor, exponent, std::clamp(raw, 0.0, 1.0)};
  }
  /// log of the unclamped bound
  double log_value() const { return std::log(prefactor) + exponent; }
};

namespace detail {

inline void check_ensemble_args(double s, std::size_t chains, std::size_t horizon, double gamma_min, double eta) {
  if (!(s > 0.0)) throw DomainError("tail bound: s must be > 0");
  if (chains < 1 || horizon < 1) throw DomainError("tail bound: M and T must be >= 1");
  if (!(gamma_min > 0.0) || gamma_min > 1.0) throw DomainError("tail bound: gamma_min must lie in (0, 1]");
  if (!(eta >= 0.0)) throw DomainError("tail bound: eta must be >= 0");
}

inline double bernstein_exponent(double s, std::size_t chains, std::size_t horizon, double gamma_min, double variance,
                                 double range, double eta) {
  const double m = static_cast<double>(chains);
  const double t = static_cast<double>(horizon);
  const double denom = 16.0 * (1.0 + 1.0 / (gamma_min * t)) * variance + 40.0 * range * s;
  if (denom == 0.0) return -kInfinity;
  return -gamma_min * m * t * s * s / denom + 0.5 * m * eta;
}

}  // namespace detail

/// Upper-tail bound for an ensemble-time average of centred functions with
/// averaged stationary variance V and maximal deviation Delta.
/// V = Delta = 0 yields exponent -infinity and probability 0.
inline TailBound ensemble_bernstein_tail(double s, std::size_t chains, std::size_t horizon, double gamma_min,
                                         double variance, double range, double eta) {
  detail::check_ensemble_args(s, chains, horizon, gamma_min, eta);
  if (!(variance >= 0.0) || !(range >= 0.0)) throw DomainError("tail bound: V and Delta must be >= 0");
  return TailBound::make(1.0, detail::bernstein_exponent(s, chains, horizon, gamma_min, variance, range, eta));
}

/// Two-sided bound on P(|N_i/(MT) - pi_bar_i| >= s).
inline TailBound state_frequency_tail(double s, double pi_bar_i, std::size_t chains, std::size_t horizon,
                                      double gamma_min, double eta) {
  detail::check_ensemble_args(s, chains, horizon, gamma_min, eta);
  if (!(pi_bar_i >= 0.0) || pi_bar_i > 1.0) throw DomainError("tail bound: pi_bar_i must lie in [0, 1]");
  return TailBound::make(2.0, detail::bernstein_exponent(s, chains, horizon, gamma_min, pi_bar_i, 1.0, eta));
}

/// Bound on P(||P_hat(i,:) - P_tilde(i,:)||_1 >= eps, s1 <= N_i <= s2).
inline TailBound transition_frequency_tail(double eps, double s1, double s2, std::size_t omega_size) {
  if (!(eps > 0.0)) throw DomainError("transition_frequency_tail: eps must be > 0");
  if (!(s1 > 0.0) || s1 > s2) throw DomainError("transition_frequency_tail: need 0 < s1 <= s2");
  if (omega_size < 1) throw DomainError("transition_frequency_tail: empty state space");
  const double n = static_cast<double>(omega_size);
  const double denom = 6.0 * std::sqrt(2.0) * n * s2 / s1 + 2.0 * std::sqrt(2.0) * std::sqrt(n) * eps;
  return TailBound::make(1.0 + n, -3.0 * eps * eps * s1 / denom);
}

// ---------------------------------------------------------------------------
// Estimation error bounds
// ---------------------------------------------------------------------------

struct TransitionBoundConstants {
  double c1 = 7.0;
  double c2 = 2.0;
  double c3 = 144.0;
};

struct StationaryBoundConstants {
  double c1 = std::sqrt(56.0);
};

struct CorruptedBoundConstants {
  double c1 = 7.0;
  double c2 = 2.0;
  double c3 = 4.0;
  double c4 = 144.0;
};

struct TransitionBound {
  double bound;
  double sampling_term;
  double heterogeneity_term;
  bool condition_met;
  double condition_lhs;  // M T'
  double condition_rhs;
};

namespace detail {

inline void check_confidence(double eps) {
  if (!(eps > 0.0) || eps > 1.0) throw DomainError("confidence level eps must lie in (0, 1]");
}

}  // namespace detail

/// With probability >= 1 - eps,
///   ||P_hat - P||_inf <= c1 sqrt(|Omega| log(4|Omega|/eps) / (pi_bar_min M T))
///                        + c2 min(Delta1 / pi_bar_min, Delta_inf)
/// provided M T' >= c3 (log(4|Omega|/eps) + M eta) / pi_bar_min.
inline TransitionBound thm_transition_bound(const HeterogeneityMetrics& h, std::size_t chains, std::size_t horizon,
                                            std::size_t omega_size, double eps, const TransitionBoundConstants& k = {}) {
  detail::check_confidence(eps);
  if (!(h.pi_bar_min > 0.0)) throw DomainError("thm_transition_bound: pi_bar_min must be > 0");
  const double m = static_cast<double>(chains);
  const double n = static_cast<double>(omega_size);
  const double log_term = std::log(4.0 * n / eps);
  const double sampling = k.c1 * std::sqrt(n * log_term / (h.pi_bar_min * m * static_cast<double>(horizon)));
  const double hetero = k.c2 * std::min(h.delta1 / h.pi_bar_min, h.delta_inf);
  const double lhs = m * h.t_prime;
  const double rhs = k.c3 * (log_term + m * h.eta) / h.pi_bar_min;
  return {sampling + hetero, sampling, hetero, lhs >= rhs, lhs, rhs};
}

struct StationaryBound {
  double bound;                         // on ||pi_hat - pi_bar||_inf
  std::optional<double> triangle_bound; // on ||pi_hat - pi||_inf, when pi is given
};

/// With probability >= 1 - eps,
///   ||pi_hat - pi_bar||_inf <= c1 sqrt((log(2|Omega|/eps) + M eta) / (M T')).
/// Given the target pi, also reports bound + ||pi_bar - pi||_inf.
inline StationaryBound thm_stationary_bound(const HeterogeneityMetrics& h, std::size_t chains, std::size_t omega_size,
                                            double eps, const StationaryBoundConstants& k = {},
                                            const std::optional<Distribution>& target = std::nullopt) {
  detail::check_confidence(eps);
  if (!(h.t_prime > 0.0)) throw DomainError("thm_stationary_bound: T' must be > 0");
  const double m = static_cast<double>(chains);
  const double b =
      k.c1 * std::sqrt((std::log(2.0 * static_cast<double>(omega_size) / eps) + m * h.eta) / (m * h.t_prime));
  StationaryBound out{b, std::nullopt};
  if (target) out.triangle_bound = b + sup_norm_vector(h.pi_bar, *target);
  return out;
}

/// M0 clean rows and M1 fully corrupted rows; metrics0 is computed over the
/// clean rows only.
struct CorruptionProfile {
  std::size_t m0 = 0;
  std::size_t m1 = 0;
  HeterogeneityMetrics metrics0;
};

struct CorruptedBound {
  double bound;
  double sampling_term;
  double heterogeneity_term;
  double corruption_term;
  bool condition_met;
  double condition_lhs;  // M0 T'
  double condition_rhs;
};

/// With probability >= 1 - eps,
///   ||P_hat - P||_inf <= c1 sqrt(|Omega| log(8|Omega|/eps) / (pi0_min M0 T))
///                        + c2 min(Delta1^(0) / pi0_min, Delta_inf^(0))
///                        + c3 (M1/M) / pi0_min
/// whenever M0 T' >= c4 (log(8|Omega|/eps) + M0 eta^(0)) / pi0_min^2.
inline CorruptedBound thm_corrupted_bound(const CorruptionProfile& profile, std::size_t chains, std::size_t horizon,
                                          std::size_t omega_size, double eps, const CorruptedBoundConstants& k = {}) {
  detail::check_confidence(eps);
  if (profile.m0 == 0) throw DomainError("thm_corrupted_bound: needs at least one uncorrupted row");
  if (profile.m0 + profile.m1 != chains) throw DomainError("thm_corrupted_bound: M0 + M1 must equal M");
  const auto& h = profile.metrics0;
  if (!(h.pi_bar_min > 0.0)) throw DomainError("thm_corrupted_bound: pi_bar_min must be > 0");
  const double m0 = static_cast<double>(profile.m0);
  const double n = static_cast<double>(omega_size);
  const double log_term = std::log(8.0 * n / eps);
  const double sampling = k.c1 * std::sqrt(n * log_term / (h.pi_bar_min * m0 * static_cast<double>(horizon)));
  const double hetero = k.c2 * std::min(h.delta1 / h.pi_bar_min, h.delta_inf);
  const double corruption =
      k.c3 * (static_cast<double>(profile.m1) / static_cast<double>(chains)) / h.pi_bar_min;
  const double lhs = m0 * h.t_prime;
  const double rhs = k.c4 * (log_term + m0 * h.eta) / (h.pi_bar_min * h.pi_bar_min);
  return {sampling + hetero + corruption, sampling, hetero, corruption, lhs >= rhs, lhs, rhs};
}

// ---------------------------------------------------------------------------
// Consistency conditions
// ---------------------------------------------------------------------------

/// One "a >> b" or "a << 1" condition, read as ratio >= margin or
/// value <= 1/margin respectively.
struct ConsistencyItem {
  enum class Scope { Transition, Stationary, Diagnostic };
  std::string name;
  Scope scope;
  bool needs_large;  // true: value >= threshold; false: value <= threshold
  double value;
  double threshold;
  bool pass;
};

struct ConsistencyReport {
  double margin;
  std::vector<ConsistencyItem> items;
  bool transition_consistent;
  std::optional<bool> stationary_consistent;  // needs the target pi
};

inline ConsistencyReport consistency_check(const HeterogeneityMetrics& h, std::size_t chains,
                                           std::size_t omega_size, double margin = 10.0,
                                           const std::optional<Distribution>& target = std::nullopt) {
  if (!(margin > 1.0)) throw DomainError("consistency_check: margin must be > 1");
  using Scope = ConsistencyItem::Scope;
  const double m = static_cast<double>(chains);
  const double n = static_cast<double>(omega_size);
  const double log_n = std::log(n);
  auto ratio = [](double num, double den) { return den == 0.0 ? kInfinity : num / den; };

  ConsistencyReport r{margin, {}, true, std::nullopt};
  auto large = [&](std::string name, Scope scope, double v) {
    r.items.push_back({std::move(name), scope, true, v, margin, v >= margin});
  };
  auto small = [&](std::string name, Scope scope, double v) {
    r.items.push_back({std::move(name), scope, false, v, 1.0 / margin, v <= 1.0 / margin});
  };
  large("M T' / (|Omega| log|Omega| / pi_bar_min)", Scope::Transition,
        ratio(m * h.t_prime * h.pi_bar_min, n * log_n));
  large("T' / (eta / pi_bar_min)", Scope::Transition, ratio(h.t_prime * h.pi_bar_min, h.eta));
  small("min(Delta1 / pi_bar_min, Delta_inf)", Scope::Transition, std::min(h.delta1 / h.pi_bar_min, h.delta_inf));
  small("Delta1 / pi_bar_min", Scope::Diagnostic, h.delta1 / h.pi_bar_min);
  small("Delta_inf", Scope::Diagnostic, h.delta_inf);
  large("M T' / log|Omega|", Scope::Stationary, ratio(m * h.t_prime, log_n));
  large("T' / eta", Scope::Stationary, ratio(h.t_prime, h.eta));
  if (target) small("||pi_bar - pi||_inf", Scope::Stationary, sup_norm_vector(h.pi_bar, *target));

  bool stationary = true;
  for (const auto& item : r.items) {
    if (item.scope == Scope::Transition) r.transition_consistent = r.transition_consistent && item.pass;
    if (item.scope == Scope::Stationary) stationary = stationary && item.pass;
  }
  if (target) r.stationary_consistent = stationary;
  return r;
}

// ---------------------------------------------------------------------------
// Linear algebra helper
// ---------------------------------------------------------------------------

/// Right-hand side of ||diag(u) - u u^T||_2^2 <= sum_i u_i^2 (1 - 2 u_i + ||u||_2^2).
inline double spectral_norm_lemma_bound(std::span<const double> u) {
  double sq = 0.0;
  for (double x : u) sq += x * x;
  double out = 0.0;
  for (double x : u) out += x * x * (1.0 - 2.0 * x + sq);
  return out;
}

}  // namespace mce
