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

// Stationary distributions, time reversal, spectral gaps of reversible
// chains, the pseudo-spectral gap of general chains, and effective time.

#pragma once

#include "mce/core.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include <optional>

namespace mce {

inline constexpr double kStationaryResidualTolerance = 1e-10;
inline constexpr double kReversibilityTolerance = 1e-10;
inline constexpr double kSymmetrizationTolerance = 1e-8;

namespace detail {

inline double stationary_residual(const Eigen::MatrixXd& p, std::span<const double> pi) {
  const Eigen::Map<const Eigen::RowVectorXd> v(pi.data(), static_cast<Eigen::Index>(pi.size()));
  return (v * p - v).cwiseAbs().sum();
}

// Eigenvalues (ascending) of a matrix reversible w.r.t. pi, computed from
// the symmetrization D^{1/2} M D^{-1/2} with D = diag(pi).
inline Eigen::VectorXd reversible_eigenvalues(const Eigen::MatrixXd& m, std::span<const double> pi) {
  const auto n = m.rows();
  Eigen::VectorXd root(n);
  for (Eigen::Index i = 0; i < n; ++i) root(i) = std::sqrt(pi[static_cast<std::size_t>(i)]);
  Eigen::MatrixXd s = root.asDiagonal() * m * root.cwiseInverse().asDiagonal();
  const double asym = (s - s.transpose()).cwiseAbs().maxCoeff();
  if (asym > kSymmetrizationTolerance)
    throw DomainError("matrix is not reversible: symmetrization residual " + std::to_string(asym));
  s = 0.5 * (s + s.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(s, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw DomainError("symmetric eigensolver failed");
  return solver.eigenvalues();
}

// 1 - second largest eigenvalue; no irreducibility check (a reducible
// reversible matrix has gap 0).
inline double spectral_gap_unchecked(const Eigen::MatrixXd& m, std::span<const double> pi) {
  if (m.rows() == 1) return 1.0;
  const auto ev = reversible_eigenvalues(m, pi);
  return 1.0 - ev(ev.size() - 2);
}

inline void require_reversible(const StochasticMatrix& p, const Distribution& pi) {
  if (pi.size() != p.size()) throw DimensionError("distribution and matrix sizes differ");
  const auto n = p.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (std::abs(pi[i] * p(i, j) - pi[j] * p(j, i)) > kReversibilityTolerance)
        throw DomainError("matrix is not reversible with respect to the given distribution");
}

}  // namespace detail

/// The unique stationary distribution of an irreducible P.
///
/// Solves (P^T - I) pi = 0 with one equation replaced by sum(pi) = 1 using
/// partial-pivot LU and one step of iterative refinement. Doubly stochastic
/// matrices return the uniform distribution directly.
inline Distribution stationary_distribution(const StochasticMatrix& p) {
  if (!is_irreducible(p)) throw DomainError("no unique stationary vector: matrix is not irreducible");
  const auto n = static_cast<Eigen::Index>(p.size());
  const auto& m = p.matrix();

  if ((m.colwise().sum().array() - 1.0).abs().maxCoeff() <= kStochasticTolerance)
    return Distribution::uniform(p.size());

  Eigen::MatrixXd a = m.transpose() - Eigen::MatrixXd::Identity(n, n);
  a.row(n - 1).setOnes();
  Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
  b(n - 1) = 1.0;
  const Eigen::PartialPivLU<Eigen::MatrixXd> lu(a);
  Eigen::VectorXd x = lu.solve(b);
  x += lu.solve(b - a * x);

  std::vector<double> w(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) w[static_cast<std::size_t>(i)] = std::max(0.0, x(i));
  auto pi = Distribution::normalized(std::move(w));
  if (detail::stationary_residual(m, pi.weights()) > kStationaryResidualTolerance)
    throw DomainError("stationary solve did not converge");
  return pi;
}

/// P*_{ij} = (pi_j / pi_i) P_{ji}.
inline StochasticMatrix time_reversal(const StochasticMatrix& p, const Distribution& pi) {
  if (pi.size() != p.size()) throw DimensionError("distribution and matrix sizes differ");
  if (pi.min() <= 0.0) throw DomainError("time reversal needs a strictly positive stationary vector");
  if (detail::stationary_residual(p.matrix(), pi.weights()) > 1e-8)
    throw DomainError("time reversal: distribution is not stationary for the matrix");
  const auto n = static_cast<Eigen::Index>(p.size());
  Eigen::MatrixXd r(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      r(i, j) = pi[static_cast<std::size_t>(j)] / pi[static_cast<std::size_t>(i)] * p.matrix()(j, i);
  // Row sums equal 1 up to the residual of pi; rescale that rounding away.
  return StochasticMatrix::normalized(std::move(r));
}

inline bool is_reversible(const StochasticMatrix& p, const Distribution& pi) {
  try {
    detail::require_reversible(p, pi);
    return true;
  } catch (const DomainError&) {
    return false;
  }
}

/// Spectral gap 1 - lambda_2 of an irreducible chain reversible w.r.t. pi.
inline double gamma_rev(const StochasticMatrix& p, const Distribution& pi) {
  detail::require_reversible(p, pi);
  if (!is_irreducible(p)) throw DomainError("spectral gap needs an irreducible matrix");
  return detail::spectral_gap_unchecked(p.matrix(), pi.weights());
}

/// Absolute spectral gap 1 - max{|lambda| : lambda an eigenvalue other than
/// the leading one}, for reversible P.
inline double gamma_abs(const StochasticMatrix& p, const Distribution& pi) {
  detail::require_reversible(p, pi);
  if (!is_irreducible(p)) throw DomainError("spectral gap needs an irreducible matrix");
  if (p.size() == 1) return 1.0;
  const auto ev = detail::reversible_eigenvalues(p.matrix(), pi.weights());
  return 1.0 - std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 2)));
}

struct PseudoSpectralGap {
  double gamma;
  std::size_t k_star;
};

/// sup_{k>=1} gamma_rev((P*)^k P^k) / k.
///
/// Since gamma_rev <= 1, the k-th term is at most 1/k; iteration stops at the
/// first k with 1/k <= best-so-far, which makes the truncated maximum exact.
/// `max_power` bounds the loop for chains with very small gaps.
inline PseudoSpectralGap pseudo_spectral_gap(const StochasticMatrix& p, std::size_t max_power = 100000) {
  if (!validate_irreducible_aperiodic(p))
    throw DomainError("pseudo-spectral gap needs an irreducible aperiodic matrix");
  const auto pi = stationary_distribution(p);
  const auto rev = time_reversal(p, pi);

  Eigen::MatrixXd fwd = p.matrix();
  Eigen::MatrixXd bwd = rev.matrix();
  PseudoSpectralGap best{0.0, 1};
  for (std::size_t k = 1;; ++k) {
    if (1.0 / static_cast<double>(k) <= best.gamma) break;
    if (k > max_power)
      throw DomainError("pseudo-spectral gap: no termination within " + std::to_string(max_power) + " powers");
    if (k > 1) {
      fwd = fwd * p.matrix();
      bwd = bwd * rev.matrix();
    }
    const Eigen::MatrixXd mk = bwd * fwd;
    const double term = detail::spectral_gap_unchecked(mk, pi.weights()) / static_cast<double>(k);
    if (term > best.gamma) best = {term, k};
  }
  return best;
}

/// T' = g T / (1 + 1/(g T)) for minimum pseudo-spectral gap g.
inline double effective_time(double gamma_min, double horizon) {
  if (!(gamma_min > 0.0) || gamma_min > 1.0) throw DomainError("effective_time: gamma_min must lie in (0, 1]");
  if (!(horizon >= 1.0)) throw DomainError("effective_time: horizon must be >= 1");
  const double gt = gamma_min * horizon;
  return gt / (1.0 + 1.0 / gt);
}

struct SpectralSummary {
  Distribution stationary;
  std::optional<double> gamma_rev;  // reversible chains only
  std::optional<double> gamma_abs;  // reversible chains only
  double gamma_ps;
  std::size_t k_star;
};

inline SpectralSummary spectral_summary(const StochasticMatrix& p) {
  auto pi = stationary_distribution(p);
  const auto ps = pseudo_spectral_gap(p);
  SpectralSummary out{pi, std::nullopt, std::nullopt, ps.gamma, ps.k_star};
  if (is_reversible(p, pi)) {
    out.gamma_rev = gamma_rev(p, pi);
    out.gamma_abs = gamma_abs(p, pi);
  }
  return out;
}

}  // namespace mce
