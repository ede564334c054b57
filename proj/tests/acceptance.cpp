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

// Acceptance gate. Prints one [PASS]/[FAIL] line per criterion and exits
// nonzero if any criterion fails. Runtime ceilings are part of the checks.

#include "mce/mce.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace mce;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

int failures = 0;

void criterion(const char* name, double time_limit_s, const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome r;
  try {
    r = body();
  } catch (const std::exception& e) {
    r = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (time_limit_s > 0 && secs > time_limit_s) {
    r.pass = false;
    r.detail += "; exceeded time limit " + std::to_string(time_limit_s) + " s";
  }
  if (!r.pass) ++failures;
  std::printf("[%s] %s (%.2f s): %s\n", r.pass ? "PASS" : "FAIL", name, secs, r.detail.c_str());
  std::fflush(stdout);
}

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const auto n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// ---------------------------------------------------------------------------

Outcome pseudo_spectral_closed_form() {
  double worst = 0;
  int cases = 0;
  for (std::size_t n = 4; n <= 20; ++n)
    for (double g : {0.05, 0.1, 0.25, 0.5}) {
      const double ga = g * (1 - std::cos(2 * std::numbers::pi / static_cast<double>(n)));
      const double want = 1 - (1 - ga) * (1 - ga);
      worst = std::max(worst, std::abs(pseudo_spectral_gap(lazy_cycle(n, g)).gamma - want));
      ++cases;
    }
  return {worst <= 1e-8, std::to_string(cases) + " cases, max |error| " + num(worst)};
}

Outcome estimator_oracle() {
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> unif(0.01, 1.0);
  double worst_ratio = 0;
  std::size_t count_mismatch = 0;
  for (int rep = 0; rep < 500; ++rep) {
    const std::size_t m = 1 + rng() % 8, t = 1 + rng() % 8, s = 1 + rng() % 8;
    std::vector<State> raw(m * (t + 1));
    for (auto& x : raw) x = static_cast<State>(rng() % s);
    const TrajectoryMatrix data(m, t, s, raw);
    std::vector<StochasticMatrix> pm;
    for (std::size_t k = 0; k < m; ++k) {
      Eigen::MatrixXd w(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(s));
      for (Eigen::Index i = 0; i < w.rows(); ++i)
        for (Eigen::Index j = 0; j < w.cols(); ++j) w(i, j) = unif(rng);
      pm.push_back(StochasticMatrix::normalized(w));
    }

    const auto c = count(data, {true, 1 + static_cast<std::size_t>(rep % 3)});
    const auto p_hat = empirical_transition_matrix(c);
    const auto pi_hat = empirical_distribution(c);
    const auto p_tilde = mean_transition_matrix(c, pm);

    // Brute force: one pass over all (m, t) per queried quantity.
    for (std::size_t i = 0; i < s; ++i) {
      long long ni = 0;
      std::vector<long long> nmi(m, 0);
      for (std::size_t k = 0; k < m; ++k)
        for (std::size_t tt = 0; tt < t; ++tt)
          if (raw[k * (t + 1) + tt] == i) {
            ++ni;
            ++nmi[k];
          }
      count_mismatch += c.visits(i) != ni;
      for (std::size_t k = 0; k < m; ++k) count_mismatch += c.chain_visits(k, i) != nmi[k];
      worst_ratio = std::max(worst_ratio, std::abs(pi_hat[i] - static_cast<double>(ni) / static_cast<double>(m * t)));
      for (std::size_t j = 0; j < s; ++j) {
        long long nij = 0;
        std::vector<long long> nmij(m, 0);
        for (std::size_t k = 0; k < m; ++k)
          for (std::size_t tt = 0; tt < t; ++tt)
            if (raw[k * (t + 1) + tt] == i && raw[k * (t + 1) + tt + 1] == j) {
              ++nij;
              ++nmij[k];
            }
        count_mismatch += c.transitions(i, j) != nij;
        for (std::size_t k = 0; k < m; ++k) count_mismatch += c.chain_transitions(k, i, j) != nmij[k];
        const double want_hat =
            ni ? static_cast<double>(nij) / static_cast<double>(ni) : 1.0 / static_cast<double>(s);
        double want_tilde = 1.0 / static_cast<double>(s);
        if (ni) {
          want_tilde = 0;
          for (std::size_t k = 0; k < m; ++k)
            want_tilde += static_cast<double>(nmi[k]) / static_cast<double>(ni) * pm[k](i, j);
        }
        worst_ratio = std::max({worst_ratio, std::abs(p_hat(i, j) - want_hat), std::abs(p_tilde(i, j) - want_tilde)});
      }
    }
  }
  return {count_mismatch == 0 && worst_ratio <= 1e-14,
          "500 instances, count mismatches " + std::to_string(count_mismatch) + ", max ratio error " + num(worst_ratio)};
}

Outcome complete_graph_metrics() {
  std::ostringstream d;
  bool ok = true;
  for (std::size_t n : {3u, 10u, 100u}) {
    const auto g = complete_graph_pair(n);
    const auto pm = std::make_shared<const StochasticMatrix>(g.perturbed);
    const std::vector<ChainModel> chains(25, ChainModel::stationary_start(pm));
    const auto h = heterogeneity_metrics(g.target, chains, 100);
    const double want = 2.0 / static_cast<double>(n);
    // The stored entries are fl(1/n) and fl(1/(n-1)), so 2/n itself is out of
    // reach: the n-1 off-diagonal representation errors add up to about
    // n * ulp(1/(n-1)) / 2. Check that Delta matches the stored entries to the
    // last bit (long-double recomputation) and sits within that input bound.
    const auto& a = g.perturbed.matrix();
    const auto& b = g.target.matrix();
    long double row0 = 0.0L;
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      row0 += std::abs(static_cast<long double>(a(0, j)) - static_cast<long double>(b(0, j)));
    const double stored = static_cast<double>(row0);
    const double ulp = std::nextafter(stored, 3.0) - stored;
    const double input_err = static_cast<double>(n) * std::numeric_limits<double>::epsilon() / static_cast<double>(n - 1);
    const bool good = std::abs(h.delta1 - stored) <= ulp && std::abs(h.delta1 - want) <= input_err &&
                      h.delta1 == h.delta_inf && h.pi_bar_min == 1.0 / static_cast<double>(n);
    ok = ok && good;
    d << "n=" << n << " Delta1=" << format_double(h.delta1) << " Delta_inf=" << format_double(h.delta_inf)
      << " pi_bar_min=" << format_double(h.pi_bar_min) << "; ";
  }
  return {ok, d.str()};
}

Outcome transition_bound_regression() {
  const HeterogeneityMetrics h{0, 0, Distribution::uniform(2), 0.5, 0, 1, 50};
  const auto b = thm_transition_bound(h, 100, 100, 2, 0.05);
  const bool ok = std::abs(b.bound - 0.3154) <= 0.0005 && std::abs(b.condition_rhs - 1461.7) <= 0.5;
  return {ok, "bound " + format_double(b.bound) + ", condition rhs " + format_double(b.condition_rhs)};
}

Outcome concentration_soundness() {
  Eigen::MatrixXd m(3, 3);
  m << 0.5, 0.3, 0.2, 0.2, 0.6, 0.2, 0.3, 0.3, 0.4;
  const auto p = std::make_shared<const StochasticMatrix>(m);
  const auto pi = stationary_distribution(*p);
  const std::size_t chains = 20, horizon = 50;
  const std::vector<ChainModel> models(chains, ChainModel::stationary_start(p));
  const auto h = heterogeneity_metrics(*p, models, horizon);

  EnsemblePlan plan;
  plan.horizon = horizon;
  for (std::size_t k = 0; k < chains; ++k) plan.chains.push_back({p, pi});
  const std::vector<double> levels{0.02, 0.05, 0.1};
  const int reps = 2000;
  std::vector<std::vector<int>> hits(3, std::vector<int>(levels.size(), 0));
  for (int r = 0; r < reps; ++r) {
    plan.master_seed = child_seed(77, static_cast<std::uint64_t>(r));
    const auto c = count(simulate_ensemble(plan));
    for (std::size_t i = 0; i < 3; ++i) {
      const double dev = std::abs(static_cast<double>(c.visits(i)) / static_cast<double>(chains * horizon) -
                                  h.pi_bar[i]);
      for (std::size_t l = 0; l < levels.size(); ++l) hits[i][l] += dev >= levels[l];
    }
  }
  bool ok = true;
  std::ostringstream d;
  d << "gamma_min=" << num(h.gamma_min) << "; ";
  for (std::size_t l = 0; l < levels.size(); ++l) {
    double worst_gap = -1;
    for (std::size_t i = 0; i < 3; ++i) {
      const double freq = static_cast<double>(hits[i][l]) / reps;
      const double bound = state_frequency_tail(levels[l], h.pi_bar[i], chains, horizon, h.gamma_min, h.eta).value;
      ok = ok && freq <= bound;
      worst_gap = std::max(worst_gap, freq - bound);
      if (i == 0) d << "s=" << levels[l] << ": state0 freq " << num(freq) << " <= bound " << num(bound) << "; ";
    }
    d << "max(freq-bound)=" << num(worst_gap) << "; ";
  }
  return {ok, d.str()};
}

struct TradeoffResult {
  CsvTable table;
  std::string csv_other_threads;
};

TradeoffResult& tradeoff_run() {
  static TradeoffResult r = [] {
    auto c = ExperimentConfig::defaults(ExperimentKind::Tradeoff);
    c.budget = 10000;
    c.chain_counts = {2, 10, 100, 1000};
    c.trials = 50;
    c.omega_size = 10;
    c.gamma = 0.1;
    c.eps_levels = {0.0, 0.05};
    TradeoffResult out{run_tradeoff(c, 1), {}};
    out.csv_other_threads = run_tradeoff(c, 4).str();
    return out;
  }();
  return r;
}

Outcome tradeoff_shape() {
  const auto& t = tradeoff_run().table;
  std::vector<double> clean;
  double noisy_m2 = -1, noisy_m100 = -1;
  std::ostringstream d;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const double mean = t.number(r, "mean");
    const double eps = t.number(r, "eps");
    const auto m = static_cast<int>(t.number(r, "M"));
    d << "M=" << m << ",eps=" << eps << ":" << num(mean) << " ";
    if (eps == 0.0) clean.push_back(mean);
    if (eps == 0.05 && m == 2) noisy_m2 = mean;
    if (eps == 0.05 && m == 100) noisy_m100 = mean;
  }
  const double ratio = *std::max_element(clean.begin(), clean.end()) / *std::min_element(clean.begin(), clean.end());
  d << "| noiseless max/min " << num(ratio);
  const bool ok = clean.size() == 4 && ratio < 2 && noisy_m2 > 0 && noisy_m100 < noisy_m2;
  return {ok, d.str()};
}

Outcome statecount_plateau() {
  auto c = ExperimentConfig::defaults(ExperimentKind::StateCount);
  c.chains = 50;
  c.horizon = 50;
  const auto t = run_statecount(c, 1);
  double worst = 0, at_2500 = 3;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    worst = std::max(worst, t.number(r, "mean"));
    if (t.number(r, "omega_size") == 2500) at_2500 = std::min(at_2500, t.number(r, "mean"));
  }
  // A row estimate with support disjoint from the true row sits at distance
  // exactly 2, which floating-point sums can overshoot by an ulp or two.
  const double cap = 2.0 + 1e-12;
  return {worst <= cap && at_2500 >= 1.9 && at_2500 <= cap,
          "max mean " + num(worst) + ", min over eps of mean at |Omega|=2500 " + num(at_2500)};
}

Outcome stationary_rate() {
  // Clean lazy cycle, stationary starts; M = T doubles, so M T quadruples.
  const CycleModel model(10, 0.1, InitPolicy{});
  std::vector<double> medians;
  std::ostringstream d;
  for (std::size_t side : {50u, 100u, 200u}) {
    std::vector<double> errs;
    for (std::size_t r = 0; r < 50; ++r) {
      const auto x = simulate_trial(model, side, side, 0.0, trial_key(2024, side, r));
      errs.push_back(trial_errors(model, x).stationary);
    }
    medians.push_back(median(errs));
    d << "MT=" << side * side << ": median " << num(medians.back()) << "; ";
  }
  bool ok = true;
  for (std::size_t k = 1; k < medians.size(); ++k) {
    const double f = medians[k - 1] / medians[k];
    d << "factor " << num(f) << "; ";
    ok = ok && f >= 1.5 && f <= 3;
  }
  return {ok, d.str()};
}

Outcome corruption_linearity() {
  auto c = ExperimentConfig::defaults(ExperimentKind::Corruption);
  c.corrupt_modes = {CorruptionMode::Constant};
  const auto t = run_corruption(c, 1);
  bool ok = true;
  int held = 0;
  double prev = -1;
  std::ostringstream d;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const double mean = t.number(r, "mean"), bound = t.number(r, "bound");
    const bool cond = t.rows[r][t.column("condition_met")] == "1";
    d << "M1/M=" << t.rows[r][0] << ": err " << num(mean) << " bound " << num(bound) << (cond ? "" : " (cond fails)")
      << "; ";
    if (cond) {
      ++held;
      ok = ok && bound >= mean;
    }
    ok = ok && mean >= prev;
    prev = mean;
  }
  ok = ok && held > 0;
  d << held << " points with the sample-size condition";
  return {ok, d.str()};
}

Outcome determinism() {
  std::ostringstream d;
  bool ok = tradeoff_run().table.str() == tradeoff_run().csv_other_threads;
  d << "tradeoff(paper scale, 1 vs 4 threads) " << (ok ? "same" : "DIFFERENT") << "; ";
  std::vector<ExperimentConfig> configs;
  {
    auto c = ExperimentConfig::defaults(ExperimentKind::StateCount);
    c.omega_sizes = {2, 50, 500};
    c.trials = 10;
    configs.push_back(c);
  }
  {
    auto c = ExperimentConfig::defaults(ExperimentKind::GammaSweep);
    c.gammas = {0.05, 0.5, 0.9};
    c.trials = 10;
    c.chains = c.horizon = 60;
    configs.push_back(c);
  }
  {
    auto c = ExperimentConfig::defaults(ExperimentKind::Corruption);
    c.corrupt_modes = {CorruptionMode::Constant, CorruptionMode::AdversarialCycle, CorruptionMode::IidUniform};
    c.eps_levels = {0.0, 0.05};
    c.trials = 5;
    c.horizon = 200;
    configs.push_back(c);
  }
  for (const auto& c : configs) {
    const auto a = run_experiment(c, 1).str();
    const bool same = a == run_experiment(c, 3).str() && a == run_experiment(c, 1).str();
    ok = ok && same;
    d << to_string(c.experiment) << " " << (same ? "same" : "DIFFERENT") << "; ";
  }
  return {ok, d.str()};
}

}  // namespace

int main() {
  criterion("pseudo-spectral gap equals the lazy-cycle closed form", 5, pseudo_spectral_closed_form);
  criterion("counts and estimators match brute-force loops", 10, estimator_oracle);
  criterion("complete-graph metrics Delta1 = Delta_inf = 2/n, pi_bar_min = 1/n", 1, complete_graph_metrics);
  criterion("transition bound regression value", 0, transition_bound_regression);
  criterion("state-frequency tail bound dominates Monte Carlo tails", 60, concentration_soundness);
  criterion("M-vs-T trade-off shape at M T = 1e4", 300, tradeoff_shape);
  criterion("state-count error plateaus at 2", 180, statecount_plateau);
  criterion("quadrupling M T shrinks median stationary error by 1.5x to 3x", 0, stationary_rate);
  criterion("corruption bound covers error; error grows with M1/M", 0, corruption_linearity);
  criterion("experiment CSVs are byte-identical across reruns and thread counts", 0, determinism);
  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
