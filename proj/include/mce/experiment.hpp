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

// Simulation studies on the cycle walk, emitted as deterministic CSV.
//
//   tradeoff     fixed budget M T, varying the chain count M
//   statecount   fixed M and T, varying |Omega|
//   gamma-sweep  fixed |Omega|, M, T, varying the jump rate gamma
//   corruption   fraction of fully corrupted rows, with the corrupted-row
//                error bound overlaid
//
// Every trial, chain and perturbation draws from a stream derived from
// (seed, grid point, trial, chain), so results do not depend on the number
// of worker threads.

#pragma once

#include "mce/bounds.hpp"
#include "mce/estimate.hpp"
#include "mce/io.hpp"
#include "mce/parallel.hpp"
#include "mce/simulate.hpp"
#include "mce/spectral.hpp"

#include <istream>
#include <map>
#include <sstream>
#include <string>

namespace mce {

inline constexpr const char* kVersion = "0.1.0";

enum class ExperimentKind { Tradeoff, StateCount, GammaSweep, Corruption };

inline ExperimentKind parse_experiment_kind(std::string_view s) {
  if (s == "tradeoff") return ExperimentKind::Tradeoff;
  if (s == "statecount") return ExperimentKind::StateCount;
  if (s == "gamma-sweep") return ExperimentKind::GammaSweep;
  if (s == "corruption") return ExperimentKind::Corruption;
  throw FormatError("unknown experiment '" + std::string(s) + "'");
}

inline std::string to_string(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::Tradeoff: return "tradeoff";
    case ExperimentKind::StateCount: return "statecount";
    case ExperimentKind::GammaSweep: return "gamma-sweep";
    case ExperimentKind::Corruption: return "corruption";
  }
  return {};
}

struct ExperimentConfig {
  ExperimentKind experiment = ExperimentKind::Tradeoff;
  std::size_t budget = 10000;  // M T for tradeoff
  std::vector<std::size_t> chain_counts{2, 5, 10, 20, 50, 100, 200, 500, 1000};
  std::size_t chains = 50;
  std::size_t horizon = 50;
  std::size_t omega_size = 10;
  std::vector<std::size_t> omega_sizes{2, 3, 5, 10, 20, 50, 100, 200, 500, 1000, 2500};
  double gamma = 0.1;
  std::vector<double> gammas{0.02, 0.05, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
  std::vector<double> eps_levels{0.0, 0.05};
  std::size_t trials = 50;
  std::uint64_t seed = 1;
  InitPolicy init{};
  std::vector<double> m1_fractions{0.0, 0.05, 0.1, 0.2, 0.3};
  std::vector<CorruptionMode> corrupt_modes{CorruptionMode::Constant};
  double bound_eps = 0.1;  // confidence level of the overlaid bound
  std::string out;         // output directory; not part of the results

  /// Defaults that reproduce each study's published setting.
  static ExperimentConfig defaults(ExperimentKind kind) {
    ExperimentConfig c;
    c.experiment = kind;
    switch (kind) {
      case ExperimentKind::Tradeoff: break;
      case ExperimentKind::StateCount: c.chains = 50; c.horizon = 50; break;
      case ExperimentKind::GammaSweep:
        c.chains = 200;
        c.horizon = 200;
        c.eps_levels = {0.0, 0.03};
        break;
      case ExperimentKind::Corruption:
        c.omega_size = 5;
        c.gamma = 0.5;
        c.chains = 100;
        c.horizon = 1000;
        c.eps_levels = {0.0};
        break;
    }
    return c;
  }

  /// key=value summary of every result-affecting setting.
  std::string describe() const {
    auto join = [](const auto& v, auto&& fmt) {
      std::string s;
      for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + fmt(v[i]);
      return s;
    };
    auto num = [](auto x) { return std::to_string(x); };
    auto dbl = [](double x) { return format_double(x); };
    auto mode = [](CorruptionMode m) { return to_string(m); };
    std::ostringstream o;
    o << "experiment=" << to_string(experiment) << " seed=" << seed << " trials=" << trials
      << " init=" << init.to_string() << " eps_levels=" << join(eps_levels, dbl);
    switch (experiment) {
      case ExperimentKind::Tradeoff:
        o << " budget=" << budget << " chain_counts=" << join(chain_counts, num) << " omega_size=" << omega_size
          << " gamma=" << format_double(gamma);
        break;
      case ExperimentKind::StateCount:
        o << " chains=" << chains << " horizon=" << horizon << " omega_sizes=" << join(omega_sizes, num)
          << " gamma=" << format_double(gamma);
        break;
      case ExperimentKind::GammaSweep:
        o << " chains=" << chains << " horizon=" << horizon << " omega_size=" << omega_size
          << " gammas=" << join(gammas, dbl);
        break;
      case ExperimentKind::Corruption:
        o << " chains=" << chains << " horizon=" << horizon << " omega_size=" << omega_size
          << " gamma=" << format_double(gamma) << " m1_fractions=" << join(m1_fractions, dbl)
          << " corrupt_modes=" << join(corrupt_modes, mode) << " bound_eps=" << format_double(bound_eps);
        break;
    }
    return o.str();
  }
};

namespace detail {

inline std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(v);
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (item.empty()) throw FormatError("empty item in list '" + v + "'");
    out.push_back(item);
  }
  if (out.empty()) throw FormatError("empty list value '" + v + "'");
  return out;
}

inline double parse_double(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  double x = 0.0;
  try {
    x = std::stod(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != v.size()) throw FormatError("config key '" + key + "': bad number '" + v + "'");
  return x;
}

inline std::uint64_t parse_uint(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  unsigned long long x = 0;
  try {
    if (!v.empty() && v[0] != '-') x = std::stoull(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != v.size()) throw FormatError("config key '" + key + "': bad integer '" + v + "'");
  return x;
}

}  // namespace detail

/// Reads a flat `key = value` config (lists are comma separated, '#' starts
/// a comment). `kind` selects the defaults; an `experiment` key, if present,
/// must agree with it.
inline ExperimentConfig parse_config(std::istream& in, std::optional<ExperimentKind> kind = std::nullopt) {
  std::map<std::string, std::string> kv;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto h = line.find('#'); h != std::string::npos) line.erase(h);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw FormatError("config line " + std::to_string(lineno) + ": expected key = value");
    auto key = detail::trim(line.substr(0, eq));
    auto value = detail::trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) throw FormatError("config line " + std::to_string(lineno) + ": empty key or value");
    if (!kv.emplace(key, value).second) throw FormatError("config key '" + key + "' given twice");
  }
  if (auto it = kv.find("experiment"); it != kv.end()) {
    const auto named = parse_experiment_kind(it->second);
    if (kind && *kind != named) throw FormatError("config names experiment '" + it->second + "' but another was requested");
    kind = named;
  }
  if (!kind) throw FormatError("no experiment selected");
  auto c = ExperimentConfig::defaults(*kind);

  auto uints = [](const std::string& k, const std::string& v) {
    std::vector<std::size_t> out;
    for (const auto& x : detail::split_list(v)) out.push_back(static_cast<std::size_t>(detail::parse_uint(k, x)));
    return out;
  };
  auto doubles = [](const std::string& k, const std::string& v) {
    std::vector<double> out;
    for (const auto& x : detail::split_list(v)) out.push_back(detail::parse_double(k, x));
    return out;
  };
  for (const auto& [k, v] : kv) {
    if (k == "experiment") continue;
    else if (k == "budget") c.budget = detail::parse_uint(k, v);
    else if (k == "chain_counts") c.chain_counts = uints(k, v);
    else if (k == "chains") c.chains = detail::parse_uint(k, v);
    else if (k == "horizon") c.horizon = detail::parse_uint(k, v);
    else if (k == "omega_size") c.omega_size = detail::parse_uint(k, v);
    else if (k == "omega_sizes") c.omega_sizes = uints(k, v);
    else if (k == "gamma") c.gamma = detail::parse_double(k, v);
    else if (k == "gammas") c.gammas = doubles(k, v);
    else if (k == "eps_levels") c.eps_levels = doubles(k, v);
    else if (k == "trials") c.trials = detail::parse_uint(k, v);
    else if (k == "seed") c.seed = detail::parse_uint(k, v);
    else if (k == "init") c.init = InitPolicy::parse(v);
    else if (k == "m1_fractions") c.m1_fractions = doubles(k, v);
    else if (k == "corrupt_modes") {
      c.corrupt_modes.clear();
      for (const auto& x : detail::split_list(v)) c.corrupt_modes.push_back(parse_corruption_mode(x));
    } else if (k == "bound_eps") c.bound_eps = detail::parse_double(k, v);
    else if (k == "out") c.out = v;
    else throw FormatError("unknown config key '" + k + "'");
  }
  if (c.trials < 1) throw FormatError("trials must be >= 1");
  for (double e : c.eps_levels)
    if (!(e >= 0.0)) throw FormatError("eps_levels must be >= 0");
  for (double f : c.m1_fractions)
    if (!(f >= 0.0) || f > 1.0) throw FormatError("m1_fractions must lie in [0, 1]");
  return c;
}

// ---------------------------------------------------------------------------
// CSV output
// ---------------------------------------------------------------------------

struct CsvTable {
  std::vector<std::string> comments;  // written as "# ..." lines before the header
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  std::string str() const {
    std::ostringstream o;
    for (const auto& c : comments) o << "# " << c << '\n';
    for (std::size_t i = 0; i < columns.size(); ++i) o << (i ? "," : "") << columns[i];
    o << '\n';
    for (const auto& r : rows) {
      for (std::size_t i = 0; i < r.size(); ++i) o << (i ? "," : "") << r[i];
      o << '\n';
    }
    return o.str();
  }

  std::size_t column(std::string_view name) const {
    for (std::size_t i = 0; i < columns.size(); ++i)
      if (columns[i] == name) return i;
    throw DomainError("no CSV column '" + std::string(name) + "'");
  }
  double number(std::size_t row, std::string_view name) const { return std::stod(rows.at(row).at(column(name))); }
};

struct SampleStats {
  double mean = 0.0;
  double std = 0.0;  // sample standard deviation (n - 1); 0 for one sample
};

inline SampleStats sample_stats(std::span<const double> xs) {
  SampleStats s;
  if (xs.empty()) return s;
  for (double x : xs) s.mean += x;
  s.mean /= static_cast<double>(xs.size());
  if (xs.size() > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - s.mean) * (x - s.mean);
    s.std = std::sqrt(ss / static_cast<double>(xs.size() - 1));
  }
  return s;
}

// ---------------------------------------------------------------------------
// Trials
// ---------------------------------------------------------------------------

/// Fixed ingredients of one grid point: the target matrix and its
/// precomputed sampler, error evaluator and initial law.
struct CycleModel {
  std::size_t size;
  double gamma;
  StochasticMatrix target;
  Distribution stationary;
  Distribution initial;
  std::vector<double> initial_cumulative;
  ChainSampler sampler;
  TransitionErrorEvaluator error;

  CycleModel(std::size_t n, double g, const InitPolicy& init)
      : size(n),
        gamma(g),
        target(cycle_walk(n, g)),
        stationary(stationary_distribution(target)),
        initial(init.resolve(target)),
        initial_cumulative(detail::cumulative(initial.weights())),
        sampler(target),
        error(target) {}
  CycleModel(const CycleModel&) = delete;
  CycleModel& operator=(const CycleModel&) = delete;
};

/// Stream key of chain m in a trial, and the two sub-streams it feeds.
inline std::uint64_t perturbation_seed(std::uint64_t trial_key, std::size_t m) {
  return child_seed(child_seed(trial_key, m), 0);
}
inline std::uint64_t path_seed(std::uint64_t trial_key, std::size_t m) {
  return child_seed(child_seed(trial_key, m), 1);
}
inline std::uint64_t trial_key(std::uint64_t seed, std::size_t point, std::size_t trial) {
  return child_seed(child_seed(seed, point), trial);
}

/// Simulates M chains; with eps > 0 each chain follows its own
/// perturb_uniform(target, eps, perturbation_seed(key, m)).
inline TrajectoryMatrix simulate_trial(const CycleModel& model, std::size_t chains, std::size_t horizon, double eps,
                                       std::uint64_t key) {
  const auto width = horizon + 1;
  std::vector<State> data(chains * width);
  for (std::size_t m = 0; m < chains; ++m) {
    CounterRng rng(path_seed(key, m));
    const auto out = std::span<State>(data).subspan(m * width, width);
    if (eps == 0.0) {
      sample_path(model.sampler, model.initial_cumulative, rng, out);
    } else {
      LazyPerturbedSampler sampler(model.target, eps, perturbation_seed(key, m));
      sample_path(sampler, model.initial_cumulative, rng, out);
    }
  }
  return TrajectoryMatrix(chains, horizon, model.size, std::move(data));
}

struct TrialErrors {
  double transition = 0.0;  // ||P_hat - P||_inf
  double stationary = 0.0;  // ||pi_hat - pi||_inf
};

inline TrialErrors trial_errors(const CycleModel& model, const TrajectoryMatrix& data) {
  std::vector<Count> visits(model.size, 0);
  for (std::size_t m = 0; m < data.chain_count(); ++m) {
    const auto row = data.row(m);
    for (std::size_t t = 0; t + 1 < row.size(); ++t) ++visits[row[t]];
  }
  const double total = static_cast<double>(data.chain_count() * data.horizon());
  double pi_err = 0.0;
  for (std::size_t i = 0; i < model.size; ++i)
    pi_err = std::max(pi_err, std::abs(static_cast<double>(visits[i]) / total - model.stationary[i]));
  return {model.error(data), pi_err};
}

namespace detail {

inline std::string fmt(double x) { return format_double(x); }
inline std::string fmt(std::size_t x) { return std::to_string(x); }

inline CsvTable new_table(const ExperimentConfig& c, std::vector<std::string> columns) {
  CsvTable t;
  t.comments.push_back(std::string("mce ") + kVersion + " " + c.describe());
  t.columns = std::move(columns);
  return t;
}

// Runs trials x points jobs and returns results indexed [point][trial].
template <class Job>
auto run_grid(std::size_t points, std::size_t trials, std::size_t threads, Job&& job) {
  using R = decltype(job(std::size_t{0}, std::size_t{0}));
  std::vector<R> flat(points * trials);
  parallel_for(points * trials, threads, [&](std::size_t, std::size_t k) { flat[k] = job(k / trials, k % trials); });
  std::vector<std::vector<R>> out(points);
  for (std::size_t p = 0; p < points; ++p)
    out[p].assign(flat.begin() + static_cast<std::ptrdiff_t>(p * trials),
                  flat.begin() + static_cast<std::ptrdiff_t>((p + 1) * trials));
  return out;
}

inline std::vector<double> pick(const std::vector<TrialErrors>& v, double TrialErrors::*field) {
  std::vector<double> out;
  out.reserve(v.size());
  for (const auto& e : v) out.push_back(e.*field);
  return out;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Studies
// ---------------------------------------------------------------------------

/// Columns M, T, eps, mean, std of ||P_hat - P||_inf at fixed M T.
/// Chain counts that do not divide the budget are skipped with a comment.
inline CsvTable run_tradeoff(const ExperimentConfig& c, std::size_t threads = 0) {
  auto table = detail::new_table(c, {"M", "T", "eps", "mean", "std"});
  struct Point { std::size_t m, t; double eps; };
  std::vector<Point> points;
  for (const auto m : c.chain_counts) {
    if (m == 0 || c.budget % m != 0 || c.budget / m < 1) {
      table.comments.push_back("warning: budget " + std::to_string(c.budget) + " not divisible by M=" +
                               std::to_string(m) + "; point skipped");
      continue;
    }
    for (const double e : c.eps_levels) points.push_back({m, c.budget / m, e});
  }
  const CycleModel model(c.omega_size, c.gamma, c.init);
  const auto res = detail::run_grid(points.size(), c.trials, threads, [&](std::size_t p, std::size_t r) {
    const auto& pt = points[p];
    const auto data = simulate_trial(model, pt.m, pt.t, pt.eps, trial_key(c.seed, p, r));
    return model.error(data);
  });
  for (std::size_t p = 0; p < points.size(); ++p) {
    const auto s = sample_stats(res[p]);
    table.rows.push_back({detail::fmt(points[p].m), detail::fmt(points[p].t), detail::fmt(points[p].eps),
                          detail::fmt(s.mean), detail::fmt(s.std)});
  }
  return table;
}

/// Columns omega_size, eps, mean, std of ||P_hat - P||_inf at fixed M, T.
inline CsvTable run_statecount(const ExperimentConfig& c, std::size_t threads = 0) {
  auto table = detail::new_table(c, {"omega_size", "eps", "mean", "std"});
  for (std::size_t g = 0; g < c.omega_sizes.size(); ++g) {
    // One model at a time: a 2500-state model holds ~100 MB of dense tables.
    const CycleModel model(c.omega_sizes[g], c.gamma, c.init);
    const auto res = detail::run_grid(c.eps_levels.size(), c.trials, threads, [&](std::size_t e, std::size_t r) {
      const auto point = g * c.eps_levels.size() + e;
      const auto data = simulate_trial(model, c.chains, c.horizon, c.eps_levels[e], trial_key(c.seed, point, r));
      return model.error(data);
    });
    for (std::size_t e = 0; e < c.eps_levels.size(); ++e) {
      const auto s = sample_stats(res[e]);
      if (s.mean > 2.0 + 1e-12) throw Error("statecount: mean sup-norm error exceeds 2");
      table.rows.push_back({detail::fmt(model.size), detail::fmt(c.eps_levels[e]), detail::fmt(s.mean),
                            detail::fmt(s.std)});
    }
  }
  return table;
}

/// Columns gamma, eps, target, mean, std where target is "pi" for
/// ||pi_hat - pi||_inf and "P" for ||P_hat - P||_inf.
inline CsvTable run_gamma_sweep(const ExperimentConfig& c, std::size_t threads = 0) {
  auto table = detail::new_table(c, {"gamma", "eps", "target", "mean", "std"});
  for (std::size_t g = 0; g < c.gammas.size(); ++g) {
    const CycleModel model(c.omega_size, c.gammas[g], c.init);
    const auto res = detail::run_grid(c.eps_levels.size(), c.trials, threads, [&](std::size_t e, std::size_t r) {
      const auto point = g * c.eps_levels.size() + e;
      const auto data = simulate_trial(model, c.chains, c.horizon, c.eps_levels[e], trial_key(c.seed, point, r));
      return trial_errors(model, data);
    });
    for (std::size_t e = 0; e < c.eps_levels.size(); ++e) {
      const auto pi = sample_stats(detail::pick(res[e], &TrialErrors::stationary));
      const auto p = sample_stats(detail::pick(res[e], &TrialErrors::transition));
      const auto gs = detail::fmt(c.gammas[g]);
      const auto es = detail::fmt(c.eps_levels[e]);
      table.rows.push_back({gs, es, "pi", detail::fmt(pi.mean), detail::fmt(pi.std)});
      table.rows.push_back({gs, es, "P", detail::fmt(p.mean), detail::fmt(p.std)});
    }
  }
  return table;
}

/// Columns m1_fraction, m1, mode, eps, mean, std, bound, condition_met,
/// condition_lhs, condition_rhs. `bound` is the corrupted-row error bound at
/// confidence bound_eps, averaged over trials; condition_met is 1 when the
/// sample-size condition held in every trial. The mixing gap entering T' is
/// that of the unperturbed target.
inline CsvTable run_corruption(const ExperimentConfig& c, std::size_t threads = 0) {
  auto table = detail::new_table(c, {"m1_fraction", "m1", "mode", "eps", "mean", "std", "bound", "condition_met",
                                     "condition_lhs", "condition_rhs"});
  const CycleModel model(c.omega_size, c.gamma, c.init);
  const double gamma_target = pseudo_spectral_gap(model.target).gamma;
  const auto target_ptr = std::make_shared<const StochasticMatrix>(model.target);

  struct Point { double fraction; std::size_t m1; CorruptionMode mode; double eps; };
  std::vector<Point> points;
  for (const double f : c.m1_fractions)
    for (const auto mode : c.corrupt_modes)
      for (const double e : c.eps_levels)
        points.push_back({f, static_cast<std::size_t>(std::llround(f * static_cast<double>(c.chains))), mode, e});

  struct Result { double error; CorruptedBound bound; };
  const auto res = detail::run_grid(points.size(), c.trials, threads, [&](std::size_t p, std::size_t r) {
    const auto& pt = points[p];
    const auto key = trial_key(c.seed, p, r);
    const auto clean = simulate_trial(model, c.chains, c.horizon, pt.eps, key);
    const auto dirty = inject_corrupted_rows(clean, pt.m1, pt.mode, child_seed(key, c.chains));

    std::vector<bool> is_bad(c.chains, false);
    for (const auto m : dirty.corrupted) is_bad[m] = true;
    std::vector<ChainModel> rows;
    for (std::size_t m = 0; m < c.chains && pt.m1 < c.chains; ++m) {
      if (is_bad[m]) continue;
      if (pt.eps == 0.0) {
        rows.push_back({target_ptr, model.stationary, model.initial, gamma_target});
      } else {
        auto pm = std::make_shared<const StochasticMatrix>(perturb_uniform(model.target, pt.eps, perturbation_seed(key, m)));
        auto pi_m = stationary_distribution(*pm);
        rows.push_back({std::move(pm), std::move(pi_m), model.initial, gamma_target});
      }
    }
    CorruptedBound bound{kInfinity, kInfinity, 0.0, 0.0, false, 0.0, kInfinity};
    if (!rows.empty()) {
      const CorruptionProfile profile{rows.size(), pt.m1, heterogeneity_metrics(model.target, rows, static_cast<double>(c.horizon))};
      bound = thm_corrupted_bound(profile, c.chains, c.horizon, model.size, c.bound_eps);
    }
    return Result{model.error(dirty.data), bound};
  });

  for (std::size_t p = 0; p < points.size(); ++p) {
    std::vector<double> errs;
    double bound_sum = 0.0, lhs_sum = 0.0, rhs_sum = 0.0;
    bool met = true;
    for (const auto& r : res[p]) {
      errs.push_back(r.error);
      bound_sum += r.bound.bound;
      lhs_sum += r.bound.condition_lhs;
      rhs_sum += r.bound.condition_rhs;
      met = met && r.bound.condition_met;
    }
    const auto s = sample_stats(errs);
    const double n = static_cast<double>(res[p].size());
    const auto& pt = points[p];
    table.rows.push_back({detail::fmt(pt.fraction), detail::fmt(pt.m1), to_string(pt.mode), detail::fmt(pt.eps),
                          detail::fmt(s.mean), detail::fmt(s.std), detail::fmt(bound_sum / n), met ? "1" : "0",
                          detail::fmt(lhs_sum / n), detail::fmt(rhs_sum / n)});
  }
  return table;
}

inline CsvTable run_experiment(const ExperimentConfig& c, std::size_t threads = 0) {
  switch (c.experiment) {
    case ExperimentKind::Tradeoff: return run_tradeoff(c, threads);
    case ExperimentKind::StateCount: return run_statecount(c, threads);
    case ExperimentKind::GammaSweep: return run_gamma_sweep(c, threads);
    case ExperimentKind::Corruption: return run_corruption(c, threads);
  }
  throw DomainError("unknown experiment");
}

}  // namespace mce
