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

// mce command line: simulate | estimate | spectral | bounds | experiment.
//
// Exit codes: 0 success, 1 usage or malformed input, 2 domain error.

#include "mce/mce.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

namespace fs = std::filesystem;

namespace {

// Seeds derived from --seed. Kept apart so that adding corruption does not
// change the clean rows of a simulated ensemble.
std::uint64_t path_master(std::uint64_t seed) { return mce::child_seed(seed, 0); }
std::uint64_t noise_seed(std::uint64_t seed, std::size_t m) { return mce::child_seed(mce::child_seed(seed, 1), m); }
std::uint64_t corruption_seed(std::uint64_t seed) { return mce::child_seed(seed, 2); }

struct ModelArgs {
  std::string model = "lazy-cycle";
  std::string model_file;
  std::size_t size = 10;
  double gamma = 0.1;
  double eps = 0.0;
  std::string init = "stationary";

  void add_to(CLI::App& app) {
    app.add_option("--model", model, "lazy-cycle | complete-graph | file")
        ->check(CLI::IsMember({"lazy-cycle", "complete-graph", "file"}))
        ->capture_default_str();
    app.add_option("--model-file", model_file, "model description (with --model file)");
    app.add_option("--size", size, "number of states")->capture_default_str();
    app.add_option("--gamma", gamma, "lazy-cycle move probability")->capture_default_str();
    app.add_option("--eps", eps, "uniform noise level applied per chain")->capture_default_str();
    app.add_option("--init", init, "stationary | uniform | point:<i>")->capture_default_str();
  }
};

struct Ensemble {
  std::shared_ptr<const mce::StochasticMatrix> target;
  std::vector<mce::ChainModel> chains;
};

// Builds the per-chain models of an M-chain ensemble. Lazy-cycle and
// complete-graph chains start from the policy resolved against the target;
// with eps > 0 chain m follows perturb_uniform(target, eps, noise_seed(m)).
Ensemble build_ensemble(const ModelArgs& a, std::size_t chains, std::uint64_t seed) {
  if (chains < 1) throw mce::DomainError("--chains must be >= 1");
  if (a.eps < 0.0) throw mce::DomainError("--eps must be >= 0");
  Ensemble e;
  if (a.model == "file") {
    if (a.model_file.empty()) throw mce::FormatError("--model file needs --model-file");
    const auto d = mce::with_input_file(a.model_file, [](std::istream& in) { return mce::read_model(in); });
    if (a.eps > 0.0) throw mce::DomainError("--eps cannot be combined with a model file");
    e.target = d.target;
    e.chains = d.expand(chains);
    return e;
  }
  std::shared_ptr<const mce::StochasticMatrix> base;
  if (a.model == "lazy-cycle") {
    e.target = std::make_shared<const mce::StochasticMatrix>(mce::cycle_walk(a.size, a.gamma));
    base = e.target;
  } else {
    auto pair = mce::complete_graph_pair(a.size);
    e.target = std::make_shared<const mce::StochasticMatrix>(std::move(pair.target));
    base = std::make_shared<const mce::StochasticMatrix>(std::move(pair.perturbed));
  }
  const auto policy = mce::InitPolicy::parse(a.init);
  const auto mu = policy.resolve(*e.target);
  if (a.eps == 0.0) {
    auto c = mce::ChainModel::stationary_start(base);
    c.initial = mu;
    e.chains.assign(chains, c);
    return e;
  }
  for (std::size_t m = 0; m < chains; ++m) {
    auto pm = std::make_shared<const mce::StochasticMatrix>(mce::perturb_uniform(*base, a.eps, noise_seed(seed, m)));
    auto pi = mce::stationary_distribution(*pm);
    e.chains.push_back({std::move(pm), std::move(pi), mu, std::nullopt});
  }
  return e;
}

// Row indices that `simulate` with the same seed overwrites.
std::vector<std::size_t> corrupted_rows(std::size_t chains, std::size_t states, std::size_t count, std::uint64_t seed) {
  mce::TrajectoryMatrix blank(chains, 1, states, std::vector<mce::State>(chains * 2, 0));
  return mce::inject_corrupted_rows(blank, count, mce::CorruptionMode::Constant, corruption_seed(seed)).corrupted;
}

template <class Fn>
void write_to(const std::string& path, Fn&& fn) {
  if (path.empty() || path == "-") {
    fn(std::cout);
    return;
  }
  if (const auto parent = fs::path(path).parent_path(); !parent.empty()) fs::create_directories(parent);
  std::ofstream out(path);
  if (!out) throw mce::FormatError("cannot write '" + path + "'");
  fn(out);
  if (!out) throw mce::FormatError("error writing '" + path + "'");
}

// ---------------------------------------------------------------------------

struct SimulateArgs {
  ModelArgs model;
  std::size_t chains = 10;
  std::size_t horizon = 100;
  std::uint64_t seed = 1;
  std::size_t corrupt_count = 0;
  std::string corrupt_mode = "constant";
  std::string out;
  std::string corrupt_out;
  std::size_t threads = 1;
};

void run_simulate(const SimulateArgs& a) {
  const auto e = build_ensemble(a.model, a.chains, a.seed);
  mce::EnsemblePlan plan;
  plan.horizon = a.horizon;
  plan.master_seed = path_master(a.seed);
  for (const auto& c : e.chains) plan.chains.push_back({c.transition, c.initial});
  auto data = mce::simulate_ensemble(plan, a.threads);
  std::vector<std::size_t> bad;
  if (a.corrupt_count > 0) {
    auto dirty = mce::inject_corrupted_rows(data, a.corrupt_count, mce::parse_corruption_mode(a.corrupt_mode),
                                            corruption_seed(a.seed));
    data = std::move(dirty.data);
    bad = std::move(dirty.corrupted);
  }
  write_to(a.out, [&](std::ostream& o) { mce::write_trajectory(o, data); });
  if (!a.corrupt_out.empty()) write_to(a.corrupt_out, [&](std::ostream& o) { mce::write_index_list(o, bad); });
}

// ---------------------------------------------------------------------------

struct EstimateArgs {
  std::string trajectory;
  std::string out = ".";
  std::string split_file;
  std::size_t threads = 1;
};

void run_estimate(const EstimateArgs& a) {
  const auto data = mce::with_input_file(a.trajectory, [](std::istream& in) { return mce::read_trajectory(in); });
  const fs::path dir(a.out);
  auto save = [&](const char* name, auto const& value) {
    write_to((dir / name).string(), [&](std::ostream& o) {
      if constexpr (std::is_same_v<std::decay_t<decltype(value)>, mce::StochasticMatrix>)
        mce::write_matrix(o, value);
      else
        mce::write_distribution(o, value);
    });
  };
  if (a.split_file.empty()) {
    const auto c = mce::count(data, {false, a.threads});
    save("P_hat.txt", mce::empirical_transition_matrix(c));
    save("pi_hat.txt", mce::empirical_distribution(c));
    return;
  }
  const auto bad = mce::with_input_file(a.split_file, [](std::istream& in) { return mce::read_index_list(in); });
  const auto s = mce::split_estimate(data, bad);
  save("P_hat.txt", s.transition);
  save("pi_hat.txt", s.distribution);
  save("P_hat0.txt", s.clean_transition);
  if (s.clean_distribution) save("pi_hat0.txt", *s.clean_distribution);
}

// ---------------------------------------------------------------------------

struct SpectralArgs {
  ModelArgs model;
  std::string matrix_file;
  std::size_t max_power = 100000;
};

void run_spectral(const SpectralArgs& a) {
  const auto p = a.matrix_file.empty()
                     ? *build_ensemble(a.model, 1, 0).target
                     : mce::with_input_file(a.matrix_file, [](std::istream& in) { return mce::read_matrix(in); });
  mce::validate_irreducible_aperiodic(p);
  const auto pi = mce::stationary_distribution(p);
  const auto ps = mce::pseudo_spectral_gap(p, a.max_power);
  auto opt = [](bool ok, auto&& fn) { return ok ? mce::format_double(fn()) : std::string("n/a (not reversible)"); };
  const bool rev = mce::is_reversible(p, pi);
  std::cout << "states     " << p.size() << '\n'
            << "gamma_rev  " << opt(rev, [&] { return mce::gamma_rev(p, pi); }) << '\n'
            << "gamma_abs  " << opt(rev, [&] { return mce::gamma_abs(p, pi); }) << '\n'
            << "gamma_ps   " << mce::format_double(ps.gamma) << '\n'
            << "k_star     " << ps.k_star << '\n'
            << "pi        ";
  for (double x : pi.weights()) std::cout << ' ' << mce::format_double(x);
  std::cout << '\n';
}

// ---------------------------------------------------------------------------

struct BoundsArgs {
  ModelArgs model;
  std::size_t chains = 100;
  std::size_t horizon = 100;
  double confidence = 0.05;
  double margin = 10.0;
  std::size_t corrupt_count = 0;
  std::uint64_t seed = 1;
  bool csv = false;
};

void run_bounds(const BoundsArgs& a) {
  const auto e = build_ensemble(a.model, a.chains, a.seed);
  const auto n = e.target->size();
  const auto target_pi = mce::stationary_distribution(*e.target);
  const auto h = mce::heterogeneity_metrics(*e.target, e.chains, static_cast<double>(a.horizon));
  const auto tb = mce::thm_transition_bound(h, a.chains, a.horizon, n, a.confidence);
  const auto sb = mce::thm_stationary_bound(h, a.chains, n, a.confidence, {}, target_pi);
  const auto report = mce::consistency_check(h, a.chains, n, a.margin, target_pi);

  std::vector<std::pair<std::string, std::string>> rows;
  auto put = [&](std::string k, double v) { rows.emplace_back(std::move(k), mce::format_double(v)); };
  auto flag = [&](std::string k, bool v) { rows.emplace_back(std::move(k), v ? "1" : "0"); };
  put("delta1", h.delta1);
  put("delta_inf", h.delta_inf);
  put("pi_bar_min", h.pi_bar_min);
  put("eta", h.eta);
  put("gamma_min", h.gamma_min);
  put("t_prime", h.t_prime);
  put("transition_bound", tb.bound);
  put("transition_sampling_term", tb.sampling_term);
  put("transition_heterogeneity_term", tb.heterogeneity_term);
  put("transition_condition_lhs", tb.condition_lhs);
  put("transition_condition_rhs", tb.condition_rhs);
  flag("transition_condition_met", tb.condition_met);
  put("stationary_bound", sb.bound);
  put("stationary_bound_to_target", *sb.triangle_bound);
  if (a.corrupt_count > 0) {
    if (a.corrupt_count >= a.chains) throw mce::DomainError("--corrupt-count must leave at least one clean chain");
    const auto bad = corrupted_rows(a.chains, n, a.corrupt_count, a.seed);
    std::vector<bool> is_bad(a.chains, false);
    for (auto m : bad) is_bad[m] = true;
    std::vector<mce::ChainModel> clean;
    for (std::size_t m = 0; m < a.chains; ++m)
      if (!is_bad[m]) clean.push_back(e.chains[m]);
    const mce::CorruptionProfile profile{clean.size(), a.corrupt_count,
                                         mce::heterogeneity_metrics(*e.target, clean, static_cast<double>(a.horizon))};
    const auto cb = mce::thm_corrupted_bound(profile, a.chains, a.horizon, n, a.confidence);
    put("corrupted_bound", cb.bound);
    put("corrupted_sampling_term", cb.sampling_term);
    put("corrupted_heterogeneity_term", cb.heterogeneity_term);
    put("corrupted_corruption_term", cb.corruption_term);
    put("corrupted_condition_lhs", cb.condition_lhs);
    put("corrupted_condition_rhs", cb.condition_rhs);
    flag("corrupted_condition_met", cb.condition_met);
  }
  for (const auto& item : report.items) {
    const char* scope = item.scope == mce::ConsistencyItem::Scope::Transition   ? "transition"
                        : item.scope == mce::ConsistencyItem::Scope::Stationary ? "stationary"
                                                                                : "diagnostic";
    rows.emplace_back(std::string("check[") + scope + "] " + item.name + (item.needs_large ? " >= " : " <= ") +
                          mce::format_double(item.threshold),
                      mce::format_double(item.value) + (item.pass ? " pass" : " fail"));
  }
  flag("transition_consistent", report.transition_consistent);
  flag("stationary_consistent", report.stationary_consistent.value_or(false));

  if (a.csv) {
    std::cout << "quantity,value\n";
    for (const auto& [k, v] : rows) std::cout << '"' << k << "\"," << v << '\n';
    return;
  }
  std::size_t width = 0;
  for (const auto& r : rows) width = std::max(width, r.first.size());
  for (const auto& [k, v] : rows) std::cout << k << std::string(width + 2 - k.size(), ' ') << v << '\n';
}

// ---------------------------------------------------------------------------

struct ExperimentArgs {
  std::string name;
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> trials;
  std::size_t threads = 0;
};

void run_experiment_cmd(const ExperimentArgs& a) {
  const auto kind = mce::parse_experiment_kind(a.name);
  auto cfg = mce::ExperimentConfig::defaults(kind);
  if (!a.config.empty())
    cfg = mce::with_input_file(a.config, [&](std::istream& in) { return mce::parse_config(in, kind); });
  if (a.seed) cfg.seed = *a.seed;
  if (a.trials) {
    if (*a.trials < 1) throw mce::FormatError("--trials must be >= 1");
    cfg.trials = *a.trials;
  }
  if (!a.out.empty()) cfg.out = a.out;
  const auto table = mce::run_experiment(cfg, a.threads);
  const auto path = cfg.out.empty() ? std::string() : (fs::path(cfg.out) / (a.name + ".csv")).string();
  write_to(path, [&](std::ostream& o) { o << table.str(); });
  if (!path.empty()) std::cerr << "wrote " << path << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Estimate Markov chains from heterogeneous, partly corrupted ensembles of sample paths."};
  app.require_subcommand(1);
  app.set_version_flag("--version", mce::kVersion);

  SimulateArgs sim;
  auto* s = app.add_subcommand("simulate", "Simulate an ensemble and write a trajectory file");
  sim.model.add_to(*s);
  s->add_option("--chains", sim.chains, "M")->capture_default_str();
  s->add_option("--horizon", sim.horizon, "T")->capture_default_str();
  s->add_option("--seed", sim.seed)->capture_default_str();
  s->add_option("--corrupt-count", sim.corrupt_count, "rows to overwrite")->capture_default_str();
  s->add_option("--corrupt-mode", sim.corrupt_mode, "constant | adversarial-cycle | iid-uniform")
      ->capture_default_str();
  s->add_option("--out", sim.out, "trajectory file (default stdout)");
  s->add_option("--corrupt-out", sim.corrupt_out, "write corrupted row indices here");
  s->add_option("--threads", sim.threads, "0 = all cores")->capture_default_str();

  EstimateArgs est;
  auto* e = app.add_subcommand("estimate", "Estimate P_hat and pi_hat from a trajectory file");
  e->add_option("trajectory", est.trajectory)->required();
  e->add_option("--out", est.out, "output directory")->capture_default_str();
  e->add_option("--split-file", est.split_file, "corrupted row indices; also writes P_hat0/pi_hat0");
  e->add_option("--threads", est.threads, "0 = all cores")->capture_default_str();

  SpectralArgs plan;
  auto* sp = app.add_subcommand("spectral", "Print spectral gaps and the stationary law");
  plan.model.add_to(*sp);
  sp->add_option("matrix", plan.matrix_file, "matrix file (otherwise the --model target)");
  sp->add_option("--max-power", plan.max_power, "largest k searched")->capture_default_str();

  BoundsArgs bnd;
  auto* b = app.add_subcommand("bounds", "Evaluate heterogeneity metrics, error bounds and consistency checks");
  bnd.model.add_to(*b);
  b->add_option("--chains", bnd.chains, "M")->capture_default_str();
  b->add_option("--horizon", bnd.horizon, "T")->capture_default_str();
  b->add_option("--confidence", bnd.confidence, "failure probability eps")->capture_default_str();
  b->add_option("--margin", bnd.margin, "factor standing in for >> and <<")->capture_default_str();
  b->add_option("--corrupt-count", bnd.corrupt_count, "M1")->capture_default_str();
  b->add_option("--seed", bnd.seed, "noise and corruption seed, as in simulate")->capture_default_str();
  b->add_flag("--csv", bnd.csv, "machine-readable output");

  ExperimentArgs exp;
  auto* x = app.add_subcommand("experiment", "Run a simulation study and write a CSV");
  x->add_option("name", exp.name, "tradeoff | statecount | gamma-sweep | corruption")->required();
  x->add_option("--config", exp.config, "key = value config file");
  x->add_option("--out", exp.out, "output directory (default stdout)");
  x->add_option("--seed", exp.seed);
  x->add_option("--trials", exp.trials);
  x->add_option("--threads", exp.threads, "0 = all cores")->capture_default_str();
  x->add_flag("--csv", "accepted for symmetry; experiments always write CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    return app.exit(err) == 0 ? 0 : 1;
  }

  try {
    if (s->parsed()) run_simulate(sim);
    else if (e->parsed()) run_estimate(est);
    else if (sp->parsed()) run_spectral(plan);
    else if (b->parsed()) run_bounds(bnd);
    else if (x->parsed()) run_experiment_cmd(exp);
  } catch (const mce::FormatError& err) {
    std::cerr << "error: " << err.what() << '\n';
    return 1;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << '\n';
    return 2;
  }
  return 0;
}
