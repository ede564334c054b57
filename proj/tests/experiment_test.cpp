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


#include "mce/experiment.hpp"

#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

using namespace mce;

namespace {

ExperimentConfig parse(const std::string& text, std::optional<ExperimentKind> kind = std::nullopt) {
  std::istringstream in(text);
  return parse_config(in, kind);
}

}  // namespace

TEST(Config, DefaultsPerStudy) {
  const auto t = ExperimentConfig::defaults(ExperimentKind::Tradeoff);
  EXPECT_EQ(t.budget, 10000u);
  EXPECT_EQ(t.trials, 50u);
  EXPECT_EQ(t.omega_size, 10u);
  EXPECT_EQ(t.gamma, 0.1);
  EXPECT_EQ(t.eps_levels, (std::vector<double>{0.0, 0.05}));
  const auto s = ExperimentConfig::defaults(ExperimentKind::StateCount);
  EXPECT_EQ(s.chains, 50u);
  EXPECT_EQ(s.horizon, 50u);
  EXPECT_EQ(s.omega_sizes.back(), 2500u);
  const auto g = ExperimentConfig::defaults(ExperimentKind::GammaSweep);
  EXPECT_EQ(g.chains, 200u);
  EXPECT_EQ(g.horizon, 200u);
  EXPECT_EQ(g.omega_size, 10u);
}

TEST(Config, ParsesKeysListsAndComments) {
  const auto c = parse(R"(
    # a comment
    experiment = tradeoff
    budget = 400      # trailing comment
    chain_counts = 2, 4 ,8
    eps_levels = 0,0.1
    trials = 3
    seed = 99
    init = point:2
  )");
  EXPECT_EQ(c.experiment, ExperimentKind::Tradeoff);
  EXPECT_EQ(c.budget, 400u);
  EXPECT_EQ(c.chain_counts, (std::vector<std::size_t>{2, 4, 8}));
  EXPECT_EQ(c.eps_levels, (std::vector<double>{0.0, 0.1}));
  EXPECT_EQ(c.trials, 3u);
  EXPECT_EQ(c.seed, 99u);
  EXPECT_EQ(c.init.to_string(), "point:2");
  EXPECT_EQ(parse("", ExperimentKind::Corruption).omega_size, 5u);
  const auto m = parse("corrupt_modes = constant, iid-uniform\nm1_fractions = 0, 0.5", ExperimentKind::Corruption);
  EXPECT_EQ(m.corrupt_modes.size(), 2u);
  EXPECT_EQ(m.m1_fractions.back(), 0.5);
}

TEST(Config, SampleFilesMatchDefaults) {
  for (auto kind : {ExperimentKind::Tradeoff, ExperimentKind::StateCount, ExperimentKind::GammaSweep,
                    ExperimentKind::Corruption}) {
    std::ifstream in(std::string(MCE_CONFIG_DIR) + "/" + to_string(kind) + ".cfg");
    ASSERT_TRUE(in) << to_string(kind);
    EXPECT_EQ(parse_config(in).describe(), ExperimentConfig::defaults(kind).describe()) << to_string(kind);
  }
}

TEST(Config, RejectsBadInput) {
  EXPECT_THROW(parse("trials = 3"), FormatError);
  EXPECT_THROW(parse("experiment = nope"), FormatError);
  EXPECT_THROW(parse("experiment = tradeoff", ExperimentKind::StateCount), FormatError);
  EXPECT_THROW(parse("colour = blue", ExperimentKind::Tradeoff), FormatError);
  EXPECT_THROW(parse("trials", ExperimentKind::Tradeoff), FormatError);
  EXPECT_THROW(parse("trials = ", ExperimentKind::Tradeoff), FormatError);
  EXPECT_THROW(parse("trials = 0", ExperimentKind::Tradeoff), FormatError);
  EXPECT_THROW(parse("trials = 2\ntrials = 3", ExperimentKind::Tradeoff), FormatError);
  EXPECT_THROW(parse("gamma = fast", ExperimentKind::Tradeoff), FormatError);
  EXPECT_THROW(parse("budget = -5", ExperimentKind::Tradeoff), FormatError);
  EXPECT_THROW(parse("eps_levels = 0,,1", ExperimentKind::Tradeoff), FormatError);
  EXPECT_THROW(parse("eps_levels = -1", ExperimentKind::Tradeoff), FormatError);
  EXPECT_THROW(parse("m1_fractions = 1.5", ExperimentKind::Corruption), FormatError);
}

TEST(Csv, LayoutAndLookup) {
  CsvTable t;
  t.comments = {"hello"};
  t.columns = {"a", "b"};
  t.rows = {{"1", "2.5"}};
  EXPECT_EQ(t.str(), "# hello\na,b\n1,2.5\n");
  EXPECT_EQ(t.number(0, "b"), 2.5);
  EXPECT_THROW(t.column("c"), DomainError);
}

TEST(Stats, SampleStandardDeviation) {
  const std::vector<double> xs{1, 2, 3, 4};
  const auto s = sample_stats(xs);
  EXPECT_EQ(s.mean, 2.5);
  EXPECT_NEAR(s.std, std::sqrt(5.0 / 3.0), 1e-15);
  EXPECT_EQ(sample_stats(std::vector<double>{7}).std, 0.0);
}

TEST(Trials, NoisyTrialFollowsPerturbedMatrices) {
  const CycleModel model(6, 0.2, InitPolicy{});
  const auto key = trial_key(5, 1, 2);
  const auto x = simulate_trial(model, 3, 40, 0.05, key);
  for (std::size_t m = 0; m < 3; ++m) {
    const ChainSampler s(perturb_uniform(model.target, 0.05, perturbation_seed(key, m)));
    CounterRng rng(path_seed(key, m));
    std::vector<State> row(41);
    sample_path(s, model.initial_cumulative, rng, row);
    EXPECT_TRUE(std::equal(row.begin(), row.end(), x.row(m).begin()));
  }
  EXPECT_EQ(x, simulate_trial(model, 3, 40, 0.05, key));
}

TEST(Trials, ErrorsMatchDenseEstimators) {
  const CycleModel model(7, 0.3, InitPolicy::parse("uniform"));
  const auto x = simulate_trial(model, 5, 30, 0.0, 123);
  const auto e = trial_errors(model, x);
  const auto c = count(x);
  EXPECT_NEAR(e.transition, sup_norm_matrix(empirical_transition_matrix(c), model.target), 1e-13);
  EXPECT_NEAR(e.stationary, sup_norm_vector(empirical_distribution(c), model.stationary), 1e-15);
}

namespace {

ExperimentConfig small_tradeoff() {
  auto c = ExperimentConfig::defaults(ExperimentKind::Tradeoff);
  c.budget = 600;
  c.chain_counts = {2, 7, 30};
  c.trials = 4;
  return c;
}

}  // namespace

TEST(Tradeoff, LayoutAndSkippedPoints) {
  const auto t = run_tradeoff(small_tradeoff(), 1);
  EXPECT_EQ(t.columns, (std::vector<std::string>{"M", "T", "eps", "mean", "std"}));
  ASSERT_EQ(t.rows.size(), 4u);  // M = 7 does not divide 600
  EXPECT_EQ(t.rows[2][0], "30");
  EXPECT_EQ(t.rows[2][1], "20");
  EXPECT_EQ(t.comments.size(), 2u);
  EXPECT_NE(t.comments[0].find("seed=1"), std::string::npos);
  EXPECT_NE(t.comments[0].find("mce "), std::string::npos);
  EXPECT_NE(t.comments[1].find("M=7"), std::string::npos);
}

TEST(Tradeoff, DeterministicAcrossThreads) {
  const auto c = small_tradeoff();
  const auto a = run_tradeoff(c, 1).str();
  EXPECT_EQ(a, run_tradeoff(c, 3).str());
  EXPECT_EQ(a, run_tradeoff(c, 0).str());
  auto d = c;
  d.seed = 2;
  EXPECT_NE(a, run_tradeoff(d, 1).str());
}

TEST(StateCount, MeansBoundedByTwo) {
  auto c = ExperimentConfig::defaults(ExperimentKind::StateCount);
  c.omega_sizes = {2, 40, 400};
  c.trials = 3;
  const auto t = run_statecount(c, 2);
  ASSERT_EQ(t.rows.size(), 6u);
  for (std::size_t r = 0; r < t.rows.size(); ++r) EXPECT_LE(t.number(r, "mean"), 2.0 + 1e-12);
  EXPECT_LT(t.number(0, "mean"), t.number(4, "mean"));
}

TEST(GammaSweep, RowsPerTarget) {
  auto c = ExperimentConfig::defaults(ExperimentKind::GammaSweep);
  c.gammas = {0.05, 0.9};
  c.eps_levels = {0.0};
  c.trials = 3;
  c.chains = 40;
  c.horizon = 40;
  const auto t = run_gamma_sweep(c, 1);
  ASSERT_EQ(t.rows.size(), 4u);
  EXPECT_EQ(t.rows[0][2], "pi");
  EXPECT_EQ(t.rows[1][2], "P");
  EXPECT_EQ(t.rows[3][0], "0.90000000000000002");
  EXPECT_EQ(t.str(), run_gamma_sweep(c, 2).str());
}

TEST(Corruption, ColumnsAndZeroFraction) {
  auto c = ExperimentConfig::defaults(ExperimentKind::Corruption);
  c.m1_fractions = {0.0, 0.2};
  c.trials = 3;
  c.chains = 20;
  c.horizon = 200;
  const auto t = run_corruption(c, 1);
  ASSERT_EQ(t.rows.size(), 2u);
  EXPECT_EQ(t.columns.size(), 10u);
  EXPECT_EQ(t.rows[1][1], "4");
  EXPECT_EQ(t.rows[1][2], "constant");
  EXPECT_GT(t.number(1, "mean"), t.number(0, "mean"));
  EXPECT_GT(t.number(1, "bound"), t.number(0, "bound"));
  EXPECT_EQ(t.str(), run_corruption(c, 3).str());
}

TEST(Corruption, FullyCorruptedPointHasNoBound) {
  auto c = ExperimentConfig::defaults(ExperimentKind::Corruption);
  c.m1_fractions = {1.0};
  c.trials = 2;
  c.chains = 4;
  c.horizon = 10;
  const auto t = run_corruption(c, 1);
  EXPECT_EQ(t.rows[0][t.column("bound")], "inf");
  EXPECT_EQ(t.rows[0][t.column("condition_met")], "0");
}
