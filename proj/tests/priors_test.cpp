// Copyright 2026 The bts Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "bts/priors.hpp"

#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "bts/connect_four.hpp"
#include "bts/game.hpp"
#include "bts/gw_game.hpp"
#include "bts/oracle.hpp"
#include "bts/pearl.hpp"
#include "support/random_trees.hpp"

namespace bts {
namespace {

GWModel regular_model(int d, int K, double q) {
  GWModel m;
  m.max_depth = K;
  for (int k = 0; k < K; ++k) m.mu.push_back({{d, 1.0}});
  m.mu.push_back({{0, 1.0}});
  m.q.assign(static_cast<std::size_t>(K) + 1, q);
  return m;
}

GWModel random_model(std::mt19937_64& gen, int K) {
  std::uniform_real_distribution<double> u(0.05, 0.95);
  GWModel m;
  m.max_depth = K;
  for (int k = 0; k < K; ++k) {
    const double a = u(gen), b = u(gen), c = u(gen);
    const double t = a + b + c;
    m.mu.push_back({{0, a / t}, {1, b / t}, {3, c / t}});
  }
  m.mu.push_back({{0, 1.0}});
  for (int k = 0; k <= K; ++k) m.q.push_back(u(gen));
  m.validate();
  return m;
}

// Fraction of sampled games won by J1, with its standard error.
std::pair<double, double> sampled_root_mean(GWModel m, int n) {
  int wins = 0;
  for (int s = 0; s < n; ++s) {
    m.seed = static_cast<std::uint64_t>(s) + 1000;
    wins += minimax_solve(gw_game_sample(m));
  }
  const double f = static_cast<double>(wins) / n;
  return {f, std::sqrt(f * (1 - f) / n)};
}

TEST(GWTables, CounterexampleModel) {
  const PriorTables t = gw_tables(regular_model(2, 3, 0.5));
  const double m[4] = {207.0 / 256, 9.0 / 16, 3.0 / 4, 0.5};
  const double s[4] = {0.0, 9.0 / 256, 1.0 / 16, 1.0 / 4};
  for (int k = 0; k < 4; ++k) EXPECT_NEAR(t.m[k], m[k], 1e-15) << k;
  for (int k = 1; k < 4; ++k) EXPECT_NEAR(t.s[k], s[k], 1e-15) << k;
}

TEST(GWTables, DeterministicLittersMatchOracle) {
  // The s value at depth k is the one-playout variance reduction there,
  // which the enumeration oracle computes directly.
  const PriorTables t = gw_tables(regular_model(3, 2, 0.3));
  for (int k = 0; k <= 2; ++k) {
    const ExplicitTree sub = ExplicitTree::regular(3, 2 - k);
    const std::vector<double> q(sub.leaves().size(), 0.3);
    const StepOracle o = step_optimal_z(sub, q, ObservationSet{}, player_at_depth(k));
    EXPECT_NEAR(t.m[k], static_cast<double>(o.posterior), 1e-14);
    EXPECT_NEAR(t.s[k], static_cast<double>(o.frontier.front().delta), 1e-14);
  }
}

TEST(GWTables, TerminalRoot) {
  GWModel m;
  m.max_depth = 0;
  m.mu = {{{0, 1.0}}};
  m.q = {0.3};
  const PriorTables t = gw_tables(m);
  EXPECT_DOUBLE_EQ(t.m[0], 0.3);
  EXPECT_DOUBLE_EQ(t.s[0], 0.3 * 0.7);
}

TEST(GWTables, RootMeanMatchesSampling) {
  std::mt19937_64 gen(4);
  for (int trial = 0; trial < 5; ++trial) {
    const GWModel m = random_model(gen, 4);
    const PriorTables t = gw_tables(m);
    const auto [f, se] = sampled_root_mean(m, 100000);
    EXPECT_NEAR(t.m[0], f, 3.0 * se) << trial;
  }
}

TEST(GWTables, EqualPearlTablesOnRegularModel) {
  for (int K : {1, 4, 9}) {
    const PriorTables a = gw_tables(regular_model(2, K, 0.37));
    const PriorTables b = pearl_tables(2, K, 0.37);
    for (int k = 0; k <= K; ++k) {
      EXPECT_NEAR(a.m[k], b.m[k], 1e-14);
      EXPECT_NEAR(a.s[k], b.s[k], 1e-14);
    }
  }
}

TEST(GWTables, ZeroVarianceExactlyAtCertainMeans) {
  std::mt19937_64 gen(9);
  for (int trial = 0; trial < 50; ++trial) {
    GWModel m = random_model(gen, 5);
    // Make some leaf probabilities certain.
    m.q[static_cast<std::size_t>(trial % 6)] = trial % 2 ? 1.0 : 0.0;
    const PriorTables t = gw_tables(m);
    for (int k = 0; k <= 5; ++k) {
      const bool certain = t.m[k] == 0.0 || t.m[k] == 1.0;
      EXPECT_EQ(t.s[k] == 0.0, certain) << trial << " " << k;
    }
  }
}

TEST(PearlTables, Leaves) {
  const PriorTables t = pearl_tables(3, 5, 0.4);
  EXPECT_DOUBLE_EQ(t.m[5], 0.4);
  EXPECT_DOUBLE_EQ(t.s[5], 0.24);
  EXPECT_THROW(pearl_tables(1, 5, 0.4), std::invalid_argument);
}

TEST(SolveRootMean, Examples) {
  EXPECT_NEAR(solve_root_mean(2, 1, 0.5), 1.0 - std::sqrt(0.5), 1e-11);
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  EXPECT_NEAR(solve_root_mean(2, 8, g), g, 1e-9);
  for (int K : {3, 16, 32}) {
    const double p = solve_root_mean(2, K, 0.5);
    EXPECT_NEAR(pearl_tables(2, K, p).m[0], 0.5, 1e-10) << K;
  }
  EXPECT_THROW(solve_root_mean(2, 4, 1.0), std::invalid_argument);
}

TEST(SymChild, Means) {
  const NodePrior half{LogOdds(0.0), 0.0};
  EXPECT_NEAR(sym_child(half, 2, Player::J0, 0.0).mean(), std::sqrt(0.5), 1e-15);
  EXPECT_NEAR(sym_child(half, 2, Player::J1, 0.0).mean(), 1.0 - std::sqrt(0.5), 1e-15);
  EXPECT_THROW(sym_child(half, 0, Player::J0, 0.0), std::invalid_argument);
}

TEST(SymChild, VarianceScaling) {
  const NodePrior half{LogOdds(0.0), std::log(3.0)};
  EXPECT_DOUBLE_EQ(sym_child(half, 2, Player::J0, 0.0).log_s, std::log(3.0));
  EXPECT_DOUBLE_EQ(sym_child(half, 5, Player::J1, 0.0).log_s, std::log(3.0));
  // b = 2: s is divided by the child's side, (0.5^(1/2))^2 = 0.5.
  EXPECT_NEAR(sym_child(half, 2, Player::J0, 2.0).s(), 6.0, 1e-14);
}

TEST(SymChild, ReproducesPearlTablesWithB2) {
  // Balanced p keeps every m away from 0 and 1, where the d-th roots lose
  // precision.
  for (int d : {2, 3}) {
    const int K = 10;
    const PriorTables t = pearl_tables(d, K, solve_root_mean(d, K, 0.5));
    NodePrior cur = NodePrior::from_probs(t.m[0], t.s[0]);
    for (int k = 1; k <= K; ++k) {
      cur = sym_child(cur, static_cast<std::size_t>(d), player_at_depth(k - 1), 2.0);
      EXPECT_NEAR(cur.mean(), t.m[k], 1e-9) << d << " " << k;
      EXPECT_NEAR(cur.log_s, std::log(t.s[k]), 1e-8) << d << " " << k;
    }
  }
}

TEST(SymChild, ZeroVarianceOnlyAtCertainMeans) {
  std::mt19937_64 gen(12);
  std::uniform_int_distribution<int> litter(1, 40);
  for (int chain = 0; chain < 10000; ++chain) {
    NodePrior cur = sym_root(SymFamily{0.5, 2.0});
    for (int k = 0; k < 30; ++k) {
      cur = sym_child(cur, static_cast<std::size_t>(litter(gen)), player_at_depth(k), 2.0);
      ASSERT_EQ(std::isfinite(cur.m.value()), std::isfinite(cur.log_s)) << chain << " " << k;
    }
  }
  const NodePrior won = sym_child(NodePrior{LogOdds::one_prob(), -kInf}, 3, Player::J0, 2.0);
  EXPECT_EQ(won.mean(), 1.0);
  EXPECT_EQ(won.s(), 0.0);
  EXPECT_THROW(sym_root(SymFamily{1.0, 0.0}), std::invalid_argument);
}

TEST(GW2Tables, LeafDepth) {
  GW2Model m;
  m.max_depth = 3;
  m.mu0 = {{2, 1.0}};
  m.mu[{1, 2}] = {{1, 0.5}, {2, 0.5}};
  m.mu[{2, 1}] = {{0, 0.3}, {2, 0.7}};
  m.mu[{2, 2}] = {{3, 1.0}};
  m.q = {0.5, 0.5, 0.2, 0.6};
  m.validate();
  const PriorTables t = gw2_tables(m);
  for (int d : {2, 3}) {
    EXPECT_DOUBLE_EQ(t.by_litter.at({3, d}).first, 0.6);
  }
  EXPECT_TRUE(t.by_litter.contains({0, 0}));
}

TEST(GW2Tables, CollapseToOrderOne) {
  std::mt19937_64 gen(5);
  const GWModel g = random_model(gen, 4);
  GW2Model m;
  m.max_depth = 4;
  m.mu0 = g.mu[0];
  for (int k = 1; k < 4; ++k) {
    for (int d : {1, 3}) m.mu[{k, d}] = g.mu[static_cast<std::size_t>(k)];
  }
  m.q = g.q;
  m.validate();
  const PriorTables a = gw2_tables(m);
  const PriorTables b = gw_tables(g);
  for (const auto& [kd, v] : a.by_litter) {
    EXPECT_NEAR(v.first, b.m[static_cast<std::size_t>(kd.first)], 1e-14);
    EXPECT_NEAR(v.second, b.s[static_cast<std::size_t>(kd.first)], 1e-14);
  }
}

TEST(GW2Tables, ConditionalMeanMatchesSampling) {
  GW2Model m;
  m.max_depth = 3;
  m.mu0 = {{1, 0.5}, {3, 0.5}};
  m.mu[{1, 1}] = {{0, 0.2}, {2, 0.8}};
  m.mu[{1, 3}] = {{0, 0.6}, {1, 0.4}};
  m.mu[{2, 1}] = {{0, 0.5}, {2, 0.5}};
  m.mu[{2, 2}] = {{1, 0.3}, {3, 0.7}};
  m.q = {0.5, 0.4, 0.7, 0.35};
  m.validate();
  const PriorTables t = gw2_tables(m);
  // Sample depth-1 subgames by conditioning on the root litter size.
  for (int d : {1, 3}) {
    int wins = 0, n = 0;
    for (std::uint64_t s = 0; n < 100000; ++s) {
      m.seed = s;
      const GW2Game g = gw2_game_sample(m);
      if (static_cast<int>(g.num_moves()) != d) continue;
      wins += !minimax_solve(g.child(0));  // J0 moves at depth 1
      ++n;
    }
    const double f = static_cast<double>(wins) / n;
    EXPECT_NEAR(t.by_litter.at({1, d}).first, f, 3.0 * std::sqrt(f * (1 - f) / n)) << d;
  }
}

TEST(FixedPoint, NoLitters) {
  const auto fp = homogeneous_s_fixed_point({{0, 1.0}}, 64, 1e-14);
  for (double x : {0.0, 0.1, 0.37, 0.5, 0.99}) EXPECT_NEAR(fp(x), x * (1 - x), 1e-14);
}

TEST(FixedPoint, ClosedFormAtA0) {
  const double a0 = (std::sqrt(5.0) - 1.0) / 2.0;
  const auto fp = homogeneous_s_fixed_point({{0, 0.5}, {2, 0.5}}, 256, 1e-14);
  EXPECT_NEAR(fp(a0), 0.5 * std::pow(a0, 3) / (1.0 - 0.5 * a0 * a0), 1e-8);
}

TEST(FixedPoint, GridRefinement) {
  const double tol = 1e-12;
  const LitterLaw mu = {{0, 0.4}, {1, 0.3}, {3, 0.3}};
  const auto a = homogeneous_s_fixed_point(mu, 1 << 8, tol);
  const auto b = homogeneous_s_fixed_point(mu, 1 << 10, tol);
  for (std::size_t i = 0; i <= a.grid_size(); ++i) {
    EXPECT_NEAR(a.grid_value(i), b.grid_value(4 * i), 1e-5) << i;
  }
  for (double x : {0.1, 0.5, 0.9}) EXPECT_NEAR(a(x), b(x), 4 * tol + 1e-10) << x;
  EXPECT_THROW(homogeneous_s_fixed_point({{1, 1.0}}, 64, 1e-10), std::invalid_argument);
}

TEST(Fit, RegularTreeLitters) {
  const PearlGame g(PearlConfig{2, 4, 0.5, 3});
  std::mt19937_64 gen(1);
  const GWFit f = fit_gw_from_playouts(g, 1000, gen);
  ASSERT_EQ(f.model.max_depth, 4);
  for (int k = 0; k < 4; ++k) {
    ASSERT_EQ(f.model.mu[k].size(), 1u);
    EXPECT_EQ(f.model.mu[k][0].first, 2);
    EXPECT_FALSE(f.q_observed[k]);
  }
  EXPECT_TRUE(f.q_observed[4]);
}

TEST(Fit, LeafFrequencyPearl) {
  // Averaged over fresh realizations, a uniform playout's leaf is Bernoulli(p).
  const int n = 100000;
  int wins = 0;
  std::mt19937_64 gen(2);
  for (int i = 0; i < n; ++i) {
    const PearlGame g(PearlConfig{2, 8, 0.6, static_cast<std::uint64_t>(i)});
    const GWFit f = fit_gw_from_playouts(g, 1, gen);
    wins += f.model.q[8] == 1.0;
  }
  const double f = static_cast<double>(wins) / n;
  EXPECT_NEAR(f, 0.6, 3.0 * std::sqrt(0.24 / n));
}

TEST(Fit, ConnectFourParity) {
  std::mt19937_64 gen(3);
  const GWFit f = fit_gw_from_playouts(ConnectFour(ConnectFourConfig{}), 2000, gen);
  for (std::size_t k = 0; k < f.model.q.size(); ++k) {
    if (!f.q_observed[k]) continue;
    EXPECT_EQ(f.model.q[k], k % 2 == 1 ? 1.0 : 0.0) << k;
  }
}

TEST(Fit, OrderTwo) {
  GWModel m = regular_model(2, 3, 0.5);
  m.mu[1] = {{1, 0.5}, {2, 0.5}};
  m.seed = 4;
  std::mt19937_64 gen(3);
  const GWFit f = fit_gw_from_playouts(gw_game_sample(m), 5000, gen, {}, true);
  ASSERT_TRUE(f.order_two.has_value());
  EXPECT_EQ(f.order_two->max_depth, f.model.max_depth);
  EXPECT_EQ(f.order_two->mu0, f.model.mu[0]);
}

TEST(KnownTree, Examples) {
  const ExplicitTree t = ExplicitTree::regular(2, 3);
  const auto pr = known_tree_prior(t, std::vector<double>(8, 0.5));
  EXPECT_NEAR(pr[0].mean(), 207.0 / 256, 1e-15);

  const ExplicitTree leaf = ExplicitTree::from_bfs_degrees({0});
  const auto one = known_tree_prior(leaf, {1.0});
  EXPECT_EQ(one[0].mean(), 1.0);
  EXPECT_EQ(one[0].s(), 0.0);
}

TEST(KnownTree, MatchesOracleOnRandomTrees) {
  std::mt19937_64 gen(6);
  for (int trial = 0; trial < 30; ++trial) {
    const auto g = testing::random_tree_game(gen, 4, 3, 0.2, 12);
    const auto pr = known_tree_prior(*g.tree, g.q);
    const StepOracle o = step_optimal_z(*g.tree, g.q, ObservationSet{});
    EXPECT_NEAR(pr[0].mean(), static_cast<double>(o.posterior), 1e-12);
    EXPECT_NEAR(pr[0].s(), static_cast<double>(o.frontier.front().delta), 1e-12);
  }
}

TEST(KnownTree, RootMeanMatchesSampling) {
  std::mt19937_64 gen(7);
  const auto g = testing::random_tree_game(gen, 3, 3, 0.2, 20);
  const auto pr = known_tree_prior(*g.tree, g.q);
  const int n = 100000;
  int wins = 0;
  for (int i = 0; i < n; ++i) {
    auto outcomes = std::make_shared<const std::vector<Outcome>>(sample_leaf_outcomes(g.q, gen));
    wins += minimax_solve(TreePosition(g.tree, outcomes));
  }
  const double f = static_cast<double>(wins) / n;
  EXPECT_NEAR(pr[0].mean(), f, 3.0 * std::sqrt(f * (1 - f) / n));
}

}  // namespace
}  // namespace bts
