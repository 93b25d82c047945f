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

#include <cmath>
#include <functional>
#include <map>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "bts/connect_four.hpp"
#include "bts/explicit_tree.hpp"
#include "bts/game.hpp"
#include "bts/gw_game.hpp"
#include "bts/pearl.hpp"
#include "support/random_trees.hpp"

namespace bts {
namespace {

TreePosition tree_with(const std::vector<int>& degrees, const std::vector<int>& leaf_values) {
  std::vector<Outcome> out;
  for (int v : leaf_values) out.push_back(v ? Outcome::J1Win : Outcome::J0Win);
  return tree_position(ExplicitTree::from_bfs_degrees(degrees), out);
}

// J1 wins iff some choice of one child at every J1 node leaves only winning
// leaves reachable. Enumerates those choice functions outright.
bool strategy_brute_force(const ExplicitTree& t, const std::vector<Outcome>& outcomes) {
  std::vector<int> j1_nodes;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const auto& n = t.node(static_cast<int>(i));
    if (!n.children.empty() && n.depth % 2 == 0) j1_nodes.push_back(static_cast<int>(i));
  }
  std::map<int, std::size_t> choice;
  std::function<bool(int)> all_won = [&](int x) {
    const auto& n = t.node(x);
    if (n.children.empty()) return outcomes[static_cast<std::size_t>(n.leaf_index)] == Outcome::J1Win;
    if (n.depth % 2 == 0) return all_won(n.children[choice[x]]);
    for (int c : n.children) {
      if (!all_won(c)) return false;
    }
    return true;
  };
  std::function<bool(std::size_t)> search = [&](std::size_t k) {
    if (k == j1_nodes.size()) return all_won(0);
    const int x = j1_nodes[k];
    for (std::size_t c = 0; c < t.node(x).children.size(); ++c) {
      choice[x] = c;
      if (search(k + 1)) return true;
    }
    return false;
  };
  return search(0);
}

TEST(Minimax, Examples) {
  EXPECT_TRUE(minimax_solve(tree_with({0}, {1})));
  EXPECT_TRUE(minimax_solve(tree_with({2, 0, 0}, {0, 1})));
  EXPECT_TRUE(minimax_solve(tree_with({2, 2, 2, 0, 0, 0, 0}, {0, 0, 1, 1})));
  EXPECT_FALSE(minimax_solve(tree_with({2, 2, 2, 0, 0, 0, 0}, {0, 1, 1, 0})));
}

TEST(Minimax, AgreesWithStrategyEnumeration) {
  std::mt19937_64 gen(1);
  for (int trial = 0; trial < 400; ++trial) {
    const auto g = testing::random_tree_game(gen, 5, 3, 0.3, 12);
    EXPECT_EQ(minimax_solve(g.root()), strategy_brute_force(*g.tree, *g.outcomes)) << trial;
  }
}

TEST(Minimax, NodeBudgetIsAnError) {
  const PearlGame g(PearlConfig{2, 12, 0.5, 1});
  EXPECT_THROW(minimax_solve(g, {}, 100), ResourceLimitError);
}

TEST(Minimax, DrawPolicy) {
  ConnectFourConfig cfg{2, 1, 2};
  const ConnectFour start(cfg);
  // Two cells, one disc each, no alignment possible.
  EXPECT_FALSE(minimax_solve(start));
  EXPECT_TRUE(minimax_solve(start, DrawPolicy{Player::J1}));
}

TEST(AlphaBeta, Examples) {
  const auto both = tree_with({2, 0, 0}, {1, 1});
  for (int seed = 0; seed < 5; ++seed) {
    std::mt19937_64 gen(static_cast<std::uint64_t>(seed));
    const auto r = alphabeta_count(both, {}, RandomOrder<std::mt19937_64>(gen));
    EXPECT_TRUE(r.value);
    EXPECT_EQ(r.leaves_visited, 1u);
  }
  const auto r = alphabeta_count(tree_with({2, 0, 0}, {0, 1}), {}, detail::NaturalOrder{});
  EXPECT_TRUE(r.value);
  EXPECT_EQ(r.leaves_visited, 2u);
}

TEST(AlphaBeta, ValueMatchesMinimax) {
  std::mt19937_64 gen(2);
  for (int trial = 0; trial < 500; ++trial) {
    const auto g = testing::random_tree_game(gen, 5, 3, 0.25, 200);
    const auto root = g.root();
    const auto r = alphabeta_count(root, {}, RandomOrder<std::mt19937_64>(gen));
    EXPECT_EQ(r.value, minimax_solve(root));
    EXPECT_LE(r.leaves_visited, g.tree->leaves().size());
  }
}

TEST(RandomMatch, TerminalStart) {
  const auto leaf = tree_with({0}, {1});
  std::mt19937_64 gen(0);
  const auto m = uniform_random_match(leaf, gen);
  EXPECT_EQ(m.branch.size(), 1u);
  EXPECT_TRUE(m.siblings.empty());
  EXPECT_TRUE(m.leaf.is_terminal());
}

TEST(RandomMatch, ForcedChain) {
  const auto chain = tree_with({1, 1, 1, 0}, {1});
  std::mt19937_64 gen(0);
  const auto m = uniform_random_match(chain, gen);
  EXPECT_EQ(m.branch.size(), 4u);
  EXPECT_EQ(m.leaf.node(), 3);
  for (const auto& s : m.siblings) EXPECT_TRUE(s.empty());
}

TEST(RandomMatch, Reproducible) {
  const PearlGame g(PearlConfig{2, 10, 0.5, 4});
  std::mt19937_64 a(99), b(99);
  const auto ma = uniform_random_match(g, a);
  const auto mb = uniform_random_match(g, b);
  EXPECT_EQ(ma.moves, mb.moves);
  EXPECT_EQ(ma.leaf.key(), mb.leaf.key());
  for (std::size_t i = 0; i < ma.siblings.size(); ++i) {
    ASSERT_EQ(ma.siblings[i].size(), 1u);
    EXPECT_NE(ma.siblings[i][0], ma.moves[i]);
  }
}

TEST(RandomMatch, LeavesUniformOnRegularTree) {
  // d = 3, K = 3: 27 leaves, chi-square with 26 degrees of freedom.
  const PearlGame g(PearlConfig{3, 3, 0.5, 0});
  std::mt19937_64 gen(5);
  std::map<std::uint64_t, int> counts;
  const int n = 100000;
  for (int i = 0; i < n; ++i) ++counts[random_playout_leaf(g, gen).key()];
  ASSERT_EQ(counts.size(), 27u);
  const double expected = n / 27.0;
  double chi2 = 0.0;
  for (auto [k, c] : counts) chi2 += (c - expected) * (c - expected) / expected;
  // 99.9% quantile of chi-square(26) is about 54.05.
  EXPECT_LT(chi2, 54.05);
}

TEST(ConnectFour, InitialMoves) {
  EXPECT_EQ(ConnectFour(ConnectFourConfig{}).num_moves(), 7u);
  EXPECT_EQ(ConnectFour(ConnectFourConfig{4, 10, 3}).num_moves(), 4u);
}

TEST(ConnectFour, RejectsBadConfig) {
  EXPECT_THROW(ConnectFour(ConnectFourConfig{0, 6, 4}), std::invalid_argument);
  EXPECT_THROW(ConnectFour(ConnectFourConfig{3, 3, 4}), std::invalid_argument);
  EXPECT_THROW(ConnectFour(ConnectFourConfig{3, 3, 1}), std::invalid_argument);
}

TEST(ConnectFour, HandTrace) {
  // 1x3, connect 2: X, O, X stacked never aligns; full board is a draw.
  ConnectFour col(ConnectFourConfig{1, 3, 2});
  for (int i = 0; i < 3; ++i) {
    ASSERT_FALSE(col.is_terminal());
    EXPECT_EQ(col.num_moves(), 1u);
    col = col.child(0);
  }
  EXPECT_TRUE(col.is_terminal());
  EXPECT_EQ(col.raw_outcome(), Outcome::Draw);

  // 3x2, connect 2: X in column 0, O in column 2, X on top of column 0.
  ConnectFourConfig cfg{3, 2, 2};
  const ConnectFour p = ConnectFour(cfg).child(0).child(2).child(0);
  EXPECT_TRUE(p.is_terminal());
  EXPECT_EQ(p.raw_outcome(), Outcome::J1Win);
  EXPECT_EQ(p.depth(), 3);
  cfg.inverse = true;
  const ConnectFour q = ConnectFour(cfg).child(0).child(2).child(0);
  EXPECT_EQ(q.raw_outcome(), Outcome::J0Win);
}

TEST(ConnectFour, DiagonalAndFullColumns) {
  // Builds the diagonal 0,1,2,3 for X on a 4x4 board.
  ConnectFour p(ConnectFourConfig{4, 4, 4});
  for (int c : {0, 1, 1, 2, 2, 3, 2, 3, 3, 0}) {
    ASSERT_FALSE(p.is_terminal());
    int idx = -1;
    for (std::size_t i = 0; i < p.num_moves(); ++i) {
      if (p.column_of(i) == c) idx = static_cast<int>(i);
    }
    ASSERT_GE(idx, 0);
    p = p.child(static_cast<std::size_t>(idx));
  }
  ASSERT_FALSE(p.is_terminal());
  p = p.child(3);  // column 3, fourth disc: X at (3,3) completes the diagonal
  EXPECT_TRUE(p.is_terminal());
  EXPECT_EQ(p.raw_outcome(), Outcome::J1Win);
}

TEST(ConnectFour, RandomPlaysStayWithinBoard) {
  std::mt19937_64 gen(8);
  for (int i = 0; i < 200; ++i) {
    const auto m = uniform_random_match(ConnectFour(ConnectFourConfig{5, 4, 3}), gen);
    EXPECT_LE(m.leaf.depth(), 20);
    for (std::size_t k = 0; k + 1 < m.branch.size(); ++k) {
      EXPECT_GT(m.branch[k].num_moves(), 0u);
      EXPECT_EQ(m.branch[k + 1].depth(), m.branch[k].depth() + 1);
    }
  }
}

TEST(Pearl, CertainLeaves) {
  const PearlGame g(PearlConfig{2, 1, 1.0, 3});
  EXPECT_EQ(g.child(0).raw_outcome(), Outcome::J1Win);
  EXPECT_EQ(g.child(1).raw_outcome(), Outcome::J1Win);
  EXPECT_TRUE(minimax_solve(g));
}

void collect(const PearlGame& g, std::vector<Outcome>& out) {
  if (g.is_terminal()) {
    out.push_back(g.raw_outcome());
    return;
  }
  for (std::size_t i = 0; i < g.num_moves(); ++i) collect(g.child(i), out);
}

TEST(Pearl, RealizationIsAFunctionOfTheSeed) {
  std::vector<Outcome> a, b, c;
  collect(PearlGame(PearlConfig{2, 8, 0.5, 77}), a);
  collect(PearlGame(PearlConfig{2, 8, 0.5, 77}), b);
  collect(PearlGame(PearlConfig{2, 8, 0.5, 78}), c);
  EXPECT_EQ(a.size(), 256u);
  EXPECT_EQ(a, b);
  EXPECT_NE(a, c);
}

TEST(Pearl, RootMeanIsLeafProbabilityAtGoldenRatio) {
  const double p = (std::sqrt(5.0) - 1.0) / 2.0;
  const int n = 10000;
  int wins = 0;
  for (int s = 0; s < n; ++s) {
    wins += minimax_solve(PearlGame(PearlConfig{2, 16, p, static_cast<std::uint64_t>(s)}));
  }
  const double mean = static_cast<double>(wins) / n;
  EXPECT_NEAR(mean, p, 3.0 * std::sqrt(p * (1 - p) / n));
}

GWModel pearl_like(int K, std::uint64_t seed) {
  GWModel m;
  m.max_depth = K;
  for (int k = 0; k < K; ++k) m.mu.push_back({{2, 1.0}});
  m.mu.push_back({{0, 1.0}});
  m.q.assign(static_cast<std::size_t>(K) + 1, 0.5);
  m.seed = seed;
  return m;
}

TEST(GW, DegenerateLawsGiveRegularTree) {
  const GWGame g = gw_game_sample(pearl_like(4, 1));
  std::function<int(const GWGame&)> leaves = [&](const GWGame& x) {
    if (x.is_terminal()) {
      EXPECT_EQ(x.depth(), 4);
      return 1;
    }
    EXPECT_EQ(x.num_moves(), 2u);
    return leaves(x.child(0)) + leaves(x.child(1));
  };
  EXPECT_EQ(leaves(g), 16);
}

TEST(GW, TerminalRoot) {
  GWModel m;
  m.max_depth = 0;
  m.mu = {{{0, 1.0}}};
  m.q = {1.0};
  const GWGame g = gw_game_sample(m);
  EXPECT_TRUE(g.is_terminal());
  EXPECT_EQ(g.raw_outcome(), Outcome::J1Win);
}

TEST(GW, ValidatesModel) {
  GWModel m = pearl_like(2, 0);
  m.mu.back() = {{1, 1.0}};
  EXPECT_THROW(gw_game_sample(m), std::invalid_argument);
  m = pearl_like(2, 0);
  m.q[1] = 1.5;
  EXPECT_THROW(gw_game_sample(m), std::invalid_argument);
  m = pearl_like(2, 0);
  m.mu[0] = {{2, 0.5}, {3, 0.4}};
  EXPECT_THROW(gw_game_sample(m), std::invalid_argument);
}

void trace(const GWGame& g, std::vector<int>& out) {
  out.push_back(static_cast<int>(g.num_moves()));
  if (g.is_terminal()) {
    out.push_back(g.raw_outcome() == Outcome::J1Win);
    return;
  }
  for (std::size_t i = 0; i < g.num_moves(); ++i) trace(g.child(i), out);
}

TEST(GW, Replayable) {
  GWModel m;
  m.max_depth = 5;
  for (int k = 0; k < 5; ++k) m.mu.push_back({{0, 0.2}, {1, 0.3}, {3, 0.5}});
  m.mu.push_back({{0, 1.0}});
  m.q = {0.1, 0.3, 0.5, 0.7, 0.9, 0.5};
  m.seed = 12;
  std::vector<int> a, b;
  trace(gw_game_sample(m), a);
  trace(gw_game_sample(m), b);
  EXPECT_EQ(a, b);
}

TEST(GW, LitterFrequencies) {
  GWModel m;
  m.max_depth = 1;
  m.mu = {{{0, 0.1}, {1, 0.2}, {2, 0.3}, {4, 0.4}}, {{0, 1.0}}};
  m.q = {0.5, 0.5};
  std::map<int, int> counts;
  const int n = 100000;
  for (int s = 0; s < n; ++s) {
    m.seed = static_cast<std::uint64_t>(s);
    ++counts[static_cast<int>(gw_game_sample(m).num_moves())];
  }
  for (auto [c, w] : m.mu[0]) {
    const double f = static_cast<double>(counts[c]) / n;
    EXPECT_NEAR(f, w, 3.0 * std::sqrt(w * (1 - w) / n)) << "litter " << c;
  }
}

}  // namespace
}  // namespace bts
