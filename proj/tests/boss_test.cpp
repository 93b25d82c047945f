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

#include "bts/boss.hpp"

#include <cmath>
#include <memory>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "bts/connect_four.hpp"
#include "bts/explicit_tree.hpp"
#include "bts/harness/experiments.hpp"
#include "bts/oracle.hpp"
#include "bts/pearl.hpp"
#include "support/random_trees.hpp"

namespace bts {
namespace {

using TreeSearch = BossSearch<TreePosition>;

TreeSearch known_search(const testing::RandomTreeGame& g, std::uint64_t seed,
                        BossOptions options = {}) {
  auto priors = std::make_shared<const std::vector<NodePrior>>(known_tree_prior(*g.tree, g.q));
  return TreeSearch(g.root(), known_prior_source(priors), seed, options, Player::J1);
}

testing::RandomTreeGame fixed_game(ExplicitTree tree, std::vector<Outcome> outcomes) {
  testing::RandomTreeGame g;
  g.q.assign(tree.leaves().size(), 0.5);
  g.tree = std::make_shared<const ExplicitTree>(std::move(tree));
  g.outcomes = std::make_shared<const std::vector<Outcome>>(std::move(outcomes));
  return g;
}

// The counterexample tree with the outcomes of leaves 111 and 121 fixed.
testing::RandomTreeGame counterexample_game(Outcome o111, Outcome o121) {
  ExplicitTree tree = counterexample_tree();
  std::vector<Outcome> out(8, Outcome::J0Win);
  out[static_cast<std::size_t>(tree.node(counterexample_leaf(tree, "111")).leaf_index)] = o111;
  out[static_cast<std::size_t>(tree.node(counterexample_leaf(tree, "121")).leaf_index)] = o121;
  return fixed_game(std::move(tree), std::move(out));
}

BossOptions deterministic() {
  BossOptions o;
  o.playout = PlayoutPolicy::Leftmost;
  o.ties = TieBreak::First;
  return o;
}

TEST(Boss, TerminalRoot) {
  const auto g = fixed_game(ExplicitTree::from_bfs_degrees({0}), {Outcome::J1Win});
  TreeSearch s = known_search(g, 1);
  EXPECT_TRUE(s.terminated());
  EXPECT_EQ(s.root_value(), 1.0);
  EXPECT_THROW(s.step(), std::logic_error);
  EXPECT_EQ(s.run(10), 0u);
}

TEST(Boss, ForcedLineSolvedByFirstStep) {
  for (Outcome o : {Outcome::J1Win, Outcome::J0Win}) {
    const auto g = fixed_game(ExplicitTree::from_bfs_degrees({1, 1, 1, 0}), {o});
    TreeSearch s = known_search(g, 1);
    EXPECT_EQ(s.run(0), 1u);
    EXPECT_TRUE(s.terminated());
    EXPECT_EQ(s.root_value(), o == Outcome::J1Win ? 1.0 : 0.0);
  }
}

TEST(Boss, FirstStepMaterializesSiblings) {
  const PearlGame g(PearlConfig{2, 2, 0.5, 7});
  BossSearch<PearlGame> s(g, sym_prior_source<PearlGame>(SymFamily{0.5, 0.0}), 3);
  s.step();
  EXPECT_EQ(s.nodes().size(), 5u);
  int frontier = 0, visited = 0;
  for (const auto& n : s.nodes()) {
    frontier += n.status == NodeStatus::Frontier;
    visited += n.status == NodeStatus::VisitedLeaf;
  }
  EXPECT_EQ(frontier + visited, 3);
  EXPECT_EQ(visited, 1);
  EXPECT_EQ(s.audit(), "");
}

TEST(Boss, CounterexampleSelection) {
  TreeSearch s = known_search(counterexample_game(Outcome::J1Win, Outcome::J1Win), 0, deterministic());
  s.step();
  EXPECT_EQ(s.position_of(s.last_branch().back()).node(), counterexample_leaf(s.root_position().tree(), "111"));
  s.step();
  EXPECT_EQ(s.position_of(s.last_branch().back()).node(), counterexample_leaf(s.root_position().tree(), "121"));
  EXPECT_TRUE(s.terminated());
  EXPECT_EQ(s.root_value(), 1.0);
}

TEST(Boss, CounterexamplePosteriorAfterLoss) {
  TreeSearch s = known_search(counterexample_game(Outcome::J1Win, Outcome::J0Win), 0, deterministic());
  s.run(2);
  EXPECT_FALSE(s.terminated());
  EXPECT_NEAR(s.root_value(), 200.0 / 256, 1e-14);
}

TEST(Boss, CounterexampleCurveMatchesScript) {
  const ExplicitTree tree = counterexample_tree();
  const std::vector<double> q(8, 0.5);
  const auto curve = exact_error_curve(tree, q, deterministic(), 3);
  const auto script = scripted_l2_errors(tree, q, counterexample_greedy_script, 3);
  for (std::size_t n = 0; n < 3; ++n) {
    EXPECT_NEAR(static_cast<double>(curve[n + 1]), static_cast<double>(script[n]), 1e-15) << n;
  }
  EXPECT_NEAR(static_cast<double>(curve[0]), 207.0 / 256 * 49.0 / 256, 1e-15);
}

// Audit, no re-selection, and exact values at solved nodes, after every
// step on random trees.
TEST(Boss, InvariantsAfterEveryStep) {
  std::mt19937_64 gen(21);
  for (int trial = 0; trial < 60; ++trial) {
    const auto g = testing::random_tree_game(gen, 5, 3, 0.15, 60);
    TreeSearch s = known_search(g, static_cast<std::uint64_t>(trial));
    while (!s.terminated()) {
      std::vector<NodeStatus> before;
      for (const auto& n : s.nodes()) before.push_back(n.status);
      s.step();
      ASSERT_EQ(s.audit(), "") << trial;
      ASSERT_EQ(before[static_cast<std::size_t>(s.last_selected())], NodeStatus::Frontier);
      for (std::size_t i = 0; i < s.nodes().size(); ++i) {
        const BossNode& n = s.node(i);
        if (!n.R.is_certain()) continue;
        const TreePosition pos = s.position_of(i);
        const bool mover_wins = minimax_solve(pos);
        const bool j1_wins = pos.turn() == Player::J1 ? mover_wins : !mover_wins;
        ASSERT_EQ(n.R.value() > 0, j1_wins) << trial << " node " << i;
      }
    }
  }
}

TEST(Boss, SolveAgreesWithMinimax) {
  std::mt19937_64 gen(22);
  for (int trial = 0; trial < 100; ++trial) {
    const auto g = testing::random_tree_game(gen, 6, 4, 0.12, 200);
    for (double b : {0.0, 2.0}) {
      TreeSearch s(g.root(), sym_prior_source<TreePosition>(SymFamily{0.5, b}), 5);
      s.solve(1000000);
      EXPECT_EQ(s.root_value() == 1.0, minimax_solve(g.root())) << trial;
    }
  }
}

TEST(Boss, BestMoveWinsWhenSolved) {
  std::mt19937_64 gen(23);
  int checked = 0;
  for (int trial = 0; trial < 200 && checked < 30; ++trial) {
    const auto g = testing::random_tree_game(gen, 4, 3, 0.2, 30);
    if (!minimax_solve(g.root())) continue;
    TreeSearch s = known_search(g, 1);
    s.solve(100000);
    ASSERT_EQ(s.root_value(), 1.0);
    const std::size_t m = s.best_move();
    EXPECT_FALSE(minimax_solve(g.root().child(m))) << trial;
    ++checked;
  }
  EXPECT_EQ(checked, 30);
}

TEST(Boss, BestMoveAfterFirstStep) {
  const PearlGame g(PearlConfig{3, 4, 0.6, 2});
  BossSearch<PearlGame> s(g, table_prior_source<PearlGame>(
                                 std::make_shared<const PriorTables>(pearl_tables(3, 4, 0.6))),
                          4);
  const std::size_t m = s.best_move();
  EXPECT_EQ(s.stats().iterations, 1u);
  double best = -kInf;
  for (std::uint32_t i = 0; i < s.root().num_children; ++i) {
    best = std::max(best, s.node(static_cast<std::size_t>(s.root().first_child) + i).R.value());
  }
  EXPECT_EQ(s.node(static_cast<std::size_t>(s.root().first_child) + m).R.value(), best);
}

TEST(Boss, ScaleInvariance) {
  std::mt19937_64 gen(24);
  for (int trial = 0; trial < 10; ++trial) {
    const auto g = testing::random_tree_game(gen, 6, 3, 0.15, 100);
    std::vector<std::vector<int>> runs;
    for (double lambda : {1.0, 1e-3, 1e3}) {
      auto pr = known_tree_prior(*g.tree, g.q);
      for (auto& p : pr) p.log_s += std::log(lambda);
      auto priors = std::make_shared<const std::vector<NodePrior>>(std::move(pr));
      TreeSearch s(g.root(), known_prior_source(priors), 99, {}, Player::J1);
      std::vector<int> seq;
      while (!s.terminated()) {
        s.step();
        seq.push_back(s.last_selected());
        seq.push_back(s.last_branch().back());
      }
      runs.push_back(std::move(seq));
    }
    EXPECT_EQ(runs[0], runs[1]);
    EXPECT_EQ(runs[0], runs[2]);
  }
}

TEST(Boss, TouchedNodesBounded) {
  const PearlGame g(PearlConfig{3, 10, 0.6, 11});
  BossSearch<PearlGame> s(g, sym_prior_source<PearlGame>(SymFamily{0.5, 0.0}), 1);
  for (int i = 0; i < 2000 && !s.terminated(); ++i) {
    s.step();
    const std::uint64_t len = s.last_branch().size();
    EXPECT_LE(s.stats().touched_last, len * (1 + 3));
  }
}

TEST(Boss, DeterministicForSeed) {
  const PearlGame g(PearlConfig{3, 8, 0.6, 5});
  auto make = [&] {
    return BossSearch<PearlGame>(g, sym_prior_source<PearlGame>(SymFamily{0.4, 2.0}), 77);
  };
  auto a = make();
  auto b = make();
  a.run(500);
  b.run(500);
  ASSERT_EQ(a.nodes().size(), b.nodes().size());
  for (std::size_t i = 0; i < a.nodes().size(); ++i) {
    EXPECT_EQ(a.node(i).R, b.node(i).R);
    EXPECT_EQ(a.node(i).log_z, b.node(i).log_z);
  }
}

TEST(Boss, TrajectoryWhenEnabled) {
  BossOptions o;
  o.track_trajectory = true;
  const PearlGame g(PearlConfig{2, 6, 0.6, 5});
  BossSearch<PearlGame> s(g, sym_prior_source<PearlGame>(SymFamily{0.5, 0.0}), 1, o);
  const auto n = s.run(20);
  EXPECT_EQ(s.trajectory().size(), n);
  EXPECT_EQ(s.trajectory().back(), s.root_value());
}

TEST(Boss, SelectOnSolvedRootRejected) {
  const auto g = fixed_game(ExplicitTree::from_bfs_degrees({0}), {Outcome::J0Win});
  TreeSearch s = known_search(g, 1);
  EXPECT_THROW(s.select_frontier(), std::logic_error);
}

TEST(Reroot, KeepsSubtreeConsistent) {
  const PearlGame g(PearlConfig{3, 8, 0.6, 5});
  BossSearch<PearlGame> s(g, sym_prior_source<PearlGame>(SymFamily{0.5, 2.0}), 3);
  s.run(300);
  const std::size_t m = s.best_move();
  const std::size_t child = static_cast<std::size_t>(s.root().first_child) + m;
  const double r_child = s.node(child).R.value();
  s.reroot(m);
  EXPECT_EQ(s.audit(), "");
  EXPECT_EQ(s.root().R.value(), r_child);
  EXPECT_EQ(s.root_position().depth(), 1);
  EXPECT_THROW(s.reroot(99), std::out_of_range);
  s.run(100);
  EXPECT_EQ(s.audit(), "");
}

TEST(Reroot, FrontierRootContinuesSymPrior) {
  const PearlGame g(PearlConfig{2, 6, 0.6, 5});
  BossSearch<PearlGame> s(g, sym_prior_source<PearlGame>(SymFamily{0.3, 0.0}), 3);
  s.reroot(1);
  const NodePrior want = sym_child(sym_root(SymFamily{0.3, 0.0}), 2, Player::J1, 0.0);
  EXPECT_EQ(s.root().prior.m, want.m);
  EXPECT_EQ(s.root().status, NodeStatus::Frontier);
  s.run(0);
  EXPECT_EQ(s.audit(), "");
}

TEST(Reroot, ToVisitedLeafIsTerminated) {
  const auto g = fixed_game(ExplicitTree::from_bfs_degrees({1, 0}), {Outcome::J0Win});
  TreeSearch s = known_search(g, 1);
  s.run(0);
  EXPECT_TRUE(s.terminated());
  s.reroot(0);
  EXPECT_TRUE(s.terminated());
  EXPECT_EQ(s.root_value(), 0.0);
}

TEST(Reroot, ConnectFourGameReusesWork) {
  const ConnectFour start(ConnectFourConfig{4, 4, 3, false, {}});
  BossSearch<ConnectFour> s(start, sym_prior_source<ConnectFour>(SymFamily{0.5, 0.0}), 8,
                            {}, Player::J1);
  int moves = 0;
  while (!s.root_position().is_terminal()) {
    s.run(200);
    const std::size_t m = s.best_move();
    const bool expanded = s.root().status == NodeStatus::Internal;
    s.reroot(m);
    ++moves;
    ASSERT_EQ(s.audit(), "") << moves;
    if (expanded && !s.root_position().is_terminal() &&
        s.root().status != NodeStatus::Frontier) {
      EXPECT_GT(s.nodes().size(), 1u) << moves;
    }
  }
  EXPECT_GE(moves, 5);
  EXPECT_TRUE(s.terminated());
}

}  // namespace
}  // namespace bts
