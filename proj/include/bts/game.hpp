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

// Game abstraction shared by every search engine, plus the exact solvers
// used as references.
//
// A position belongs to a finite, deterministic, alternate-move game with
// win/loss/draw outcomes. J1 is the player to move at depth 0 of the game
// and moves at every even depth. Moves are addressed by their index in the
// position's fixed legal-move ordering, so a node of the game tree is
// identified by the sequence of indices leading to it.

#ifndef BTS_GAME_HPP_
#define BTS_GAME_HPP_

#include <concepts>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "bts/rng.hpp"

namespace bts {

enum class Player : std::uint8_t { J1, J0 };

constexpr Player opponent(Player p) {
  return p == Player::J1 ? Player::J0 : Player::J1;
}

constexpr Player player_at_depth(int depth) {
  return depth % 2 == 0 ? Player::J1 : Player::J0;
}

enum class Outcome : std::uint8_t { J1Win, J0Win, Draw };

/// Which side a drawn game is credited to, relative to the player the value
/// is computed for (J1 = that player, J0 = its opponent).
struct DrawPolicy {
  Player map_draw_to = Player::J0;
};

/// 1 iff `perspective` wins the terminal outcome, after draw mapping.
constexpr bool wins(Outcome raw, Player perspective, DrawPolicy policy) {
  if (raw == Outcome::Draw) return policy.map_draw_to == Player::J1;
  const Player winner = raw == Outcome::J1Win ? Player::J1 : Player::J0;
  return winner == perspective;
}

template <class P>
concept GamePosition = std::copyable<P> && requires(const P& p, std::size_t i) {
  { p.depth() } -> std::convertible_to<int>;
  { p.turn() } -> std::same_as<Player>;
  { p.is_terminal() } -> std::same_as<bool>;
  { p.raw_outcome() } -> std::same_as<Outcome>;
  { p.num_moves() } -> std::convertible_to<std::size_t>;
  { p.child(i) } -> std::same_as<P>;
  { p.move_label(i) } -> std::convertible_to<std::string>;
};

class ResourceLimitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::uint64_t kDefaultNodeBudget = 100'000'000;

namespace detail {

template <GamePosition P, class Order>
bool solve_rec(const P& pos, Player perspective, DrawPolicy policy,
               Order& order, std::uint64_t& nodes, std::uint64_t& leaves,
               std::uint64_t budget) {
  if (++nodes > budget) {
    throw ResourceLimitError("exact solve exceeded node budget of " +
                             std::to_string(budget));
  }
  if (pos.is_terminal()) {
    ++leaves;
    return wins(pos.raw_outcome(), perspective, policy);
  }
  const bool maximize = pos.turn() == perspective;
  const std::size_t n = pos.num_moves();
  for (std::size_t i : order(n)) {
    const bool v =
        solve_rec(pos.child(i), perspective, policy, order, nodes, leaves, budget);
    // A winning child of a max node, or a losing child of a min node,
    // decides the parent.
    if (v == maximize) return v;
  }
  return !maximize;
}

struct NaturalOrder {
  std::vector<std::size_t> operator()(std::size_t n) const {
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    return idx;
  }
};

}  // namespace detail

/// Minimax value of `root` for the player to move there: 1 iff that player
/// has a winning strategy once draws are mapped per `policy`.
template <GamePosition P>
bool minimax_solve(const P& root, DrawPolicy policy = {},
                   std::uint64_t node_budget = kDefaultNodeBudget) {
  std::uint64_t nodes = 0;
  std::uint64_t leaves = 0;
  detail::NaturalOrder order;
  return detail::solve_rec(root, root.turn(), policy, order, nodes, leaves,
                           node_budget);
}

struct AlphaBetaResult {
  bool value = false;
  std::uint64_t leaves_visited = 0;
};

/// Binary alpha-beta from `root`. `order(n)` returns the visiting order of
/// the n children of a node.
template <GamePosition P, class Order>
AlphaBetaResult alphabeta_count(const P& root, DrawPolicy policy, Order&& order,
                                std::uint64_t node_budget = kDefaultNodeBudget) {
  std::uint64_t nodes = 0;
  AlphaBetaResult res;
  res.value = detail::solve_rec(root, root.turn(), policy, order, nodes,
                                res.leaves_visited, node_budget);
  return res;
}

/// Visits children in a fresh uniformly random order at every node.
template <class Gen>
class RandomOrder {
 public:
  explicit RandomOrder(Gen& gen) : gen_(&gen) {}
  std::vector<std::size_t> operator()(std::size_t n) {
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    for (std::size_t i = n; i > 1; --i) {
      std::swap(idx[i - 1], idx[uniform_index(*gen_, i)]);
    }
    return idx;
  }

 private:
  Gen* gen_;
};

template <GamePosition P>
struct RandomMatch {
  P leaf;
  /// Positions from the start to the leaf, both included.
  std::vector<P> branch;
  /// moves[i] is the index chosen at branch[i].
  std::vector<std::size_t> moves;
  /// siblings[i] lists the unvisited move indices at branch[i], i.e. the
  /// brothers of branch[i + 1].
  std::vector<std::vector<std::size_t>> siblings;
};

/// Plays uniformly random moves from `start` until a terminal position.
template <GamePosition P, class Gen>
RandomMatch<P> uniform_random_match(const P& start, Gen& gen) {
  RandomMatch<P> m{start, {start}, {}, {}};
  P cur = start;
  while (!cur.is_terminal()) {
    const std::size_t n = cur.num_moves();
    const std::size_t pick = uniform_index(gen, n);
    std::vector<std::size_t> others;
    others.reserve(n - 1);
    for (std::size_t i = 0; i < n; ++i) {
      if (i != pick) others.push_back(i);
    }
    m.moves.push_back(pick);
    m.siblings.push_back(std::move(others));
    cur = cur.child(pick);
    m.branch.push_back(cur);
  }
  m.leaf = cur;
  return m;
}

/// Terminal outcome of a single uniformly random playout; no bookkeeping.
template <GamePosition P, class Gen>
P random_playout_leaf(P cur, Gen& gen) {
  while (!cur.is_terminal()) cur = cur.child(uniform_index(gen, cur.num_moves()));
  return cur;
}

}  // namespace bts

#endif  // BTS_GAME_HPP_
