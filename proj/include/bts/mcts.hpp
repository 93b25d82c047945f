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

// Count-based Monte-Carlo tree search with selection value
// phi(w, c) = (w + a) / (c + b) and uniform playouts.
//
// Standard: every iteration adds one litter, the children of the tree leaf
// it reached, and updates counts from the root down to the child the
// playout went through.
// Modified: nothing is thrown away. The whole playout branch and the
// siblings of its nodes are kept, and counts are updated down to the leaf.

#ifndef BTS_MCTS_HPP_
#define BTS_MCTS_HPP_

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <deque>
#include <limits>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "bts/game.hpp"
#include "bts/rng.hpp"

namespace bts {

enum class MctsVariant : std::uint8_t { Standard, Modified };

struct MctsParams {
  double a = 1.0;
  double b = 1.0;
  MctsVariant variant = MctsVariant::Standard;
  DrawPolicy draw_policy{};

  void validate() const {
    if (!(a > 0.0) || !(b > 0.0)) throw std::invalid_argument("mcts: a and b must be positive");
  }
};

struct MctsNode {
  std::int32_t parent = -1;
  std::int32_t first_child = -1;
  std::uint32_t num_children = 0;
  std::uint32_t move = 0;
  std::int32_t depth = 0;
  /// The perspective player moves here.
  bool max_node = true;
  /// Known terminal position (reached by some past iteration).
  bool terminal = false;
  bool terminal_win = false;
  std::uint64_t C = 0;
  /// Playouts through this node won by the perspective player.
  std::uint64_t W = 0;
};

template <GamePosition P>
class MctsSearch {
 public:
  MctsSearch(P root, MctsParams params, std::uint64_t seed,
             std::optional<Player> perspective = std::nullopt)
      : root_pos_(std::move(root)),
        params_(params),
        perspective_(perspective.value_or(root_pos_.turn())),
        rng_(seed) {
    params_.validate();
    nodes_.push_back(make_node(-1, 0, root_pos_.depth()));
  }

  const P& root_position() const { return root_pos_; }
  const MctsParams& params() const { return params_; }
  Player perspective() const { return perspective_; }
  const std::vector<MctsNode>& nodes() const { return nodes_; }
  const MctsNode& node(std::size_t i) const { return nodes_[i]; }
  const MctsNode& root() const { return nodes_[0]; }
  std::uint64_t iterations() const { return iterations_; }
  /// Nodes created by the last iteration.
  std::size_t last_created() const { return last_created_; }

  /// Selection value of child `i` seen from its parent's mover.
  double value(std::size_t i) const {
    const MctsNode& n = nodes_[i];
    const bool parent_max = nodes_[static_cast<std::size_t>(n.parent)].max_node;
    const double v = static_cast<double>(parent_max ? n.W : n.C - n.W);
    return (v + params_.a) / (static_cast<double>(n.C) + params_.b);
  }

  void step() {
    const std::size_t before = nodes_.size();
    std::int32_t z = 0;
    P pos = root_pos_;
    while (nodes_[static_cast<std::size_t>(z)].num_children > 0) {
      z = select_child(z);
      pos = pos.child(nodes_[static_cast<std::size_t>(z)].move);
    }
    if (pos.is_terminal()) {
      // Known leaf reached again: the whole branch counts it once more.
      MctsNode& leaf = nodes_[static_cast<std::size_t>(z)];
      leaf.terminal = true;
      leaf.terminal_win = wins(pos.raw_outcome(), perspective_, params_.draw_policy);
      backup(z, leaf.terminal_win);
    } else if (params_.variant == MctsVariant::Standard) {
      expand(z, pos);
      const std::size_t i = uniform_index(rng_, pos.num_moves());
      const std::int32_t y = nodes_[static_cast<std::size_t>(z)].first_child +
                             static_cast<std::int32_t>(i);
      const P leaf = random_playout_leaf(pos.child(i), rng_);
      backup(y, wins(leaf.raw_outcome(), perspective_, params_.draw_policy));
    } else {
      std::int32_t cur = z;
      while (!pos.is_terminal()) {
        expand(cur, pos);
        const std::size_t i = uniform_index(rng_, pos.num_moves());
        cur = nodes_[static_cast<std::size_t>(cur)].first_child + static_cast<std::int32_t>(i);
        pos = pos.child(i);
      }
      MctsNode& leaf = nodes_[static_cast<std::size_t>(cur)];
      leaf.terminal = true;
      leaf.terminal_win = wins(pos.raw_outcome(), perspective_, params_.draw_policy);
      backup(cur, leaf.terminal_win);
    }
    last_created_ = nodes_.size() - before;
    ++iterations_;
  }

  /// Runs `iterations` iterations; a fresh root always gets one.
  std::uint64_t run(std::uint64_t iterations) {
    std::uint64_t done = 0;
    if (nodes_[0].C == 0 && !root_pos_.is_terminal()) {
      step();
      ++done;
    }
    for (; done < iterations; ++done) step();
    return done;
  }

  std::uint64_t run_until(std::chrono::steady_clock::time_point deadline) {
    std::uint64_t done = run(0);
    while (std::chrono::steady_clock::now() < deadline) {
      step();
      ++done;
    }
    return done;
  }

  /// Root child with the largest selection value.
  std::size_t best_move() {
    if (root_pos_.is_terminal()) throw std::logic_error("best_move at a terminal position");
    if (nodes_[0].num_children == 0) run(0);
    return nodes_[static_cast<std::size_t>(select_child(0))].move;
  }

  /// Makes child `move` the new root, keeping its statistics and subtree.
  void reroot(std::size_t move) {
    if (move >= root_pos_.num_moves()) throw std::out_of_range("reroot: unknown move");
    P next = root_pos_.child(move);
    std::vector<MctsNode> fresh;
    const MctsNode& r = nodes_[0];
    if (r.num_children == 0) {
      fresh.push_back(make_node(-1, static_cast<std::uint32_t>(move), next.depth()));
    } else {
      const auto c = static_cast<std::size_t>(r.first_child) + move;
      fresh.push_back(nodes_[c]);
      fresh[0].parent = -1;
      std::deque<std::pair<std::int32_t, std::int32_t>> queue{{static_cast<std::int32_t>(c), 0}};
      while (!queue.empty()) {
        auto [old_id, new_id] = queue.front();
        queue.pop_front();
        const MctsNode& on = nodes_[static_cast<std::size_t>(old_id)];
        if (on.num_children == 0) continue;
        const auto first = static_cast<std::int32_t>(fresh.size());
        fresh[static_cast<std::size_t>(new_id)].first_child = first;
        for (std::uint32_t i = 0; i < on.num_children; ++i) {
          MctsNode ch = nodes_[static_cast<std::size_t>(on.first_child) + i];
          ch.parent = new_id;
          fresh.push_back(ch);
          queue.emplace_back(on.first_child + static_cast<std::int32_t>(i),
                             first + static_cast<std::int32_t>(i));
        }
      }
    }
    nodes_.swap(fresh);
    root_pos_ = std::move(next);
  }

 private:
  MctsNode make_node(std::int32_t parent, std::uint32_t move, int depth) const {
    MctsNode n;
    n.parent = parent;
    n.move = move;
    n.depth = depth;
    n.max_node = player_at_depth(depth) == perspective_;
    return n;
  }

  std::int32_t select_child(std::int32_t x) {
    const MctsNode& n = nodes_[static_cast<std::size_t>(x)];
    double best = -kInfinity;
    for (std::uint32_t i = 0; i < n.num_children; ++i) {
      best = std::max(best, value(static_cast<std::size_t>(n.first_child) + i));
    }
    tied_.clear();
    for (std::uint32_t i = 0; i < n.num_children; ++i) {
      const double v = value(static_cast<std::size_t>(n.first_child) + i);
      if (v >= best - 1e-12 * std::abs(best)) {
        tied_.push_back(n.first_child + static_cast<std::int32_t>(i));
      }
    }
    return tied_.size() == 1 ? tied_[0] : tied_[uniform_index(rng_, tied_.size())];
  }

  void expand(std::int32_t x, const P& pos) {
    const std::size_t n = pos.num_moves();
    const auto first = static_cast<std::int32_t>(nodes_.size());
    const int depth = nodes_[static_cast<std::size_t>(x)].depth + 1;
    for (std::size_t i = 0; i < n; ++i) {
      nodes_.push_back(make_node(x, static_cast<std::uint32_t>(i), depth));
    }
    nodes_[static_cast<std::size_t>(x)].first_child = first;
    nodes_[static_cast<std::size_t>(x)].num_children = static_cast<std::uint32_t>(n);
  }

  void backup(std::int32_t x, bool win) {
    for (; x >= 0; x = nodes_[static_cast<std::size_t>(x)].parent) {
      MctsNode& n = nodes_[static_cast<std::size_t>(x)];
      ++n.C;
      if (win) ++n.W;
    }
  }

  static constexpr double kInfinity = std::numeric_limits<double>::infinity();

  P root_pos_;
  MctsParams params_;
  Player perspective_;
  Rng rng_;
  std::vector<MctsNode> nodes_;
  std::uint64_t iterations_ = 0;
  std::size_t last_created_ = 0;
  std::vector<std::int32_t> tied_;
};

}  // namespace bts

#endif  // BTS_MCTS_HPP_
