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

// Bayesian best-first search with step-by-step optimal playout selection.
//
// The explored tree holds, for every node, the posterior probability R that
// the search's perspective player wins it, the sibling product U, and the
// best attainable one-playout information gain Z. Each iteration descends
// from the root following the largest U^2 Z until a frontier node, plays a
// uniform match from there, materializes every litter met on the way, and
// recomputes (R, U, Z) on the new branch and its siblings only.
//
// R and U are stored as log-odds and Z as a plain logarithm. Positions are
// not stored; a node's position is replayed from the root through its path.

#ifndef BTS_BOSS_HPP_
#define BTS_BOSS_HPP_

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <deque>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "bts/game.hpp"
#include "bts/logodds.hpp"
#include "bts/priors.hpp"
#include "bts/rng.hpp"

namespace bts {

enum class NodeStatus : std::uint8_t { Frontier, Internal, VisitedLeaf };
enum class PlayoutPolicy : std::uint8_t { Uniform, Leftmost };
enum class TieBreak : std::uint8_t { Uniform, First };

struct BossOptions {
  PlayoutPolicy playout = PlayoutPolicy::Uniform;
  TieBreak ties = TieBreak::Uniform;
  /// Keys within this distance (log space) of the maximum are tied.
  double tie_tolerance = 1e-12;
  DrawPolicy draw_policy{};
  /// Keep R(root) after every iteration.
  bool track_trajectory = false;
};

struct BossNode {
  std::int32_t parent = -1;
  std::int32_t first_child = -1;
  std::uint32_t num_children = 0;
  std::uint32_t move = 0;
  std::int32_t depth = 0;
  NodeStatus status = NodeStatus::Frontier;
  /// The perspective player moves here.
  bool max_node = true;
  /// Model prior, for J1, fixed at creation.
  NodePrior prior;
  /// Posterior win probability for the perspective player.
  LogOdds R;
  /// Sibling product; meaningless at the root.
  LogOdds U = LogOdds::one_prob();
  /// log Z.
  double log_z = -kInf;
};

struct BossStats {
  std::uint64_t iterations = 0;
  std::uint64_t visited_leaves = 0;
  /// Iterations after which (R, Z) at the root were bit-identical.
  std::uint64_t frozen_iterations = 0;
  /// Descents that met an inner node whose children all had key -inf.
  std::uint64_t stalled_descents = 0;
  std::uint64_t touched_total = 0;
  std::uint64_t touched_last = 0;
};

template <GamePosition P>
class BossSearch {
 public:
  BossSearch(P root, PriorSource<P> priors, std::uint64_t seed, BossOptions options = {},
             std::optional<Player> perspective = std::nullopt)
      : root_pos_(std::move(root)),
        priors_(std::move(priors)),
        options_(options),
        perspective_(perspective.value_or(root_pos_.turn())),
        rng_(seed) {
    BossNode r = make_node(-1, 0, root_pos_.depth(), priors_.root(root_pos_));
    nodes_.push_back(r);
    if (root_pos_.is_terminal()) mark_visited(0, root_pos_);
  }

  Player perspective() const { return perspective_; }
  const P& root_position() const { return root_pos_; }
  const BossOptions& options() const { return options_; }
  const BossStats& stats() const { return stats_; }
  const std::vector<BossNode>& nodes() const { return nodes_; }
  const BossNode& node(std::size_t i) const { return nodes_[i]; }
  const BossNode& root() const { return nodes_[0]; }
  const std::vector<double>& trajectory() const { return trajectory_; }

  bool terminated() const { return nodes_[0].R.is_certain(); }
  /// Posterior probability that the perspective player wins the root.
  double root_value() const { return prob(nodes_[0].R); }

  /// Frontier node the last iteration started from.
  std::int32_t last_selected() const { return last_selected_; }
  /// Node ids from the root to the leaf visited by the last iteration.
  const std::vector<std::int32_t>& last_branch() const { return last_branch_; }

  /// Selection key log(U^2 Z) of a non-root node.
  double key(std::size_t i) const {
    return 2.0 * log_from_phi(nodes_[i].U).value() + nodes_[i].log_z;
  }

  /// Descends from the root along the largest keys to the first node that
  /// is not Internal.
  std::int32_t select_frontier() {
    if (terminated()) throw std::logic_error("select_frontier on a solved root");
    std::int32_t x = 0;
    std::vector<std::int32_t> tied;
    while (nodes_[static_cast<std::size_t>(x)].status == NodeStatus::Internal) {
      const BossNode& n = nodes_[static_cast<std::size_t>(x)];
      double best = -kInf;
      for (std::uint32_t i = 0; i < n.num_children; ++i) {
        best = std::max(best, key(static_cast<std::size_t>(n.first_child) + i));
      }
      tied.clear();
      if (best == -kInf) {
        ++stats_.stalled_descents;
        for (std::uint32_t i = 0; i < n.num_children; ++i) {
          const auto c = n.first_child + static_cast<std::int32_t>(i);
          if (nodes_[static_cast<std::size_t>(c)].status != NodeStatus::VisitedLeaf) {
            tied.push_back(c);
          }
        }
        if (tied.empty()) tied.push_back(n.first_child);
      } else {
        for (std::uint32_t i = 0; i < n.num_children; ++i) {
          const auto c = n.first_child + static_cast<std::int32_t>(i);
          if (key(static_cast<std::size_t>(c)) >= best - options_.tie_tolerance) {
            tied.push_back(c);
          }
        }
      }
      x = pick(tied);
    }
    return x;
  }

  /// One iteration. The first iteration from a fresh root plays from the
  /// root itself.
  void step() {
    if (terminated()) throw std::logic_error("step on a solved root");
    const std::int32_t z =
        nodes_[0].status == NodeStatus::Frontier ? 0 : select_frontier();
    const LogOdds r_before = nodes_[0].R;
    const double z_before = nodes_[0].log_z;
    last_selected_ = z;
    stats_.touched_last = 0;
    if (nodes_[static_cast<std::size_t>(z)].status == NodeStatus::VisitedLeaf) {
      // Cannot happen while the root is unsolved; counted as frozen.
      last_branch_ = branch_to(z);
    } else {
      playout_from(z, position_of(static_cast<std::size_t>(z)));
    }
    ++stats_.iterations;
    stats_.touched_total += stats_.touched_last;
    if (nodes_[0].R == r_before && nodes_[0].log_z == z_before) ++stats_.frozen_iterations;
    if (options_.track_trajectory) trajectory_.push_back(root_value());
  }

  /// Runs up to `iterations` iterations, stopping early once the root is
  /// solved. A fresh root always gets its first iteration. Returns the
  /// number of iterations performed.
  std::uint64_t run(std::uint64_t iterations) {
    std::uint64_t done = 0;
    if (nodes_[0].status == NodeStatus::Frontier && !terminated()) {
      step();
      ++done;
    }
    while (done < iterations && !terminated()) {
      step();
      ++done;
    }
    return done;
  }

  /// Iterates until `deadline`, checking the clock between iterations.
  std::uint64_t run_until(std::chrono::steady_clock::time_point deadline) {
    std::uint64_t done = run(0);
    while (!terminated() && std::chrono::steady_clock::now() < deadline) {
      step();
      ++done;
    }
    return done;
  }

  /// Runs to a solved root. Throws ResourceLimitError past `max_iterations`.
  std::uint64_t solve(std::uint64_t max_iterations = kDefaultNodeBudget) {
    std::uint64_t done = 0;
    while (!terminated()) {
      if (done >= max_iterations) {
        throw ResourceLimitError("boss: root unsolved after " + std::to_string(done) +
                                 " iterations");
      }
      step();
      ++done;
    }
    return done;
  }

  /// Move index maximizing R among the root's children (minimizing when the
  /// opponent moves at the root).
  std::size_t best_move() {
    if (root_pos_.is_terminal()) throw std::logic_error("best_move at a terminal position");
    if (nodes_[0].status == NodeStatus::Frontier) run(0);
    const BossNode& r = nodes_[0];
    std::vector<std::int32_t> tied;
    double best = r.max_node ? -kInf : kInf;
    bool first = true;
    for (std::uint32_t i = 0; i < r.num_children; ++i) {
      const double v = nodes_[static_cast<std::size_t>(r.first_child) + i].R.value();
      if (first || (r.max_node ? v > best : v < best)) best = v;
      first = false;
    }
    for (std::uint32_t i = 0; i < r.num_children; ++i) {
      const double v = nodes_[static_cast<std::size_t>(r.first_child) + i].R.value();
      const bool tie = std::isinf(best) ? v == best : std::abs(v - best) <= options_.tie_tolerance;
      if (tie) tied.push_back(r.first_child + static_cast<std::int32_t>(i));
    }
    return nodes_[static_cast<std::size_t>(pick(tied))].move;
  }

  /// Makes child `move` of the root the new root, keeping its subtree.
  void reroot(std::size_t move) {
    if (move >= root_pos_.num_moves()) throw std::out_of_range("reroot: unknown move");
    P next = root_pos_.child(move);
    const BossNode& r = nodes_[0];
    std::vector<BossNode> fresh;
    if (r.status != NodeStatus::Internal) {
      const NodePrior pr = priors_.child(root_pos_, move, r.prior, root_pos_.num_moves());
      fresh.push_back(make_node(-1, static_cast<std::uint32_t>(move), next.depth(), pr));
    } else {
      const auto c = static_cast<std::size_t>(r.first_child) + move;
      fresh.push_back(nodes_[c]);
      fresh[0].parent = -1;
      fresh[0].U = LogOdds::one_prob();
      // Breadth-first copy keeps every litter contiguous.
      std::deque<std::pair<std::int32_t, std::int32_t>> queue{{static_cast<std::int32_t>(c), 0}};
      while (!queue.empty()) {
        auto [old_id, new_id] = queue.front();
        queue.pop_front();
        const BossNode& on = nodes_[static_cast<std::size_t>(old_id)];
        if (on.num_children == 0) continue;
        const auto first = static_cast<std::int32_t>(fresh.size());
        fresh[static_cast<std::size_t>(new_id)].first_child = first;
        for (std::uint32_t i = 0; i < on.num_children; ++i) {
          BossNode ch = nodes_[static_cast<std::size_t>(on.first_child) + i];
          ch.parent = new_id;
          fresh.push_back(ch);
          queue.emplace_back(on.first_child + static_cast<std::int32_t>(i),
                             first + static_cast<std::int32_t>(i));
        }
      }
    }
    nodes_.swap(fresh);
    root_pos_ = std::move(next);
    if (nodes_[0].status == NodeStatus::Internal) {
      recompute(0);
    } else if (root_pos_.is_terminal() && nodes_[0].status == NodeStatus::Frontier) {
      mark_visited(0, root_pos_);
    }
  }

  /// Child indices leading from the root to node `i`.
  std::vector<std::size_t> path_of(std::size_t i) const {
    std::vector<std::size_t> path;
    for (auto x = static_cast<std::int32_t>(i); nodes_[static_cast<std::size_t>(x)].parent >= 0;
         x = nodes_[static_cast<std::size_t>(x)].parent) {
      path.push_back(nodes_[static_cast<std::size_t>(x)].move);
    }
    std::reverse(path.begin(), path.end());
    return path;
  }

  P position_of(std::size_t i) const {
    P pos = root_pos_;
    for (std::size_t m : path_of(i)) pos = pos.child(m);
    return pos;
  }

  /// Re-derives every stored quantity from its defining recursion and
  /// reports the first mismatch beyond `tol`; empty when consistent.
  std::string audit(double tol = 1e-9) const {
    std::ostringstream err;
    auto close = [tol](double a, double b) {
      if (std::isinf(a) || std::isinf(b)) return a == b;
      return std::abs(a - b) <= tol * std::max(1.0, std::abs(a));
    };
    std::vector<LogOdds> sides;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      const BossNode& n = nodes_[i];
      if (n.status == NodeStatus::Frontier) {
        if (n.R != orient(n.prior.m) || n.log_z != n.prior.log_s) {
          err << "frontier node " << i << " does not carry its prior";
          return err.str();
        }
        continue;
      }
      if (n.status == NodeStatus::VisitedLeaf) {
        if (!n.R.is_certain() || n.log_z != -kInf) {
          err << "visited leaf " << i << " has R=" << n.R.value() << " logZ=" << n.log_z;
          return err.str();
        }
        continue;
      }
      sides.clear();
      double z = -kInf;
      for (std::uint32_t c = 0; c < n.num_children; ++c) {
        const BossNode& ch = nodes_[static_cast<std::size_t>(n.first_child) + c];
        sides.push_back(n.max_node ? -ch.R : ch.R);
      }
      const LogOdds all = phi_prod(sides);
      const LogOdds r = n.max_node ? -all : all;
      if (!close(r.value(), n.R.value())) {
        err << "node " << i << ": R=" << n.R.value() << " expected " << r.value();
        return err.str();
      }
      for (std::uint32_t c = 0; c < n.num_children; ++c) {
        const BossNode& ch = nodes_[static_cast<std::size_t>(n.first_child) + c];
        std::vector<LogOdds> others;
        for (std::uint32_t o = 0; o < n.num_children; ++o) {
          if (o != c) others.push_back(sides[o]);
        }
        const LogOdds u = phi_prod(others);
        if (!close(u.value(), ch.U.value())) {
          err << "node " << n.first_child + static_cast<std::int32_t>(c) << ": U=" << ch.U.value()
              << " expected " << u.value();
          return err.str();
        }
        z = std::max(z, 2.0 * log_from_phi(u).value() + ch.log_z);
      }
      if (!close(z, n.log_z)) {
        err << "node " << i << ": logZ=" << n.log_z << " expected " << z;
        return err.str();
      }
      if ((n.log_z == -kInf) != n.R.is_certain()) {
        err << "node " << i << ": Z vanishes without R being certain, or conversely";
        return err.str();
      }
    }
    return {};
  }

 private:
  LogOdds orient(LogOdds m_j1) const { return perspective_ == Player::J1 ? m_j1 : -m_j1; }

  BossNode make_node(std::int32_t parent, std::uint32_t move, int depth, const NodePrior& pr) const {
    BossNode n;
    n.parent = parent;
    n.move = move;
    n.depth = depth;
    n.max_node = player_at_depth(depth) == perspective_;
    n.prior = pr;
    n.R = orient(pr.m);
    n.log_z = pr.log_s;
    return n;
  }

  void mark_visited(std::size_t i, const P& pos) {
    BossNode& n = nodes_[i];
    n.status = NodeStatus::VisitedLeaf;
    n.R = wins(pos.raw_outcome(), perspective_, options_.draw_policy) ? LogOdds::one_prob()
                                                                       : LogOdds::zero_prob();
    n.log_z = -kInf;
    ++stats_.visited_leaves;
  }

  std::int32_t pick(const std::vector<std::int32_t>& tied) {
    if (tied.size() == 1 || options_.ties == TieBreak::First) return tied.front();
    return tied[uniform_index(rng_, tied.size())];
  }

  std::vector<std::int32_t> branch_to(std::int32_t x) const {
    std::vector<std::int32_t> b;
    for (; x >= 0; x = nodes_[static_cast<std::size_t>(x)].parent) b.push_back(x);
    std::reverse(b.begin(), b.end());
    return b;
  }

  void expand(std::int32_t x, const P& pos) {
    const std::size_t n = pos.num_moves();
    const auto first = static_cast<std::int32_t>(nodes_.size());
    const NodePrior parent_prior = nodes_[static_cast<std::size_t>(x)].prior;
    const int depth = nodes_[static_cast<std::size_t>(x)].depth + 1;
    for (std::size_t i = 0; i < n; ++i) {
      nodes_.push_back(make_node(x, static_cast<std::uint32_t>(i), depth,
                                 priors_.child(pos, i, parent_prior, n)));
    }
    BossNode& p = nodes_[static_cast<std::size_t>(x)];
    p.first_child = first;
    p.num_children = static_cast<std::uint32_t>(n);
    p.status = NodeStatus::Internal;
  }

  void playout_from(std::int32_t z, P pos) {
    std::int32_t cur = z;
    while (!pos.is_terminal()) {
      expand(cur, pos);
      const std::size_t n = pos.num_moves();
      const std::size_t i = options_.playout == PlayoutPolicy::Leftmost ? 0 : uniform_index(rng_, n);
      cur = nodes_[static_cast<std::size_t>(cur)].first_child + static_cast<std::int32_t>(i);
      pos = pos.child(i);
    }
    mark_visited(static_cast<std::size_t>(cur), pos);
    ++stats_.touched_last;
    last_branch_ = branch_to(cur);
    for (std::int32_t x = nodes_[static_cast<std::size_t>(cur)].parent; x >= 0;
         x = nodes_[static_cast<std::size_t>(x)].parent) {
      recompute(static_cast<std::size_t>(x));
    }
  }

  // Recomputes R and Z of inner node x and U of all its children.
  void recompute(std::size_t x) {
    BossNode& n = nodes_[x];
    const auto c0 = static_cast<std::size_t>(n.first_child);
    const std::size_t k = n.num_children;
    sides_.resize(k);
    suffix_.resize(k + 1);
    for (std::size_t i = 0; i < k; ++i) {
      const LogOdds r = nodes_[c0 + i].R;
      sides_[i] = n.max_node ? -r : r;
    }
    suffix_[k] = LogOdds::one_prob();
    for (std::size_t i = k; i-- > 0;) suffix_[i] = phi_mul(sides_[i], suffix_[i + 1]);
    LogOdds prefix = LogOdds::one_prob();
    double z = -kInf;
    for (std::size_t i = 0; i < k; ++i) {
      BossNode& ch = nodes_[c0 + i];
      ch.U = phi_mul(prefix, suffix_[i + 1]);
      prefix = phi_mul(prefix, sides_[i]);
      z = std::max(z, 2.0 * log_from_phi(ch.U).value() + ch.log_z);
    }
    n.R = n.max_node ? -suffix_[0] : suffix_[0];
    n.log_z = z;
    stats_.touched_last += 1 + k;
  }

  P root_pos_;
  PriorSource<P> priors_;
  BossOptions options_;
  Player perspective_;
  Rng rng_;
  std::vector<BossNode> nodes_;
  BossStats stats_;
  std::vector<double> trajectory_;
  std::int32_t last_selected_ = -1;
  std::vector<std::int32_t> last_branch_;
  std::vector<LogOdds> sides_;
  std::vector<LogOdds> suffix_;
};

}  // namespace bts

#endif  // BTS_BOSS_HPP_
