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

// Fully materialized finite trees. Used as the substrate of the exact
// oracles (known shape, independent Bernoulli leaves) and for small
// hand-built games in tests.

#ifndef BTS_EXPLICIT_TREE_HPP_
#define BTS_EXPLICIT_TREE_HPP_

#include <algorithm>
#include <cstddef>
#include <memory>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "bts/game.hpp"
#include "bts/rng.hpp"

namespace bts {

class ExplicitTree {
 public:
  struct Node {
    int parent = -1;
    int depth = 0;
    std::vector<int> children;
    /// Index into leaves(), or -1 for inner nodes.
    int leaf_index = -1;
  };

  /// Builds a tree from per-node child counts listed in breadth-first order.
  static ExplicitTree from_bfs_degrees(const std::vector<int>& degrees) {
    ExplicitTree t;
    t.nodes_.push_back(Node{});
    for (std::size_t i = 0; i < t.nodes_.size(); ++i) {
      if (i >= degrees.size()) throw std::invalid_argument("tree: degree list too short");
      for (int c = 0; c < degrees[i]; ++c) {
        Node n;
        n.parent = static_cast<int>(i);
        n.depth = t.nodes_[i].depth + 1;
        t.nodes_[i].children.push_back(static_cast<int>(t.nodes_.size()));
        t.nodes_.push_back(std::move(n));
      }
    }
    if (degrees.size() != t.nodes_.size()) {
      throw std::invalid_argument("tree: degree list too long");
    }
    t.index_leaves();
    return t;
  }

  /// Complete d-ary tree of the given depth.
  static ExplicitTree regular(int degree, int depth) {
    std::vector<int> degrees;
    std::size_t level = 1;
    for (int k = 0; k <= depth; ++k) {
      for (std::size_t i = 0; i < level; ++i) degrees.push_back(k < depth ? degree : 0);
      level *= static_cast<std::size_t>(degree);
    }
    return from_bfs_degrees(degrees);
  }

  /// Random shape: every node above `max_depth` is a leaf with probability
  /// `leaf_prob` (never the root), otherwise has 1..max_degree children.
  /// Regenerates until the leaf count is at most `max_leaves`.
  template <class Gen>
  static ExplicitTree random(Gen& gen, int max_depth, int max_degree,
                             double leaf_prob, std::size_t max_leaves) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (;;) {
      std::vector<int> degrees;
      std::vector<int> depth_of{0};
      std::size_t leaves = 0;
      for (std::size_t i = 0; i < depth_of.size(); ++i) {
        const int k = depth_of[i];
        int d = 0;
        if (k < max_depth && (k == 0 || unit(gen) >= leaf_prob)) {
          d = 1 + static_cast<int>(uniform_index(gen, static_cast<std::size_t>(max_degree)));
        }
        degrees.push_back(d);
        if (d == 0) ++leaves;
        for (int c = 0; c < d; ++c) depth_of.push_back(k + 1);
      }
      if (leaves <= max_leaves) return from_bfs_degrees(degrees);
    }
  }

  const std::vector<Node>& nodes() const { return nodes_; }
  const Node& node(int id) const { return nodes_[static_cast<std::size_t>(id)]; }
  std::size_t size() const { return nodes_.size(); }
  /// Leaf node ids in breadth-first order.
  const std::vector<int>& leaves() const { return leaves_; }
  int max_depth() const {
    int m = 0;
    for (const Node& n : nodes_) m = std::max(m, n.depth);
    return m;
  }

  /// Node ids in an order where every child precedes its parent. Ids are
  /// assigned breadth-first, so descending ids will do.
  std::vector<int> children_first_order() const {
    std::vector<int> order;
    order.reserve(nodes_.size());
    for (int i = static_cast<int>(nodes_.size()) - 1; i >= 0; --i) order.push_back(i);
    return order;
  }

  /// Child-index path from the root, e.g. {0, 1, 0}.
  std::vector<std::size_t> path_of(int id) const {
    std::vector<std::size_t> path;
    while (nodes_[static_cast<std::size_t>(id)].parent >= 0) {
      const int p = nodes_[static_cast<std::size_t>(id)].parent;
      const auto& sib = nodes_[static_cast<std::size_t>(p)].children;
      for (std::size_t i = 0; i < sib.size(); ++i) {
        if (sib[i] == id) path.push_back(i);
      }
      id = p;
    }
    return {path.rbegin(), path.rend()};
  }

  /// Node reached by following `path` from the root.
  int node_at(const std::vector<std::size_t>& path) const {
    int id = 0;
    for (std::size_t i : path) id = node(id).children.at(i);
    return id;
  }

 private:
  void index_leaves() {
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      if (nodes_[i].children.empty()) {
        nodes_[i].leaf_index = static_cast<int>(leaves_.size());
        leaves_.push_back(static_cast<int>(i));
      }
    }
  }

  std::vector<Node> nodes_;
  std::vector<int> leaves_;
};

/// Position in an explicit tree with fixed leaf outcomes (one per leaf, in
/// ExplicitTree::leaves() order).
class TreePosition {
 public:
  TreePosition(std::shared_ptr<const ExplicitTree> tree,
               std::shared_ptr<const std::vector<Outcome>> outcomes, int node = 0)
      : tree_(std::move(tree)), outcomes_(std::move(outcomes)), node_(node) {
    if (outcomes_->size() != tree_->leaves().size()) {
      throw std::invalid_argument("tree position: one outcome per leaf required");
    }
  }

  int depth() const { return tree_->node(node_).depth; }
  Player turn() const { return player_at_depth(depth()); }
  bool is_terminal() const { return tree_->node(node_).children.empty(); }
  std::size_t num_moves() const { return tree_->node(node_).children.size(); }

  Outcome raw_outcome() const {
    const int leaf = tree_->node(node_).leaf_index;
    if (leaf < 0) throw std::logic_error("raw_outcome on an inner node");
    return (*outcomes_)[static_cast<std::size_t>(leaf)];
  }

  TreePosition child(std::size_t i) const {
    TreePosition next = *this;
    next.node_ = tree_->node(node_).children.at(i);
    return next;
  }

  std::string move_label(std::size_t i) const { return std::to_string(i); }

  int node() const { return node_; }
  const ExplicitTree& tree() const { return *tree_; }
  const std::shared_ptr<const ExplicitTree>& tree_ptr() const { return tree_; }

 private:
  std::shared_ptr<const ExplicitTree> tree_;
  std::shared_ptr<const std::vector<Outcome>> outcomes_;
  int node_;
};

/// Draws independent leaf outcomes, leaf i winning for J1 with prob q[i].
template <class Gen>
std::vector<Outcome> sample_leaf_outcomes(const std::vector<double>& q, Gen& gen) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<Outcome> out;
  out.reserve(q.size());
  for (double p : q) out.push_back(unit(gen) < p ? Outcome::J1Win : Outcome::J0Win);
  return out;
}

inline TreePosition tree_position(ExplicitTree tree, std::vector<Outcome> outcomes) {
  return TreePosition(std::make_shared<const ExplicitTree>(std::move(tree)),
                      std::make_shared<const std::vector<Outcome>>(std::move(outcomes)));
}

}  // namespace bts

#endif  // BTS_EXPLICIT_TREE_HPP_
