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

#ifndef BTS_PEARL_HPP_
#define BTS_PEARL_HPP_

#include <cstdint>
#include <stdexcept>
#include <string>

#include "bts/game.hpp"
#include "bts/rng.hpp"

namespace bts {

struct PearlConfig {
  int degree = 2;
  int depth = 8;
  double leaf_prob = 0.5;
  std::uint64_t seed = 0;

  void validate() const {
    if (degree < 2) throw std::invalid_argument("pearl: degree must be >= 2");
    if (depth < 1) throw std::invalid_argument("pearl: depth must be >= 1");
    if (!(leaf_prob >= 0.0 && leaf_prob <= 1.0)) {
      throw std::invalid_argument("pearl: leaf probability outside [0, 1]");
    }
  }
};

/// d-regular tree of depth K whose leaves are i.i.d. Bernoulli(p) wins for
/// J1. Nothing is stored: a node is its path hash, and a leaf's outcome is a
/// pure function of (seed, path).
class PearlGame {
 public:
  explicit PearlGame(const PearlConfig& cfg)
      : degree_(cfg.degree),
        max_depth_(cfg.depth),
        p_(cfg.leaf_prob),
        key_(mix64(cfg.seed ^ 0x5EA71ULL)) {
    cfg.validate();
  }

  int depth() const { return depth_; }
  Player turn() const { return player_at_depth(depth_); }
  bool is_terminal() const { return depth_ == max_depth_; }
  std::size_t num_moves() const {
    return is_terminal() ? 0 : static_cast<std::size_t>(degree_);
  }

  Outcome raw_outcome() const {
    if (!is_terminal()) throw std::logic_error("raw_outcome on an inner node");
    return unit_double(mix64(key_)) < p_ ? Outcome::J1Win : Outcome::J0Win;
  }

  PearlGame child(std::size_t i) const {
    if (i >= num_moves()) throw std::out_of_range("pearl: move index out of range");
    PearlGame next = *this;
    next.key_ = child_key(key_, i);
    ++next.depth_;
    return next;
  }

  std::string move_label(std::size_t i) const { return std::to_string(i); }

  /// Hash of the path from the start position. Equal keys mean equal nodes.
  std::uint64_t key() const { return key_; }
  int degree() const { return degree_; }
  int max_depth() const { return max_depth_; }
  double leaf_prob() const { return p_; }

 private:
  int degree_;
  int max_depth_;
  double p_;
  std::uint64_t key_;
  int depth_ = 0;
};

inline PearlGame pearl_game_new(const PearlConfig& cfg) { return PearlGame(cfg); }

}  // namespace bts

#endif  // BTS_PEARL_HPP_
