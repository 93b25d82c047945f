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

// Random games whose trees are inhomogeneous Galton-Watson trees, sampled
// lazily. A node's litter size and (for leaves) outcome are drawn from a
// stream seeded by the node's path hash, so a realization is replayable and
// can be traversed concurrently.

#ifndef BTS_GW_GAME_HPP_
#define BTS_GW_GAME_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "bts/game.hpp"
#include "bts/rng.hpp"

namespace bts {

/// Finite-support law on litter sizes, as (count, probability) pairs sorted
/// by count with distinct counts.
using LitterLaw = std::vector<std::pair<int, double>>;

/// Validates `law` (non-negative counts and weights summing to 1 within
/// 1e-9), merges duplicate counts, sorts, and renormalizes.
inline LitterLaw normalize_law(const LitterLaw& law) {
  std::map<int, double> merged;
  double total = 0.0;
  for (auto [count, w] : law) {
    if (count < 0) throw std::invalid_argument("litter law: negative count");
    if (!(w >= 0.0)) throw std::invalid_argument("litter law: negative weight");
    merged[count] += w;
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw std::invalid_argument("litter law: probabilities sum to " +
                                std::to_string(total) + ", expected 1");
  }
  LitterLaw out;
  for (auto [count, w] : merged) {
    if (w > 0.0) out.emplace_back(count, w / total);
  }
  return out;
}

inline double law_prob(const LitterLaw& law, int count) {
  for (auto [c, w] : law) {
    if (c == count) return w;
  }
  return 0.0;
}

/// Inverse-CDF draw from a normalized law; `u` uniform in [0, 1).
inline int sample_law(const LitterLaw& law, double u) {
  double acc = 0.0;
  for (auto [c, w] : law) {
    acc += w;
    if (u < acc) return c;
  }
  return law.back().first;
}

struct GWModel {
  int max_depth = 0;
  /// mu[k] for k = 0..max_depth; mu[max_depth] is the point mass at 0.
  std::vector<LitterLaw> mu;
  /// Probability that a leaf at depth k is a J1 win.
  std::vector<double> q;
  std::uint64_t seed = 0;

  /// Checks the shape constraints and renormalizes every law in place.
  void validate() {
    if (max_depth < 0) throw std::invalid_argument("gw model: negative depth");
    const auto n = static_cast<std::size_t>(max_depth) + 1;
    if (mu.size() != n || q.size() != n) {
      throw std::invalid_argument("gw model: need K + 1 laws and leaf probabilities");
    }
    for (auto& law : mu) law = normalize_law(law);
    if (mu.back().size() != 1 || mu.back()[0].first != 0) {
      throw std::invalid_argument("gw model: the last law must be the point mass at 0");
    }
    for (double v : q) {
      if (!(v >= 0.0 && v <= 1.0)) {
        throw std::invalid_argument("gw model: leaf probability outside [0, 1]");
      }
    }
  }
};

/// Order-two model: `mu0` is the root's litter law and mu[{k, d}] the law at
/// depth k >= 1 when the parent had d children. Depth-K nodes are leaves.
struct GW2Model {
  int max_depth = 0;
  LitterLaw mu0;
  std::map<std::pair<int, int>, LitterLaw> mu;
  std::vector<double> q;
  std::uint64_t seed = 0;

  void validate() {
    if (max_depth < 1) throw std::invalid_argument("gw2 model: depth must be >= 1");
    if (q.size() != static_cast<std::size_t>(max_depth) + 1) {
      throw std::invalid_argument("gw2 model: need K + 1 leaf probabilities");
    }
    mu0 = normalize_law(mu0);
    for (auto& [kd, law] : mu) {
      law = normalize_law(law);
      if (kd.first == max_depth && (law.size() != 1 || law[0].first != 0)) {
        throw std::invalid_argument("gw2 model: depth-K laws must be the point mass at 0");
      }
    }
    for (double v : q) {
      if (!(v >= 0.0 && v <= 1.0)) {
        throw std::invalid_argument("gw2 model: leaf probability outside [0, 1]");
      }
    }
  }

  const LitterLaw& law(int k, int parent_litter) const {
    static const LitterLaw kLeaf{{0, 1.0}};
    if (k == 0) return mu0;
    if (k == max_depth) return kLeaf;
    auto it = mu.find({k, parent_litter});
    if (it == mu.end()) {
      throw std::out_of_range("gw2 model: no law for depth " + std::to_string(k) +
                              " and parent litter " + std::to_string(parent_litter));
    }
    return it->second;
  }
};

namespace detail {

struct NodeDraw {
  int litter = 0;
  bool j1_win = false;
};

inline NodeDraw draw_node(std::uint64_t key, const LitterLaw& law, double q) {
  SplitMix64 stream(key);
  NodeDraw d;
  d.litter = sample_law(law, stream.uniform());
  if (d.litter == 0) d.j1_win = stream.uniform() < q;
  return d;
}

}  // namespace detail

/// Position in a lazily sampled Galton-Watson game.
class GWGame {
 public:
  explicit GWGame(std::shared_ptr<const GWModel> model)
      : model_(std::move(model)), key_(mix64(model_->seed ^ 0x6A7E5ULL)) {
    draw();
  }

  int depth() const { return depth_; }
  Player turn() const { return player_at_depth(depth_); }
  bool is_terminal() const { return draw_.litter == 0; }
  std::size_t num_moves() const { return static_cast<std::size_t>(draw_.litter); }

  Outcome raw_outcome() const {
    if (!is_terminal()) throw std::logic_error("raw_outcome on an inner node");
    return draw_.j1_win ? Outcome::J1Win : Outcome::J0Win;
  }

  GWGame child(std::size_t i) const {
    if (i >= num_moves()) throw std::out_of_range("gw: move index out of range");
    GWGame next = *this;
    next.key_ = child_key(key_, i);
    ++next.depth_;
    next.draw();
    return next;
  }

  std::string move_label(std::size_t i) const { return std::to_string(i); }
  std::uint64_t key() const { return key_; }
  const GWModel& model() const { return *model_; }

 private:
  void draw() {
    const auto k = static_cast<std::size_t>(depth_);
    draw_ = detail::draw_node(key_, model_->mu[k], model_->q[k]);
  }

  std::shared_ptr<const GWModel> model_;
  std::uint64_t key_;
  int depth_ = 0;
  detail::NodeDraw draw_;
};

inline GWGame gw_game_sample(GWModel model) {
  model.validate();
  return GWGame(std::make_shared<const GWModel>(std::move(model)));
}

/// Position in a lazily sampled order-two Galton-Watson game.
class GW2Game {
 public:
  explicit GW2Game(std::shared_ptr<const GW2Model> model)
      : model_(std::move(model)), key_(mix64(model_->seed ^ 0x6A7E52ULL)) {
    draw();
  }

  int depth() const { return depth_; }
  Player turn() const { return player_at_depth(depth_); }
  bool is_terminal() const { return draw_.litter == 0; }
  std::size_t num_moves() const { return static_cast<std::size_t>(draw_.litter); }

  Outcome raw_outcome() const {
    if (!is_terminal()) throw std::logic_error("raw_outcome on an inner node");
    return draw_.j1_win ? Outcome::J1Win : Outcome::J0Win;
  }

  GW2Game child(std::size_t i) const {
    if (i >= num_moves()) throw std::out_of_range("gw2: move index out of range");
    GW2Game next = *this;
    next.key_ = child_key(key_, i);
    next.parent_litter_ = draw_.litter;
    ++next.depth_;
    next.draw();
    return next;
  }

  std::string move_label(std::size_t i) const { return std::to_string(i); }
  int parent_litter() const { return parent_litter_; }

 private:
  void draw() {
    draw_ = detail::draw_node(key_, model_->law(depth_, parent_litter_),
                              model_->q[static_cast<std::size_t>(depth_)]);
  }

  std::shared_ptr<const GW2Model> model_;
  std::uint64_t key_;
  int depth_ = 0;
  int parent_litter_ = 0;
  detail::NodeDraw draw_;
};

inline GW2Game gw2_game_sample(GW2Model model) {
  model.validate();
  return GW2Game(std::make_shared<const GW2Model>(std::move(model)));
}

}  // namespace bts

#endif  // BTS_GW_GAME_HPP_
