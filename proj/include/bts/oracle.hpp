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

// Brute-force references on explicit trees with independent Bernoulli
// leaves. Everything here enumerates outcome assignments of the unobserved
// leaves and shares no code with the search engines beyond the tree type.
// Values are in J1 orientation: R = 1 when J1 wins.

#ifndef BTS_ORACLE_HPP_
#define BTS_ORACLE_HPP_

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "bts/explicit_tree.hpp"
#include "bts/game.hpp"

namespace bts {

inline constexpr std::size_t kOracleMaxUnknownLeaves = 24;

/// Observed leaves (node id -> J1 wins). The explored shape is derived:
/// B holds every ancestor of an observed leaf, D the children of B's inner
/// nodes that are not in B. With no observation D is the root alone.
struct ObservationSet {
  std::map<int, bool> observed;

  void observe(const ExplicitTree& tree, int leaf, bool j1_win) {
    if (!tree.node(leaf).children.empty()) {
      throw std::invalid_argument("observation: node " + std::to_string(leaf) + " is not a leaf");
    }
    observed[leaf] = j1_win;
  }

  std::vector<bool> explored(const ExplicitTree& tree) const {
    std::vector<bool> in_b(tree.size(), false);
    for (const auto& [leaf, v] : observed) {
      for (int x = leaf; x >= 0 && !in_b[static_cast<std::size_t>(x)]; x = tree.node(x).parent) {
        in_b[static_cast<std::size_t>(x)] = true;
      }
    }
    return in_b;
  }

  /// Frontier node ids, ascending.
  std::vector<int> frontier(const ExplicitTree& tree) const {
    if (observed.empty()) return {0};
    const std::vector<bool> in_b = explored(tree);
    std::vector<int> d;
    for (std::size_t x = 0; x < tree.size(); ++x) {
      if (!in_b[x]) continue;
      for (int c : tree.nodes()[x].children) {
        if (!in_b[static_cast<std::size_t>(c)]) d.push_back(c);
      }
    }
    std::sort(d.begin(), d.end());
    return d;
  }
};

namespace detail {

// Walks all assignments of the unobserved leaves, handing each to `visit`
// as (weight, J1 wins at the root, per-leaf outcome lookup).
class OutcomeEnumerator {
 public:
  OutcomeEnumerator(const ExplicitTree& tree, const std::vector<double>& q,
                    const ObservationSet& obs, Player root_turn)
      : tree_(tree), q_(q), obs_(obs), root_turn_(root_turn), order_(tree.children_first_order()) {
    if (q.size() != tree.leaves().size()) {
      throw std::invalid_argument("oracle: one leaf probability per leaf required");
    }
    for (int leaf : tree.leaves()) {
      if (!obs.observed.contains(leaf)) unknown_.push_back(leaf);
    }
    if (unknown_.size() > kOracleMaxUnknownLeaves) {
      throw ResourceLimitError("oracle: " + std::to_string(unknown_.size()) +
                               " unknown leaves exceeds the enumeration limit");
    }
  }

  const std::vector<int>& unknown() const { return unknown_; }

  template <class Visit>
  void run(Visit&& visit) const {
    std::vector<char> value(tree_.size(), 0);
    for (const auto& [leaf, v] : obs_.observed) value[static_cast<std::size_t>(leaf)] = v;
    const std::uint64_t total = std::uint64_t{1} << unknown_.size();
    for (std::uint64_t mask = 0; mask < total; ++mask) {
      long double w = 1.0L;
      for (std::size_t i = 0; i < unknown_.size(); ++i) {
        const int leaf = unknown_[i];
        const bool win = (mask >> i) & 1U;
        const long double p =
            q_[static_cast<std::size_t>(tree_.node(leaf).leaf_index)];
        w *= win ? p : 1.0L - p;
        value[static_cast<std::size_t>(leaf)] = win;
      }
      if (w == 0.0L) continue;
      for (int x : order_) {
        const auto& n = tree_.node(x);
        if (n.children.empty()) continue;
        const bool j1_moves = turn_of(n.depth) == Player::J1;
        bool v = !j1_moves;
        for (int c : n.children) {
          const bool cv = value[static_cast<std::size_t>(c)];
          if (j1_moves ? cv : !cv) {
            v = cv;
            break;
          }
        }
        value[static_cast<std::size_t>(x)] = v;
      }
      visit(w, static_cast<bool>(value[0]), mask);
    }
  }

 private:
  Player turn_of(int depth) const {
    return depth % 2 == 0 ? root_turn_ : opponent(root_turn_);
  }

  const ExplicitTree& tree_;
  const std::vector<double>& q_;
  const ObservationSet& obs_;
  Player root_turn_;
  std::vector<int> order_;
  std::vector<int> unknown_;
};

}  // namespace detail

/// P(J1 wins the root | observations).
inline long double exact_posterior(const ExplicitTree& tree, const std::vector<double>& q,
                                   const ObservationSet& obs, Player root_turn = Player::J1) {
  detail::OutcomeEnumerator en(tree, q, obs, root_turn);
  long double mass = 0.0L;
  long double win = 0.0L;
  en.run([&](long double w, bool r, std::uint64_t) {
    mass += w;
    if (r) win += w;
  });
  if (mass == 0.0L) throw std::invalid_argument("oracle: observations have probability 0");
  return win / mass;
}

struct FrontierEval {
  int node = -1;
  /// E[(R_{n+1} - R)^2] if the next playout starts at `node`.
  long double l2 = 0.0L;
  /// E[|R_{n+1} - R|].
  long double l1 = 0.0L;
  /// E[(R_{n+1} - R_n)^2].
  long double delta = 0.0L;
};

struct StepOracle {
  long double posterior = 0.0L;
  /// E[(R_n - R)^2] = R_n (1 - R_n).
  long double current_l2 = 0.0L;
  std::vector<FrontierEval> frontier;
  /// Frontier nodes within 1e-11 of the smallest l2 (resp. l1).
  std::vector<int> l2_optimal;
  std::vector<int> l1_optimal;
};

inline constexpr long double kOracleTieTolerance = 1e-11L;

/// Scores every frontier node by exact enumeration over the unknown
/// leaves and over the uniform playout below it.
inline StepOracle step_optimal_z(const ExplicitTree& tree, const std::vector<double>& q,
                                 const ObservationSet& obs, Player root_turn = Player::J1) {
  detail::OutcomeEnumerator en(tree, q, obs, root_turn);
  const std::vector<int>& unknown = en.unknown();
  // joint[i][v] = P(root won, leaf i = v); marginal[i][v] = P(leaf i = v).
  std::vector<std::array<long double, 2>> joint(unknown.size(), {0.0L, 0.0L});
  std::vector<std::array<long double, 2>> marginal(unknown.size(), {0.0L, 0.0L});
  long double mass = 0.0L;
  long double win = 0.0L;
  en.run([&](long double w, bool r, std::uint64_t mask) {
    mass += w;
    if (r) win += w;
    for (std::size_t i = 0; i < unknown.size(); ++i) {
      const unsigned v = (mask >> i) & 1U;
      marginal[i][v] += w;
      if (r) joint[i][v] += w;
    }
  });
  if (mass == 0.0L) throw std::invalid_argument("oracle: observations have probability 0");
  StepOracle out;
  out.posterior = win / mass;
  out.current_l2 = out.posterior * (1.0L - out.posterior);
  std::map<int, std::size_t> slot;
  for (std::size_t i = 0; i < unknown.size(); ++i) slot[unknown[i]] = i;

  for (int z : obs.frontier(tree)) {
    FrontierEval e;
    e.node = z;
    long double second_moment = 0.0L;
    std::function<void(int, long double)> walk = [&](int x, long double pi) {
      const auto& n = tree.node(x);
      if (n.children.empty()) {
        const std::size_t i = slot.at(x);
        for (unsigned v = 0; v < 2; ++v) {
          const long double pv = marginal[i][v] / mass;
          if (pv == 0.0L) continue;
          const long double r_next = joint[i][v] / marginal[i][v];
          second_moment += pi * pv * r_next * r_next;
          e.l1 += pi * pv * 2.0L * r_next * (1.0L - r_next);
          e.delta += pi * pv * (r_next - out.posterior) * (r_next - out.posterior);
        }
        return;
      }
      const long double share = pi / static_cast<long double>(n.children.size());
      for (int c : n.children) walk(c, share);
    };
    walk(z, 1.0L);
    e.l2 = out.posterior - second_moment;
    out.frontier.push_back(e);
  }
  if (out.frontier.empty()) return out;  // every leaf observed
  long double best_l2 = out.frontier.front().l2;
  long double best_l1 = out.frontier.front().l1;
  for (const auto& e : out.frontier) {
    best_l2 = std::min(best_l2, e.l2);
    best_l1 = std::min(best_l1, e.l1);
  }
  for (const auto& e : out.frontier) {
    if (e.l2 <= best_l2 + kOracleTieTolerance) out.l2_optimal.push_back(e.node);
    if (e.l1 <= best_l1 + kOracleTieTolerance) out.l1_optimal.push_back(e.node);
  }
  return out;
}

// The binary depth-3 tree with i.i.d. Bernoulli(1/2) leaves on which
// step-by-step optimality is not globally optimal. Leaves are named by
// 1-based child indices from the root, "111" .. "222".

inline ExplicitTree counterexample_tree() { return ExplicitTree::regular(2, 3); }

inline int counterexample_leaf(const ExplicitTree& tree, const std::string& name) {
  std::vector<std::size_t> path;
  for (char c : name) path.push_back(static_cast<std::size_t>(c - '1'));
  return tree.node_at(path);
}

/// A visiting strategy: next leaf name given the (leaf, outcome) history.
using LeafScript = std::function<std::string(const std::vector<std::pair<std::string, bool>>&)>;

/// The three first visits made by the step-optimal search.
inline std::string counterexample_greedy_script(const std::vector<std::pair<std::string, bool>>& h) {
  if (h.empty()) return "111";
  if (h[0].second) {
    if (h.size() == 1) return "121";
    return h[1].second ? "211" : "122";  // after 111=1, 121=1 the root is won
  }
  if (h.size() == 1) return "112";
  return h[1].second ? "121" : "211";
}

/// The alternative, better after three visits but worse after two.
inline std::string counterexample_alternative_script(const std::vector<std::pair<std::string, bool>>& h) {
  if (h.empty()) return "111";
  if (h[0].second) {
    if (h.size() == 1) return "121";
    return h[1].second ? "211" : "122";
  }
  if (h.size() == 1) return "211";
  return h[1].second ? "221" : "112";
}

/// E[(R_n - R)^2] for n = 1..steps when leaves are visited per `script`,
/// by enumeration of all leaf outcomes.
inline std::vector<long double> scripted_l2_errors(const ExplicitTree& tree,
                                                   const std::vector<double>& q,
                                                   const LeafScript& script, int steps) {
  const std::size_t L = tree.leaves().size();
  if (L > 20) throw ResourceLimitError("scripted_l2_errors: tree too large");
  std::vector<long double> err(static_cast<std::size_t>(steps), 0.0L);
  std::map<std::map<int, bool>, long double> posterior_cache;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << L); ++mask) {
    long double w = 1.0L;
    std::vector<Outcome> outcomes(L);
    for (std::size_t i = 0; i < L; ++i) {
      const bool v = (mask >> i) & 1U;
      w *= v ? static_cast<long double>(q[i]) : 1.0L - static_cast<long double>(q[i]);
      outcomes[i] = v ? Outcome::J1Win : Outcome::J0Win;
    }
    if (w == 0.0L) continue;
    const bool truth = minimax_solve(tree_position(tree, outcomes));
    ObservationSet obs;
    std::vector<std::pair<std::string, bool>> history;
    for (int n = 0; n < steps; ++n) {
      const std::string name = script(history);
      const int leaf = counterexample_leaf(tree, name);
      const bool v = (mask >> static_cast<unsigned>(tree.node(leaf).leaf_index)) & 1U;
      obs.observe(tree, leaf, v);
      history.emplace_back(name, v);
      auto it = posterior_cache.find(obs.observed);
      if (it == posterior_cache.end()) {
        it = posterior_cache.emplace(obs.observed, exact_posterior(tree, q, obs)).first;
      }
      const long double d = it->second - (truth ? 1.0L : 0.0L);
      err[static_cast<std::size_t>(n)] += w * d * d;
    }
  }
  return err;
}

struct CounterexampleReport {
  /// Mean and one-playout variance reduction at depths 0..3.
  std::array<long double, 4> m{};
  std::array<long double, 4> s{};
  std::array<long double, 3> algorithm_l2{};
  std::array<long double, 3> alternative_l2{};
};

inline CounterexampleReport greedy_counterexample() {
  CounterexampleReport rep;
  for (int k = 0; k <= 3; ++k) {
    // Every depth-k node roots a complete binary tree of height 3 - k.
    const ExplicitTree sub = ExplicitTree::regular(2, 3 - k);
    const std::vector<double> q(sub.leaves().size(), 0.5);
    const StepOracle o = step_optimal_z(sub, q, ObservationSet{}, player_at_depth(k));
    rep.m[static_cast<std::size_t>(k)] = o.posterior;
    rep.s[static_cast<std::size_t>(k)] = o.frontier.front().delta;
  }
  const ExplicitTree tree = counterexample_tree();
  const std::vector<double> q(tree.leaves().size(), 0.5);
  const auto a = scripted_l2_errors(tree, q, counterexample_greedy_script, 3);
  const auto b = scripted_l2_errors(tree, q, counterexample_alternative_script, 3);
  std::copy(a.begin(), a.end(), rep.algorithm_l2.begin());
  std::copy(b.begin(), b.end(), rep.alternative_l2.begin());
  return rep;
}

}  // namespace bts

#endif  // BTS_ORACLE_HPP_
