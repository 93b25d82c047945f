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

// Prior pairs (m, s) for frontier nodes.
//
// m is the probability that J1 wins the node under the model and s the
// variance one uniform playout from the node removes about that value.
// All priors here are expressed for J1 (the player moving at depth 0);
// engines re-orient them to their own seat.

#ifndef BTS_PRIORS_HPP_
#define BTS_PRIORS_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "bts/explicit_tree.hpp"
#include "bts/game.hpp"
#include "bts/gw_game.hpp"
#include "bts/log.hpp"
#include "bts/logodds.hpp"

namespace bts {

struct NodePrior {
  LogOdds m;
  /// log s; -inf when s = 0.
  double log_s = 0.0;

  static NodePrior from_probs(double m, double s) {
    if (!(s >= 0.0)) throw std::domain_error("prior: negative s");
    return NodePrior{phi(m), s > 0.0 ? std::log(s) : -kInf};
  }
  double mean() const { return prob(m); }
  double s() const { return std::exp(log_s); }
};

enum class PriorKind { GW, GW2, Pearl };

inline std::string to_string(PriorKind k) {
  switch (k) {
    case PriorKind::GW: return "gw";
    case PriorKind::GW2: return "gw2";
    case PriorKind::Pearl: return "pearl";
  }
  return "?";
}

/// Depth-indexed (GW, Pearl) or (depth, parent litter)-indexed (GW2) tables
/// of plain probabilities m and variances s.
struct PriorTables {
  PriorKind kind = PriorKind::GW;
  std::vector<double> m;
  std::vector<double> s;
  /// GW2 only: {k, d} -> (m, s). The root entry is stored under {0, 0}.
  std::map<std::pair<int, int>, std::pair<double, double>> by_litter;

  int max_depth() const {
    if (kind != PriorKind::GW2) return static_cast<int>(m.size()) - 1;
    int k = 0;
    for (const auto& [key, v] : by_litter) k = std::max(k, key.first);
    return k;
  }

  /// Prior of a node at `depth` whose parent has `parent_litter` children.
  NodePrior at(int depth, int parent_litter) const {
    const int kmax = max_depth();
    if (depth > kmax) {
      warn_once("prior tables cover depths 0.." + std::to_string(kmax) +
                "; deeper nodes reuse the last depth");
      depth = kmax;
    }
    if (kind != PriorKind::GW2) {
      const auto k = static_cast<std::size_t>(depth);
      return NodePrior::from_probs(m[k], s[k]);
    }
    if (depth == 0) parent_litter = 0;
    auto it = by_litter.find({depth, parent_litter});
    if (it == by_litter.end()) {
      // Nearest observed litter size at this depth.
      int best = -1;
      for (const auto& [key, v] : by_litter) {
        if (key.first != depth) continue;
        if (best < 0 || std::abs(key.second - parent_litter) < std::abs(best - parent_litter)) {
          best = key.second;
        }
      }
      if (best < 0) {
        throw std::out_of_range("gw2 tables: no entry at depth " + std::to_string(depth));
      }
      warn_once("gw2 tables: litter " + std::to_string(parent_litter) + " unseen at depth " +
                std::to_string(depth) + ", using litter " + std::to_string(best));
      it = by_litter.find({depth, best});
    }
    return NodePrior::from_probs(it->second.first, it->second.second);
  }
};

namespace detail {

// One backward-induction step of the depth-indexed recursions. `children`
// maps a litter size l >= 1 to (m, s) of a child in such a litter; leaf_q
// is the outcome probability of a childless node.
inline std::pair<double, double> gw_step(
    bool min_node, const LitterLaw& law, double leaf_q,
    const std::function<std::pair<double, double>(int)>& children) {
  double m = 0.0;
  const double p0 = law_prob(law, 0);
  m += p0 * leaf_q;
  for (auto [l, w] : law) {
    if (l == 0) continue;
    const double mc = children(l).first;
    m += w * (min_node ? std::pow(mc, l) : 1.0 - std::pow(1.0 - mc, l));
  }
  double s = p0 * (leaf_q * (1.0 - m) * (1.0 - m) + (1.0 - leaf_q) * m * m);
  for (auto [l, w] : law) {
    if (l == 0) continue;
    const auto [mc, sc] = children(l);
    // For a max node work with the complements: the node loses iff every
    // child loses.
    const double base = min_node ? mc : 1.0 - mc;
    const double target = min_node ? m : 1.0 - m;
    const double all = std::pow(base, l);
    s += w * (std::pow(base, 2 * l - 2) * sc + (all - target) * (all - target));
  }
  return {m, s};
}

}  // namespace detail

/// Tables for the inhomogeneous Galton-Watson model.
inline PriorTables gw_tables(const GWModel& model) {
  const int K = model.max_depth;
  PriorTables t;
  t.kind = PriorKind::GW;
  t.m.assign(static_cast<std::size_t>(K) + 1, 0.0);
  t.s.assign(static_cast<std::size_t>(K) + 1, 0.0);
  const double qk = model.q[static_cast<std::size_t>(K)];
  t.m.back() = qk;
  t.s.back() = qk * (1.0 - qk);
  for (int k = K - 1; k >= 0; --k) {
    const auto ku = static_cast<std::size_t>(k);
    const std::pair<double, double> next{t.m[ku + 1], t.s[ku + 1]};
    const auto [m, s] = detail::gw_step(player_at_depth(k) == Player::J0, model.mu[ku],
                                        model.q[ku], [&](int) { return next; });
    t.m[ku] = m;
    t.s[ku] = s;
  }
  return t;
}

/// Pearl's model: d-regular depth-K tree with Bernoulli(p) leaves.
inline PriorTables pearl_tables(int d, int K, double p) {
  if (d < 2 || K < 1) throw std::invalid_argument("pearl tables: need d >= 2, K >= 1");
  PriorTables t;
  t.kind = PriorKind::Pearl;
  t.m.assign(static_cast<std::size_t>(K) + 1, 0.0);
  t.s.assign(static_cast<std::size_t>(K) + 1, 0.0);
  t.m.back() = p;
  t.s.back() = p * (1.0 - p);
  for (int k = K - 1; k >= 0; --k) {
    const auto ku = static_cast<std::size_t>(k);
    const double mc = t.m[ku + 1];
    if (player_at_depth(k) == Player::J0) {
      t.m[ku] = std::pow(mc, d);
      t.s[ku] = std::pow(mc, 2 * d - 2) * t.s[ku + 1];
    } else {
      t.m[ku] = 1.0 - std::pow(1.0 - mc, d);
      t.s[ku] = std::pow(1.0 - mc, 2 * d - 2) * t.s[ku + 1];
    }
  }
  return t;
}

/// Tables for the order-two Galton-Watson model, over every (k, d) pair
/// reachable from the root law plus every pair the model lists.
inline PriorTables gw2_tables(const GW2Model& model) {
  const int K = model.max_depth;
  PriorTables t;
  t.kind = PriorKind::GW2;
  auto& memo = t.by_litter;
  const double qK = model.q[static_cast<std::size_t>(K)];

  std::function<std::pair<double, double>(int, int)> solve = [&](int k, int d) {
    if (auto it = memo.find({k, d}); it != memo.end()) return it->second;
    std::pair<double, double> v;
    if (k == K) {
      v = {qK, qK * (1.0 - qK)};
    } else {
      const LitterLaw& law = model.law(k, d);
      v = detail::gw_step(player_at_depth(k) == Player::J0, law,
                          model.q[static_cast<std::size_t>(k)],
                          [&](int l) { return solve(k + 1, l); });
    }
    memo[{k, d}] = v;
    return v;
  };
  solve(0, 0);
  for (const auto& [kd, law] : model.mu) solve(kd.first, kd.second);
  return t;
}

/// Symmetric family: m follows from the parent's m and litter size, and s is
/// divided by side^(b (d - 1)), side being the child's m under a J0 parent
/// and 1 - m under a J1 parent. b = 0 keeps s constant; b = 2 inverts the
/// variance recursion of Pearl's model, so it reproduces pearl_tables.
struct SymFamily {
  double a = 0.5;
  double b = 0.0;
};

/// Prior of the game's start position: J1 wins with probability a.
inline NodePrior sym_root(const SymFamily& f, Player root_turn = Player::J1) {
  if (!(f.a > 0.0 && f.a < 1.0)) throw std::invalid_argument("sym prior: a must lie in (0, 1)");
  const double m = root_turn == Player::J1 ? f.a : 1.0 - f.a;
  return NodePrior{phi(m), 0.0};
}

inline NodePrior sym_child(const NodePrior& parent, std::size_t litter, Player parent_turn,
                           double b) {
  if (litter == 0) throw std::invalid_argument("sym_child: empty litter");
  const double d = static_cast<double>(litter);
  // J0 to move: the parent is won by J1 iff every child is, so the child
  // gets the d-th root of m. For J1 the same holds for the complements.
  const LogOdds side = parent_turn == Player::J0 ? parent.m : -parent.m;
  const double log_side = log_from_phi(side).value();
  LogOdds child_side = phi_from_log(LogProb(log_side / d));
  NodePrior c;
  c.m = parent_turn == Player::J0 ? child_side : -child_side;
  // log(child side) = log_side / d.
  const double e = -b * (d - 1.0) / d;
  c.log_s = e == 0.0 ? parent.log_s : e * log_side + parent.log_s;
  return c;
}

/// p such that Pearl's root mean equals `a`, by bisection. Throws if the
/// bracket [0, 1] does not contain a; returns the closest iterate if the
/// 1e-12 tolerance is not met within the iteration cap.
inline double solve_root_mean(int d, int K, double a) {
  if (!(a > 0.0 && a < 1.0)) throw std::invalid_argument("solve_root_mean: a must lie in (0, 1)");
  auto root_mean = [&](double p) { return pearl_tables(d, K, p).m[0]; };
  double lo = 0.0;
  double hi = 1.0;
  if (root_mean(lo) > a || root_mean(hi) < a) {
    throw std::runtime_error("solve_root_mean: target not bracketed");
  }
  double best = 0.5;
  double best_err = kInf;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double v = root_mean(mid);
    const double err = std::abs(v - a);
    if (err < best_err) {
      best = mid;
      best_err = err;
    }
    if (err <= 1e-12 || hi - lo < 1e-17) break;
    (v < a ? lo : hi) = mid;
  }
  return best;
}

/// Solution of the homogeneous-tree variance equation
///   s(x) = mu(0) x (1 - x) + sum_{l >= 1} mu(l) (1 - x)^(2(l-1)/l) s((1 - x)^(1/l))
/// on [0, 1]. The map is a contraction with rate kappa = sum_{l >= 1} mu(l).
class HomogeneousS {
 public:
  HomogeneousS(LitterLaw mu, std::size_t grid_size, double tol)
      : mu_(normalize_law(mu)), n_(grid_size) {
    if (n_ < 2) throw std::invalid_argument("fixed point: grid too small");
    kappa_ = 0.0;
    for (auto [l, w] : mu_) {
      if (l >= 1) {
        kappa_ += w;
        ++branches_;
      }
    }
    if (kappa_ >= 1.0) {
      throw std::invalid_argument("fixed point: sum of mu(l) over l >= 1 must be < 1");
    }
    grid_.assign(n_ + 1, 0.0);
    std::vector<double> next(n_ + 1);
    for (;;) {
      double change = 0.0;
      for (std::size_t i = 0; i <= n_; ++i) {
        const double x = static_cast<double>(i) / static_cast<double>(n_);
        next[i] = apply(x, [&](double y) { return interpolate(y); });
        change = std::max(change, std::abs(next[i] - grid_[i]));
      }
      grid_.swap(next);
      ++iterations_;
      if (change <= tol) break;
    }
    // Unroll the map this many times at query points before falling back
    // to interpolation; each level shrinks interpolation error by kappa.
    unroll_ = 60;
    if (branches_ > 1) {
      unroll_ = static_cast<int>(20.0 / std::log2(static_cast<double>(branches_)));
    }
  }

  double operator()(double x) const { return evaluate(x, unroll_); }

  double grid_value(std::size_t i) const { return grid_[i]; }
  std::size_t grid_size() const { return n_; }
  int iterations() const { return iterations_; }
  double kappa() const { return kappa_; }

 private:
  template <class G>
  double apply(double x, G&& g) const {
    double v = 0.0;
    for (auto [l, w] : mu_) {
      if (l == 0) {
        v += w * x * (1.0 - x);
      } else {
        const double y = std::pow(1.0 - x, 1.0 / l);
        v += w * std::pow(1.0 - x, 2.0 * (l - 1) / l) * g(y);
      }
    }
    return v;
  }

  double evaluate(double x, int depth) const {
    if (depth == 0) return interpolate(x);
    return apply(x, [&](double y) { return evaluate(y, depth - 1); });
  }

  double interpolate(double x) const {
    const double pos = std::clamp(x, 0.0, 1.0) * static_cast<double>(n_);
    const auto i = std::min(static_cast<std::size_t>(pos), n_ - 1);
    const double f = pos - static_cast<double>(i);
    return grid_[i] * (1.0 - f) + grid_[i + 1] * f;
  }

  LitterLaw mu_;
  std::size_t n_;
  std::vector<double> grid_;
  double kappa_ = 0.0;
  int branches_ = 0;
  int iterations_ = 0;
  int unroll_ = 0;
};

inline HomogeneousS homogeneous_s_fixed_point(const LitterLaw& mu, std::size_t grid_size,
                                              double tol) {
  return HomogeneousS(mu, grid_size, tol);
}

/// Galton-Watson parameters estimated from uniform playouts.
struct GWFit {
  GWModel model;
  /// False where no terminal node was seen at that depth; q is 0 there and
  /// irrelevant to the tables because no node at that depth was childless.
  std::vector<bool> q_observed;
  std::vector<std::uint64_t> nodes_at_depth;
  std::optional<GW2Model> order_two;
  std::uint64_t playouts = 0;
};

/// Runs `playouts` uniform matches from `root`. Every node crossed at depth
/// k (counted from `root`) contributes its litter size to mu_k, terminals
/// counting as litter 0; q_k is the J1 win frequency among terminals at
/// depth k.
template <GamePosition P, class Gen>
GWFit fit_gw_from_playouts(const P& root, std::uint64_t playouts, Gen& gen,
                           DrawPolicy policy = {}, bool order_two = false) {
  if (playouts == 0) throw std::invalid_argument("fit: need at least one playout");
  std::vector<std::map<int, std::uint64_t>> litters;
  std::vector<std::uint64_t> terminals, j1_wins;
  std::map<std::pair<int, int>, std::map<int, std::uint64_t>> litters2;
  const int base = root.depth();
  for (std::uint64_t n = 0; n < playouts; ++n) {
    P cur = root;
    int parent_litter = 0;
    for (;;) {
      const auto k = static_cast<std::size_t>(cur.depth() - base);
      if (litters.size() <= k) {
        litters.resize(k + 1);
        terminals.resize(k + 1, 0);
        j1_wins.resize(k + 1, 0);
      }
      const int litter = cur.is_terminal() ? 0 : static_cast<int>(cur.num_moves());
      ++litters[k][litter];
      if (order_two) ++litters2[{static_cast<int>(k), k == 0 ? 0 : parent_litter}][litter];
      if (litter == 0) {
        ++terminals[k];
        j1_wins[k] += wins(cur.raw_outcome(), Player::J1, policy);
        break;
      }
      parent_litter = litter;
      cur = cur.child(uniform_index(gen, static_cast<std::size_t>(litter)));
    }
  }

  GWFit fit;
  fit.playouts = playouts;
  const int K = static_cast<int>(litters.size()) - 1;
  fit.model.max_depth = K;
  fit.model.seed = 0;
  for (int k = 0; k <= K; ++k) {
    const auto ku = static_cast<std::size_t>(k);
    std::uint64_t total = 0;
    for (auto [l, c] : litters[ku]) total += c;
    LitterLaw law;
    for (auto [l, c] : litters[ku]) {
      law.emplace_back(l, static_cast<double>(c) / static_cast<double>(total));
    }
    fit.model.mu.push_back(normalize_law(law));
    fit.nodes_at_depth.push_back(total);
    fit.q_observed.push_back(terminals[ku] > 0);
    fit.model.q.push_back(terminals[ku] > 0 ? static_cast<double>(j1_wins[ku]) /
                                                  static_cast<double>(terminals[ku])
                                            : 0.0);
  }
  if (order_two) {
    if (K < 1) throw std::runtime_error("fit: order-two model needs depth >= 1");
    GW2Model m2;
    m2.max_depth = K;
    m2.q = fit.model.q;
    for (const auto& [kd, counts] : litters2) {
      std::uint64_t total = 0;
      for (auto [l, c] : counts) total += c;
      LitterLaw law;
      for (auto [l, c] : counts) {
        law.emplace_back(l, static_cast<double>(c) / static_cast<double>(total));
      }
      if (kd.first == 0) {
        m2.mu0 = normalize_law(law);
      } else if (kd.first < K) {
        m2.mu[kd] = normalize_law(law);
      }
    }
    fit.order_two = std::move(m2);
  }
  return fit;
}

namespace detail {

inline double log_sum_exp(const std::vector<double>& xs) {
  double hi = -kInf;
  for (double x : xs) hi = std::max(hi, x);
  if (hi == -kInf) return -kInf;
  double acc = 0.0;
  for (double x : xs) acc += std::exp(x - hi);
  return hi + std::log(acc);
}

}  // namespace detail

inline constexpr std::size_t kKnownTreeNodeLimit = 100'000;

/// Exact (m, s) at every node of a known tree with independent leaf
/// outcomes, leaf i being a J1 win with probability q[i]. Computed in log
/// space so that deep trees do not underflow.
inline std::vector<NodePrior> known_tree_prior(const ExplicitTree& tree,
                                               const std::vector<double>& q) {
  if (tree.size() > kKnownTreeNodeLimit) {
    throw ResourceLimitError("known_tree_prior: tree exceeds " +
                             std::to_string(kKnownTreeNodeLimit) + " nodes");
  }
  if (q.size() != tree.leaves().size()) {
    throw std::invalid_argument("known_tree_prior: one probability per leaf required");
  }
  std::vector<NodePrior> out(tree.size());
  std::vector<LogOdds> ms;
  std::vector<double> logs, terms;
  for (int id : tree.children_first_order()) {
    const auto& node = tree.node(id);
    auto& pr = out[static_cast<std::size_t>(id)];
    if (node.children.empty()) {
      pr = NodePrior::from_probs(q[static_cast<std::size_t>(node.leaf_index)],
                                 q[static_cast<std::size_t>(node.leaf_index)] *
                                     (1.0 - q[static_cast<std::size_t>(node.leaf_index)]));
      continue;
    }
    const bool min_node = player_at_depth(node.depth) == Player::J0;
    ms.clear();
    logs.clear();
    for (int c : node.children) {
      const LogOdds mc = out[static_cast<std::size_t>(c)].m;
      ms.push_back(min_node ? mc : -mc);
      logs.push_back(log_from_phi(ms.back()).value());
    }
    const LogOdds side = phi_prod(ms);
    pr.m = min_node ? side : -side;
    // s = (1/n) sum_y s(y) prod_{u != y} side(u)^2; the squared-difference
    // term vanishes because the litter is known.
    double sum_logs = 0.0;
    int neg_inf = 0;
    for (double l : logs) {
      if (l == -kInf) {
        ++neg_inf;
      } else {
        sum_logs += l;
      }
    }
    terms.clear();
    for (std::size_t i = 0; i < node.children.size(); ++i) {
      const int others_zero = neg_inf - (logs[i] == -kInf ? 1 : 0);
      if (others_zero > 0) continue;
      const double others = logs[i] == -kInf ? sum_logs : sum_logs - logs[i];
      terms.push_back(out[static_cast<std::size_t>(node.children[i])].log_s + 2.0 * others);
    }
    pr.log_s = detail::log_sum_exp(terms) - std::log(static_cast<double>(node.children.size()));
  }
  return out;
}

/// Supplies frontier priors to a search engine. `root` gives the prior of
/// the search's start position; `child` gives the prior of child `index` of
/// `parent` from the parent's stored prior and litter size.
template <class P>
struct PriorSource {
  std::function<NodePrior(const P&)> root;
  std::function<NodePrior(const P& parent, std::size_t index, const NodePrior& parent_prior,
                          std::size_t litter)>
      child;
};

template <class P>
PriorSource<P> sym_prior_source(SymFamily f) {
  sym_root(f);  // validates a
  PriorSource<P> src;
  src.root = [f](const P& pos) { return sym_root(f, pos.turn()); };
  src.child = [f](const P& parent, std::size_t, const NodePrior& pp, std::size_t litter) {
    return sym_child(pp, litter, parent.turn(), f.b);
  };
  return src;
}

template <class P>
PriorSource<P> table_prior_source(std::shared_ptr<const PriorTables> tables) {
  PriorSource<P> src;
  src.root = [tables](const P& pos) { return tables->at(pos.depth(), 0); };
  src.child = [tables](const P& parent, std::size_t, const NodePrior&, std::size_t litter) {
    return tables->at(parent.depth() + 1, static_cast<int>(litter));
  };
  return src;
}

/// Exact priors of a known tree, looked up by node id.
inline PriorSource<TreePosition> known_prior_source(
    std::shared_ptr<const std::vector<NodePrior>> priors) {
  PriorSource<TreePosition> src;
  src.root = [priors](const TreePosition& pos) {
    return (*priors)[static_cast<std::size_t>(pos.node())];
  };
  src.child = [priors](const TreePosition& parent, std::size_t index, const NodePrior&,
                       std::size_t) {
    const int id = parent.tree().node(parent.node()).children.at(index);
    return (*priors)[static_cast<std::size_t>(id)];
  };
  return src;
}

}  // namespace bts

#endif  // BTS_PRIORS_HPP_
