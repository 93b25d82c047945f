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

// Solving-cost and convergence experiments on random games.

#ifndef BTS_HARNESS_EXPERIMENTS_HPP_
#define BTS_HARNESS_EXPERIMENTS_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <memory>
#include <string>
#include <vector>

#include "bts/boss.hpp"
#include "bts/explicit_tree.hpp"
#include "bts/harness/engines.hpp"
#include "bts/harness/match.hpp"
#include "bts/harness/parallel.hpp"
#include "bts/io.hpp"
#include "bts/pearl.hpp"
#include "bts/priors.hpp"

namespace bts {

/// Mean and standard error of the mean.
struct SampleStats {
  double mean = 0.0;
  double stderr_mean = 0.0;
};

inline SampleStats sample_stats(const std::vector<double>& xs) {
  SampleStats s;
  if (xs.empty()) return s;
  long double sum = 0.0L;
  for (double x : xs) sum += x;
  const long double mean = sum / static_cast<long double>(xs.size());
  long double ss = 0.0L;
  for (double x : xs) ss += (x - mean) * (x - mean);
  s.mean = static_cast<double>(mean);
  if (xs.size() > 1) {
    const long double var = ss / static_cast<long double>(xs.size() - 1);
    s.stderr_mean = static_cast<double>(std::sqrt(var / static_cast<long double>(xs.size())));
  }
  return s;
}

inline std::string format_double(double v, int digits = 10) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

/// Leaf probability making every node of a binary Pearl tree a J1 win with
/// probability p: the golden ratio conjugate.
inline double golden_leaf_prob() { return (std::sqrt(5.0) - 1.0) / 2.0; }

struct TauRow {
  int K = 0;
  std::uint64_t trials = 0;
  SampleStats tau;
  SampleStats alphabeta;
  /// (2 / (sqrt 5 - 1))^K.
  double theory = 0.0;
  /// Runs whose solved value disagreed with alpha-beta; always 0.
  std::uint64_t mismatches = 0;
};

/// Leaves the search must visit to solve binary Pearl games of depth K with
/// p = golden_leaf_prob() under the exact prior, and the same count for
/// alpha-beta with random move ordering.
inline std::vector<TauRow> pearl_tau(const std::vector<int>& depths, std::uint64_t trials,
                                     std::uint64_t seed) {
  const double p = golden_leaf_prob();
  std::vector<TauRow> rows;
  for (int K : depths) {
    if (K < 1 || K > 24) throw std::invalid_argument("pearl_tau: depth must be in [1, 24]");
    auto tables = std::make_shared<const PriorTables>(pearl_tables(2, K, p));
    const auto source = table_prior_source<PearlGame>(tables);
    std::vector<double> tau(trials), ab(trials);
    std::vector<char> bad(trials, 0);
    const auto uk = static_cast<std::uint64_t>(K);
    parallel_for(trials, [&](std::size_t t) {
      PearlConfig cfg{2, K, p, derive_seed(seed, {uk, t})};
      const PearlGame g(cfg);
      BossSearch<PearlGame> boss(g, source, derive_seed(seed, {uk, t, 1}));
      boss.solve();
      tau[t] = static_cast<double>(boss.stats().visited_leaves);
      Rng gen(derive_seed(seed, {uk, t, 2}));
      const AlphaBetaResult r = alphabeta_count(g, DrawPolicy{}, RandomOrder<Rng>(gen));
      ab[t] = static_cast<double>(r.leaves_visited);
      bad[t] = (boss.root_value() == 1.0) != r.value;
    });
    TauRow row;
    row.K = K;
    row.trials = trials;
    row.tau = sample_stats(tau);
    row.alphabeta = sample_stats(ab);
    row.theory = std::pow(2.0 / (std::sqrt(5.0) - 1.0), K);
    for (char b : bad) row.mismatches += static_cast<std::uint64_t>(b);
    rows.push_back(row);
  }
  return rows;
}

inline std::string tau_csv(const std::vector<TauRow>& rows) {
  std::string out = "K,mean_tau,stderr,theory\n";
  for (const auto& r : rows) {
    out += std::to_string(r.K) + "," + format_double(r.tau.mean) + "," +
           format_double(r.tau.stderr_mean) + "," + format_double(r.theory) + "\n";
  }
  return out;
}

inline Json tau_json(const std::vector<TauRow>& rows, std::uint64_t seed) {
  Json arr = Json::array();
  for (const auto& r : rows) {
    arr.push_back(Json{{"K", r.K},
                       {"trials", r.trials},
                       {"mean_tau", r.tau.mean},
                       {"stderr", r.tau.stderr_mean},
                       {"theory", r.theory},
                       {"alphabeta_mean", r.alphabeta.mean},
                       {"alphabeta_stderr", r.alphabeta.stderr_mean},
                       {"value_mismatches", r.mismatches}});
  }
  return Json{{"p", golden_leaf_prob()}, {"degree", 2}, {"seed", seed}, {"rows", arr}};
}

struct ErrorCurve {
  /// Entry n is for R_n, n = 0..max_iters.
  std::vector<double> mean_sq_error;
  std::vector<double> stderr_mean;
  /// R_n(root) on the first realization.
  std::vector<double> sample_trajectory;
  /// Most iterations any run needed to solve its root (0 if none did).
  std::uint64_t max_tau = 0;
  std::uint64_t unsolved_runs = 0;
};

/// E[(R_n(root) - R(root))^2] by Monte-Carlo over realizations of `game`,
/// R(root) being the solved value. Solved runs contribute 0 from then on.
inline ErrorCurve error_curve(const GameSpec& game, const EngineSpec& engine,
                              std::uint64_t trials, std::uint64_t max_iters, std::uint64_t seed) {
  if (engine.kind != EngineKind::Boss) throw SpecError("curve: engine must be boss:*");
  std::vector<std::vector<double>> errors(trials);
  std::vector<std::vector<double>> traj(trials > 0 ? 1 : 0);
  std::vector<std::uint64_t> taus(trials, 0);
  std::vector<char> solved(trials, 0);
  with_game(game, [&](auto factory, const EngineContext& ctx) {
    parallel_for(trials, [&](std::size_t t) {
      const auto pos = factory(derive_seed(game.seed, {t}));
      const double truth = minimax_solve(pos, ctx.draw_policy) ? 1.0 : 0.0;
      auto boss = make_boss_search(engine, pos, derive_seed(seed, {t}), ctx);
      auto& e = errors[t];
      e.reserve(max_iters + 1);
      auto record = [&] {
        const double d = boss.root_value() - truth;
        e.push_back(d * d);
        if (t == 0) traj[0].push_back(boss.root_value());
      };
      record();
      for (std::uint64_t n = 1; n <= max_iters; ++n) {
        if (!boss.terminated()) boss.step();
        if (boss.terminated() && !solved[t]) {
          solved[t] = 1;
          taus[t] = n;
        }
        record();
      }
    });
    return 0;
  });
  ErrorCurve c;
  c.mean_sq_error.assign(max_iters + 1, 0.0);
  c.stderr_mean.assign(max_iters + 1, 0.0);
  std::vector<double> column(trials);
  for (std::uint64_t n = 0; n <= max_iters; ++n) {
    for (std::size_t t = 0; t < trials; ++t) column[t] = errors[t][n];
    const SampleStats s = sample_stats(column);
    c.mean_sq_error[n] = s.mean;
    c.stderr_mean[n] = s.stderr_mean;
  }
  if (!traj.empty()) c.sample_trajectory = traj[0];
  for (std::size_t t = 0; t < trials; ++t) {
    c.max_tau = std::max(c.max_tau, taus[t]);
    c.unsolved_runs += solved[t] ? 0 : 1;
  }
  return c;
}

inline std::string curve_csv(const ErrorCurve& c) {
  std::string out = "n,mean_sq_error,stderr\n";
  for (std::size_t n = 0; n < c.mean_sq_error.size(); ++n) {
    out += std::to_string(n) + "," + format_double(c.mean_sq_error[n]) + "," +
           format_double(c.stderr_mean[n]) + "\n";
  }
  return out;
}

/// Exact version on an explicit tree: averages over all 2^leaves outcome
/// assignments weighted by their probabilities. With Leftmost playouts and
/// First tie-breaking the search is deterministic and so is the curve.
inline std::vector<long double> exact_error_curve(const ExplicitTree& tree,
                                                  const std::vector<double>& q,
                                                  BossOptions options, std::uint64_t max_iters,
                                                  std::uint64_t seed = 0) {
  const std::size_t L = tree.leaves().size();
  if (L > 20) throw ResourceLimitError("exact_error_curve: more than 20 leaves");
  auto shared_tree = std::make_shared<const ExplicitTree>(tree);
  auto priors = std::make_shared<const std::vector<NodePrior>>(known_tree_prior(tree, q));
  std::vector<long double> curve(max_iters + 1, 0.0L);
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << L); ++mask) {
    long double w = 1.0L;
    auto outcomes = std::make_shared<std::vector<Outcome>>(L);
    for (std::size_t i = 0; i < L; ++i) {
      const bool v = (mask >> i) & 1U;
      w *= v ? static_cast<long double>(q[i]) : 1.0L - static_cast<long double>(q[i]);
      (*outcomes)[i] = v ? Outcome::J1Win : Outcome::J0Win;
    }
    if (w == 0.0L) continue;
    const TreePosition pos(shared_tree, outcomes);
    const long double truth = minimax_solve(pos) ? 1.0L : 0.0L;
    BossSearch<TreePosition> boss(pos, known_prior_source(priors), seed, options, Player::J1);
    for (std::uint64_t n = 0; n <= max_iters; ++n) {
      if (n > 0 && !boss.terminated()) boss.step();
      const long double d = static_cast<long double>(boss.root_value()) - truth;
      curve[n] += w * d * d;
    }
  }
  return curve;
}

}  // namespace bts

#endif  // BTS_HARNESS_EXPERIMENTS_HPP_
