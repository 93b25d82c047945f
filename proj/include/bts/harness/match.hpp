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

// Matches, duels and round-robin championships. Every result is a pure
// function of the specs and the seed: per-match seeds are derived from the
// match's coordinates, and parallel results are merged in index order.

#ifndef BTS_HARNESS_MATCH_HPP_
#define BTS_HARNESS_MATCH_HPP_

#include <array>
#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "bts/connect_four.hpp"
#include "bts/gw_game.hpp"
#include "bts/harness/engines.hpp"
#include "bts/harness/parallel.hpp"
#include "bts/harness/spec.hpp"
#include "bts/io.hpp"
#include "bts/pearl.hpp"
#include "bts/priors.hpp"

namespace bts {

/// Calls f(factory, ctx), where factory(realization) builds the start
/// position of the game (the realization seed is ignored by deterministic
/// games).
template <class F>
decltype(auto) with_game(const GameSpec& g, F&& f) {
  EngineContext ctx;
  ctx.draw_policy = g.draw_policy();
  switch (g.kind) {
    case GameKind::ConnectFour: {
      const ConnectFourConfig cfg = g.c4;
      return f([cfg](std::uint64_t) { return ConnectFour(cfg); }, ctx);
    }
    case GameKind::Pearl: {
      PearlConfig cfg = g.pearl;
      if (g.pearl_auto_p) cfg.leaf_prob = solve_root_mean(cfg.degree, cfg.depth, 0.5);
      return f(
          [cfg](std::uint64_t r) {
            PearlConfig c = cfg;
            c.seed = r;
            return PearlGame(c);
          },
          ctx);
    }
    case GameKind::GW: {
      const GWModel base = gw_model_from_json(read_json_file(g.gw_file));
      return f(
          [base](std::uint64_t r) {
            GWModel m = base;
            m.seed = r;
            return GWGame(std::make_shared<const GWModel>(std::move(m)));
          },
          ctx);
    }
  }
  throw SpecError("unhandled game kind");
}

inline std::string outcome_name(Outcome o) {
  switch (o) {
    case Outcome::J1Win: return "J1";
    case Outcome::J0Win: return "J0";
    case Outcome::Draw: return "draw";
  }
  return "?";
}

struct MatchRecord {
  std::string game;
  /// Engine specs, first player first.
  std::array<std::string, 2> engines;
  std::string budget;
  std::uint64_t seed = 0;
  /// Seed of the random game's realization; 0 for deterministic games.
  std::uint64_t realization = 0;
  Outcome outcome = Outcome::Draw;
  std::vector<std::string> moves;
  std::vector<std::uint64_t> iterations;
  std::array<std::uint64_t, 2> first_move_iterations{};
};

inline Json to_json(const MatchRecord& r) {
  return Json{{"game", r.game},
              {"p1", r.engines[0]},
              {"p2", r.engines[1]},
              {"budget", r.budget},
              {"seed", r.seed},
              {"realization", r.realization},
              {"winner", outcome_name(r.outcome)},
              {"moves", r.moves},
              {"iterations", r.iterations},
              {"first_move_iterations", r.first_move_iterations}};
}

/// Plays one game from `start`, p1 moving first. Both engines keep their
/// trees across moves.
template <GamePosition P>
MatchRecord play_match(const P& start, const EngineSpec& p1, const EngineSpec& p2,
                       const Budget& budget, std::uint64_t seed, const EngineContext& ctx) {
  const Player first = start.turn();
  std::array<std::unique_ptr<Engine<P>>, 2> engines{
      make_engine(p1, start, first, derive_seed(seed, {1}), ctx),
      make_engine(p2, start, opponent(first), derive_seed(seed, {2}), ctx)};
  MatchRecord rec;
  rec.engines = {p1.text, p2.text};
  rec.budget = budget.to_string();
  rec.seed = seed;
  std::array<bool, 2> moved{false, false};
  P pos = start;
  while (!pos.is_terminal()) {
    const std::size_t who = pos.turn() == first ? 0 : 1;
    const std::size_t move = engines[who]->choose(budget);
    if (move >= pos.num_moves()) throw std::logic_error("engine returned an illegal move");
    const std::uint64_t iters = engines[who]->last_iterations();
    rec.iterations.push_back(iters);
    if (!moved[who]) rec.first_move_iterations[who] = iters;
    moved[who] = true;
    rec.moves.push_back(pos.move_label(move));
    for (auto& e : engines) e->advance(move);
    pos = pos.child(move);
  }
  rec.outcome = pos.raw_outcome();
  return rec;
}

/// Single match from a game spec; `realization` overrides the spec's seed.
inline MatchRecord play_match(const GameSpec& game, const EngineSpec& p1, const EngineSpec& p2,
                              const Budget& budget, std::uint64_t seed,
                              std::optional<std::uint64_t> realization = std::nullopt) {
  const std::uint64_t r = realization.value_or(game.seed);
  return with_game(game, [&](auto factory, const EngineContext& ctx) {
    MatchRecord rec = play_match(factory(r), p1, p2, budget, seed, ctx);
    rec.game = game.text;
    rec.realization = game.is_random() ? r : 0;
    return rec;
  });
}

struct SeatTally {
  std::uint64_t wins = 0;
  std::uint64_t losses = 0;
  std::uint64_t draws = 0;
};

/// Tally for the engine in seat `seat` (0 = first player).
inline void tally(SeatTally& t, Outcome o, int seat) {
  if (o == Outcome::Draw) {
    ++t.draws;
  } else if ((o == Outcome::J1Win) == (seat == 0)) {
    ++t.wins;
  } else {
    ++t.losses;
  }
}

struct DuelResult {
  std::string game, a, b, budget;
  std::uint64_t seed = 0;
  std::uint64_t games_per_seat = 0;
  /// A's results when A moves first, and B's when B moves first.
  SeatTally a_first, b_first;
  double a_mean_first_iterations = 0.0;
  double b_mean_first_iterations = 0.0;
  std::vector<MatchRecord> records;

  /// "Aw/Al(d), Bw/Bl(d)".
  std::string quadruple() const {
    return std::to_string(a_first.wins) + "/" + std::to_string(a_first.losses) + "(" +
           std::to_string(a_first.draws) + "), " + std::to_string(b_first.wins) + "/" +
           std::to_string(b_first.losses) + "(" + std::to_string(b_first.draws) + ")";
  }
};

inline Json to_json(const DuelResult& d) {
  auto seat = [](const SeatTally& t) {
    return Json{{"wins", t.wins}, {"losses", t.losses}, {"draws", t.draws}};
  };
  Json out{{"game", d.game},
           {"a", d.a},
           {"b", d.b},
           {"budget", d.budget},
           {"seed", d.seed},
           {"games_per_seat", d.games_per_seat},
           {"a_first", seat(d.a_first)},
           {"b_first", seat(d.b_first)},
           {"a_mean_first_move_iterations", d.a_mean_first_iterations},
           {"b_mean_first_move_iterations", d.b_mean_first_iterations},
           {"summary", d.quadruple()}};
  if (!d.records.empty()) {
    Json recs = Json::array();
    for (const auto& r : d.records) recs.push_back(to_json(r));
    out["records"] = recs;
  }
  return out;
}

/// Plays game pair i = 0..games_per_seat-1: A first, then B first, on the
/// same realization for random games.
inline DuelResult duel(const GameSpec& game, const EngineSpec& a, const EngineSpec& b,
                       std::uint64_t games_per_seat, const Budget& budget, std::uint64_t seed,
                       bool keep_records = false) {
  DuelResult res;
  res.game = game.text;
  res.a = a.text;
  res.b = b.text;
  res.budget = budget.to_string();
  res.seed = seed;
  res.games_per_seat = games_per_seat;
  std::vector<std::array<MatchRecord, 2>> pairs(games_per_seat);
  with_game(game, [&](auto factory, const EngineContext& ctx) {
    parallel_for(games_per_seat, [&](std::size_t i) {
      const std::uint64_t r = derive_seed(game.seed, {i});
      const auto start = factory(r);
      pairs[i][0] = play_match(start, a, b, budget, derive_seed(seed, {i, 0}), ctx);
      pairs[i][1] = play_match(start, b, a, budget, derive_seed(seed, {i, 1}), ctx);
      for (auto& rec : pairs[i]) {
        rec.game = game.text;
        rec.realization = game.is_random() ? r : 0;
      }
    });
    return 0;
  });
  double a_iters = 0.0;
  double b_iters = 0.0;
  for (auto& pr : pairs) {
    tally(res.a_first, pr[0].outcome, 0);
    tally(res.b_first, pr[1].outcome, 0);
    a_iters += static_cast<double>(pr[0].first_move_iterations[0] + pr[1].first_move_iterations[1]);
    b_iters += static_cast<double>(pr[0].first_move_iterations[1] + pr[1].first_move_iterations[0]);
    if (keep_records) {
      res.records.push_back(std::move(pr[0]));
      res.records.push_back(std::move(pr[1]));
    }
  }
  if (games_per_seat > 0) {
    a_iters /= 2.0 * static_cast<double>(games_per_seat);
    b_iters /= 2.0 * static_cast<double>(games_per_seat);
  }
  res.a_mean_first_iterations = a_iters;
  res.b_mean_first_iterations = b_iters;
  return res;
}

struct Entrant {
  double a = 0.0;
  double b = 0.0;
  std::string spec;
  std::uint64_t wins = 0;
  std::uint64_t losses = 0;
  std::uint64_t draws = 0;
  std::uint64_t games = 0;
};

struct ChampionshipResult {
  std::string game, family, budget;
  std::uint64_t seed = 0;
  int grid_max = 0;
  std::uint64_t matches_per_pair = 0;
  /// Entrants in grid order (k, then l).
  std::vector<Entrant> standings;
  std::size_t best = 0;
  std::uint64_t total_games = 0;
};

inline Json to_json(const ChampionshipResult& c) {
  Json rows = Json::array();
  for (const auto& e : c.standings) {
    rows.push_back(Json{{"a", e.a}, {"b", e.b}, {"spec", e.spec}, {"wins", e.wins},
                        {"losses", e.losses}, {"draws", e.draws}, {"games", e.games}});
  }
  const Entrant& w = c.standings[c.best];
  return Json{{"game", c.game},
              {"family", c.family},
              {"budget", c.budget},
              {"seed", c.seed},
              {"grid_max", c.grid_max},
              {"matches_per_pair", c.matches_per_pair},
              {"entrants", c.standings.size()},
              {"total_games", c.total_games},
              {"best", Json{{"a", w.a}, {"b", w.b}, {"spec", w.spec}, {"wins", w.wins}}},
              {"standings", rows}};
}

inline std::string format_param(double v) {
  std::string s = std::to_string(v);
  s.erase(s.find_last_not_of('0') + 1);
  if (s.back() == '.') s.pop_back();
  return s;
}

/// Round robin among (a, b) = (k/2, l/2), 1 <= k <= l <= grid_max, with
/// `matches_per_pair` games per pair of entrants, half in each seating.
/// The best entrant has the most wins; ties go to the smaller (a, b).
inline ChampionshipResult championship(const GameSpec& game, EngineKind family, int grid_max,
                                       std::uint64_t matches_per_pair, const Budget& budget,
                                       std::uint64_t seed) {
  if (family != EngineKind::Mcts && family != EngineKind::MctsInf) {
    throw SpecError("championship family must be mcts or mctsinf");
  }
  if (grid_max < 1) throw SpecError("championship: grid_max must be >= 1");
  if (matches_per_pair % 2 != 0) {
    throw SpecError("championship: matches per pair must be even (split by seating)");
  }
  const std::string fam = family == EngineKind::Mcts ? "mcts" : "mctsinf";
  ChampionshipResult res;
  res.game = game.text;
  res.family = fam;
  res.budget = budget.to_string();
  res.seed = seed;
  res.grid_max = grid_max;
  res.matches_per_pair = matches_per_pair;
  std::vector<EngineSpec> specs;
  for (int k = 1; k <= grid_max; ++k) {
    for (int l = k; l <= grid_max; ++l) {
      Entrant e;
      e.a = k / 2.0;
      e.b = l / 2.0;
      e.spec = fam + ":a=" + format_param(e.a) + ",b=" + format_param(e.b);
      specs.push_back(parse_engine_spec(e.spec));
      res.standings.push_back(e);
    }
  }
  const std::size_t n = res.standings.size();
  std::vector<std::pair<std::size_t, std::size_t>> pairings;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) pairings.emplace_back(i, j);
  }
  const std::uint64_t rounds = matches_per_pair / 2;
  // Per pairing: (i-first tally for i, j-first tally for j).
  std::vector<std::array<SeatTally, 2>> results(pairings.size());
  with_game(game, [&](auto factory, const EngineContext& ctx) {
    parallel_for(pairings.size(), [&](std::size_t pi) {
      const auto [i, j] = pairings[pi];
      for (std::uint64_t g = 0; g < rounds; ++g) {
        const auto start = factory(derive_seed(game.seed, {pi, g}));
        const MatchRecord x =
            play_match(start, specs[i], specs[j], budget, derive_seed(seed, {pi, g, 0}), ctx);
        const MatchRecord y =
            play_match(start, specs[j], specs[i], budget, derive_seed(seed, {pi, g, 1}), ctx);
        tally(results[pi][0], x.outcome, 0);
        tally(results[pi][1], y.outcome, 0);
      }
    });
    return 0;
  });
  for (std::size_t pi = 0; pi < pairings.size(); ++pi) {
    const auto [i, j] = pairings[pi];
    const SeatTally& x = results[pi][0];  // i first
    const SeatTally& y = results[pi][1];  // j first
    Entrant& ei = res.standings[i];
    Entrant& ej = res.standings[j];
    ei.wins += x.wins + y.losses;
    ei.losses += x.losses + y.wins;
    ei.draws += x.draws + y.draws;
    ej.wins += y.wins + x.losses;
    ej.losses += y.losses + x.wins;
    ej.draws += x.draws + y.draws;
    ei.games += 2 * rounds;
    ej.games += 2 * rounds;
    res.total_games += 2 * rounds;
  }
  // Grid order is already lexicographic in (a, b), so the first maximum wins ties.
  for (std::size_t i = 1; i < n; ++i) {
    if (res.standings[i].wins > res.standings[res.best].wins) res.best = i;
  }
  return res;
}

}  // namespace bts

#endif  // BTS_HARNESS_MATCH_HPP_
