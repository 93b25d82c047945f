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

// Command-line front end: solving, matches and the experiments.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "bts/bts.hpp"

namespace {

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

std::vector<int> parse_int_list(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stoi(item));
  if (out.empty()) throw bts::SpecError("expected a comma-separated list of integers");
  return out;
}

int cmd_solve(const std::string& game_text, const std::string& engine_text, std::uint64_t seed,
              std::uint64_t max_iters, const std::string& out) {
  const bts::GameSpec game = bts::parse_game_spec(game_text);
  const bts::EngineSpec engine = bts::parse_engine_spec(engine_text);
  const bts::Json result = bts::with_game(game, [&](auto factory, const bts::EngineContext& ctx) {
    const auto pos = factory(game.seed);
    const bool value = bts::minimax_solve(pos, ctx.draw_policy);
    auto boss = bts::make_boss_search(engine, pos, seed, ctx);
    const std::uint64_t iters = boss.solve(max_iters);
    bts::Rng gen(bts::derive_seed(seed, {1}));
    const auto ab = bts::alphabeta_count(pos, ctx.draw_policy, bts::RandomOrder<bts::Rng>(gen));
    return bts::Json{{"game", game.text},
                     {"engine", engine.text},
                     {"seed", seed},
                     {"first_player_wins", value},
                     {"search_value", boss.root_value()},
                     {"search_iterations", iters},
                     {"search_nodes", boss.nodes().size()},
                     {"alphabeta_leaves", ab.leaves_visited}};
  });
  std::cout << result.dump(2) << '\n';
  if (!out.empty()) bts::write_json_file(out, result);
  return 0;
}

int cmd_fit(const std::string& game_text, std::uint64_t playouts, std::uint64_t seed,
            bool order_two, const std::string& out) {
  const bts::GameSpec game = bts::parse_game_spec(game_text);
  const bts::Json result = bts::with_game(game, [&](auto factory, const bts::EngineContext& ctx) {
    const auto pos = factory(game.seed);
    bts::Rng gen(seed);
    const bts::GWFit fit = bts::fit_gw_from_playouts(pos, playouts, gen, ctx.draw_policy, order_two);
    bts::Json j = order_two ? bts::to_json(bts::gw2_tables(*fit.order_two))
                            : bts::to_json(bts::gw_tables(fit.model));
    j["model"] = order_two ? bts::to_json(*fit.order_two) : bts::to_json(fit.model);
    j["game"] = game.text;
    j["playouts"] = playouts;
    j["seed"] = seed;
    j["nodes_at_depth"] = fit.nodes_at_depth;
    j["q_observed"] = fit.q_observed;
    return j;
  });
  bts::write_json_file(out, result);
  std::cout << "wrote " << out << " (" << result["kind"].get<std::string>() << ", depth "
            << result["model"]["K"].get<int>() << ")\n";
  return 0;
}

int cmd_play(const std::string& game_text, const std::string& engine_text,
             const std::string& budget_text, bool human_first, std::uint64_t seed) {
  const bts::GameSpec game = bts::parse_game_spec(game_text);
  const bts::EngineSpec engine = bts::parse_engine_spec(engine_text);
  const bts::Budget budget = bts::parse_budget(budget_text);
  return bts::with_game(game, [&](auto factory, const bts::EngineContext& ctx) {
    auto pos = factory(game.seed);
    const bts::Player engine_seat = human_first ? bts::opponent(pos.turn()) : pos.turn();
    auto bot = bts::make_engine(engine, pos, engine_seat, seed, ctx);
    while (!pos.is_terminal()) {
      if constexpr (std::is_same_v<std::decay_t<decltype(pos)>, bts::ConnectFour>) {
        std::cout << pos.to_string();
      }
      std::size_t move = 0;
      if (pos.turn() == engine_seat) {
        move = bot->choose(budget);
        std::cout << "engine plays " << pos.move_label(move) << " (" << bot->last_iterations()
                  << " iterations)\n";
      } else {
        std::cout << "moves:";
        for (std::size_t i = 0; i < pos.num_moves(); ++i) std::cout << ' ' << pos.move_label(i);
        std::cout << "\n> " << std::flush;
        std::string label;
        if (!(std::cin >> label)) return 1;
        bool found = false;
        for (std::size_t i = 0; i < pos.num_moves(); ++i) {
          if (pos.move_label(i) == label) {
            move = i;
            found = true;
          }
        }
        if (!found) {
          std::cout << "illegal move\n";
          continue;
        }
      }
      bot->advance(move);
      pos = pos.child(move);
    }
    if constexpr (std::is_same_v<std::decay_t<decltype(pos)>, bts::ConnectFour>) {
      std::cout << pos.to_string();
    }
    std::cout << "result: " << bts::outcome_name(pos.raw_outcome()) << '\n';
    return 0;
  });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bayesian game-tree search and benchmarks"};
  app.require_subcommand(1);

  std::string game, engine = "boss:sym:a=0.5", p1, p2, budget = "iters:1000", out, family = "mcts",
                    depths = "4,8";
  std::uint64_t seed = 0, games = 100, trials = 1000, max_iters = 200, playouts = 100000,
                pairs = 40, max_solve = bts::kDefaultNodeBudget;
  int grid_max = 10;
  bool order_two = false, human_first = false, engine_first = false, records = false;

  auto* solve = app.add_subcommand("solve", "Solve a game exactly and with the search");
  solve->add_option("--game", game, "Game spec")->required();
  solve->add_option("--engine", engine, "Boss engine spec");
  solve->add_option("--seed", seed);
  solve->add_option("--max-iters", max_solve, "Iteration cap for the search");
  solve->add_option("--out", out, "JSON output path");

  auto* duel = app.add_subcommand("duel", "Two engines, each seat in turn");
  duel->add_option("--game", game)->required();
  duel->add_option("--p1", p1, "Engine A")->required();
  duel->add_option("--p2", p2, "Engine B")->required();
  duel->add_option("--games", games, "Games per seating");
  duel->add_option("--budget", budget, "iters:<n> or ms:<n> per move");
  duel->add_option("--seed", seed);
  duel->add_option("--out", out)->required();
  duel->add_flag("--records", records, "Include every match record");

  auto* champ = app.add_subcommand("championship", "Round robin over the (a, b) grid");
  champ->add_option("--game", game)->required();
  champ->add_option("--family", family, "mcts or mctsinf");
  champ->add_option("--grid-max", grid_max);
  champ->add_option("--pairs", pairs, "Games per pair of entrants");
  champ->add_option("--budget", budget);
  champ->add_option("--seed", seed);
  champ->add_option("--out", out)->required();

  auto* tau = app.add_subcommand("pearl-tau", "Leaves visited to solve golden Pearl games");
  tau->add_option("--depths", depths, "Comma-separated depths");
  tau->add_option("--trials", trials);
  tau->add_option("--seed", seed);
  tau->add_option("--out", out, "CSV path; a JSON sidecar goes to <out>.json")->required();

  auto* curve = app.add_subcommand("curve", "Mean squared error of R_n(root)");
  curve->add_option("--game", game)->required();
  curve->add_option("--engine", engine);
  curve->add_option("--trials", trials);
  curve->add_option("--max-iters", max_iters);
  curve->add_option("--seed", seed);
  curve->add_option("--out", out, "CSV path; a JSON sidecar goes to <out>.json")->required();

  auto* fit = app.add_subcommand("fit-prior", "Fit Galton-Watson prior tables by playouts");
  fit->add_option("--game", game)->required();
  fit->add_option("--playouts", playouts);
  fit->add_option("--seed", seed);
  fit->add_flag("--order-two", order_two, "Condition litters on the parent's litter");
  fit->add_option("--out", out)->required();

  auto* play = app.add_subcommand("play", "Play against an engine in the terminal");
  play->add_option("--game", game)->required();
  play->add_option("--engine", engine);
  play->add_option("--budget", budget);
  play->add_option("--seed", seed);
  auto* hf = play->add_flag("--human-first", human_first);
  auto* ef = play->add_flag("--engine-first", engine_first);
  hf->excludes(ef);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*solve) return cmd_solve(game, engine, seed, max_solve, out);
    if (*duel) {
      const auto res = bts::duel(bts::parse_game_spec(game), bts::parse_engine_spec(p1),
                                 bts::parse_engine_spec(p2), games, bts::parse_budget(budget),
                                 seed, records);
      bts::write_json_file(out, bts::to_json(res));
      std::cout << res.a << " vs " << res.b << ": " << res.quadruple() << '\n';
      return 0;
    }
    if (*champ) {
      bts::EngineKind kind = bts::EngineKind::Mcts;
      if (family == "mctsinf") {
        kind = bts::EngineKind::MctsInf;
      } else if (family != "mcts") {
        throw bts::SpecError("--family must be mcts or mctsinf");
      }
      const auto res = bts::championship(bts::parse_game_spec(game), kind, grid_max, pairs,
                                         bts::parse_budget(budget), seed);
      bts::write_json_file(out, bts::to_json(res));
      const auto& best = res.standings[res.best];
      std::cout << res.standings.size() << " entrants, " << res.total_games << " games; best "
                << best.spec << " with " << best.wins << " wins\n";
      return 0;
    }
    if (*tau) {
      const auto rows = bts::pearl_tau(parse_int_list(depths), trials, seed);
      const std::string csv = bts::tau_csv(rows);
      write_text(out, csv);
      bts::write_json_file(out + ".json", bts::tau_json(rows, seed));
      std::cout << csv;
      return 0;
    }
    if (*curve) {
      const auto c = bts::error_curve(bts::parse_game_spec(game), bts::parse_engine_spec(engine),
                                      trials, max_iters, seed);
      write_text(out, bts::curve_csv(c));
      bts::write_json_file(out + ".json",
                           bts::Json{{"game", game},
                                     {"engine", engine},
                                     {"trials", trials},
                                     {"max_iters", max_iters},
                                     {"seed", seed},
                                     {"max_tau", c.max_tau},
                                     {"unsolved_runs", c.unsolved_runs},
                                     {"sample_trajectory", c.sample_trajectory}});
      std::cout << "n=0: " << bts::format_double(c.mean_sq_error.front()) << ", n=" << max_iters
                << ": " << bts::format_double(c.mean_sq_error.back()) << ", max tau "
                << c.max_tau << '\n';
      return 0;
    }
    if (*fit) return cmd_fit(game, playouts, seed, order_two, out);
    if (*play) return cmd_play(game, engine, budget, human_first, seed);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
