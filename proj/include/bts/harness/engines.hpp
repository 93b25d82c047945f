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

// Players for the match runner. An engine owns its search tree for the
// whole game: choose() searches from the current position, advance() is
// called with every move played, its own and the opponent's.

#ifndef BTS_HARNESS_ENGINES_HPP_
#define BTS_HARNESS_ENGINES_HPP_

#include <chrono>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "bts/boss.hpp"
#include "bts/explicit_tree.hpp"
#include "bts/harness/spec.hpp"
#include "bts/io.hpp"
#include "bts/mcts.hpp"
#include "bts/priors.hpp"

namespace bts {

template <GamePosition P>
class Engine {
 public:
  virtual ~Engine() = default;
  /// Searches under `budget` and returns a legal move index.
  virtual std::size_t choose(const Budget& budget) = 0;
  virtual void advance(std::size_t move) = 0;
  /// Iterations spent by the last choose().
  virtual std::uint64_t last_iterations() const = 0;
  virtual std::string name() const = 0;
};

/// Game facts an engine may need beyond the position.
struct EngineContext {
  DrawPolicy draw_policy{};
  /// Leaf win probabilities of an explicit tree (boss:known).
  std::shared_ptr<const std::vector<double>> leaf_probs;
};

/// Prior tables read from disk once per path.
inline std::shared_ptr<const PriorTables> load_prior_tables(const std::string& path) {
  static std::mutex mu;
  static std::map<std::string, std::shared_ptr<const PriorTables>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(path);
  if (it != cache.end()) return it->second;
  auto t = std::make_shared<const PriorTables>(prior_tables_from_json(read_json_file(path)));
  cache.emplace(path, t);
  return t;
}

template <GamePosition P>
PriorSource<P> prior_source_for(const EngineSpec& spec) {
  switch (spec.prior) {
    case BossPrior::Sym:
    case BossPrior::SymP:
    case BossPrior::SymB:
      return sym_prior_source<P>(SymFamily{spec.a, spec.b});
    case BossPrior::GW:
    case BossPrior::GW2: {
      auto tables = load_prior_tables(spec.file);
      const bool want_gw2 = spec.prior == BossPrior::GW2;
      if ((tables->kind == PriorKind::GW2) != want_gw2) {
        throw SpecError(spec.text + ": " + spec.file + " holds " + to_string(tables->kind) +
                        " tables");
      }
      return table_prior_source<P>(std::move(tables));
    }
    case BossPrior::Known:
      // Needs the whole tree; see make_boss_search.
      throw SpecError("boss:known only applies to explicit trees");
  }
  throw SpecError("unhandled prior");
}

template <GamePosition P>
BossSearch<P> make_boss_search(const EngineSpec& spec, const P& root, std::uint64_t seed,
                               const EngineContext& ctx, std::optional<Player> perspective = {},
                               BossOptions options = {}) {
  if (spec.kind != EngineKind::Boss) throw SpecError(spec.text + " is not a boss engine");
  options.draw_policy = ctx.draw_policy;
  if constexpr (std::is_same_v<P, TreePosition>) {
    if (spec.prior == BossPrior::Known) {
      if (!ctx.leaf_probs) throw SpecError("boss:known needs the leaf probabilities");
      auto priors = std::make_shared<const std::vector<NodePrior>>(
          known_tree_prior(root.tree(), *ctx.leaf_probs));
      return BossSearch<P>(root, known_prior_source(priors), seed, options, perspective);
    }
  }
  return BossSearch<P>(root, prior_source_for<P>(spec), seed, options, perspective);
}

template <GamePosition P>
class BossEngine final : public Engine<P> {
 public:
  BossEngine(const EngineSpec& spec, const P& start, Player seat, std::uint64_t seed,
             const EngineContext& ctx)
      : search_(make_boss_search(spec, start, seed, ctx, seat)), name_(spec.text) {}

  std::size_t choose(const Budget& budget) override {
    if (budget.kind == Budget::Kind::Iterations) {
      last_ = search_.run(budget.amount);
    } else {
      last_ = search_.run_until(std::chrono::steady_clock::now() +
                                std::chrono::milliseconds(budget.amount));
    }
    return search_.best_move();
  }
  void advance(std::size_t move) override { search_.reroot(move); }
  std::uint64_t last_iterations() const override { return last_; }
  std::string name() const override { return name_; }
  const BossSearch<P>& search() const { return search_; }

 private:
  BossSearch<P> search_;
  std::string name_;
  std::uint64_t last_ = 0;
};

template <GamePosition P>
class MctsEngine final : public Engine<P> {
 public:
  MctsEngine(const EngineSpec& spec, const P& start, Player seat, std::uint64_t seed,
             const EngineContext& ctx)
      : search_(start,
                MctsParams{spec.a, spec.b,
                           spec.kind == EngineKind::MctsInf ? MctsVariant::Modified
                                                            : MctsVariant::Standard,
                           ctx.draw_policy},
                seed, seat),
        name_(spec.text) {}

  std::size_t choose(const Budget& budget) override {
    if (budget.kind == Budget::Kind::Iterations) {
      last_ = search_.run(budget.amount);
    } else {
      last_ = search_.run_until(std::chrono::steady_clock::now() +
                                std::chrono::milliseconds(budget.amount));
    }
    return search_.best_move();
  }
  void advance(std::size_t move) override { search_.reroot(move); }
  std::uint64_t last_iterations() const override { return last_; }
  std::string name() const override { return name_; }

 private:
  MctsSearch<P> search_;
  std::string name_;
  std::uint64_t last_ = 0;
};

template <GamePosition P>
class RandomEngine final : public Engine<P> {
 public:
  RandomEngine(const P& start, std::uint64_t seed) : pos_(start), rng_(seed) {}

  std::size_t choose(const Budget&) override { return uniform_index(rng_, pos_.num_moves()); }
  void advance(std::size_t move) override { pos_ = pos_.child(move); }
  std::uint64_t last_iterations() const override { return 0; }
  std::string name() const override { return "random"; }

 private:
  P pos_;
  Rng rng_;
};

template <GamePosition P>
std::unique_ptr<Engine<P>> make_engine(const EngineSpec& spec, const P& start, Player seat,
                                       std::uint64_t seed, const EngineContext& ctx) {
  switch (spec.kind) {
    case EngineKind::Boss:
      return std::make_unique<BossEngine<P>>(spec, start, seat, seed, ctx);
    case EngineKind::Mcts:
    case EngineKind::MctsInf:
      return std::make_unique<MctsEngine<P>>(spec, start, seat, seed, ctx);
    case EngineKind::Random:
      return std::make_unique<RandomEngine<P>>(start, seed);
  }
  throw SpecError("unhandled engine kind");
}

}  // namespace bts

#endif  // BTS_HARNESS_ENGINES_HPP_
