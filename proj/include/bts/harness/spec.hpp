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

// Text specs for games, engines and budgets, e.g.
//   c4:cols=4,rows=4,connect=3      pearl:d=2,K=16,p=auto,seed=7
//   gw:file=model.json,seed=3
//   boss:symp:a=0.618   boss:gw:file=prior.json   mcts:a=3.5,b=5   random
//   iters:1000          ms:5

#ifndef BTS_HARNESS_SPEC_HPP_
#define BTS_HARNESS_SPEC_HPP_

#include <cstdint>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "bts/connect_four.hpp"
#include "bts/game.hpp"
#include "bts/pearl.hpp"

namespace bts {

class SpecError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// "a:b:k1=v1,k2=v2" split into the ':'-separated words and the key-value
/// list, which must come last.
struct ParsedSpec {
  std::vector<std::string> words;
  std::map<std::string, std::string> values;

  bool has(const std::string& key) const { return values.contains(key); }

  void allow_only(const std::set<std::string>& keys, const std::string& what) const {
    for (const auto& [k, v] : values) {
      if (!keys.contains(k)) throw SpecError(what + ": unknown key \"" + k + "\"");
    }
  }

  std::string str(const std::string& key, const std::string& fallback) const {
    auto it = values.find(key);
    return it == values.end() ? fallback : it->second;
  }

  double num(const std::string& key, double fallback) const {
    auto it = values.find(key);
    if (it == values.end()) return fallback;
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(it->second, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != it->second.size()) {
      throw SpecError("\"" + key + "=" + it->second + "\" is not a number");
    }
    return v;
  }

  std::int64_t integer(const std::string& key, std::int64_t fallback) const {
    auto it = values.find(key);
    if (it == values.end()) return fallback;
    std::size_t used = 0;
    std::int64_t v = 0;
    try {
      v = std::stoll(it->second, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != it->second.size()) {
      throw SpecError("\"" + key + "=" + it->second + "\" is not an integer");
    }
    return v;
  }

  std::uint64_t unsigned_integer(const std::string& key, std::uint64_t fallback) const {
    auto it = values.find(key);
    if (it == values.end()) return fallback;
    std::size_t used = 0;
    std::uint64_t v = 0;
    try {
      if (!it->second.empty() && it->second[0] != '-') v = std::stoull(it->second, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != it->second.size()) {
      throw SpecError("\"" + key + "=" + it->second + "\" is not a non-negative integer");
    }
    return v;
  }
};

inline ParsedSpec parse_spec(const std::string& text) {
  ParsedSpec out;
  std::stringstream ss(text);
  std::string word;
  std::vector<std::string> parts;
  while (std::getline(ss, word, ':')) parts.push_back(word);
  if (parts.empty() || parts[0].empty()) throw SpecError("empty spec");
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (parts[i].find('=') == std::string::npos) {
      if (parts[i].empty()) throw SpecError("spec \"" + text + "\": empty word");
      out.words.push_back(parts[i]);
      continue;
    }
    if (i + 1 != parts.size()) {
      throw SpecError("spec \"" + text + "\": key=value list must come last");
    }
    std::stringstream kv(parts[i]);
    std::string item;
    while (std::getline(kv, item, ',')) {
      const auto eq = item.find('=');
      if (eq == std::string::npos || eq == 0) {
        throw SpecError("spec \"" + text + "\": expected key=value, got \"" + item + "\"");
      }
      const std::string key = item.substr(0, eq);
      if (out.values.contains(key)) throw SpecError("spec \"" + text + "\": repeated key " + key);
      out.values[key] = item.substr(eq + 1);
    }
  }
  return out;
}

enum class GameKind { ConnectFour, Pearl, GW };

struct GameSpec {
  GameKind kind = GameKind::ConnectFour;
  ConnectFourConfig c4;
  PearlConfig pearl;
  /// Pearl leaf probability chosen so that the root mean is 1/2.
  bool pearl_auto_p = false;
  std::string gw_file;
  /// Realization seed of a random game.
  std::uint64_t seed = 0;
  std::string text;

  bool is_random() const { return kind != GameKind::ConnectFour; }
  DrawPolicy draw_policy() const {
    return kind == GameKind::ConnectFour ? c4.draw_policy : DrawPolicy{};
  }
};

inline DrawPolicy parse_draw_policy(const std::string& s) {
  if (s == "j0") return DrawPolicy{Player::J0};
  if (s == "j1") return DrawPolicy{Player::J1};
  throw SpecError("draw must be j0 (draws count as losses) or j1 (as wins)");
}

inline GameSpec parse_game_spec(const std::string& text) {
  const ParsedSpec p = parse_spec(text);
  if (p.words.size() != 1) throw SpecError("game spec \"" + text + "\": expected one game name");
  GameSpec g;
  g.text = text;
  const std::string& name = p.words[0];
  if (name == "c4") {
    p.allow_only({"cols", "rows", "connect", "inverse", "draw"}, "c4");
    g.kind = GameKind::ConnectFour;
    g.c4.columns = static_cast<int>(p.integer("cols", 7));
    g.c4.rows = static_cast<int>(p.integer("rows", 6));
    g.c4.connect = static_cast<int>(p.integer("connect", 4));
    g.c4.inverse = p.integer("inverse", 0) != 0;
    g.c4.draw_policy = parse_draw_policy(p.str("draw", "j0"));
    g.c4.validate();
  } else if (name == "pearl") {
    p.allow_only({"d", "K", "p", "seed"}, "pearl");
    g.kind = GameKind::Pearl;
    g.pearl.degree = static_cast<int>(p.integer("d", 2));
    g.pearl.depth = static_cast<int>(p.integer("K", 8));
    g.pearl_auto_p = p.str("p", "auto") == "auto";
    g.pearl.leaf_prob = g.pearl_auto_p ? 0.5 : p.num("p", 0.5);
    g.seed = p.unsigned_integer("seed", 0);
    g.pearl.seed = g.seed;
    g.pearl.validate();
  } else if (name == "gw") {
    p.allow_only({"file", "seed"}, "gw");
    g.kind = GameKind::GW;
    g.gw_file = p.str("file", "");
    if (g.gw_file.empty()) throw SpecError("gw: file=<model.json> is required");
    g.seed = p.unsigned_integer("seed", 0);
  } else {
    throw SpecError("unknown game \"" + name + "\" (expected c4, pearl or gw)");
  }
  return g;
}

enum class EngineKind { Boss, Mcts, MctsInf, Random };
enum class BossPrior { Sym, SymP, SymB, GW, GW2, Known };

struct EngineSpec {
  EngineKind kind = EngineKind::Random;
  BossPrior prior = BossPrior::Sym;
  double a = 0.5;
  double b = 0.0;
  std::string file;
  std::string text;
};

inline EngineSpec parse_engine_spec(const std::string& text) {
  const ParsedSpec p = parse_spec(text);
  EngineSpec e;
  e.text = text;
  const std::string& name = p.words[0];
  if (name == "random") {
    if (p.words.size() != 1 || !p.values.empty()) throw SpecError("random takes no options");
    e.kind = EngineKind::Random;
  } else if (name == "mcts" || name == "mctsinf") {
    if (p.words.size() != 1) throw SpecError(name + ": expected " + name + ":a=<x>,b=<y>");
    p.allow_only({"a", "b"}, name);
    e.kind = name == "mcts" ? EngineKind::Mcts : EngineKind::MctsInf;
    e.a = p.num("a", 1.0);
    e.b = p.num("b", 1.0);
    if (!(e.a > 0.0) || !(e.b > 0.0)) throw SpecError(name + ": a and b must be positive");
  } else if (name == "boss") {
    if (p.words.size() != 2) throw SpecError("boss: expected boss:<prior>[:options]");
    e.kind = EngineKind::Boss;
    const std::string& prior = p.words[1];
    if (prior == "sym" || prior == "symp") {
      p.allow_only({"a"}, "boss:" + prior);
      e.prior = prior == "sym" ? BossPrior::Sym : BossPrior::SymP;
      e.a = p.num("a", 0.5);
      e.b = prior == "sym" ? 0.0 : 2.0;
    } else if (prior == "symb") {
      p.allow_only({"a", "b"}, "boss:symb");
      e.prior = BossPrior::SymB;
      e.a = p.num("a", 0.5);
      if (!p.has("b")) throw SpecError("boss:symb needs b=<x>");
      e.b = p.num("b", 0.0);
    } else if (prior == "gw" || prior == "gw2") {
      p.allow_only({"file"}, "boss:" + prior);
      e.prior = prior == "gw" ? BossPrior::GW : BossPrior::GW2;
      e.file = p.str("file", "");
      if (e.file.empty()) throw SpecError("boss:" + prior + " needs file=<prior.json>");
    } else if (prior == "known") {
      p.allow_only({}, "boss:known");
      e.prior = BossPrior::Known;
    } else {
      throw SpecError("unknown boss prior \"" + prior + "\"");
    }
    if ((e.prior == BossPrior::Sym || e.prior == BossPrior::SymP || e.prior == BossPrior::SymB) &&
        !(e.a > 0.0 && e.a < 1.0)) {
      throw SpecError("boss: a must lie in (0, 1)");
    }
  } else {
    throw SpecError("unknown engine \"" + name + "\" (expected boss, mcts, mctsinf or random)");
  }
  return e;
}

struct Budget {
  enum class Kind { Iterations, Milliseconds };
  Kind kind = Kind::Iterations;
  std::uint64_t amount = 1;

  std::string to_string() const {
    return (kind == Kind::Iterations ? "iters:" : "ms:") + std::to_string(amount);
  }
};

inline Budget parse_budget(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw SpecError("budget must be iters:<n> or ms:<n>");
  Budget b;
  const std::string kind = text.substr(0, colon);
  if (kind == "iters") {
    b.kind = Budget::Kind::Iterations;
  } else if (kind == "ms") {
    b.kind = Budget::Kind::Milliseconds;
  } else {
    throw SpecError("budget must be iters:<n> or ms:<n>");
  }
  const std::string n = text.substr(colon + 1);
  std::size_t used = 0;
  try {
    if (!n.empty() && n[0] != '-') b.amount = std::stoull(n, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != n.size() || b.amount == 0) {
    throw SpecError("budget amount must be a positive integer");
  }
  return b;
}

}  // namespace bts

#endif  // BTS_HARNESS_SPEC_HPP_
