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

// JSON forms of the random-game models and prior tables.
//
//   GW model:    {"K": 3, "mu": [[[2, 1.0]], ...], "q": [...], "seed": 7}
//   GW2 model:   {"K": 3, "mu0": [[2, 1.0]], "mu": {"1": {"2": [[2, 0.5], [0, 0.5]]}}, ...}
//   tables:      {"kind": "gw" | "pearl", "m": [...], "s": [...]}
//   GW2 tables:  {"kind": "gw2", "m": {"k": {"d": v}}, "s": {"k": {"d": v}}}
//
// Readers validate and throw std::invalid_argument with the offending field.

#ifndef BTS_IO_HPP_
#define BTS_IO_HPP_

#include <cstdint>
#include <fstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "bts/gw_game.hpp"
#include "bts/priors.hpp"
#include "json.hpp"

namespace bts {

using Json = nlohmann::json;

namespace detail {

inline const Json& field(const Json& j, const char* name) {
  if (!j.is_object() || !j.contains(name)) {
    throw std::invalid_argument(std::string("json: missing field \"") + name + "\"");
  }
  return j.at(name);
}

inline Json law_to_json(const LitterLaw& law) {
  Json out = Json::array();
  for (auto [c, p] : law) out.push_back(Json::array({c, p}));
  return out;
}

inline LitterLaw law_from_json(const Json& j) {
  if (!j.is_array()) throw std::invalid_argument("json: litter law must be an array");
  LitterLaw law;
  for (const Json& e : j) {
    if (!e.is_array() || e.size() != 2) {
      throw std::invalid_argument("json: litter law entries are [count, probability]");
    }
    law.emplace_back(e[0].get<int>(), e[1].get<double>());
  }
  return normalize_law(law);
}

inline int int_key(const std::string& s) {
  std::size_t used = 0;
  const int v = std::stoi(s, &used);
  if (used != s.size()) throw std::invalid_argument("json: bad integer key \"" + s + "\"");
  return v;
}

}  // namespace detail

inline Json to_json(const GWModel& m) {
  Json mu = Json::array();
  for (const auto& law : m.mu) mu.push_back(detail::law_to_json(law));
  return Json{{"K", m.max_depth}, {"mu", mu}, {"q", m.q}, {"seed", m.seed}};
}

inline GWModel gw_model_from_json(const Json& j) {
  GWModel m;
  m.max_depth = detail::field(j, "K").get<int>();
  for (const Json& law : detail::field(j, "mu")) m.mu.push_back(detail::law_from_json(law));
  m.q = detail::field(j, "q").get<std::vector<double>>();
  m.seed = j.value("seed", std::uint64_t{0});
  m.validate();
  return m;
}

inline Json to_json(const GW2Model& m) {
  Json mu = Json::object();
  for (const auto& [kd, law] : m.mu) {
    mu[std::to_string(kd.first)][std::to_string(kd.second)] = detail::law_to_json(law);
  }
  return Json{{"K", m.max_depth}, {"mu0", detail::law_to_json(m.mu0)}, {"mu", mu},
              {"q", m.q}, {"seed", m.seed}};
}

inline GW2Model gw2_model_from_json(const Json& j) {
  GW2Model m;
  m.max_depth = detail::field(j, "K").get<int>();
  m.mu0 = detail::law_from_json(detail::field(j, "mu0"));
  for (const auto& [k, inner] : detail::field(j, "mu").items()) {
    for (const auto& [d, law] : inner.items()) {
      m.mu[{detail::int_key(k), detail::int_key(d)}] = detail::law_from_json(law);
    }
  }
  m.q = detail::field(j, "q").get<std::vector<double>>();
  m.seed = j.value("seed", std::uint64_t{0});
  m.validate();
  return m;
}

inline Json to_json(const PriorTables& t) {
  Json out{{"kind", to_string(t.kind)}};
  if (t.kind != PriorKind::GW2) {
    out["m"] = t.m;
    out["s"] = t.s;
    return out;
  }
  Json m = Json::object();
  Json s = Json::object();
  for (const auto& [kd, v] : t.by_litter) {
    m[std::to_string(kd.first)][std::to_string(kd.second)] = v.first;
    s[std::to_string(kd.first)][std::to_string(kd.second)] = v.second;
  }
  out["m"] = m;
  out["s"] = s;
  return out;
}

inline PriorTables prior_tables_from_json(const Json& j) {
  PriorTables t;
  const std::string kind = detail::field(j, "kind").get<std::string>();
  if (kind == "gw") {
    t.kind = PriorKind::GW;
  } else if (kind == "pearl") {
    t.kind = PriorKind::Pearl;
  } else if (kind == "gw2") {
    t.kind = PriorKind::GW2;
  } else {
    throw std::invalid_argument("json: unknown prior kind \"" + kind + "\"");
  }
  auto check = [](double m, double s) {
    if (!(m >= 0.0 && m <= 1.0)) throw std::invalid_argument("json: m outside [0, 1]");
    if (!(s >= 0.0)) throw std::invalid_argument("json: negative s");
  };
  if (t.kind != PriorKind::GW2) {
    t.m = detail::field(j, "m").get<std::vector<double>>();
    t.s = detail::field(j, "s").get<std::vector<double>>();
    if (t.m.empty() || t.m.size() != t.s.size()) {
      throw std::invalid_argument("json: m and s must be non-empty and of equal length");
    }
    for (std::size_t k = 0; k < t.m.size(); ++k) check(t.m[k], t.s[k]);
    return t;
  }
  const Json& m = detail::field(j, "m");
  const Json& s = detail::field(j, "s");
  for (const auto& [k, inner] : m.items()) {
    for (const auto& [d, v] : inner.items()) {
      const double sv = s.at(k).at(d).get<double>();
      check(v.get<double>(), sv);
      t.by_litter[{detail::int_key(k), detail::int_key(d)}] = {v.get<double>(), sv};
    }
  }
  if (!t.by_litter.contains({0, 0})) throw std::invalid_argument("json: gw2 tables lack the root");
  return t;
}

inline Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return Json::parse(in);
}

/// Writes `j` indented, with a trailing newline.
inline void write_json_file(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << j.dump(2) << '\n';
}

}  // namespace bts

#endif  // BTS_IO_HPP_
