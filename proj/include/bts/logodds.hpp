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

// Probabilities represented by their log-odds u = log(r / (1 - r)).
//
// Products of many probabilities close to 0 or 1 collapse to exactly 0 or 1
// in plain floating point. Every operation below works directly on log-odds
// and splits on the sign of its arguments so that exp() is never evaluated
// at a large positive argument. Endpoints are exact: r = 0 is -inf and
// r = 1 is +inf.

#ifndef BTS_LOGODDS_HPP_
#define BTS_LOGODDS_HPP_

#include <cmath>
#include <compare>
#include <limits>
#include <span>
#include <stdexcept>

namespace bts {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Log-odds of a probability. Extended real, -inf <= value <= +inf.
class LogOdds {
 public:
  constexpr LogOdds() = default;
  constexpr explicit LogOdds(double value) : value_(value) {}

  static constexpr LogOdds zero_prob() { return LogOdds(-kInf); }
  static constexpr LogOdds one_prob() { return LogOdds(kInf); }

  constexpr double value() const { return value_; }
  constexpr bool is_certain() const { return std::isinf(value_); }

  constexpr LogOdds operator-() const { return LogOdds(-value_); }
  constexpr auto operator<=>(const LogOdds&) const = default;

 private:
  double value_ = 0.0;
};

/// Natural log of a probability, value <= 0.
class LogProb {
 public:
  constexpr LogProb() = default;
  constexpr explicit LogProb(double value) : value_(value) {}
  constexpr double value() const { return value_; }
  constexpr auto operator<=>(const LogProb&) const = default;

 private:
  double value_ = 0.0;
};

namespace detail {

// log(1 + e^x) for x <= 0.
inline double log1p_exp_nonpos(double x) { return std::log1p(std::exp(x)); }

}  // namespace detail

inline LogOdds phi(double r) {
  if (!(r >= 0.0 && r <= 1.0)) {
    throw std::domain_error("phi: probability outside [0, 1]");
  }
  if (r == 0.0) return LogOdds::zero_prob();
  if (r == 1.0) return LogOdds::one_prob();
  return LogOdds(std::log(r) - std::log1p(-r));
}

/// Inverse of phi.
inline double prob(LogOdds u) {
  const double x = u.value();
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

/// phi(1 - r) = -phi(r).
constexpr LogOdds phi_complement(LogOdds u) { return -u; }

/// phi(r * s).
inline LogOdds phi_mul(LogOdds a, LogOdds b) {
  double u = a.value();
  double v = b.value();
  if (v > u) std::swap(u, v);
  if (u < 0.0) {
    if (v == -kInf) return LogOdds::zero_prob();
    return LogOdds(u + v - std::log1p(std::exp(u) + std::exp(v)));
  }
  if (v == kInf) return LogOdds::one_prob();
  return LogOdds(v - std::log1p(std::exp(-u) + std::exp(v - u)));
}

/// phi(r + s). Requires r + s <= 1.
inline LogOdds phi_add(LogOdds a, LogOdds b) {
  double u = a.value();
  double v = b.value();
  if (v > u) std::swap(u, v);
  if (u + v > 0.0 && !(u == kInf && v == -kInf)) {
    throw std::domain_error("phi_add: r + s exceeds 1");
  }
  if (u == -kInf) return LogOdds::zero_prob();
  if (v == -kInf) return LogOdds(u);
  // u + log(1 + e^(v-u) + 2e^v) - log(1 - e^(u+v)), with 1 - e^x = -expm1(x).
  return LogOdds(u + std::log1p(std::exp(v - u) + 2.0 * std::exp(v)) -
                 std::log(-std::expm1(u + v)));
}

/// phi(s / r) for s <= r, where a = phi(r) and b = phi(s).
inline LogOdds phi_div(LogOdds a, LogOdds b) {
  const double u = a.value();
  const double v = b.value();
  if (v > u) throw std::domain_error("phi_div: numerator exceeds denominator");
  if (u == v) return LogOdds::one_prob();
  if (u == kInf) return LogOdds(v);
  if (v == -kInf) return LogOdds::zero_prob();
  const double tail = std::log(-std::expm1(v - u));
  if (u < 0.0) return LogOdds(detail::log1p_exp_nonpos(u) - u + v - tail);
  return LogOdds(detail::log1p_exp_nonpos(-u) + v - tail);
}

/// phi(r - s) for s <= r, computed as phi(r * (1 - s / r)).
inline LogOdds phi_sub(LogOdds a, LogOdds b) {
  if (b > a) throw std::domain_error("phi_sub: result would be negative");
  return phi_mul(a, phi_complement(phi_div(a, b)));
}

/// log r from phi(r).
inline LogProb log_from_phi(LogOdds a) {
  const double u = a.value();
  if (u < 0.0) return LogProb(u - detail::log1p_exp_nonpos(u));
  return LogProb(-detail::log1p_exp_nonpos(-u));
}

/// phi(r) from log r.
inline LogOdds phi_from_log(LogProb lp) {
  const double l = lp.value();
  if (l > 0.0) throw std::domain_error("phi_from_log: log-probability above 0");
  if (l == 0.0) return LogOdds::one_prob();
  if (l == -kInf) return LogOdds::zero_prob();
  // log r - log(1 - r); 1 - r = -expm1(l).
  return LogOdds(l - std::log(-std::expm1(l)));
}

/// phi of the product of the given probabilities. Empty product is 1.
inline LogOdds phi_prod(std::span<const LogOdds> values) {
  LogOdds acc = LogOdds::one_prob();
  for (LogOdds u : values) acc = phi_mul(acc, u);
  return acc;
}

/// phi(1 - prod(1 - r_k)).
inline LogOdds phi_one_minus_prod_complements(std::span<const LogOdds> values) {
  LogOdds acc = LogOdds::one_prob();
  for (LogOdds u : values) acc = phi_mul(acc, phi_complement(u));
  return phi_complement(acc);
}

}  // namespace bts

#endif  // BTS_LOGODDS_HPP_
