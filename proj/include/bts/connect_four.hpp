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

#ifndef BTS_CONNECT_FOUR_HPP_
#define BTS_CONNECT_FOUR_HPP_

#include <algorithm>
#include <array>
#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>

#include "bts/game.hpp"

namespace bts {

struct ConnectFourConfig {
  int columns = 7;
  int rows = 6;
  int connect = 4;
  /// The first player to align `connect` discs loses.
  bool inverse = false;
  DrawPolicy draw_policy{};

  static constexpr int kMaxSide = 16;

  void validate() const {
    if (columns < 1 || rows < 1 || columns > kMaxSide || rows > kMaxSide) {
      throw std::invalid_argument("connect four: board sides must be in [1, 16]");
    }
    if (connect < 2 || connect > std::max(columns, rows)) {
      throw std::invalid_argument(
          "connect four: connect must be in [2, max(columns, rows)]");
    }
  }
};

/// Gravity-drop alignment game. Cells hold 0 (empty), 1 (J1) or 2 (J0).
class ConnectFour {
 public:
  explicit ConnectFour(ConnectFourConfig cfg) : cfg_(cfg) {
    cfg_.validate();
    board_.fill(0);
    heights_.fill(0);
  }

  const ConnectFourConfig& config() const { return cfg_; }

  int depth() const { return moves_; }
  Player turn() const { return player_at_depth(moves_); }
  bool is_terminal() const { return state_ != State::Running; }

  Outcome raw_outcome() const {
    switch (state_) {
      case State::J1Won: return Outcome::J1Win;
      case State::J0Won: return Outcome::J0Win;
      case State::Draw: return Outcome::Draw;
      case State::Running: break;
    }
    throw std::logic_error("raw_outcome on a non-terminal position");
  }

  std::size_t num_moves() const {
    if (is_terminal()) return 0;
    std::size_t n = 0;
    for (int c = 0; c < cfg_.columns; ++c) n += heights_[c] < cfg_.rows;
    return n;
  }

  /// Column played by the i-th legal move.
  int column_of(std::size_t i) const {
    for (int c = 0; c < cfg_.columns; ++c) {
      if (heights_[c] < cfg_.rows && i-- == 0) return c;
    }
    throw std::out_of_range("connect four: move index out of range");
  }

  std::string move_label(std::size_t i) const {
    return std::to_string(column_of(i));
  }

  ConnectFour child(std::size_t i) const {
    ConnectFour next = *this;
    next.drop(column_of(i));
    return next;
  }

  int cell(int column, int row) const { return board_[index(column, row)]; }
  int height(int column) const { return heights_[column]; }

  std::string to_string() const {
    std::ostringstream os;
    for (int r = cfg_.rows - 1; r >= 0; --r) {
      for (int c = 0; c < cfg_.columns; ++c) {
        os << ".XO"[cell(c, r)];
      }
      os << '\n';
    }
    for (int c = 0; c < cfg_.columns; ++c) os << (c % 10);
    os << '\n';
    return os.str();
  }

 private:
  enum class State : std::uint8_t { Running, J1Won, J0Won, Draw };

  static constexpr int index(int column, int row) {
    return column * ConnectFourConfig::kMaxSide + row;
  }

  int run_length(int c, int r, int dc, int dr, std::uint8_t who) const {
    int n = 0;
    for (c += dc, r += dr; c >= 0 && c < cfg_.columns && r >= 0 && r < cfg_.rows;
         c += dc, r += dr) {
      if (board_[index(c, r)] != who) break;
      ++n;
    }
    return n;
  }

  void drop(int c) {
    const std::uint8_t who = turn() == Player::J1 ? 1 : 2;
    const int r = heights_[c]++;
    board_[index(c, r)] = who;
    ++moves_;
    constexpr int kDirs[4][2] = {{1, 0}, {0, 1}, {1, 1}, {1, -1}};
    for (const auto& d : kDirs) {
      const int len = 1 + run_length(c, r, d[0], d[1], who) +
                      run_length(c, r, -d[0], -d[1], who);
      if (len >= cfg_.connect) {
        const bool mover_wins = !cfg_.inverse;
        const bool j1 = (who == 1) == mover_wins;
        state_ = j1 ? State::J1Won : State::J0Won;
        return;
      }
    }
    if (moves_ == cfg_.columns * cfg_.rows) state_ = State::Draw;
  }

  ConnectFourConfig cfg_;
  std::array<std::uint8_t, ConnectFourConfig::kMaxSide * ConnectFourConfig::kMaxSide>
      board_{};
  std::array<std::uint8_t, ConnectFourConfig::kMaxSide> heights_{};
  int moves_ = 0;
  State state_ = State::Running;
};

inline ConnectFour connect_four_new(const ConnectFourConfig& cfg) {
  return ConnectFour(cfg);
}

}  // namespace bts

#endif  // BTS_CONNECT_FOUR_HPP_
