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

#ifndef BTS_BTS_HPP_
#define BTS_BTS_HPP_

#include "bts/boss.hpp"
#include "bts/connect_four.hpp"
#include "bts/explicit_tree.hpp"
#include "bts/game.hpp"
#include "bts/gw_game.hpp"
#include "bts/harness/engines.hpp"
#include "bts/harness/experiments.hpp"
#include "bts/harness/match.hpp"
#include "bts/harness/parallel.hpp"
#include "bts/harness/spec.hpp"
#include "bts/io.hpp"
#include "bts/logodds.hpp"
#include "bts/mcts.hpp"
#include "bts/oracle.hpp"
#include "bts/pearl.hpp"
#include "bts/priors.hpp"
#include "bts/rng.hpp"

#endif  // BTS_BTS_HPP_
