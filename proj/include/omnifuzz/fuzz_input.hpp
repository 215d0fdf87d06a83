// Copyright 2026 The Omnifuzz Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "omnifuzz/strategy.hpp"
#include "omnifuzz/verdict.hpp"

namespace omnifuzz {

// Which stage produced an input: autoprompt trial generation or the loop.
enum class GenPhase { Autoprompt, Loop };

inline const char* to_string(GenPhase p) { return p == GenPhase::Autoprompt ? "ap" : "loop"; }

// One unique generated input. Repeated generations of the same normalized
// code are recorded as references to the first row, never as new rows.
struct FuzzInput {
  std::uint64_t id = 0;      // strictly increasing within a campaign
  std::string code;          // normalized form (see normalize_code)
  std::string hash;          // sha256 of the normalized code
  std::uint64_t iteration = 0;  // 0 = autoprompt phase
  GenPhase phase = GenPhase::Loop;
  StrategyKind strategy = StrategyKind::GenerateNew;
  std::optional<std::uint64_t> example_id;  // input used as example, if any
  OracleVerdict verdict;
  std::string created_at;  // wall clock, informational only; never replay-compared
};

}  // namespace omnifuzz
