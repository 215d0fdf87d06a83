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

#include <array>
#include <stdexcept>
#include <string>

namespace omnifuzz {

// The three generation strategies of the fuzzing loop. generate-new works
// without an example; the other two rewrite one.
enum class StrategyKind { GenerateNew = 0, MutateExisting = 1, SemanticEquiv = 2 };

struct GenerationStrategy {
  StrategyKind kind;
  std::string name;
  std::string instruction_text;
  bool requires_example;
};

inline const char* to_string(StrategyKind k) {
  switch (k) {
    case StrategyKind::GenerateNew: return "generate-new";
    case StrategyKind::MutateExisting: return "mutate-existing";
    case StrategyKind::SemanticEquiv: return "semantic-equiv";
  }
  return "?";
}

inline StrategyKind strategy_from_string(const std::string& s) {
  if (s == "generate-new") return StrategyKind::GenerateNew;
  if (s == "mutate-existing") return StrategyKind::MutateExisting;
  if (s == "semantic-equiv") return StrategyKind::SemanticEquiv;
  throw std::invalid_argument("unknown strategy: " + s);
}

inline std::string default_instruction(StrategyKind k) {
  switch (k) {
    case StrategyKind::GenerateNew:
      return "Please create a new program that uses the features described above.";
    case StrategyKind::MutateExisting:
      return "Please mutate the above example program to create a new program.";
    case StrategyKind::SemanticEquiv:
      return "Please rewrite the above example program into a semantically equivalent "
             "but syntactically different program.";
  }
  return "";
}

inline GenerationStrategy make_strategy(StrategyKind k, std::string instruction = "") {
  if (instruction.empty()) instruction = default_instruction(k);
  return GenerationStrategy{k, to_string(k), std::move(instruction),
                            k != StrategyKind::GenerateNew};
}

inline constexpr std::array<StrategyKind, 3> kAllStrategies = {
    StrategyKind::GenerateNew, StrategyKind::MutateExisting, StrategyKind::SemanticEquiv};

}  // namespace omnifuzz
