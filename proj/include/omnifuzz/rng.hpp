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
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>

namespace omnifuzz {

// Campaign-level seeded generator. Selections use modulo reduction on raw
// mt19937_64 output so a recorded seed fully determines the draw sequence
// and an external trace can reproduce it without this class.
class CampaignRng {
 public:
  explicit CampaignRng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_raw() { return engine_(); }

  // Index in [0, n). n must be > 0. Consumes exactly one engine output.
  std::size_t pick_index(std::size_t n) {
    if (n == 0) throw std::logic_error("pick_index on empty range");
    return static_cast<std::size_t>(engine_() % n);
  }

  // mt19937_64 state round-trips through the standard stream operators.
  std::string serialize() const {
    std::ostringstream os;
    os << engine_;
    return os.str();
  }

  void restore(const std::string& state) {
    std::istringstream is(state);
    is >> engine_;
    if (is.fail()) throw std::runtime_error("corrupt RNG state");
  }

  bool operator==(const CampaignRng& other) const { return engine_ == other.engine_; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace omnifuzz
