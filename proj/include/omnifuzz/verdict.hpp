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
#include <stdexcept>
#include <string>

namespace omnifuzz {

enum class VerdictStatus { Valid, Invalid, Bug, Timeout, ExecError };

inline const char* to_string(VerdictStatus s) {
  switch (s) {
    case VerdictStatus::Valid: return "valid";
    case VerdictStatus::Invalid: return "invalid";
    case VerdictStatus::Bug: return "bug";
    case VerdictStatus::Timeout: return "timeout";
    case VerdictStatus::ExecError: return "exec-error";
  }
  return "?";
}

inline VerdictStatus verdict_status_from_string(const std::string& s) {
  if (s == "valid") return VerdictStatus::Valid;
  if (s == "invalid") return VerdictStatus::Invalid;
  if (s == "bug") return VerdictStatus::Bug;
  if (s == "timeout") return VerdictStatus::Timeout;
  if (s == "exec-error") return VerdictStatus::ExecError;
  throw std::invalid_argument("unknown verdict status: " + s);
}

// What we keep from one SUT execution. Stream heads are capped at 4 KiB;
// signatures are derived from these, so identical failures hash identically.
struct ExecSnapshot {
  int exit_code = 0;        // meaningful when signal == 0
  int signal = 0;           // termination signal, 0 if exited normally
  bool timed_out = false;
  std::string stderr_head;  // first 4 KiB
  std::string stdout_head;  // first 4 KiB
  std::int64_t duration_ms = 0;
};

struct OracleVerdict {
  VerdictStatus status = VerdictStatus::Invalid;
  std::optional<std::string> bug_signature;  // present iff status == Bug
  // Outcome of the validity rule alone; lets a bug-verdict input still be
  // bucketed as compiling/non-compiling in campaign statistics.
  bool validity_passed = false;
  ExecSnapshot raw;

  bool is_valid() const { return status == VerdictStatus::Valid; }
};

}  // namespace omnifuzz
