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

#include <openssl/evp.h>

#include <string>
#include <string_view>

namespace omnifuzz {

/// SHA-256 of `data`, lowercase hex.
inline std::string sha256_hex(std::string_view data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr);
  static const char* hex = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(hex[md[i] >> 4]);
    out.push_back(hex[md[i] & 0xf]);
  }
  return out;
}

/// First 16 hex chars of sha256; used inside bug signatures.
inline std::string short_hash(std::string_view data) { return sha256_hex(data).substr(0, 16); }

// Canonical form used for dedup: trailing whitespace stripped per line,
// exactly one final newline (empty input stays empty).
inline std::string normalize_code(std::string_view code) {
  std::string out;
  out.reserve(code.size() + 1);
  size_t pos = 0;
  while (pos < code.size()) {
    size_t nl = code.find('\n', pos);
    std::string_view line =
        nl == std::string_view::npos ? code.substr(pos) : code.substr(pos, nl - pos);
    size_t end = line.size();
    while (end > 0 && (line[end - 1] == ' ' || line[end - 1] == '\t' || line[end - 1] == '\r')) --end;
    out.append(line.substr(0, end));
    out.push_back('\n');
    if (nl == std::string_view::npos) break;
    pos = nl + 1;
  }
  // Collapse runs of trailing blank lines left by input like "a\n\n\n".
  while (out.size() >= 2 && out[out.size() - 1] == '\n' && out[out.size() - 2] == '\n') out.pop_back();
  if (out == "\n") out.clear();
  return out;
}

/// Content hash of the normalized code.
inline std::string code_hash(std::string_view code) { return sha256_hex(normalize_code(code)); }

}  // namespace omnifuzz
