// Copyright 2026 The Sandcheck Authors.
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

#pragma once

#include <cstdint>
#include <string>

namespace sandcheck {

struct Span {
  int line = 0;  // 1-based; 0 means "no position"
  int col = 0;   // 1-based

  bool operator==(const Span& o) const { return line == o.line && col == o.col; }
  bool operator<(const Span& o) const {
    if (line != o.line) return line < o.line;
    return col < o.col;
  }
};

// Stable FNV-1a; std::hash is implementation-defined and reports must be
// byte-identical across platforms.
inline uint64_t fnv1a(const void* data, size_t n, uint64_t seed = 0xcbf29ce484222325ULL) {
  const auto* p = static_cast<const unsigned char*>(data);
  uint64_t h = seed;
  for (size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline uint64_t fnv1a(const std::string& s, uint64_t seed = 0xcbf29ce484222325ULL) {
  return fnv1a(s.data(), s.size(), seed);
}

}  // namespace sandcheck
