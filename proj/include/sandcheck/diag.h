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

#include <string>
#include <vector>

#include "sandcheck/span.h"
#include "sandcheck/types.h"

namespace sandcheck {

// Error codes shared by the checker and the widget gate.
inline constexpr const char* E_SUBTYPE = "E_SUBTYPE";
inline constexpr const char* E_BANNED_FIELD = "E_BANNED_FIELD";
inline constexpr const char* E_EMPTY_LOOKUP = "E_EMPTY_LOOKUP";
inline constexpr const char* E_NOT_OBJECT = "E_NOT_OBJECT";
inline constexpr const char* E_NOT_FUNCTION = "E_NOT_FUNCTION";
inline constexpr const char* E_ARITY = "E_ARITY";
inline constexpr const char* E_UNBOUND = "E_UNBOUND";
inline constexpr const char* E_UNSUPPORTED = "E_UNSUPPORTED";
inline constexpr const char* E_UNDERSCORE_NAME = "E_UNDERSCORE_NAME";
inline constexpr const char* E_THIS_ESCAPES = "E_THIS_ESCAPES";
inline constexpr const char* E_PARSE = "E_PARSE";

struct Diagnostic {
  std::string code;
  Span span;
  std::string message;

  bool operator<(const Diagnostic& o) const {
    if (!(span == o.span)) return span < o.span;
    if (code != o.code) return code < o.code;
    return message < o.message;
  }
  bool operator==(const Diagnostic& o) const {
    return code == o.code && span == o.span && message == o.message;
  }
};

struct CheatRecord {
  Span span;
  TypePtr type;
};

struct CheckReport {
  std::vector<Diagnostic> diagnostics;  // kept sorted and deduplicated
  std::vector<CheatRecord> cheats;
  bool ok = true;

  void add(std::string code, Span span, std::string message);
  void finalize();  // sorts, dedupes, sets ok

  bool has_code(const std::string& code) const;
  // One "CODE:line:col:message" line per diagnostic.
  std::string to_text() const;
  std::string to_json() const;
};

}  // namespace sandcheck
