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

#include <stdexcept>
#include <string>

#include "sandcheck/types.h"

namespace sandcheck {

struct TypeParseError : std::runtime_error {
  TypeParseError(size_t position, const std::string& msg)
      : std::runtime_error(msg), pos(position) {}
  size_t pos;  // byte offset into the input
};

// Parses the ASCII type grammar and returns the canonicalized type.
//
//   atom   := Num | Str | True | False | Undef | Null | Top | Bot
//           | Array '<' type '>'
//           | Ref '{' proto: T, code: T, * : F, "name": F, ... '}'
//           | rec a . type | forall a . type
//           | '(' '"s"' , ... ')' ('+'|'-')      string set
//           | '(' type ')'
//           | NAME                               alias or bound type variable
//   inter  := atom ('&' atom)*
//   union  := inter ('|' inter)*
//   type   := '[' type ']'? union ('*' union)* ('...')? '->' type
//           | union
//
// Identifiers starting with a lowercase letter are type variables and must
// be bound by an enclosing rec/forall; capitalized identifiers are aliases
// resolved later through the environment.
TypePtr parse_type(const std::string& text);

}  // namespace sandcheck
