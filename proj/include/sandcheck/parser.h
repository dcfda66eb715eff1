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

#include "sandcheck/ast.h"

namespace sandcheck {

struct ParseError : std::runtime_error {
  ParseError(Span s, const std::string& msg) : std::runtime_error(msg), span(s) {}
  Span span;
};

// Parses the surface subset: literals, arrays, object literals, var,
// assignment, function expressions/declarations, return, if/else, while,
// ===/!==, typeof, !, &&, ||, arithmetic and numeric comparisons, field
// access, delete, calls, this, throw. Type annotations ride in /*: ... */
// comments and bind to the nearest following function literal (or, written
// between the parameter list and the body, to that function).
surface::Program parse_surface(const std::string& source);

}  // namespace sandcheck
