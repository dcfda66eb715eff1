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

#include "sandcheck/ast.h"

namespace sandcheck {

struct DesugarOptions {
  // Widget-gate defaults: every binder is declared at `widget_type` and
  // unannotated functions assume `widget_fn`.
  bool gate_defaults = false;
  TypePtr widget_type;
  TypePtr widget_fn;
};

// Total translation of a parsed program into the core calculus: dot access
// becomes bracket access, method calls carry an explicit this argument,
// plain calls pass the global object, &&/||/! become conditionals, and var
// declarations become scoped bindings (declarations nested under control
// flow are hoisted to their function's entry).
core::ExprPtr desugar_program(const surface::Program& p, const DesugarOptions& opts);

}  // namespace sandcheck
