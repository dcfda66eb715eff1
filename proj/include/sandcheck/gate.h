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

#include "sandcheck/checker.h"
#include "sandcheck/desugar.h"
#include "sandcheck/diag.h"
#include "sandcheck/env.h"
#include "sandcheck/parser.h"

namespace sandcheck {

// The lint replacement: a widget is admissible when every variable and
// subexpression types as Widget. Functions are implicitly typed
// [Widget | Global] Widget ... -> Widget, names that both start and end
// with an underscore are rejected outright, and annotations are not
// allowed in untrusted input.
CheckReport widget_check(const surface::Program& p, const TypeEnv& env,
                         const AbstractHeap& heap);

// Desugars with gate defaults (Widget-typed binders and allocation hints).
core::ExprPtr desugar_widget(const surface::Program& p, const TypeEnv& env);

// The lexical rule by itself: leading and trailing underscore.
bool underscore_name(const std::string& name);

}  // namespace sandcheck
