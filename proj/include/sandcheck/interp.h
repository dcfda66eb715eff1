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

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "sandcheck/ast.h"
#include "sandcheck/env.h"

namespace sandcheck {

// Runtime error kinds.
inline constexpr const char* E_APPLY = "E_APPLY";
inline constexpr const char* E_NULL_LOOKUP = "E_NULL_LOOKUP";
inline constexpr const char* E_THROW = "E_THROW";
inline constexpr const char* E_TYPE = "E_TYPE";
inline constexpr const char* E_UNBOUND_RT = "E_UNBOUND_RT";

struct RuntimeError {
  std::string kind;
  std::string message;
};

struct Outcome {
  enum class Kind { Value, Error, Stuck, Fuel };
  Kind kind = Kind::Value;
  RtValue value;
  RuntimeError error;
  std::string stuck;

  bool is_value() const { return kind == Kind::Value; }
};

struct Closure {
  std::vector<std::string> params;
  core::ExprPtr body;   // outer bindings already substituted with cells
  TypePtr arrow;        // annotation, when the source carried one
  TypePtr hint;         // allocation hint for the heap typing
};

struct Code {
  std::shared_ptr<const Closure> closure;  // set for source functions
  std::string native;                      // set for builtins
};

struct ObjCell {
  RtValue proto;  // Null or an object reference
  std::map<std::string, RtValue> fields;
  std::optional<Code> code;
};

struct Cell {
  bool is_obj = false;
  RtValue value;    // var cell payload
  ObjCell obj;      // object payload
  TypePtr declared; // heap typing for this location; null = untyped
};

struct Store {
  std::vector<Cell> cells;            // location = index + 1
  std::vector<std::string> effects;   // observable native calls, in order
  int timer_count = 0;

  // builtin locations, fixed at construction
  Loc global = 0, object_proto = 0, array_proto = 0, function_proto = 0,
      string_proto = 0, number_proto = 0, boolean_proto = 0, regexp_proto = 0,
      document = 0, url_re = 0;

  Loc alloc_var(RtValue v, TypePtr declared);
  Loc alloc_obj(ObjCell o, TypePtr declared);
  Cell& at(Loc l) { return cells[l - 1]; }
  const Cell& at(Loc l) const { return cells[l - 1]; }
  bool valid(Loc l) const { return l >= 1 && l <= cells.size(); }
  Loc next_loc() const { return static_cast<Loc>(cells.size()) + 1; }
};

// The browser model's runtime half: window, document, the safe prototypes
// and their native methods, matching the types in the builtin environment.
Store make_builtin_store();

// Replaces free references to the builtin globals with their cells,
// allocating facade objects for the names widgets may touch.
core::ExprPtr bind_globals(const core::ExprPtr& e, Store& store);

// Sigma for the current store: every typed location's declared type.
AbstractHeap heap_for(const Store& store);

struct StepResult {
  enum class Kind { Stepped, Done, Error, Stuck };
  Kind kind = Kind::Stepped;
  core::ExprPtr next;
  RtValue value;
  RuntimeError error;
  std::string stuck;
};

// One deterministic leftmost-innermost reduction step.
StepResult step(Store& store, const core::ExprPtr& e);

// Iterated step with a fuel bound.
Outcome eval_expr(Store& store, const core::ExprPtr& e, int fuel);

// Checks that every typed location's contents conform to its heap entry.
struct StoreTypingResult {
  bool ok = true;
  Loc first_bad = 0;
  std::string reason;
};
StoreTypingResult store_typing_check(const Store& store, const AbstractHeap& heap,
                                     const TypeEnv& env);

std::string show_value(const Store& store, const RtValue& v);
std::string show_outcome(const Store& store, const Outcome& o);

}  // namespace sandcheck
