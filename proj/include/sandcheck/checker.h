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
#include <optional>
#include <string>
#include <vector>

#include "sandcheck/ast.h"
#include "sandcheck/diag.h"
#include "sandcheck/env.h"
#include "sandcheck/fields.h"
#include "sandcheck/subtype.h"

namespace sandcheck {

struct CheckOptions {
  // Widget-gate mode: every non-synthetic expression must type as Widget,
  // object and array literals are checked against Widget directly, and
  // unannotated functions assume the widget function type.
  bool gate_mode = false;
  // Mutation-testing hook: drops the banned/absent checks on field update.
  bool disable_update_ban = false;
};

class Checker {
 public:
  Checker(const TypeEnv& env, const AbstractHeap& heap, CheckOptions opts = {});

  // Synthesizes the type of a whole desugared unit with a fresh flow
  // environment. Errors land in report().
  TypePtr check_unit(const core::ExprPtr& e);

  CheckReport& report() { return report_; }
  const TypeEnv& env() const { return env_; }
  SubtypeCtx& subctx() { return sub_; }

  // Flow-sensitive narrowing of recognized conditions. Keys are identifier
  // names (runtime cells use an internal key). Unrecognized conditions
  // refine nothing.
  struct Refinement {
    std::map<std::string, TypePtr> then_narrow;
    std::map<std::string, TypePtr> else_narrow;
  };
  Refinement refine(const core::ExprPtr& cond,
                    const std::map<std::string, TypePtr>& types);

 private:
  Refinement refine_impl(const core::ExprPtr& cond,
                         const std::map<std::string, TypePtr>& types);

 public:

 private:
  struct Binding {
    TypePtr declared;  // null while inference is pending
    TypePtr flow;
    bool infer = false;
  };
  using Flow = std::map<std::string, Binding>;

  TypePtr check(const core::ExprPtr& e, Flow& flow);
  TypePtr check_node(const core::ExprPtr& e, Flow& flow);

  TypePtr check_object(const core::ExprPtr& e, Flow& flow);
  TypePtr check_array(const core::ExprPtr& e, Flow& flow);
  TypePtr check_func(const core::ExprPtr& e, Flow& flow);
  TypePtr check_get(const core::ExprPtr& e, Flow& flow);
  TypePtr check_set(const core::ExprPtr& e, Flow& flow);
  TypePtr check_del(const core::ExprPtr& e, Flow& flow);
  TypePtr check_app(const core::ExprPtr& e, Flow& flow);
  TypePtr check_if(const core::ExprPtr& e, Flow& flow);
  TypePtr check_while(const core::ExprPtr& e, Flow& flow);
  TypePtr check_binop(const core::ExprPtr& e, Flow& flow);

  TypePtr apply_arrow(const FuncType& fn, const TypePtr& this_t,
                      const std::vector<TypePtr>& args, Span sp);
  TypePtr apply_intersection(const std::vector<TypePtr>& arms, const TypePtr& this_t,
                             const std::vector<TypePtr>& args, Span sp);

  // Binding lookup that lazily materializes environment names into flow.
  Binding* find_binding(Flow& flow, const std::string& name);

  TypePtr value_type(const RtValue& v, Span sp);
  std::optional<StringSet> index_set(const TypePtr& idx_t);
  static bool numeric_possible(const StringSet& s);
  std::vector<TypePtr> union_members(const TypePtr& t);

  bool is_global_type(const TypePtr& t);
  std::map<std::string, TypePtr> flow_types(const Flow& flow) const;

  void sweep(const core::ExprPtr& e, const TypePtr& t);
  void diag(const char* code, Span sp, std::string msg) { report_.add(code, sp, std::move(msg)); }

  const TypeEnv& env_;
  const AbstractHeap& heap_;
  CheckOptions opts_;
  SubtypeCtx sub_;
  CheckReport report_;
  TypePtr widget_;          // null when the env lacks the alias
  TypePtr widget_fn_;
  TypePtr bool_t_;
};

struct Unit {
  std::string name;
  core::ExprPtr expr;
};

// Checks each unit independently and aggregates one deterministic report.
CheckReport check_program(const std::vector<Unit>& units, const TypeEnv& env,
                          const AbstractHeap& heap, CheckOptions opts = {});

}  // namespace sandcheck
