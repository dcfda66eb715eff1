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
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "sandcheck/ast.h"
#include "sandcheck/subtype.h"
#include "sandcheck/types.h"

namespace sandcheck {

// Gamma: identifiers in scope at the top level, plus the alias table the
// subtype relation expands lazily.
struct TypeEnv {
  std::map<std::string, TypePtr> bindings;
  AliasTable aliases;

  TypePtr binding(const std::string& name) const {
    auto it = bindings.find(name);
    return it == bindings.end() ? nullptr : it->second;
  }
  TypePtr alias(const std::string& name) const { return aliases.lookup(name); }
};

// Sigma: store locations to types. Empty until a runtime store exists.
struct AbstractHeap {
  std::map<Loc, TypePtr> typing;

  TypePtr at(Loc l) const {
    auto it = typing.find(l);
    return it == typing.end() ? nullptr : it->second;
  }
};

struct EnvError : std::runtime_error {
  EnvError(int line_number, const std::string& msg) : std::runtime_error(msg), line(line_number) {}
  int line;
};

// The browser model: Widget and friends plus the window fragment. The whole
// environment is written in the env file format and parsed at first use.
std::pair<TypeEnv, AbstractHeap> builtin_env();

// The environment source text shipped with the binary.
const std::string& builtin_env_text();

// Merges declarations from an env file over `env`; later bindings shadow.
// Lines: `# comment`, `alias Name = TYPE`, `name : TYPE`. A declaration
// continues onto following lines until its brackets balance.
void load_env_text(TypeEnv& env, const std::string& text);

// builtin_env overlaid with the file at `path`.
std::pair<TypeEnv, AbstractHeap> load_env(const std::string& path);

// Alias names referenced anywhere in the environment but never defined.
std::vector<std::string> unresolved_aliases(const TypeEnv& env);

// Machine checks for the two safety corollaries, phrased over the type
// graph. Reachability follows covariant positions only (union members,
// present fields, star, proto, array elements, function results): those are
// the types of values obtainable *through* a Widget-typed view.
struct WalkReport {
  bool eval_guarded = true;   // reachable objects keep eval-like names banned
  bool html_confined = true;  // HTML unreachable once ___nodes___ is cut
  std::vector<std::string> violations;
};
WalkReport corollary_walks(const TypeEnv& env);

}  // namespace sandcheck
