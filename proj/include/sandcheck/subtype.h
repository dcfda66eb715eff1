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
#include <set>
#include <utility>
#include <vector>

#include "sandcheck/types.h"

namespace sandcheck {

// Alias name -> definition. Aliases expand lazily during subtyping, so
// mutually recursive definitions are fine.
struct AliasTable {
  std::map<std::string, TypePtr> defs;

  TypePtr lookup(const std::string& name) const {
    auto it = defs.find(name);
    return it == defs.end() ? nullptr : it->second;
  }
};

// Decides t1 <: t2 for closed types. Recursive types are handled with an
// assumption set: a pair re-encountered while in progress is assumed to
// hold, and everything recorded under a failed branch is rolled back.
class SubtypeCtx {
 public:
  explicit SubtypeCtx(const AliasTable* aliases) : aliases_(aliases) {}

  bool subtype(const TypePtr& a, const TypePtr& b);

  // Expands alias and rec heads until some structural tag is on top.
  TypePtr resolve_head(const TypePtr& t);

 private:
  using Pair = std::pair<TypePtr, TypePtr>;
  struct PairLess {
    bool operator()(const Pair& x, const Pair& y) const {
      int c = type_compare(x.first, y.first);
      if (c) return c < 0;
      return type_compare(x.second, y.second) < 0;
    }
  };

  bool sub(const TypePtr& a, const TypePtr& b);
  bool dispatch(const TypePtr& a, const TypePtr& b);
  bool sub_object(const ObjectType& lo, const ObjectType& hi);
  bool sub_func(const FuncType& lo, const FuncType& hi);
  bool sub_func_as_object(const TypePtr& fn, const ObjectType& hi);

  size_t mark() const { return trail_.size(); }
  void rollback(size_t m);

  const AliasTable* aliases_;
  std::set<Pair, PairLess> assumed_;
  std::vector<Pair> trail_;
  std::map<Pair, bool, PairLess> memo_;  // completed root-level queries
};

inline bool subtype(const TypePtr& a, const TypePtr& b, const AliasTable& aliases) {
  SubtypeCtx ctx(&aliases);
  return ctx.subtype(a, b);
}

}  // namespace sandcheck
