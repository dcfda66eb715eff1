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

#include "sandcheck/subtype.h"

#include <functional>

namespace sandcheck {

namespace {

// Effective slot for a field name on the subtype side. `optional` marks
// slots derived from the star entry, which only promise "if present".
struct Slot {
  FieldPresence presence;
  bool optional;
};

Slot effective_slot(const ObjectType& o, const std::string& name) {
  auto it = o.named.find(name);
  if (it != o.named.end()) return {it->second, false};
  return {o.star, true};
}

}  // namespace

void SubtypeCtx::rollback(size_t m) {
  while (trail_.size() > m) {
    assumed_.erase(trail_.back());
    trail_.pop_back();
  }
}

TypePtr SubtypeCtx::resolve_head(const TypePtr& t) {
  TypePtr cur = t;
  std::set<std::string> seen;
  for (;;) {
    if (cur->tag == TypeTag::Named) {
      if (seen.count(cur->name)) return cur;  // alias cycle with no structure
      seen.insert(cur->name);
      TypePtr def = aliases_ ? aliases_->lookup(cur->name) : nullptr;
      if (!def) return cur;
      cur = def;
      continue;
    }
    if (cur->tag == TypeTag::Mu) {
      cur = unroll(cur);
      continue;
    }
    return cur;
  }
}

bool SubtypeCtx::subtype(const TypePtr& a, const TypePtr& b) {
  Pair key{a, b};
  auto it = memo_.find(key);
  if (it != memo_.end()) return it->second;
  bool ok = sub(a, b);
  if (trail_.empty()) memo_.emplace(std::move(key), ok);
  return ok;
}

bool SubtypeCtx::sub(const TypePtr& a, const TypePtr& b) {
  if (type_equal(a, b)) return true;
  if (a->tag == TypeTag::Bot) return true;
  if (b->tag == TypeTag::Top) return true;
  Pair key{a, b};
  if (assumed_.count(key)) return true;
  size_t m = mark();
  assumed_.insert(key);
  trail_.push_back(key);
  bool ok = dispatch(a, b);
  if (!ok) rollback(m);
  return ok;
}

bool SubtypeCtx::dispatch(const TypePtr& a, const TypePtr& b) {
  // Head normalization: aliases and rec types reveal their structure.
  if (a->tag == TypeTag::Named) {
    TypePtr def = aliases_ ? aliases_->lookup(a->name) : nullptr;
    return def ? sub(def, b) : false;
  }
  if (a->tag == TypeTag::Mu) return sub(unroll(a), b);
  if (b->tag == TypeTag::Named) {
    TypePtr def = aliases_ ? aliases_->lookup(b->name) : nullptr;
    return def ? sub(a, def) : false;
  }
  if (b->tag == TypeTag::Mu) return sub(a, unroll(b));

  // Union left and intersection right decompose universally; the
  // existential sides come after so they see fully decomposed goals.
  if (a->tag == TypeTag::Union) {
    for (const auto& mban : a->members) {
      if (!sub(mban, b)) return false;
    }
    return true;
  }
  if (b->tag == TypeTag::Intersect) {
    for (const auto& mban : b->members) {
      if (!sub(a, mban)) return false;
    }
    return true;
  }
  if (a->tag == TypeTag::Intersect) {
    for (const auto& mban : a->members) {
      size_t m = mark();
      if (sub(mban, b)) return true;
      rollback(m);
    }
    return false;
  }
  if (b->tag == TypeTag::Union) {
    for (const auto& mban : b->members) {
      size_t m = mark();
      if (sub(a, mban)) return true;
      rollback(m);
    }
    return false;
  }

  switch (a->tag) {
    case TypeTag::Prim:
      if (a->prim == PrimKind::Str && b->tag == TypeTag::StrSet) {
        return b->sset.is_all();  // Str <: ()-
      }
      return false;  // equal prims were handled up front
    case TypeTag::StrSet:
      if (b->tag == TypeTag::StrSet) return sset_subset(a->sset, b->sset);
      if (b->tag == TypeTag::Prim && b->prim == PrimKind::Str) return true;
      return false;
    case TypeTag::Array:
      return b->tag == TypeTag::Array && sub(a->inner, b->inner);
    case TypeTag::Ref:
      if (b->tag == TypeTag::Ref) return sub_object(*a->obj, *b->obj);
      if (b->tag == TypeTag::Func) {
        // A function object stands for its code.
        return a->obj->code ? sub(a->obj->code, b) : false;
      }
      return false;
    case TypeTag::Func:
      if (b->tag == TypeTag::Func) return sub_func(*a->fn, *b->fn);
      if (b->tag == TypeTag::Ref) return sub_func_as_object(a, *b->obj);
      return false;
    default:
      return false;
  }
}

// Field slot compatibility when the supertype names the field outright.
// A named Present field is a definite promise, so an optional or missing
// field on the subtype side must be coverable by Undef.
static bool slot_vs_named(const Slot& lo, const FieldPresence& hi,
                          const std::function<bool(const TypePtr&, const TypePtr&)>& rec) {
  switch (hi.kind) {
    case FieldPresence::Kind::Present:
      if (lo.presence.is_present()) {
        if (!rec(lo.presence.type, hi.type)) return false;
        if (lo.optional && !rec(t_undef(), hi.type)) return false;
        return true;
      }
      if (lo.presence.is_absent()) return rec(t_undef(), hi.type);
      return false;
    case FieldPresence::Kind::Banned:
      return lo.presence.is_banned() || lo.presence.is_absent();
    case FieldPresence::Kind::Absent:
      return lo.presence.is_absent() || lo.presence.is_banned();
  }
  return false;
}

// Slot compatibility against the supertype's star entry, which is an
// "if present" promise for every unnamed field.
static bool slot_vs_star(const Slot& lo, const FieldPresence& hi,
                         const std::function<bool(const TypePtr&, const TypePtr&)>& rec) {
  switch (hi.kind) {
    case FieldPresence::Kind::Present:
      if (lo.presence.is_present()) return rec(lo.presence.type, hi.type);
      return lo.presence.is_absent();
    case FieldPresence::Kind::Banned:
      return lo.presence.is_banned() || lo.presence.is_absent();
    case FieldPresence::Kind::Absent:
      return lo.presence.is_absent() || lo.presence.is_banned();
  }
  return false;
}

bool SubtypeCtx::sub_object(const ObjectType& lo, const ObjectType& hi) {
  auto rec = [this](const TypePtr& x, const TypePtr& y) { return sub(x, y); };

  if (!sub(lo.proto, hi.proto)) return false;
  // A supertype that demands code is satisfied by any object: applying a
  // value without code is a runtime error the relaxed rules tolerate. A
  // subtype that has code must refine the demand.
  if (hi.code && lo.code && !sub(lo.code, hi.code)) return false;

  for (const auto& [name, hip] : hi.named) {
    if (!slot_vs_named(effective_slot(lo, name), hip, rec)) return false;
  }
  for (const auto& [name, lop] : lo.named) {
    if (hi.named.count(name)) continue;
    if (!slot_vs_star({lop, false}, hi.star, rec)) return false;
  }
  return slot_vs_star({lo.star, true}, hi.star, rec);
}

bool SubtypeCtx::sub_func(const FuncType& lo, const FuncType& hi) {
  if (!sub(hi.this_type, lo.this_type)) return false;  // contravariant
  if (!sub(lo.result, hi.result)) return false;
  size_t n = lo.fixed.size();
  size_t m = hi.fixed.size();
  if (n > m) return false;  // callers through hi may pass only m arguments
  for (size_t i = 0; i < n; ++i) {
    if (!sub(hi.fixed[i], lo.fixed[i])) return false;
  }
  for (size_t i = n; i < m; ++i) {
    if (!lo.rest || !sub(hi.fixed[i], lo.rest)) return false;
  }
  if (hi.rest) {
    if (!lo.rest || !sub(hi.rest, lo.rest)) return false;
  }
  return true;
}

bool SubtypeCtx::sub_func_as_object(const TypePtr& fn, const ObjectType& hi) {
  auto rec = [this](const TypePtr& x, const TypePtr& y) { return sub(x, y); };
  if (!sub(t_named("Function"), hi.proto)) return false;
  if (hi.code && !sub(fn, hi.code)) return false;
  Slot absent{FieldPresence::absent(), false};
  for (const auto& [name, hip] : hi.named) {
    (void)name;
    if (!slot_vs_named(absent, hip, rec)) return false;
  }
  return slot_vs_star({FieldPresence::absent(), true}, hi.star, rec);
}

}  // namespace sandcheck
