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

#include "sandcheck/strset.h"

namespace sandcheck {

struct Type;
using TypePtr = std::shared_ptr<const Type>;

enum class PrimKind { Num, Str, True, False, Undef, Null };

enum class TypeTag {
  Prim,
  StrSet,     // refinement of Str
  Ref,        // mutable object reference
  Func,       // [this] T1 * ... * Tn (* R ...)? -> T
  Union,
  Intersect,
  Array,      // Array<T>
  Top,
  Bot,
  Mu,         // rec a . T
  TypeVar,
  Named,      // alias resolved through the environment
  Forall,     // carried by the grammar, rejected by the checker
};

// A field slot in an object type: a payload type, banned (skull), or absent.
struct FieldPresence {
  enum class Kind { Present, Banned, Absent };
  Kind kind = Kind::Absent;
  TypePtr type;  // set iff kind == Present

  static FieldPresence present(TypePtr t) { return {Kind::Present, std::move(t)}; }
  static FieldPresence banned() { return {Kind::Banned, nullptr}; }
  static FieldPresence absent() { return {Kind::Absent, nullptr}; }
  bool is_present() const { return kind == Kind::Present; }
  bool is_banned() const { return kind == Kind::Banned; }
  bool is_absent() const { return kind == Kind::Absent; }
};

// { * : F, proto: T, code: T, f: F, ... }
// Keys "*", "proto" and "code" are structural, never entries of `named`.
struct ObjectType {
  FieldPresence star = FieldPresence::absent();
  TypePtr proto;                               // required
  TypePtr code;                                // null when not a function object
  std::map<std::string, FieldPresence> named;  // sorted for determinism
};

struct FuncType {
  TypePtr this_type;            // Top when the annotation omits it
  std::vector<TypePtr> fixed;
  TypePtr rest;                 // null when not variadic
  TypePtr result;
};

struct Type {
  TypeTag tag;
  PrimKind prim = PrimKind::Num;                // Prim
  StringSet sset;                               // StrSet
  std::shared_ptr<const ObjectType> obj;        // Ref
  std::shared_ptr<const FuncType> fn;           // Func
  std::vector<TypePtr> members;                 // Union / Intersect
  TypePtr inner;                                // Array elem, Mu/Forall body
  std::string name;                             // Mu/Forall var, TypeVar, Named
  uint64_t hash = 0;                            // structural, filled at build
};

// Constructors (raw; see canonicalize for normalization).
TypePtr t_prim(PrimKind k);
TypePtr t_num();
TypePtr t_str();
TypePtr t_true();
TypePtr t_false();
TypePtr t_undef();
TypePtr t_null();
TypePtr t_strset(StringSet s);
TypePtr t_ref(ObjectType o);
TypePtr t_func(FuncType f);
TypePtr t_union(std::vector<TypePtr> members);
TypePtr t_intersect(std::vector<TypePtr> members);
TypePtr t_array(TypePtr elem);
TypePtr t_top();
TypePtr t_bot();
TypePtr t_mu(std::string var, TypePtr body);
TypePtr t_typevar(std::string name);
TypePtr t_named(std::string name);
TypePtr t_forall(std::string var, TypePtr body);

// Total structural order; the basis for canonical member ordering, set keys
// and deterministic output.
int type_compare(const TypePtr& a, const TypePtr& b);
bool type_equal(const TypePtr& a, const TypePtr& b);

struct TypePtrLess {
  bool operator()(const TypePtr& a, const TypePtr& b) const {
    return type_compare(a, b) < 0;
  }
};

// Flattens nested unions/intersections, drops duplicates, removes Bot from
// unions and Top from intersections, collapses singletons. Idempotent.
TypePtr canonicalize(const TypePtr& t);

// Builds the canonical union of already-canonical parts.
TypePtr union_of(std::vector<TypePtr> parts);

// Substitutes a Mu binder with the whole Mu type. Requires t->tag == Mu.
TypePtr unroll(const TypePtr& t);

// Capture-respecting substitution of a type variable.
TypePtr substitute(const TypePtr& body, const std::string& var, const TypePtr& replacement);

// Free type variables present in t (Mu/Forall binders respected).
bool type_closed(const TypePtr& t);

// Canonical ASCII rendering; parse_type(print_type(t)) == canonicalize(t).
std::string print_type(const TypePtr& t);

inline bool is_prim(const TypePtr& t, PrimKind k) {
  return t->tag == TypeTag::Prim && t->prim == k;
}

}  // namespace sandcheck
