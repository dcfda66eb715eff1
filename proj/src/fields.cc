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

#include "sandcheck/fields.h"

#include <cctype>
#include <map>
#include <vector>

namespace sandcheck {

namespace {

bool all_digits(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

bool numeric_name_possible(const StringSet& s) {
  if (s.negative) return true;  // cofinite sets contain some numeral
  for (const auto& n : s.names) {
    if (all_digits(n)) return true;
  }
  return false;
}

StringSet positive_of_keys(const std::map<std::string, FieldPresence>& named,
                           bool skip_absent) {
  StringSet out;
  for (const auto& [k, f] : named) {
    if (skip_absent && f.is_absent()) continue;
    out.names.insert(k);
  }
  return out;
}

struct Acc {
  std::vector<TypePtr> parts;
  std::optional<std::string> banned;
  bool any_lookupable = false;
  bool tolerated = false;  // a runtime-error member (prim/null/undef lookup)
};

void fields_rec(const TypePtr& t, const StringSet& s, SubtypeCtx& ctx, Acc& acc, int depth);

void fields_object(const ObjectType& o, const StringSet& s, SubtypeCtx& ctx, Acc& acc,
                   int depth) {
  acc.any_lookupable = true;
  // banned fields reachable by S poison the lookup
  for (const auto& [name, f] : o.named) {
    if (f.is_banned() && sset_member(name, s)) {
      if (!acc.banned) acc.banned = name;
      return;
    }
  }
  StringSet s_star = sset_subtract(s, positive_of_keys(o.named, /*skip_absent=*/false));
  if (!s_star.is_empty() && o.star.is_banned()) {
    if (!acc.banned) acc.banned = "*";
    return;
  }

  for (const auto& [name, f] : o.named) {
    if (f.is_present() && sset_member(name, s)) acc.parts.push_back(f.type);
  }
  if (!s_star.is_empty() && o.star.is_present()) acc.parts.push_back(o.star.type);

  StringSet s_proto = sset_subtract(s, positive_of_keys(o.named, /*skip_absent=*/true));
  if (!s_proto.is_empty()) {
    TypePtr proto = ctx.resolve_head(o.proto);
    std::vector<TypePtr> proto_members =
        proto->tag == TypeTag::Union ? proto->members : std::vector<TypePtr>{proto};
    for (const auto& pm : proto_members) {
      TypePtr head = ctx.resolve_head(pm);
      if (head->tag == TypeTag::Prim && head->prim == PrimKind::Null) {
        acc.parts.push_back(t_undef());
        continue;
      }
      fields_rec(head, s_proto, ctx, acc, depth + 1);
      if (acc.banned) return;
    }
  }
}

void fields_rec(const TypePtr& t, const StringSet& s, SubtypeCtx& ctx, Acc& acc, int depth) {
  if (depth > 64) return;  // malformed proto cycles stop here
  TypePtr head = ctx.resolve_head(t);
  switch (head->tag) {
    case TypeTag::Union:
      for (const auto& m : head->members) {
        fields_rec(m, s, ctx, acc, depth + 1);
        if (acc.banned) return;
      }
      return;
    case TypeTag::Ref:
      fields_object(*head->obj, s, ctx, acc, depth);
      return;
    case TypeTag::Array: {
      acc.any_lookupable = true;
      if (sset_member("length", s)) acc.parts.push_back(t_num());
      if (numeric_name_possible(s)) {
        acc.parts.push_back(head->inner);
        acc.parts.push_back(t_undef());
      }
      StringSet rest = sset_subtract(s, StringSet::positive({"length"}));
      if (!rest.is_empty()) {
        fields_rec(t_named("Array"), rest, ctx, acc, depth + 1);
      }
      return;
    }
    case TypeTag::Bot:
      acc.any_lookupable = true;
      return;
    case TypeTag::Prim:
    case TypeTag::StrSet:
      // Looking up a field of a primitive (or null/undefined) halts at
      // runtime; the relaxed rules type it as bottom.
      acc.tolerated = true;
      return;
    default:
      return;
  }
}

}  // namespace

FieldsResult fields(const TypePtr& t, const StringSet& s, SubtypeCtx& ctx) {
  FieldsResult out;
  if (s.is_empty()) {
    out.type = t_bot();
    out.empty_lookup = true;
    return out;
  }
  Acc acc;
  fields_rec(t, s, ctx, acc, 0);
  if (acc.banned) {
    out.banned_name = acc.banned;
    return out;
  }
  if (!acc.any_lookupable) {
    if (acc.tolerated) {
      out.type = t_bot();  // the lookup can only halt
      return out;
    }
    out.error = "type has no object structure to look up in";
    return out;
  }
  out.type = union_of(std::move(acc.parts));
  out.empty_lookup = out.type->tag == TypeTag::Bot && !acc.tolerated;
  return out;
}

StringSet sset_union(const StringSet& a, const StringSet& b) {
  if (!a.negative && !b.negative) {
    StringSet out = a;
    out.names.insert(b.names.begin(), b.names.end());
    return out;
  }
  if (a.negative && b.negative) {
    // complement of the intersection of the complements
    StringSet out;
    out.negative = true;
    for (const auto& n : a.names) {
      if (b.names.count(n)) out.names.insert(n);
    }
    return out;
  }
  const StringSet& neg = a.negative ? a : b;
  const StringSet& pos = a.negative ? b : a;
  StringSet out;
  out.negative = true;
  for (const auto& n : neg.names) {
    if (!pos.names.count(n)) out.names.insert(n);
  }
  return out;
}

namespace {

void typeof_rec(const TypePtr& t, SubtypeCtx& ctx, std::set<std::string>& tags, bool& all,
                int depth) {
  if (depth > 64) {
    all = true;
    return;
  }
  TypePtr head = ctx.resolve_head(t);
  switch (head->tag) {
    case TypeTag::Prim:
      switch (head->prim) {
        case PrimKind::Num: tags.insert("number"); return;
        case PrimKind::Str: tags.insert("string"); return;
        case PrimKind::True:
        case PrimKind::False: tags.insert("boolean"); return;
        case PrimKind::Undef: tags.insert("undefined"); return;
        case PrimKind::Null: tags.insert("object"); return;
      }
      return;
    case TypeTag::StrSet:
      tags.insert("string");
      return;
    case TypeTag::Ref:
      tags.insert("object");
      if (head->obj->code) tags.insert("function");
      return;
    case TypeTag::Func:
      tags.insert("function");
      return;
    case TypeTag::Array:
      tags.insert("object");
      return;
    case TypeTag::Union:
    case TypeTag::Intersect:
      for (const auto& m : head->members) typeof_rec(m, ctx, tags, all, depth + 1);
      return;
    case TypeTag::Bot:
      return;
    default:
      all = true;  // Top and friends: anything
      return;
  }
}

}  // namespace

StringSet typeof_set(const TypePtr& t, SubtypeCtx& ctx) {
  std::set<std::string> tags;
  bool all = false;
  typeof_rec(t, ctx, tags, all, 0);
  if (all) return StringSet::all_strings();
  return StringSet::positive(std::move(tags));
}

}  // namespace sandcheck
