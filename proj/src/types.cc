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

#include "sandcheck/types.h"

#include <algorithm>
#include <cassert>
#include <sstream>

#include "sandcheck/span.h"

namespace sandcheck {

namespace {

uint64_t hash_combine(uint64_t h, uint64_t v) {
  h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  return h;
}

uint64_t hash_of(const Type& t) {
  uint64_t h = fnv1a(&t.tag, sizeof(t.tag));
  switch (t.tag) {
    case TypeTag::Prim:
      h = hash_combine(h, static_cast<uint64_t>(t.prim));
      break;
    case TypeTag::StrSet:
      h = hash_combine(h, t.sset.negative ? 1 : 2);
      for (const auto& n : t.sset.names) h = hash_combine(h, fnv1a(n));
      break;
    case TypeTag::Ref: {
      const auto& o = *t.obj;
      h = hash_combine(h, static_cast<uint64_t>(o.star.kind));
      if (o.star.is_present()) h = hash_combine(h, o.star.type->hash);
      h = hash_combine(h, o.proto->hash);
      h = hash_combine(h, o.code ? o.code->hash : 0);
      for (const auto& [k, f] : o.named) {
        h = hash_combine(h, fnv1a(k));
        h = hash_combine(h, static_cast<uint64_t>(f.kind));
        if (f.is_present()) h = hash_combine(h, f.type->hash);
      }
      break;
    }
    case TypeTag::Func: {
      const auto& f = *t.fn;
      h = hash_combine(h, f.this_type->hash);
      for (const auto& a : f.fixed) h = hash_combine(h, a->hash);
      h = hash_combine(h, f.rest ? f.rest->hash : 0);
      h = hash_combine(h, f.result->hash);
      break;
    }
    case TypeTag::Union:
    case TypeTag::Intersect:
      for (const auto& m : t.members) h = hash_combine(h, m->hash);
      break;
    case TypeTag::Array:
      h = hash_combine(h, t.inner->hash);
      break;
    case TypeTag::Top:
    case TypeTag::Bot:
      break;
    case TypeTag::Mu:
    case TypeTag::Forall:
      h = hash_combine(h, fnv1a(t.name));
      h = hash_combine(h, t.inner->hash);
      break;
    case TypeTag::TypeVar:
    case TypeTag::Named:
      h = hash_combine(h, fnv1a(t.name));
      break;
  }
  return h;
}

TypePtr finish(Type t) {
  t.hash = hash_of(t);
  return std::make_shared<const Type>(std::move(t));
}

}  // namespace

TypePtr t_prim(PrimKind k) {
  Type t;
  t.tag = TypeTag::Prim;
  t.prim = k;
  return finish(std::move(t));
}

TypePtr t_num() { static TypePtr v = t_prim(PrimKind::Num); return v; }
TypePtr t_str() { static TypePtr v = t_prim(PrimKind::Str); return v; }
TypePtr t_true() { static TypePtr v = t_prim(PrimKind::True); return v; }
TypePtr t_false() { static TypePtr v = t_prim(PrimKind::False); return v; }
TypePtr t_undef() { static TypePtr v = t_prim(PrimKind::Undef); return v; }
TypePtr t_null() { static TypePtr v = t_prim(PrimKind::Null); return v; }

TypePtr t_strset(StringSet s) {
  Type t;
  t.tag = TypeTag::StrSet;
  t.sset = std::move(s);
  return finish(std::move(t));
}

TypePtr t_ref(ObjectType o) {
  Type t;
  t.tag = TypeTag::Ref;
  t.obj = std::make_shared<const ObjectType>(std::move(o));
  return finish(std::move(t));
}

TypePtr t_func(FuncType f) {
  Type t;
  t.tag = TypeTag::Func;
  t.fn = std::make_shared<const FuncType>(std::move(f));
  return finish(std::move(t));
}

TypePtr t_union(std::vector<TypePtr> members) {
  Type t;
  t.tag = TypeTag::Union;
  t.members = std::move(members);
  return finish(std::move(t));
}

TypePtr t_intersect(std::vector<TypePtr> members) {
  Type t;
  t.tag = TypeTag::Intersect;
  t.members = std::move(members);
  return finish(std::move(t));
}

TypePtr t_array(TypePtr elem) {
  Type t;
  t.tag = TypeTag::Array;
  t.inner = std::move(elem);
  return finish(std::move(t));
}

TypePtr t_top() {
  static TypePtr v = [] { Type t; t.tag = TypeTag::Top; return finish(std::move(t)); }();
  return v;
}

TypePtr t_bot() {
  static TypePtr v = [] { Type t; t.tag = TypeTag::Bot; return finish(std::move(t)); }();
  return v;
}

TypePtr t_mu(std::string var, TypePtr body) {
  Type t;
  t.tag = TypeTag::Mu;
  t.name = std::move(var);
  t.inner = std::move(body);
  return finish(std::move(t));
}

TypePtr t_typevar(std::string name) {
  Type t;
  t.tag = TypeTag::TypeVar;
  t.name = std::move(name);
  return finish(std::move(t));
}

TypePtr t_named(std::string name) {
  Type t;
  t.tag = TypeTag::Named;
  t.name = std::move(name);
  return finish(std::move(t));
}

TypePtr t_forall(std::string var, TypePtr body) {
  Type t;
  t.tag = TypeTag::Forall;
  t.name = std::move(var);
  t.inner = std::move(body);
  return finish(std::move(t));
}

namespace {

int cmp(int a, int b) { return a < b ? -1 : (a > b ? 1 : 0); }

int presence_compare(const FieldPresence& a, const FieldPresence& b) {
  if (int c = cmp(static_cast<int>(a.kind), static_cast<int>(b.kind))) return c;
  if (a.is_present()) return type_compare(a.type, b.type);
  return 0;
}

}  // namespace

int type_compare(const TypePtr& a, const TypePtr& b) {
  if (a.get() == b.get()) return 0;
  if (int c = cmp(static_cast<int>(a->tag), static_cast<int>(b->tag))) return c;
  switch (a->tag) {
    case TypeTag::Prim:
      return cmp(static_cast<int>(a->prim), static_cast<int>(b->prim));
    case TypeTag::StrSet: {
      if (int c = cmp(a->sset.negative ? 1 : 0, b->sset.negative ? 1 : 0)) return c;
      if (a->sset.names < b->sset.names) return -1;
      if (b->sset.names < a->sset.names) return 1;
      return 0;
    }
    case TypeTag::Ref: {
      const auto& x = *a->obj;
      const auto& y = *b->obj;
      if (int c = presence_compare(x.star, y.star)) return c;
      if (int c = type_compare(x.proto, y.proto)) return c;
      if (int c = cmp(x.code ? 1 : 0, y.code ? 1 : 0)) return c;
      if (x.code) {
        if (int c = type_compare(x.code, y.code)) return c;
      }
      auto i = x.named.begin();
      auto j = y.named.begin();
      for (; i != x.named.end() && j != y.named.end(); ++i, ++j) {
        if (int c = i->first.compare(j->first)) return c < 0 ? -1 : 1;
        if (int c = presence_compare(i->second, j->second)) return c;
      }
      if (i != x.named.end()) return 1;
      if (j != y.named.end()) return -1;
      return 0;
    }
    case TypeTag::Func: {
      const auto& x = *a->fn;
      const auto& y = *b->fn;
      if (int c = type_compare(x.this_type, y.this_type)) return c;
      if (int c = cmp(static_cast<int>(x.fixed.size()), static_cast<int>(y.fixed.size())))
        return c;
      for (size_t i = 0; i < x.fixed.size(); ++i) {
        if (int c = type_compare(x.fixed[i], y.fixed[i])) return c;
      }
      if (int c = cmp(x.rest ? 1 : 0, y.rest ? 1 : 0)) return c;
      if (x.rest) {
        if (int c = type_compare(x.rest, y.rest)) return c;
      }
      return type_compare(x.result, y.result);
    }
    case TypeTag::Union:
    case TypeTag::Intersect: {
      if (int c = cmp(static_cast<int>(a->members.size()), static_cast<int>(b->members.size())))
        return c;
      for (size_t i = 0; i < a->members.size(); ++i) {
        if (int c = type_compare(a->members[i], b->members[i])) return c;
      }
      return 0;
    }
    case TypeTag::Array:
      return type_compare(a->inner, b->inner);
    case TypeTag::Top:
    case TypeTag::Bot:
      return 0;
    case TypeTag::Mu:
    case TypeTag::Forall: {
      if (int c = a->name.compare(b->name)) return c < 0 ? -1 : 1;
      return type_compare(a->inner, b->inner);
    }
    case TypeTag::TypeVar:
    case TypeTag::Named: {
      int c = a->name.compare(b->name);
      return c < 0 ? -1 : (c > 0 ? 1 : 0);
    }
  }
  return 0;
}

bool type_equal(const TypePtr& a, const TypePtr& b) {
  if (a.get() == b.get()) return true;
  if (a->hash != b->hash) return false;
  return type_compare(a, b) == 0;
}

TypePtr canonicalize(const TypePtr& t) {
  switch (t->tag) {
    case TypeTag::Prim:
    case TypeTag::StrSet:
    case TypeTag::Top:
    case TypeTag::Bot:
    case TypeTag::TypeVar:
    case TypeTag::Named:
      return t;
    case TypeTag::Array:
      return t_array(canonicalize(t->inner));
    case TypeTag::Mu:
      return t_mu(t->name, canonicalize(t->inner));
    case TypeTag::Forall:
      return t_forall(t->name, canonicalize(t->inner));
    case TypeTag::Ref: {
      ObjectType o;
      const auto& src = *t->obj;
      o.star = src.star.is_present() ? FieldPresence::present(canonicalize(src.star.type))
                                     : src.star;
      o.proto = canonicalize(src.proto);
      o.code = src.code ? canonicalize(src.code) : nullptr;
      for (const auto& [k, f] : src.named) {
        o.named.emplace(k, f.is_present() ? FieldPresence::present(canonicalize(f.type)) : f);
      }
      return t_ref(std::move(o));
    }
    case TypeTag::Func: {
      FuncType f;
      const auto& src = *t->fn;
      f.this_type = canonicalize(src.this_type);
      for (const auto& a : src.fixed) f.fixed.push_back(canonicalize(a));
      f.rest = src.rest ? canonicalize(src.rest) : nullptr;
      f.result = canonicalize(src.result);
      return t_func(std::move(f));
    }
    case TypeTag::Union:
    case TypeTag::Intersect: {
      bool is_union = t->tag == TypeTag::Union;
      std::vector<TypePtr> flat;
      // Flatten same-tag nesting after canonicalizing children.
      std::vector<TypePtr> work(t->members.rbegin(), t->members.rend());
      while (!work.empty()) {
        TypePtr m = canonicalize(work.back());
        work.pop_back();
        if (m->tag == t->tag) {
          for (auto it = m->members.rbegin(); it != m->members.rend(); ++it) work.push_back(*it);
          continue;
        }
        if (is_union && m->tag == TypeTag::Bot) continue;
        if (!is_union && m->tag == TypeTag::Top) continue;
        if (is_union && m->tag == TypeTag::Top) return t_top();
        flat.push_back(std::move(m));
      }
      std::sort(flat.begin(), flat.end(),
                [](const TypePtr& a, const TypePtr& b) { return type_compare(a, b) < 0; });
      flat.erase(std::unique(flat.begin(), flat.end(),
                             [](const TypePtr& a, const TypePtr& b) { return type_equal(a, b); }),
                 flat.end());
      if (flat.empty()) return is_union ? t_bot() : t_top();
      if (flat.size() == 1) return flat[0];
      return is_union ? t_union(std::move(flat)) : t_intersect(std::move(flat));
    }
  }
  return t;
}

TypePtr union_of(std::vector<TypePtr> parts) {
  return canonicalize(t_union(std::move(parts)));
}

TypePtr substitute(const TypePtr& body, const std::string& var, const TypePtr& replacement) {
  switch (body->tag) {
    case TypeTag::TypeVar:
      return body->name == var ? replacement : body;
    case TypeTag::Prim:
    case TypeTag::StrSet:
    case TypeTag::Top:
    case TypeTag::Bot:
    case TypeTag::Named:
      return body;
    case TypeTag::Array:
      return t_array(substitute(body->inner, var, replacement));
    case TypeTag::Mu:
    case TypeTag::Forall: {
      if (body->name == var) return body;  // shadowed
      TypePtr sub = substitute(body->inner, var, replacement);
      return body->tag == TypeTag::Mu ? t_mu(body->name, sub) : t_forall(body->name, sub);
    }
    case TypeTag::Ref: {
      ObjectType o;
      const auto& src = *body->obj;
      o.star = src.star.is_present()
                   ? FieldPresence::present(substitute(src.star.type, var, replacement))
                   : src.star;
      o.proto = substitute(src.proto, var, replacement);
      o.code = src.code ? substitute(src.code, var, replacement) : nullptr;
      for (const auto& [k, f] : src.named) {
        o.named.emplace(k, f.is_present()
                               ? FieldPresence::present(substitute(f.type, var, replacement))
                               : f);
      }
      return t_ref(std::move(o));
    }
    case TypeTag::Func: {
      FuncType f;
      const auto& src = *body->fn;
      f.this_type = substitute(src.this_type, var, replacement);
      for (const auto& a : src.fixed) f.fixed.push_back(substitute(a, var, replacement));
      f.rest = src.rest ? substitute(src.rest, var, replacement) : nullptr;
      f.result = substitute(src.result, var, replacement);
      return t_func(std::move(f));
    }
    case TypeTag::Union:
    case TypeTag::Intersect: {
      std::vector<TypePtr> ms;
      for (const auto& m : body->members) ms.push_back(substitute(m, var, replacement));
      return body->tag == TypeTag::Union ? t_union(std::move(ms)) : t_intersect(std::move(ms));
    }
  }
  return body;
}

TypePtr unroll(const TypePtr& t) {
  assert(t->tag == TypeTag::Mu);
  return substitute(t->inner, t->name, t);
}

namespace {

bool closed_rec(const TypePtr& t, std::vector<std::string>& bound) {
  switch (t->tag) {
    case TypeTag::TypeVar:
      return std::find(bound.begin(), bound.end(), t->name) != bound.end();
    case TypeTag::Prim:
    case TypeTag::StrSet:
    case TypeTag::Top:
    case TypeTag::Bot:
    case TypeTag::Named:
      return true;
    case TypeTag::Array:
      return closed_rec(t->inner, bound);
    case TypeTag::Mu:
    case TypeTag::Forall: {
      bound.push_back(t->name);
      bool ok = closed_rec(t->inner, bound);
      bound.pop_back();
      return ok;
    }
    case TypeTag::Ref: {
      const auto& o = *t->obj;
      if (o.star.is_present() && !closed_rec(o.star.type, bound)) return false;
      if (!closed_rec(o.proto, bound)) return false;
      if (o.code && !closed_rec(o.code, bound)) return false;
      for (const auto& [k, f] : o.named) {
        (void)k;
        if (f.is_present() && !closed_rec(f.type, bound)) return false;
      }
      return true;
    }
    case TypeTag::Func: {
      const auto& f = *t->fn;
      if (!closed_rec(f.this_type, bound)) return false;
      for (const auto& a : f.fixed) {
        if (!closed_rec(a, bound)) return false;
      }
      if (f.rest && !closed_rec(f.rest, bound)) return false;
      return closed_rec(f.result, bound);
    }
    case TypeTag::Union:
    case TypeTag::Intersect:
      for (const auto& m : t->members) {
        if (!closed_rec(m, bound)) return false;
      }
      return true;
  }
  return true;
}

}  // namespace

bool type_closed(const TypePtr& t) {
  std::vector<std::string> bound;
  return closed_rec(t, bound);
}

namespace {

void quote_string(std::ostringstream& out, const std::string& s) {
  out << '"';
  for (char c : s) {
    if (c == '"' || c == '\\') out << '\\';
    out << c;
  }
  out << '"';
}

const char* prim_name(PrimKind k) {
  switch (k) {
    case PrimKind::Num: return "Num";
    case PrimKind::Str: return "Str";
    case PrimKind::True: return "True";
    case PrimKind::False: return "False";
    case PrimKind::Undef: return "Undef";
    case PrimKind::Null: return "Null";
  }
  return "?";
}

void print_rec(std::ostringstream& out, const TypePtr& t, int parent_level);

void print_presence(std::ostringstream& out, const FieldPresence& f) {
  switch (f.kind) {
    case FieldPresence::Kind::Present:
      print_rec(out, f.type, 0);
      break;
    case FieldPresence::Kind::Banned:
      out << "banned";
      break;
    case FieldPresence::Kind::Absent:
      out << "absent";
      break;
  }
}

// parent_level: 0 = top (arrows, mu ok), 1 = union member, 2 = intersect member.
void print_rec(std::ostringstream& out, const TypePtr& t, int parent_level) {
  switch (t->tag) {
    case TypeTag::Prim:
      out << prim_name(t->prim);
      return;
    case TypeTag::StrSet:
      out << sset_to_string(t->sset);
      return;
    case TypeTag::Top:
      out << "Top";
      return;
    case TypeTag::Bot:
      out << "Bot";
      return;
    case TypeTag::TypeVar:
    case TypeTag::Named:
      out << t->name;
      return;
    case TypeTag::Array: {
      std::ostringstream inner;
      print_rec(inner, t->inner, 0);
      std::string s = inner.str();
      // a trailing '-' would fuse with '>' into an arrow token
      out << "Array<" << s << (!s.empty() && s.back() == '-' ? " >" : ">");
      return;
    }
    case TypeTag::Mu:
    case TypeTag::Forall: {
      bool paren = parent_level > 0;
      if (paren) out << "(";
      out << (t->tag == TypeTag::Mu ? "rec " : "forall ") << t->name << " . ";
      print_rec(out, t->inner, 0);
      if (paren) out << ")";
      return;
    }
    case TypeTag::Union: {
      bool paren = parent_level > 1;
      if (paren) out << "(";
      for (size_t i = 0; i < t->members.size(); ++i) {
        if (i) out << " | ";
        print_rec(out, t->members[i], 1);
      }
      if (paren) out << ")";
      return;
    }
    case TypeTag::Intersect: {
      for (size_t i = 0; i < t->members.size(); ++i) {
        if (i) out << " & ";
        print_rec(out, t->members[i], 2);
      }
      return;
    }
    case TypeTag::Ref: {
      const auto& o = *t->obj;
      out << "Ref {proto: ";
      print_rec(out, o.proto, 0);
      if (o.code) {
        out << ", code: ";
        print_rec(out, o.code, 0);
      }
      if (!o.star.is_absent()) {
        out << ", * : ";
        print_presence(out, o.star);
      }
      for (const auto& [k, f] : o.named) {
        out << ", ";
        quote_string(out, k);
        out << ": ";
        print_presence(out, f);
      }
      out << "}";
      return;
    }
    case TypeTag::Func: {
      bool paren = parent_level > 0;
      if (paren) out << "(";
      const auto& f = *t->fn;
      if (f.this_type->tag != TypeTag::Top) {
        out << "[";
        print_rec(out, f.this_type, 0);
        out << "] ";
      }
      bool first = true;
      for (const auto& a : f.fixed) {
        if (!first) out << " * ";
        print_rec(out, a, 1);
        first = false;
      }
      if (f.rest) {
        if (!first) out << " * ";
        print_rec(out, f.rest, 1);
        out << " ...";
        first = false;
      }
      if (!first) out << " ";
      out << "-> ";
      print_rec(out, f.result, 1);
      if (paren) out << ")";
      return;
    }
  }
}

}  // namespace

std::string sset_to_string(const StringSet& s) {
  std::ostringstream out;
  out << "(";
  bool first = true;
  for (const auto& n : s.names) {
    if (!first) out << ", ";
    quote_string(out, n);
    first = false;
  }
  out << ")" << (s.negative ? "-" : "+");
  return out.str();
}

std::string print_type(const TypePtr& t) {
  std::ostringstream out;
  print_rec(out, t, 0);
  return out.str();
}

}  // namespace sandcheck
