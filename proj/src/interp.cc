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

#include "sandcheck/interp.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

#include "sandcheck/subtype.h"
#include "sandcheck/type_parser.h"

namespace sandcheck {

namespace {

using core::ConstVal;
using core::Expr;
using core::ExprKind;
using core::ExprPtr;

RtValue const_value(const ConstVal& c) {
  switch (c.kind) {
    case ConstVal::Kind::Num: return RtValue::number(c.num);
    case ConstVal::Kind::Str: return RtValue::string(c.str);
    case ConstVal::Kind::Bool: return RtValue::boolean(c.b);
    case ConstVal::Kind::Null: return RtValue::null();
    case ConstVal::Kind::Undef: return RtValue::undef();
  }
  return RtValue::undef();
}

std::optional<RtValue> value_of(const ExprPtr& e) {
  if (e->kind == ExprKind::Value) return e->rt;
  if (e->kind == ExprKind::Const) return const_value(e->cval);
  return std::nullopt;
}

bool truthy(const RtValue& v) {
  switch (v.kind) {
    case RtValue::Kind::Undef:
    case RtValue::Kind::Null:
      return false;
    case RtValue::Kind::Bool:
      return v.b;
    case RtValue::Kind::Num:
      return v.num != 0 && !std::isnan(v.num);
    case RtValue::Kind::Str:
      return !v.str.empty();
    case RtValue::Kind::Object:
      return true;
  }
  return false;
}

std::string num_to_name(double v) {
  if (std::floor(v) == v && std::abs(v) < 9007199254740992.0) {
    return std::to_string(static_cast<long long>(v));
  }
  std::ostringstream out;
  out << v;
  return out.str();
}

std::string num_to_display(double v) {
  if (std::isnan(v)) return "NaN";
  if (std::isinf(v)) return v > 0 ? "Infinity" : "-Infinity";
  return num_to_name(v);
}

// Substitution of identifiers with runtime cells, respecting shadowing.
ExprPtr subst(const ExprPtr& e, const std::map<std::string, Loc>& cells) {
  if (!e || cells.empty()) return e;
  switch (e->kind) {
    case ExprKind::Var: {
      auto it = cells.find(e->name);
      if (it == cells.end()) return e;
      Expr out;
      out.kind = ExprKind::GetCell;
      out.cell = it->second;
      out.span = e->span;
      out.synthetic = true;
      return make(std::move(out));
    }
    case ExprKind::SetVar: {
      auto it = cells.find(e->name);
      ExprPtr v = subst(e->a, cells);
      if (it == cells.end()) {
        if (v == e->a) return e;
        Expr out = *e;
        out.a = v;
        return make(std::move(out));
      }
      Expr out;
      out.kind = ExprKind::SetCell;
      out.cell = it->second;
      out.a = v;
      out.span = e->span;
      out.synthetic = true;
      return make(std::move(out));
    }
    case ExprKind::Let: {
      ExprPtr init = subst(e->a, cells);
      std::map<std::string, Loc> inner = cells;
      inner.erase(e->name);
      ExprPtr body = subst(e->b, inner);
      if (init == e->a && body == e->b) return e;
      Expr out = *e;
      out.a = init;
      out.b = body;
      return make(std::move(out));
    }
    case ExprKind::Func: {
      std::map<std::string, Loc> inner = cells;
      for (const auto& p : e->params) inner.erase(p);
      inner.erase("%this");
      ExprPtr body = subst(e->a, inner);
      if (body == e->a) return e;
      Expr out = *e;
      out.a = body;
      return make(std::move(out));
    }
    default: {
      Expr out = *e;
      bool changed = false;
      auto go = [&](ExprPtr& slot) {
        if (!slot) return;
        ExprPtr n = subst(slot, cells);
        if (n != slot) {
          slot = n;
          changed = true;
        }
      };
      go(out.a);
      go(out.b);
      go(out.c);
      for (auto& el : out.elems) {
        ExprPtr n = subst(el, cells);
        if (n != el) {
          el = n;
          changed = true;
        }
      }
      for (auto& [k, v] : out.fields) {
        (void)k;
        ExprPtr n = subst(v, cells);
        if (n != v) {
          v = n;
          changed = true;
        }
      }
      return changed ? make(std::move(out)) : e;
    }
  }
}

TypePtr widget_type() {
  static TypePtr t = t_named("Widget");
  return t;
}

}  // namespace

Loc Store::alloc_var(RtValue v, TypePtr declared) {
  Cell c;
  c.is_obj = false;
  c.value = std::move(v);
  c.declared = std::move(declared);
  cells.push_back(std::move(c));
  return static_cast<Loc>(cells.size());
}

Loc Store::alloc_obj(ObjCell o, TypePtr declared) {
  Cell c;
  c.is_obj = true;
  c.obj = std::move(o);
  c.declared = std::move(declared);
  cells.push_back(std::move(c));
  return static_cast<Loc>(cells.size());
}

namespace {

Loc native_fn(Store& st, const std::string& name, const std::string& type_src) {
  ObjCell o;
  o.proto = st.function_proto ? RtValue::object(st.function_proto) : RtValue::null();
  Code code;
  code.native = name;
  o.code = code;
  return st.alloc_obj(std::move(o), parse_type(type_src));
}

}  // namespace

Store make_builtin_store() {
  Store st;

  {
    ObjCell o;
    o.proto = RtValue::null();
    st.object_proto = st.alloc_obj(std::move(o), t_named("Object"));
  }
  {
    ObjCell o;
    o.proto = RtValue::object(st.object_proto);
    st.function_proto = st.alloc_obj(std::move(o), t_named("Function"));
  }
  Loc obj_to_string = native_fn(st, "Object.toString", "-> Str");
  st.at(st.object_proto).obj.fields["toString"] = RtValue::object(obj_to_string);

  auto proto_obj = [&](TypePtr declared) {
    ObjCell o;
    o.proto = RtValue::object(st.object_proto);
    return st.alloc_obj(std::move(o), std::move(declared));
  };
  st.array_proto = proto_obj(t_named("Array"));
  st.string_proto = proto_obj(t_named("String"));
  st.number_proto = proto_obj(t_named("Number"));
  st.boolean_proto = proto_obj(t_named("Boolean"));
  st.regexp_proto = proto_obj(t_named("RegExp"));

  const char* widget_method = "[Widget | Global] Widget ... -> Widget";
  Loc arr_concat = native_fn(st, "Array.concat", widget_method);
  Loc arr_join = native_fn(st, "Array.join", "[Widget | Global] Widget ... -> Str");
  Loc arr_push = native_fn(st, "Array.push", "[Widget | Global] Widget ... -> Num");
  Loc str_char_at = native_fn(st, "String.charAt", "[Widget | Global] Widget ... -> Str");
  Loc str_slice = native_fn(st, "String.slice", "[Widget | Global] Widget ... -> Str");
  Loc re_test = native_fn(st, "RegExp.test", "[Top] Str -> True | False");
  st.at(st.array_proto).obj.fields["concat"] = RtValue::object(arr_concat);
  st.at(st.array_proto).obj.fields["join"] = RtValue::object(arr_join);
  st.at(st.array_proto).obj.fields["push"] = RtValue::object(arr_push);
  st.at(st.string_proto).obj.fields["charAt"] = RtValue::object(str_char_at);
  st.at(st.string_proto).obj.fields["slice"] = RtValue::object(str_slice);
  st.at(st.regexp_proto).obj.fields["test"] = RtValue::object(re_test);

  {
    ObjCell o;
    o.proto = RtValue::object(st.object_proto);
    st.document = st.alloc_obj(std::move(o), t_named("Document"));
  }
  {
    ObjCell o;
    o.proto = RtValue::object(st.object_proto);
    st.global = st.alloc_obj(std::move(o), t_named("Global"));
  }
  // allocate every native before touching the owning cells: alloc_obj can
  // reallocate the cell vector
  Loc create_element =
      native_fn(st, "document.createElement", "[Top] (\"script\")- -> HTML");
  Loc create_text = native_fn(st, "document.createTextNode", "[Top] Str -> HTML");
  Loc doc_write = native_fn(st, "document.write", "-> Undef");
  Loc doc_writeln = native_fn(st, "document.writeln", "-> Undef");
  Loc win_eval = native_fn(st, "window.eval", "-> Undef");
  Loc win_set_timeout = native_fn(
      st, "setTimeout", "[Top] ([Global | Widget] Widget -> Widget) * Widget -> Num");
  Loc win_alert = native_fn(st, "alert", "[Global] Widget ... -> Undef");
  Loc win_gcs = native_fn(st, "getComputedStyle", "[Global] (HTML | Undef) -> Style");

  auto& doc = st.at(st.document).obj;
  doc.fields["createElement"] = RtValue::object(create_element);
  doc.fields["createTextNode"] = RtValue::object(create_text);
  doc.fields["write"] = RtValue::object(doc_write);
  doc.fields["writeln"] = RtValue::object(doc_writeln);
  doc.fields["defaultView"] = RtValue::object(st.global);

  auto& win = st.at(st.global).obj;
  win.fields["window"] = RtValue::object(st.global);
  win.fields["document"] = RtValue::object(st.document);
  win.fields["eval"] = RtValue::object(win_eval);
  win.fields["setTimeout"] = RtValue::object(win_set_timeout);
  win.fields["alert"] = RtValue::object(win_alert);
  win.fields["getComputedStyle"] = RtValue::object(win_gcs);

  {
    ObjCell o;
    o.proto = RtValue::object(st.regexp_proto);
    st.url_re = st.alloc_obj(std::move(o), parse_type("Ref {proto: RegExp, * : absent}"));
  }
  return st;
}

core::ExprPtr bind_globals(const core::ExprPtr& e, Store& st) {
  std::map<std::string, Loc> cells;
  auto bind_value = [&](const std::string& name, RtValue v, TypePtr t) {
    cells[name] = st.alloc_var(std::move(v), std::move(t));
  };
  auto widget_obj = [&]() {
    ObjCell o;
    o.proto = RtValue::object(st.object_proto);
    return RtValue::object(st.alloc_obj(std::move(o), widget_type()));
  };
  bind_value("window", RtValue::object(st.global), t_named("Global"));
  bind_value("%global", RtValue::object(st.global), t_named("Global"));
  bind_value("document", RtValue::object(st.document), t_named("Document"));
  bind_value("setTimeout", st.at(st.global).obj.fields["setTimeout"],
             parse_type("[Top] ([Global | Widget] Widget -> Widget) * Widget -> Num"));
  bind_value("url_re", RtValue::object(st.url_re),
             parse_type("Ref {proto: RegExp, * : absent}"));
  bind_value("ADSAFE", widget_obj(), widget_type());
  bind_value("dom", widget_obj(), widget_type());
  bind_value("lib", widget_obj(), widget_type());
  return subst(e, cells);
}

AbstractHeap heap_for(const Store& store) {
  AbstractHeap heap;
  for (size_t i = 0; i < store.cells.size(); ++i) {
    if (store.cells[i].declared) {
      heap.typing[static_cast<Loc>(i + 1)] = store.cells[i].declared;
    }
  }
  return heap;
}

namespace {

struct Stepper {
  Store& st;

  StepResult error(const char* kind, std::string msg) {
    StepResult r;
    r.kind = StepResult::Kind::Error;
    r.error = {kind, std::move(msg)};
    return r;
  }
  StepResult stuck(std::string why) {
    StepResult r;
    r.kind = StepResult::Kind::Stuck;
    r.stuck = std::move(why);
    return r;
  }
  StepResult next(ExprPtr e) {
    StepResult r;
    r.kind = StepResult::Kind::Stepped;
    r.next = std::move(e);
    return r;
  }
  StepResult value_step(RtValue v) { return next(core::c_value(std::move(v))); }

  static void rebuild(Expr& out, const ExprPtr& old_child, const ExprPtr& new_child) {
    auto fix = [&](ExprPtr& p) {
      if (p == old_child) p = new_child;
    };
    fix(out.a);
    fix(out.b);
    fix(out.c);
    for (auto& el : out.elems) fix(el);
    for (auto& [k, v] : out.fields) {
      (void)k;
      fix(v);
    }
  }

  // Reduces the leftmost non-value subexpression among the listed slots;
  // nullopt when they are all values.
  std::optional<StepResult> step_child(const ExprPtr& e,
                                       const std::vector<const ExprPtr*>& slots) {
    for (const ExprPtr* slot : slots) {
      if (!*slot || value_of(*slot)) continue;
      StepResult r = step_expr(*slot);
      if (r.kind != StepResult::Kind::Stepped) return r;
      Expr out = *e;
      rebuild(out, *slot, r.next);
      return next(make(std::move(out)));
    }
    return std::nullopt;
  }

  RtValue lookup_field(const RtValue& base, const std::string& name, bool& found) {
    found = false;
    if (base.kind == RtValue::Kind::Object) {
      Loc cur = base.loc;
      int guard = 0;
      while (cur && ++guard < 256) {
        const Cell& c = st.at(cur);
        if (!c.is_obj) break;
        auto it = c.obj.fields.find(name);
        if (it != c.obj.fields.end()) {
          found = true;
          return it->second;
        }
        if (c.obj.proto.kind != RtValue::Kind::Object) break;
        cur = c.obj.proto.loc;
      }
      return RtValue::undef();
    }
    if (base.kind == RtValue::Kind::Str) {
      if (name == "length") {
        found = true;
        return RtValue::number(static_cast<double>(base.str.size()));
      }
      return lookup_field(RtValue::object(st.string_proto), name, found);
    }
    if (base.kind == RtValue::Kind::Num) {
      return lookup_field(RtValue::object(st.number_proto), name, found);
    }
    if (base.kind == RtValue::Kind::Bool) {
      return lookup_field(RtValue::object(st.boolean_proto), name, found);
    }
    return RtValue::undef();
  }

  static std::optional<std::string> field_name(const RtValue& v) {
    if (v.kind == RtValue::Kind::Str) return v.str;
    if (v.kind == RtValue::Kind::Num) return num_to_name(v.num);
    return std::nullopt;
  }

  TypePtr value_declared(const RtValue& v) {
    switch (v.kind) {
      case RtValue::Kind::Undef: return t_undef();
      case RtValue::Kind::Null: return t_null();
      case RtValue::Kind::Bool: return v.b ? t_true() : t_false();
      case RtValue::Kind::Num: return t_num();
      case RtValue::Kind::Str: return t_strset(StringSet::singleton(v.str));
      case RtValue::Kind::Object: {
        TypePtr d = st.valid(v.loc) ? st.at(v.loc).declared : nullptr;
        return d ? d : t_top();
      }
    }
    return t_top();
  }

  StepResult step_expr(const ExprPtr& e);
  StepResult apply(const RtValue& callee, const RtValue& this_v,
                   const std::vector<RtValue>& args);
  StepResult native(const std::string& name, const RtValue& this_v,
                    const std::vector<RtValue>& args);
  Loc make_node(const std::string& tag_name);
};

StepResult Stepper::step_expr(const ExprPtr& e) {
  if (auto v = value_of(e)) {
    StepResult r;
    r.kind = StepResult::Kind::Done;
    r.value = *v;
    return r;
  }
  switch (e->kind) {
    case ExprKind::Var:
      return error(E_UNBOUND_RT, "unbound identifier '" + e->name + "'");
    case ExprKind::SetVar: {
      if (auto r = step_child(e, {&e->a})) return *r;
      return error(E_UNBOUND_RT, "assignment to unbound identifier '" + e->name + "'");
    }
    case ExprKind::GetCell: {
      const Cell& c = st.at(e->cell);
      if (c.is_obj) return value_step(RtValue::object(e->cell));
      return value_step(c.value);
    }
    case ExprKind::SetCell: {
      if (auto r = step_child(e, {&e->a})) return *r;
      RtValue v = *value_of(e->a);
      Cell& c = st.at(e->cell);
      if (c.is_obj) return stuck("assignment to an object cell");
      c.value = v;
      return value_step(std::move(v));
    }
    case ExprKind::Object: {
      for (const auto& [k, f] : e->fields) {
        (void)k;
        if (value_of(f)) continue;
        StepResult r = step_expr(f);
        if (r.kind != StepResult::Kind::Stepped) return r;
        Expr out = *e;
        rebuild(out, f, r.next);
        return next(make(std::move(out)));
      }
      ObjCell o;
      o.proto = RtValue::object(st.object_proto);
      for (const auto& [k, f] : e->fields) o.fields[k] = *value_of(f);
      Loc l = st.alloc_obj(std::move(o), e->hint);
      return value_step(RtValue::object(l));
    }
    case ExprKind::ArrayLit: {
      std::vector<const ExprPtr*> slots;
      for (const auto& el : e->elems) slots.push_back(&el);
      if (auto r = step_child(e, slots)) return *r;
      ObjCell o;
      o.proto = RtValue::object(st.array_proto);
      for (size_t i = 0; i < e->elems.size(); ++i) {
        o.fields[num_to_name(static_cast<double>(i))] = *value_of(e->elems[i]);
      }
      o.fields["length"] = RtValue::number(static_cast<double>(e->elems.size()));
      Loc l = st.alloc_obj(std::move(o), e->hint);
      return value_step(RtValue::object(l));
    }
    case ExprKind::Func: {
      auto cl = std::make_shared<Closure>();
      cl->params = e->params;
      cl->body = e->a;
      cl->arrow = e->ann ? e->ann->type : nullptr;
      cl->hint = e->hint;
      ObjCell o;
      o.proto = RtValue::object(st.function_proto);
      Code code;
      code.closure = std::move(cl);
      o.code = std::move(code);
      Loc l = st.alloc_obj(std::move(o), e->hint);
      return value_step(RtValue::object(l));
    }
    case ExprKind::GetField: {
      if (auto r = step_child(e, {&e->a, &e->b})) return *r;
      RtValue base = *value_of(e->a);
      RtValue idx = *value_of(e->b);
      if (base.kind == RtValue::Kind::Null || base.kind == RtValue::Kind::Undef) {
        return error(E_NULL_LOOKUP, "field access on " + show_value(st, base));
      }
      auto name = field_name(idx);
      if (!name) return error(E_TYPE, "field name must be a string");
      bool found = false;
      RtValue v = lookup_field(base, *name, found);
      return value_step(std::move(v));
    }
    case ExprKind::SetField: {
      if (auto r = step_child(e, {&e->a, &e->b, &e->c})) return *r;
      RtValue base = *value_of(e->a);
      RtValue idx = *value_of(e->b);
      RtValue val = *value_of(e->c);
      if (base.kind == RtValue::Kind::Null || base.kind == RtValue::Kind::Undef) {
        return error(E_NULL_LOOKUP, "field write on " + show_value(st, base));
      }
      auto name = field_name(idx);
      if (!name) return error(E_TYPE, "field name must be a string");
      if (base.kind == RtValue::Kind::Object) {
        Cell& c = st.at(base.loc);
        if (c.is_obj) {
          c.obj.fields[*name] = val;
          auto len = c.obj.fields.find("length");
          if (len != c.obj.fields.end() && len->second.kind == RtValue::Kind::Num &&
              !name->empty() &&
              name->find_first_not_of("0123456789") == std::string::npos) {
            double i = std::stod(*name);
            if (i + 1 > len->second.num) c.obj.fields["length"] = RtValue::number(i + 1);
          }
        }
      }
      // writes to primitives silently do nothing
      return value_step(std::move(val));
    }
    case ExprKind::DelField: {
      if (auto r = step_child(e, {&e->a, &e->b})) return *r;
      RtValue base = *value_of(e->a);
      RtValue idx = *value_of(e->b);
      auto name = field_name(idx);
      if (!name) return error(E_TYPE, "field name must be a string");
      bool removed = false;
      if (base.kind == RtValue::Kind::Object) {
        Cell& c = st.at(base.loc);
        if (c.is_obj) removed = c.obj.fields.erase(*name) > 0;
      }
      return value_step(RtValue::boolean(removed));
    }
    case ExprKind::App: {
      std::vector<const ExprPtr*> slots{&e->a, &e->b};
      for (const auto& a : e->elems) slots.push_back(&a);
      if (auto r = step_child(e, slots)) return *r;
      std::vector<RtValue> args;
      for (const auto& a : e->elems) args.push_back(*value_of(a));
      return apply(*value_of(e->a), *value_of(e->b), args);
    }
    case ExprKind::Let: {
      if (auto r = step_child(e, {&e->a})) return *r;
      RtValue v = *value_of(e->a);
      TypePtr declared = e->declared ? e->declared : value_declared(v);
      Loc l = st.alloc_var(std::move(v), std::move(declared));
      return next(subst(e->b, {{e->name, l}}));
    }
    case ExprKind::Seq: {
      if (auto r = step_child(e, {&e->a})) return *r;
      return next(e->b);
    }
    case ExprKind::If: {
      if (auto r = step_child(e, {&e->a})) return *r;
      return next(truthy(*value_of(e->a)) ? e->b : e->c);
    }
    case ExprKind::While: {
      Expr unrolled;
      unrolled.kind = ExprKind::If;
      unrolled.a = e->a;
      unrolled.b = core::c_seq(e->b, e, e->span);
      unrolled.c = core::c_value(RtValue::undef());
      unrolled.span = e->span;
      unrolled.synthetic = true;
      return next(make(std::move(unrolled)));
    }
    case ExprKind::TypeOf: {
      if (auto r = step_child(e, {&e->a})) return *r;
      RtValue v = *value_of(e->a);
      const char* tag = "undefined";
      switch (v.kind) {
        case RtValue::Kind::Undef: tag = "undefined"; break;
        case RtValue::Kind::Null: tag = "object"; break;
        case RtValue::Kind::Bool: tag = "boolean"; break;
        case RtValue::Kind::Num: tag = "number"; break;
        case RtValue::Kind::Str: tag = "string"; break;
        case RtValue::Kind::Object:
          tag = st.at(v.loc).is_obj && st.at(v.loc).obj.code ? "function" : "object";
          break;
      }
      return value_step(RtValue::string(tag));
    }
    case ExprKind::StrictEq: {
      if (auto r = step_child(e, {&e->a, &e->b})) return *r;
      const RtValue a = *value_of(e->a);
      const RtValue b = *value_of(e->b);
      bool eq = false;
      if (a.kind == b.kind) {
        switch (a.kind) {
          case RtValue::Kind::Undef:
          case RtValue::Kind::Null: eq = true; break;
          case RtValue::Kind::Bool: eq = a.b == b.b; break;
          case RtValue::Kind::Num: eq = a.num == b.num; break;
          case RtValue::Kind::Str: eq = a.str == b.str; break;
          case RtValue::Kind::Object: eq = a.loc == b.loc; break;
        }
      }
      return value_step(RtValue::boolean(eq));
    }
    case ExprKind::BinOp: {
      if (auto r = step_child(e, {&e->a, &e->b})) return *r;
      const RtValue a = *value_of(e->a);
      const RtValue b = *value_of(e->b);
      using core::BinOpKind;
      if (e->binop == BinOpKind::Add && a.kind == RtValue::Kind::Str &&
          b.kind == RtValue::Kind::Str) {
        return value_step(RtValue::string(a.str + b.str));
      }
      if (a.kind != RtValue::Kind::Num || b.kind != RtValue::Kind::Num) {
        return error(E_TYPE, "arithmetic on non-numbers");
      }
      switch (e->binop) {
        case BinOpKind::Add: return value_step(RtValue::number(a.num + b.num));
        case BinOpKind::Sub: return value_step(RtValue::number(a.num - b.num));
        case BinOpKind::Mul: return value_step(RtValue::number(a.num * b.num));
        case BinOpKind::Div: return value_step(RtValue::number(a.num / b.num));
        case BinOpKind::Mod: return value_step(RtValue::number(std::fmod(a.num, b.num)));
        case BinOpKind::Lt: return value_step(RtValue::boolean(a.num < b.num));
        case BinOpKind::Gt: return value_step(RtValue::boolean(a.num > b.num));
        case BinOpKind::Le: return value_step(RtValue::boolean(a.num <= b.num));
        case BinOpKind::Ge: return value_step(RtValue::boolean(a.num >= b.num));
      }
      return stuck("unknown binary operator");
    }
    case ExprKind::Throw: {
      if (auto r = step_child(e, {&e->a})) return *r;
      return error(E_THROW, show_value(st, *value_of(e->a)));
    }
    case ExprKind::Ascribe:
      return next(e->a);
    case ExprKind::Const:
    case ExprKind::Value:
      break;  // handled by value_of above
  }
  return stuck("no reduction rule applies");
}

StepResult Stepper::apply(const RtValue& callee, const RtValue& this_v,
                          const std::vector<RtValue>& args) {
  if (callee.kind != RtValue::Kind::Object) {
    return error(E_APPLY, "application of a non-function: " + show_value(st, callee));
  }
  const Cell& c = st.at(callee.loc);
  if (!c.is_obj || !c.obj.code) {
    return error(E_APPLY, "application of a non-function object");
  }
  if (!c.obj.code->native.empty()) return native(c.obj.code->native, this_v, args);

  // Extra arguments are dropped and missing ones read as undefined; the
  // static rules are stricter, so typed programs never rely on either.
  const Closure& cl = *c.obj.code->closure;
  const FuncType* fn = nullptr;
  if (cl.arrow && cl.arrow->tag == TypeTag::Func) fn = cl.arrow->fn.get();
  std::map<std::string, Loc> cells;
  for (size_t i = 0; i < cl.params.size(); ++i) {
    RtValue v = i < args.size() ? args[i] : RtValue::undef();
    TypePtr declared;
    if (fn) declared = i < fn->fixed.size() ? fn->fixed[i] : fn->rest;
    if (!declared) declared = value_declared(v);
    cells[cl.params[i]] = st.alloc_var(std::move(v), std::move(declared));
  }
  TypePtr this_declared = fn ? fn->this_type : value_declared(this_v);
  cells["%this"] = st.alloc_var(this_v, this_declared);
  return next(subst(cl.body, cells));
}

Loc Stepper::make_node(const std::string& tag_name) {
  Loc append_child =
      native_fn(st, "Element.appendChild", "[HTML | Undef] (HTML | Undef) -> Undef");
  Loc remove_child =
      native_fn(st, "Element.removeChild", "[HTML | Undef] (HTML | Undef) -> Undef");
  ObjCell o;
  o.proto = RtValue::null();
  o.fields["tagName"] = RtValue::string(tag_name);
  o.fields["value"] = RtValue::string("");
  o.fields["ownerDocument"] = RtValue::object(st.document);
  o.fields["appendChild"] = RtValue::object(append_child);
  o.fields["removeChild"] = RtValue::object(remove_child);
  return st.alloc_obj(std::move(o), t_named("HTML"));
}

StepResult Stepper::native(const std::string& name, const RtValue& this_v,
                           const std::vector<RtValue>& args) {
  auto arg = [&](size_t i) { return i < args.size() ? args[i] : RtValue::undef(); };
  if (name == "setTimeout") {
    st.effects.push_back("setTimeout(" + show_value(st, arg(0)) + ")");
    ++st.timer_count;
    return value_step(RtValue::number(st.timer_count));
  }
  if (name == "alert") {
    st.effects.push_back("alert(" + show_value(st, arg(0)) + ")");
    return value_step(RtValue::undef());
  }
  if (name == "window.eval" || name == "document.write" || name == "document.writeln") {
    st.effects.push_back(name + "(" + show_value(st, arg(0)) + ")");
    return value_step(RtValue::undef());
  }
  if (name == "document.createElement") {
    if (arg(0).kind != RtValue::Kind::Str) return error(E_TYPE, "createElement needs a string");
    st.effects.push_back("createElement(" + arg(0).str + ")");
    return value_step(RtValue::object(make_node(arg(0).str)));
  }
  if (name == "document.createTextNode") {
    if (arg(0).kind != RtValue::Kind::Str) return error(E_TYPE, "createTextNode needs a string");
    return value_step(RtValue::object(make_node("#text")));
  }
  if (name == "getComputedStyle") {
    ObjCell o;
    o.proto = RtValue::null();
    o.fields["color"] = RtValue::string("rgb(0, 0, 0)");
    Loc l = st.alloc_obj(std::move(o), t_named("Style"));
    return value_step(RtValue::object(l));
  }
  if (name == "Element.appendChild" || name == "Element.removeChild") {
    st.effects.push_back(name.substr(8) + "(" + show_value(st, arg(0)) + ")");
    return value_step(RtValue::undef());
  }
  if (name == "RegExp.test") {
    if (arg(0).kind != RtValue::Kind::Str) {
      return error(E_TYPE, "regular expression test needs a string");
    }
    std::string lower = arg(0).str;
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
    return value_step(RtValue::boolean(lower.find("url") != std::string::npos));
  }
  if (name == "Object.toString") {
    return value_step(RtValue::string("[object Object]"));
  }
  if (name == "Array.concat") {
    ObjCell o;
    o.proto = RtValue::object(st.array_proto);
    double n = 0;
    auto append = [&](const RtValue& v) {
      if (v.kind == RtValue::Kind::Object && st.at(v.loc).is_obj &&
          st.at(v.loc).obj.fields.count("length")) {
        const auto src = st.at(v.loc).obj;
        double len =
            src.fields.at("length").kind == RtValue::Kind::Num ? src.fields.at("length").num : 0;
        for (double i = 0; i < len; ++i) {
          auto it = src.fields.find(num_to_name(i));
          o.fields[num_to_name(n++)] = it == src.fields.end() ? RtValue::undef() : it->second;
        }
        return;
      }
      o.fields[num_to_name(n++)] = v;
    };
    append(this_v);
    for (const auto& a : args) append(a);
    o.fields["length"] = RtValue::number(n);
    Loc l = st.alloc_obj(std::move(o), widget_type());
    return value_step(RtValue::object(l));
  }
  if (name == "Array.join") {
    std::string sep = arg(0).kind == RtValue::Kind::Str ? arg(0).str : ",";
    std::string out;
    if (this_v.kind == RtValue::Kind::Object && st.at(this_v.loc).is_obj) {
      const auto& o = st.at(this_v.loc).obj;
      auto it = o.fields.find("length");
      double len =
          it != o.fields.end() && it->second.kind == RtValue::Kind::Num ? it->second.num : 0;
      for (double i = 0; i < len; ++i) {
        if (i > 0) out += sep;
        auto f = o.fields.find(num_to_name(i));
        if (f != o.fields.end()) out += show_value(st, f->second);
      }
    }
    return value_step(RtValue::string(out));
  }
  if (name == "Array.push") {
    if (this_v.kind != RtValue::Kind::Object || !st.at(this_v.loc).is_obj) {
      return error(E_TYPE, "push needs an array");
    }
    auto& o = st.at(this_v.loc).obj;
    double len = o.fields.count("length") && o.fields["length"].kind == RtValue::Kind::Num
                     ? o.fields["length"].num
                     : 0;
    for (const auto& a : args) o.fields[num_to_name(len++)] = a;
    o.fields["length"] = RtValue::number(len);
    return value_step(RtValue::number(len));
  }
  if (name == "String.charAt") {
    if (this_v.kind != RtValue::Kind::Str) return error(E_TYPE, "charAt needs a string");
    double i = arg(0).kind == RtValue::Kind::Num ? arg(0).num : 0;
    if (i < 0 || i >= static_cast<double>(this_v.str.size())) {
      return value_step(RtValue::string(""));
    }
    return value_step(RtValue::string(std::string(1, this_v.str[static_cast<size_t>(i)])));
  }
  if (name == "String.slice") {
    if (this_v.kind != RtValue::Kind::Str) return error(E_TYPE, "slice needs a string");
    double n = static_cast<double>(this_v.str.size());
    double start = arg(0).kind == RtValue::Kind::Num ? arg(0).num : 0;
    if (start < 0) start = std::max(0.0, n + start);
    if (start >= n) return value_step(RtValue::string(""));
    return value_step(RtValue::string(this_v.str.substr(static_cast<size_t>(start))));
  }
  return error(E_TYPE, "unknown native '" + name + "'");
}

}  // namespace

StepResult step(Store& store, const core::ExprPtr& e) {
  Stepper s{store};
  return s.step_expr(e);
}

Outcome eval_expr(Store& store, const core::ExprPtr& e, int fuel) {
  core::ExprPtr cur = e;
  for (int i = 0; i < fuel; ++i) {
    StepResult r = step(store, cur);
    switch (r.kind) {
      case StepResult::Kind::Done: {
        Outcome o;
        o.kind = Outcome::Kind::Value;
        o.value = r.value;
        return o;
      }
      case StepResult::Kind::Error: {
        Outcome o;
        o.kind = Outcome::Kind::Error;
        o.error = r.error;
        return o;
      }
      case StepResult::Kind::Stuck: {
        Outcome o;
        o.kind = Outcome::Kind::Stuck;
        o.stuck = r.stuck;
        return o;
      }
      case StepResult::Kind::Stepped:
        cur = r.next;
        break;
    }
  }
  Outcome o;
  o.kind = Outcome::Kind::Fuel;
  return o;
}

// --- store typing ------------------------------------------------------------

namespace {

TypePtr rt_value_type(const AbstractHeap& heap, const RtValue& v) {
  switch (v.kind) {
    case RtValue::Kind::Undef: return t_undef();
    case RtValue::Kind::Null: return t_null();
    case RtValue::Kind::Bool: return v.b ? t_true() : t_false();
    case RtValue::Kind::Num: return t_num();
    case RtValue::Kind::Str: return t_strset(StringSet::singleton(v.str));
    case RtValue::Kind::Object: return heap.at(v.loc);
  }
  return nullptr;
}

struct Conformance {
  const Store& store;
  const AbstractHeap& heap;
  SubtypeCtx& sub;

  bool value_ok(const RtValue& v, const TypePtr& t, std::string& why) {
    TypePtr vt = rt_value_type(heap, v);
    if (vt && sub.subtype(vt, t)) return true;
    if (v.kind == RtValue::Kind::Object && store.valid(v.loc) && store.at(v.loc).is_obj) {
      return cell_ok(store.at(v.loc).obj, t, why);
    }
    if (why.empty()) {
      why = "value " + show_value(store, v) + " does not type at " + print_type(t);
    }
    return false;
  }

  // Shallow structural check of one object record against a type.
  bool cell_ok(const ObjCell& o, const TypePtr& t, std::string& why) {
    TypePtr head = sub.resolve_head(t);
    std::vector<TypePtr> members =
        head->tag == TypeTag::Union ? head->members : std::vector<TypePtr>{head};
    for (const auto& raw : members) {
      TypePtr m = sub.resolve_head(raw);
      std::string local;
      if (m->tag == TypeTag::Func) {
        if (!o.code) continue;
        if (o.code->closure && o.code->closure->arrow) {
          if (sub.subtype(o.code->closure->arrow, m)) return true;
          continue;
        }
        return true;  // natives carry their arrow as the cell type
      }
      if (m->tag == TypeTag::Array && object_vs_array(o, m, local)) return true;
      if (m->tag == TypeTag::Ref && object_vs_ref(o, *m->obj, local)) return true;
      if (why.empty()) why = local;
    }
    if (why.empty()) why = "object does not conform to " + print_type(t);
    return false;
  }

  bool object_vs_array(const ObjCell& o, const TypePtr& arr, std::string& why) {
    for (const auto& [name, v] : o.fields) {
      if (name == "length") {
        if (v.kind != RtValue::Kind::Num) {
          why = "array length is not a number";
          return false;
        }
        continue;
      }
      if (name.find_first_not_of("0123456789") != std::string::npos || name.empty()) {
        why = "array carries a non-index field '" + name + "'";
        return false;
      }
      if (!value_ok(v, arr->inner, why)) return false;
    }
    if (o.proto.kind == RtValue::Kind::Object) {
      TypePtr pt = heap.at(o.proto.loc);
      if (!pt || !sub.subtype(pt, t_named("Array"))) {
        why = "array prototype is not Array";
        return false;
      }
    }
    return true;
  }

  bool object_vs_ref(const ObjCell& o, const ObjectType& ot, std::string& why) {
    TypePtr proto_t =
        o.proto.kind == RtValue::Kind::Object ? heap.at(o.proto.loc) : t_null();
    if (!proto_t || !sub.subtype(proto_t, ot.proto)) {
      why = "prototype does not conform to " + print_type(ot.proto);
      return false;
    }
    if (ot.code && o.code && o.code->closure && o.code->closure->arrow) {
      if (!sub.subtype(o.code->closure->arrow, ot.code)) {
        why = "closure arrow does not refine " + print_type(ot.code);
        return false;
      }
    }
    for (const auto& [name, req] : ot.named) {
      auto it = o.fields.find(name);
      switch (req.kind) {
        case FieldPresence::Kind::Banned:
          break;  // inaccessible through this view; presence is irrelevant
        case FieldPresence::Kind::Absent:
          if (it != o.fields.end()) {
            why = "field '" + name + "' must be absent";
            return false;
          }
          break;
        case FieldPresence::Kind::Present:
          if (it == o.fields.end()) {
            if (!sub.subtype(t_undef(), req.type)) {
              why = "missing field '" + name + "' cannot read as " + print_type(req.type);
              return false;
            }
          } else if (!value_ok(it->second, req.type, why)) {
            return false;
          }
          break;
      }
    }
    for (const auto& [name, v] : o.fields) {
      if (ot.named.count(name)) continue;
      switch (ot.star.kind) {
        case FieldPresence::Kind::Banned:
          break;
        case FieldPresence::Kind::Absent:
          why = "field '" + name + "' on an object typed with no extra fields";
          return false;
        case FieldPresence::Kind::Present:
          if (!value_ok(v, ot.star.type, why)) return false;
          break;
      }
    }
    return true;
  }
};

}  // namespace

StoreTypingResult store_typing_check(const Store& store, const AbstractHeap& heap,
                                     const TypeEnv& env) {
  SubtypeCtx sub(&env.aliases);
  Conformance conf{store, heap, sub};
  StoreTypingResult out;
  for (const auto& [loc, t] : heap.typing) {
    if (!store.valid(loc)) {
      out.ok = false;
      out.first_bad = loc;
      out.reason = "heap types a location the store does not have";
      return out;
    }
    const Cell& c = store.at(loc);
    std::string why;
    bool ok = c.is_obj ? conf.cell_ok(c.obj, t, why) : conf.value_ok(c.value, t, why);
    if (!ok) {
      out.ok = false;
      out.first_bad = loc;
      out.reason = why;
      return out;
    }
  }
  return out;
}

std::string show_value(const Store& store, const RtValue& v) {
  switch (v.kind) {
    case RtValue::Kind::Undef: return "undefined";
    case RtValue::Kind::Null: return "null";
    case RtValue::Kind::Bool: return v.b ? "true" : "false";
    case RtValue::Kind::Num: return num_to_display(v.num);
    case RtValue::Kind::Str: return "\"" + v.str + "\"";
    case RtValue::Kind::Object:
      if (store.valid(v.loc) && store.at(v.loc).is_obj && store.at(v.loc).obj.code) {
        return "[function]";
      }
      return "[object]";
  }
  return "?";
}

std::string show_outcome(const Store& store, const Outcome& o) {
  switch (o.kind) {
    case Outcome::Kind::Value: return "value: " + show_value(store, o.value);
    case Outcome::Kind::Error: return "error: " + o.error.kind + " " + o.error.message;
    case Outcome::Kind::Stuck: return "stuck: " + o.stuck;
    case Outcome::Kind::Fuel: return "fuel exhausted";
  }
  return "?";
}

}  // namespace sandcheck
