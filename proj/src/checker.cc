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

#include "sandcheck/checker.h"

#include <algorithm>
#include <cassert>

namespace sandcheck {

namespace {

using core::ExprKind;
using core::ExprPtr;

std::string cell_key(Loc l) { return "%cell%" + std::to_string(l); }

bool is_undef_const(const ExprPtr& e) {
  return e && e->kind == ExprKind::Const && e->cval.kind == core::ConstVal::Kind::Undef;
}

// The identifier (or cell) a refinement could narrow.
std::optional<std::string> narrow_key(const ExprPtr& e) {
  if (!e) return std::nullopt;
  if (e->kind == ExprKind::Var) return e->name;
  if (e->kind == ExprKind::GetCell) return cell_key(e->cell);
  return std::nullopt;
}

void collect_assigned(const ExprPtr& e, std::set<std::string>& out) {
  core::walk(e, [&](const ExprPtr& n) {
    if (n->kind == ExprKind::SetVar) out.insert(n->name);
    if (n->kind == ExprKind::SetCell) out.insert(cell_key(n->cell));
  });
}

bool contains_forall(const TypePtr& t) {
  if (t->tag == TypeTag::Forall) return true;
  bool found = false;
  switch (t->tag) {
    case TypeTag::Array:
    case TypeTag::Mu:
      return contains_forall(t->inner);
    case TypeTag::Union:
    case TypeTag::Intersect:
      for (const auto& m : t->members) found = found || contains_forall(m);
      return found;
    case TypeTag::Ref: {
      const auto& o = *t->obj;
      if (o.star.is_present() && contains_forall(o.star.type)) return true;
      if (contains_forall(o.proto)) return true;
      if (o.code && contains_forall(o.code)) return true;
      for (const auto& [k, f] : o.named) {
        (void)k;
        if (f.is_present() && contains_forall(f.type)) return true;
      }
      return false;
    }
    case TypeTag::Func: {
      const auto& f = *t->fn;
      if (contains_forall(f.this_type) || contains_forall(f.result)) return true;
      for (const auto& a : f.fixed) {
        if (contains_forall(a)) return true;
      }
      return f.rest && contains_forall(f.rest);
    }
    default:
      return false;
  }
}

}  // namespace

Checker::Checker(const TypeEnv& env, const AbstractHeap& heap, CheckOptions opts)
    : env_(env), heap_(heap), opts_(opts), sub_(&env.aliases) {
  widget_ = env.alias("Widget") ? t_named("Widget") : nullptr;
  bool_t_ = union_of({t_true(), t_false()});
  if (widget_) {
    FuncType f;
    f.this_type = union_of({t_named("Global"), t_named("Widget")});
    f.rest = t_named("Widget");
    f.result = t_named("Widget");
    widget_fn_ = t_func(std::move(f));
  }
}

TypePtr Checker::check_unit(const core::ExprPtr& e) {
  Flow flow;
  return check(e, flow);
}

void Checker::sweep(const core::ExprPtr& e, const TypePtr& t) {
  if (!opts_.gate_mode || e->synthetic || !widget_) return;
  if (sub_.subtype(t, widget_)) return;
  if (e->from_this) {
    diag(E_THIS_ESCAPES, e->span,
         "this has type " + print_type(t) + ", which widgets may not observe");
  } else {
    diag(E_SUBTYPE, e->span,
         "expression types as " + print_type(t) + ", not Widget");
  }
}

TypePtr Checker::check(const core::ExprPtr& e, Flow& flow) {
  TypePtr t = check_node(e, flow);
  sweep(e, t);
  return t;
}

std::vector<TypePtr> Checker::union_members(const TypePtr& t) {
  std::vector<TypePtr> out;
  std::vector<TypePtr> work{t};
  while (!work.empty()) {
    TypePtr head = sub_.resolve_head(work.back());
    work.pop_back();
    if (head->tag == TypeTag::Union) {
      for (auto it = head->members.rbegin(); it != head->members.rend(); ++it) {
        work.push_back(*it);
      }
      continue;
    }
    out.push_back(std::move(head));
    if (out.size() > 256) break;
  }
  return out;
}

bool Checker::is_global_type(const TypePtr& t) {
  if (t->tag == TypeTag::Named && t->name == "Global") return true;
  TypePtr g = env_.alias("Global");
  return g && type_equal(t, g);
}

TypePtr Checker::value_type(const RtValue& v, Span sp) {
  switch (v.kind) {
    case RtValue::Kind::Undef: return t_undef();
    case RtValue::Kind::Null: return t_null();
    case RtValue::Kind::Bool: return v.b ? t_true() : t_false();
    case RtValue::Kind::Num: return t_num();
    case RtValue::Kind::Str: return t_strset(StringSet::singleton(v.str));
    case RtValue::Kind::Object: {
      TypePtr t = heap_.at(v.loc);
      if (!t) {
        diag(E_UNBOUND, sp, "location " + std::to_string(v.loc) + " missing from the heap typing");
        return t_bot();
      }
      return t;
    }
  }
  return t_bot();
}

Checker::Binding* Checker::find_binding(Flow& flow, const std::string& name) {
  auto it = flow.find(name);
  if (it != flow.end()) return &it->second;
  TypePtr t = env_.binding(name);
  if (!t) return nullptr;
  auto [ins, ok] = flow.emplace(name, Binding{t, t, false});
  (void)ok;
  return &ins->second;
}

std::map<std::string, TypePtr> Checker::flow_types(const Flow& flow) const {
  std::map<std::string, TypePtr> out;
  for (const auto& [k, b] : flow) out[k] = b.flow;
  return out;
}

std::optional<StringSet> Checker::index_set(const TypePtr& idx_t) {
  TypePtr head = sub_.resolve_head(idx_t);
  switch (head->tag) {
    case TypeTag::Prim:
      if (head->prim == PrimKind::Str) return StringSet::all_strings();
      return std::nullopt;
    case TypeTag::StrSet:
      return head->sset;
    case TypeTag::Union: {
      std::optional<StringSet> acc;
      for (const auto& m : head->members) {
        auto ms = index_set(m);
        if (!ms) return std::nullopt;
        acc = acc ? sset_union(*acc, *ms) : *ms;
      }
      return acc;
    }
    case TypeTag::Bot:
      return StringSet::none();
    default:
      return std::nullopt;
  }
}

// --- literals and functions -------------------------------------------------

TypePtr Checker::check_object(const core::ExprPtr& e, Flow& flow) {
  if (opts_.gate_mode && widget_) {
    // Checked directly against Widget's object member: banned keys are
    // creation errors, absent-required keys may not appear, everything
    // else checks against its required slot.
    TypePtr head = sub_.resolve_head(widget_);
    const ObjectType* wobj = nullptr;
    for (const auto& m : union_members(head)) {
      if (m->tag == TypeTag::Ref) wobj = m->obj.get();
    }
    for (size_t i = 0; i < e->fields.size(); ++i) {
      const auto& [key, val] = e->fields[i];
      Span ksp = i < e->field_spans.size() ? e->field_spans[i] : e->span;
      TypePtr vt = check(val, flow);
      if (!wobj) continue;
      auto it = wobj->named.find(key);
      const FieldPresence& req = it != wobj->named.end() ? it->second : wobj->star;
      switch (req.kind) {
        case FieldPresence::Kind::Banned:
          diag(E_BANNED_FIELD, ksp, "widget objects may not define '" + key + "'");
          break;
        case FieldPresence::Kind::Absent:
          diag(E_SUBTYPE, ksp, "field '" + key + "' must stay absent in widget objects");
          break;
        case FieldPresence::Kind::Present:
          if (!sub_.subtype(vt, req.type)) {
            diag(E_SUBTYPE, ksp,
                 "field '" + key + "' types as " + print_type(vt) + ", not " +
                     print_type(req.type));
          }
          break;
      }
    }
    return widget_;
  }

  ObjectType o;
  o.proto = t_named("Object");
  o.star = FieldPresence::absent();
  for (const auto& [key, val] : e->fields) {
    o.named[key] = FieldPresence::present(check(val, flow));
  }
  return t_ref(std::move(o));
}

TypePtr Checker::check_array(const core::ExprPtr& e, Flow& flow) {
  std::vector<TypePtr> elems;
  for (const auto& el : e->elems) elems.push_back(check(el, flow));
  if (opts_.gate_mode && widget_) return widget_;  // element sweep covers the parts
  return t_array(union_of(std::move(elems)));
}

TypePtr Checker::check_func(const core::ExprPtr& e, Flow& flow) {
  if (e->ann && contains_forall(e->ann.value().type)) {
    diag(E_UNSUPPORTED, e->ann->span, "polymorphic types are parsed but not checked");
    return t_bot();
  }
  if (e->ann && e->ann->cheat) {
    report_.cheats.push_back({e->span, e->ann->type});
    return e->ann->type;
  }

  TypePtr arrow_t;
  if (e->ann) {
    arrow_t = e->ann->type;
  } else if (opts_.gate_mode && widget_fn_) {
    arrow_t = widget_fn_;
  }

  const FuncType* fn = nullptr;
  TypePtr arrow_head;
  if (arrow_t) {
    arrow_head = sub_.resolve_head(arrow_t);
    if (arrow_head->tag == TypeTag::Func) {
      fn = arrow_head->fn.get();
    } else {
      diag(E_UNSUPPORTED, e->ann ? e->ann->span : e->span,
           "function annotation must be an arrow type (use cheat for anything else)");
    }
  }

  // Body checks under a fresh flow: captured bindings revert to their
  // declared types, since the closure may run later.
  Flow inner;
  for (const auto& [k, b] : flow) {
    TypePtr d = b.declared ? b.declared : b.flow;
    inner[k] = Binding{d, d, false};
  }
  TypePtr this_t = fn ? fn->this_type : t_top();
  inner["%this"] = Binding{this_t, this_t, false};
  for (size_t i = 0; i < e->params.size(); ++i) {
    TypePtr pt;
    if (fn) {
      if (i < fn->fixed.size()) {
        pt = fn->fixed[i];
      } else if (fn->rest) {
        pt = fn->rest;
      } else {
        diag(E_ARITY, e->span,
             "function declares " + std::to_string(e->params.size()) +
                 " parameters but its type has " + std::to_string(fn->fixed.size()));
        pt = t_top();
      }
    } else {
      pt = t_top();
    }
    inner[e->params[i]] = Binding{pt, pt, false};
  }

  TypePtr body_t = check(e->a, inner);
  // Anything the closure assigns outside its own scope can change at any
  // later call, so the captured bindings fall back to their declared types.
  std::set<std::string> assigned;
  collect_assigned(e->a, assigned);
  for (const auto& k : assigned) {
    auto it = flow.find(k);
    if (it != flow.end() && it->second.declared) it->second.flow = it->second.declared;
  }
  FuncType out;
  if (fn) {
    if (!sub_.subtype(body_t, fn->result)) {
      diag(E_SUBTYPE, e->span,
           "function body types as " + print_type(body_t) + ", not " + print_type(fn->result));
    }
    out = *fn;
  } else {
    out.this_type = t_top();
    for (size_t i = 0; i < e->params.size(); ++i) out.fixed.push_back(t_top());
    out.result = body_t;
  }

  ObjectType obj;
  obj.proto = t_named("Function");
  obj.star = FieldPresence::absent();
  obj.code = t_func(std::move(out));
  return t_ref(std::move(obj));
}

// --- lookup, update, delete --------------------------------------------------

TypePtr Checker::check_get(const core::ExprPtr& e, Flow& flow) {
  TypePtr obj_t = check(e->a, flow);
  TypePtr idx_t = check(e->b, flow);
  if (obj_t->tag == TypeTag::Bot || idx_t->tag == TypeTag::Bot) return t_bot();

  auto s = index_set(idx_t);
  if (!s) {
    // Numeric indexing is reserved for arrays.
    if (sub_.subtype(idx_t, t_num())) {
      std::vector<TypePtr> parts;
      bool any_array = false;
      for (const auto& m : union_members(obj_t)) {
        if (m->tag == TypeTag::Array) {
          any_array = true;
          parts.push_back(m->inner);
          parts.push_back(t_undef());
        }
      }
      if (any_array) return union_of(std::move(parts));
    }
    diag(E_SUBTYPE, e->b->span,
         "index types as " + print_type(idx_t) + ", which is not a subtype of Str");
    return t_bot();
  }

  FieldsResult r = fields(obj_t, *s, sub_);
  if (r.banned_name) {
    diag(E_BANNED_FIELD, e->span,
         "lookup reaches banned field '" + *r.banned_name + "' on " + print_type(obj_t));
    return t_bot();
  }
  if (r.error) {
    diag(E_NOT_OBJECT, e->span, *r.error + ": " + print_type(obj_t));
    return t_bot();
  }
  if (r.empty_lookup) {
    diag(E_EMPTY_LOOKUP, e->span, "lookup result is empty for " + sset_to_string(*s));
    return t_bot();
  }
  return r.type;
}

TypePtr Checker::check_set(const core::ExprPtr& e, Flow& flow) {
  TypePtr obj_t = check(e->a, flow);
  TypePtr idx_t = check(e->b, flow);
  TypePtr val_t = check(e->c, flow);
  if (obj_t->tag == TypeTag::Bot || idx_t->tag == TypeTag::Bot) return val_t;

  auto s = index_set(idx_t);
  bool numeric = false;
  if (!s) {
    if (sub_.subtype(idx_t, t_num())) {
      numeric = true;
    } else {
      diag(E_SUBTYPE, e->b->span,
           "index types as " + print_type(idx_t) + ", which is not a subtype of Str");
      return val_t;
    }
  }

  bool any_writable = false;
  bool tolerated = false;
  for (const auto& m : union_members(obj_t)) {
    TypePtr mh = sub_.resolve_head(m);
    if (mh->tag == TypeTag::Prim || mh->tag == TypeTag::StrSet || mh->tag == TypeTag::Bot) {
      tolerated = true;
      continue;
    }
    if (m->tag == TypeTag::Array) {
      any_writable = true;
      bool numeric_hit = numeric || numeric_possible(*s);
      if (numeric_hit && !sub_.subtype(val_t, m->inner)) {
        diag(E_SUBTYPE, e->span,
             "array element write: " + print_type(val_t) + " is not " + print_type(m->inner));
      }
      if (!numeric && sset_member("length", *s) && !sub_.subtype(val_t, t_num())) {
        diag(E_SUBTYPE, e->span, "array length must be Num");
      }
      continue;
    }
    if (m->tag != TypeTag::Ref) continue;  // primitive targets ignore writes
    if (numeric) {
      diag(E_SUBTYPE, e->b->span, "numeric index write on a non-array object");
      continue;
    }
    any_writable = true;
    const ObjectType& o = *m->obj;
    for (const auto& [name, f] : o.named) {
      if (!sset_member(name, *s)) continue;
      switch (f.kind) {
        case FieldPresence::Kind::Banned:
          if (!opts_.disable_update_ban) {
            diag(E_BANNED_FIELD, e->span, "assignment to banned field '" + name + "'");
          }
          break;
        case FieldPresence::Kind::Absent:
          if (!opts_.disable_update_ban) {
            diag(E_SUBTYPE, e->span, "field '" + name + "' is required to stay absent");
          }
          break;
        case FieldPresence::Kind::Present:
          if (!sub_.subtype(val_t, f.type)) {
            diag(E_SUBTYPE, e->span,
                 "field '" + name + "' holds " + print_type(f.type) + ", not " +
                     print_type(val_t));
          }
          break;
      }
    }
    StringSet s_star = sset_subtract(*s, [&] {
      StringSet keys;
      for (const auto& [k, f] : o.named) {
        (void)f;
        keys.names.insert(k);
      }
      return keys;
    }());
    if (!s_star.is_empty()) {
      switch (o.star.kind) {
        case FieldPresence::Kind::Banned:
          if (!opts_.disable_update_ban) {
            diag(E_BANNED_FIELD, e->span, "assignment to banned field");
          }
          break;
        case FieldPresence::Kind::Absent:
          diag(E_SUBTYPE, e->span,
               "object type " + print_type(m) + " does not accept new fields");
          break;
        case FieldPresence::Kind::Present:
          if (!sub_.subtype(val_t, o.star.type)) {
            diag(E_SUBTYPE, e->span,
                 "field write: " + print_type(val_t) + " is not " + print_type(o.star.type));
          }
          break;
      }
    }
  }
  if (!any_writable && !tolerated) {
    diag(E_NOT_OBJECT, e->span, "no writable object structure in " + print_type(obj_t));
  }
  return val_t;
}

bool Checker::numeric_possible(const StringSet& s) {
  if (s.negative) return true;
  for (const auto& n : s.names) {
    if (!n.empty() && n.find_first_not_of("0123456789") == std::string::npos) return true;
  }
  return false;
}

TypePtr Checker::check_del(const core::ExprPtr& e, Flow& flow) {
  TypePtr obj_t = check(e->a, flow);
  TypePtr idx_t = check(e->b, flow);
  auto s = index_set(idx_t);
  if (!s) {
    diag(E_SUBTYPE, e->b->span, "delete needs a string-typed field name");
    return bool_t_;
  }
  for (const auto& m : union_members(obj_t)) {
    if (m->tag != TypeTag::Ref) continue;
    for (const auto& [name, f] : m->obj->named) {
      if (f.is_banned() && sset_member(name, *s)) {
        diag(E_BANNED_FIELD, e->span, "delete of banned field '" + name + "'");
      }
    }
    if (m->obj->star.is_banned()) {
      StringSet keys;
      for (const auto& [k, f] : m->obj->named) {
        (void)f;
        keys.names.insert(k);
      }
      if (!sset_subtract(*s, keys).is_empty()) {
        diag(E_BANNED_FIELD, e->span, "delete of banned field");
      }
    }
  }
  return bool_t_;
}

// --- application --------------------------------------------------------------

TypePtr Checker::apply_arrow(const FuncType& fn, const TypePtr& this_t,
                             const std::vector<TypePtr>& args, Span sp) {
  if (!sub_.subtype(this_t, fn.this_type)) {
    diag(E_SUBTYPE, sp,
         "this argument types as " + print_type(this_t) + ", not " + print_type(fn.this_type));
  }
  if (args.size() < fn.fixed.size()) {
    diag(E_ARITY, sp,
         "call provides " + std::to_string(args.size()) + " arguments; " +
             std::to_string(fn.fixed.size()) + " required");
  }
  for (size_t i = 0; i < args.size(); ++i) {
    TypePtr want;
    if (i < fn.fixed.size()) {
      want = fn.fixed[i];
    } else if (fn.rest) {
      want = fn.rest;
    } else {
      diag(E_ARITY, sp, "call provides surplus argument " + std::to_string(i + 1) +
                            " to a non-variadic function");
      break;
    }
    if (!sub_.subtype(args[i], want)) {
      diag(E_SUBTYPE, sp,
           "argument " + std::to_string(i + 1) + " types as " + print_type(args[i]) + ", not " +
               print_type(want));
    }
  }
  return fn.result;
}

TypePtr Checker::apply_intersection(const std::vector<TypePtr>& arms, const TypePtr& this_t,
                                    const std::vector<TypePtr>& args, Span sp) {
  std::vector<const FuncType*> fns;
  for (const auto& arm : arms) {
    TypePtr head = sub_.resolve_head(arm);
    if (head->tag == TypeTag::Func) fns.push_back(head->fn.get());
  }
  if (fns.empty()) {
    diag(E_NOT_FUNCTION, sp, "intersection has no arrow member");
    return t_bot();
  }
  // An arm that accepts the whole call wins outright.
  for (const FuncType* fn : fns) {
    bool fits = sub_.subtype(this_t, fn->this_type) && args.size() >= fn->fixed.size();
    if (fits) {
      for (size_t i = 0; i < args.size() && fits; ++i) {
        TypePtr want = i < fn->fixed.size() ? fn->fixed[i] : fn->rest;
        fits = want && sub_.subtype(args[i], want);
      }
    }
    if (fits) return fn->result;
  }
  // Otherwise split a single string-typed argument across arms whose
  // domains jointly cover it (the blacklist-predicate pattern).
  if (args.size() == 1) {
    auto arg_set = index_set(args[0]);
    if (arg_set) {
      std::optional<StringSet> covered;
      std::vector<TypePtr> results;
      for (const FuncType* fn : fns) {
        if (fn->fixed.size() != 1) continue;
        auto dom = index_set(fn->fixed[0]);
        if (!dom) continue;
        covered = covered ? sset_union(*covered, *dom) : *dom;
        if (sset_intersects(*arg_set, *dom)) results.push_back(fn->result);
      }
      if (covered && sset_subset(*arg_set, *covered) && !results.empty()) {
        return union_of(std::move(results));
      }
    }
  }
  diag(E_SUBTYPE, sp, "no arm of the intersection accepts this call");
  return t_bot();
}

TypePtr Checker::check_app(const core::ExprPtr& e, Flow& flow) {
  TypePtr callee_t = check(e->a, flow);
  TypePtr this_t = check(e->b, flow);
  std::vector<TypePtr> args;
  for (const auto& a : e->elems) args.push_back(check(a, flow));
  if (callee_t->tag == TypeTag::Bot) return t_bot();

  std::vector<TypePtr> results;
  bool any_callable = false;
  bool hard_noncallable = false;
  for (const auto& m : union_members(callee_t)) {
    TypePtr head = sub_.resolve_head(m);
    if (head->tag == TypeTag::Func) {
      any_callable = true;
      results.push_back(apply_arrow(*head->fn, this_t, args, e->span));
    } else if (head->tag == TypeTag::Ref && head->obj->code) {
      any_callable = true;
      TypePtr code = sub_.resolve_head(head->obj->code);
      if (code->tag == TypeTag::Func) {
        results.push_back(apply_arrow(*code->fn, this_t, args, e->span));
      } else if (code->tag == TypeTag::Intersect) {
        results.push_back(apply_intersection(code->members, this_t, args, e->span));
      }
    } else if (head->tag == TypeTag::Intersect) {
      any_callable = true;
      results.push_back(apply_intersection(head->members, this_t, args, e->span));
    } else if (head->tag == TypeTag::Prim || head->tag == TypeTag::StrSet ||
               head->tag == TypeTag::Bot) {
      // applying a primitive halts at runtime; the relaxed rules allow it
    } else {
      hard_noncallable = true;
    }
  }
  if (!any_callable) {
    if (hard_noncallable) {
      diag(E_NOT_FUNCTION, e->span, "no member of " + print_type(callee_t) + " is callable");
    }
    return t_bot();
  }
  return union_of(std::move(results));
}

// --- control flow --------------------------------------------------------------

TypePtr Checker::check_if(const core::ExprPtr& e, Flow& flow) {
  check(e->a, flow);
  Refinement r = refine(e->a, flow_types(flow));

  Flow then_flow = flow;
  for (const auto& [k, t] : r.then_narrow) {
    auto* b = find_binding(then_flow, k);
    if (b) b->flow = t;
  }
  TypePtr then_t = check(e->b, then_flow);

  Flow else_flow = flow;
  for (const auto& [k, t] : r.else_narrow) {
    auto* b = find_binding(else_flow, k);
    if (b) b->flow = t;
  }
  TypePtr else_t = check(e->c, else_flow);

  bool then_diverges = then_t->tag == TypeTag::Bot;
  bool else_diverges = else_t->tag == TypeTag::Bot;

  // Join: a diverging branch contributes nothing to the continuation.
  Flow joined;
  auto merge_from = [&](Flow& src) {
    for (auto& [k, b] : src) {
      auto it = joined.find(k);
      if (it == joined.end()) {
        joined.emplace(k, b);
        continue;
      }
      Binding& acc = it->second;
      acc.flow = union_of({acc.flow, b.flow});
      if (!acc.declared) {
        acc.declared = b.declared;
      } else if (b.declared && !type_equal(acc.declared, b.declared)) {
        acc.declared = union_of({acc.declared, b.declared});
      }
      acc.infer = acc.infer && b.infer;
    }
  };
  if (!then_diverges) merge_from(then_flow);
  if (!else_diverges) merge_from(else_flow);
  if (then_diverges && else_diverges) merge_from(else_flow);
  flow = std::move(joined);

  return union_of({then_t, else_t});
}

TypePtr Checker::check_while(const core::ExprPtr& e, Flow& flow) {
  // Anything the loop writes is only known at its declared type.
  std::set<std::string> assigned;
  collect_assigned(e->a, assigned);
  collect_assigned(e->b, assigned);
  for (const auto& k : assigned) {
    auto* b = find_binding(flow, k);
    if (!b) continue;
    if (!b->declared) b->declared = t_top();
    b->flow = b->declared;
  }
  check(e->a, flow);
  Refinement r = refine(e->a, flow_types(flow));
  Flow body_flow = flow;
  for (const auto& [k, t] : r.then_narrow) {
    auto* b = find_binding(body_flow, k);
    if (b) b->flow = t;
  }
  check(e->b, body_flow);
  for (const auto& [k, t] : r.else_narrow) {
    auto* b = find_binding(flow, k);
    if (b) b->flow = t;
  }
  return t_undef();
}

TypePtr Checker::check_binop(const core::ExprPtr& e, Flow& flow) {
  TypePtr lt = check(e->a, flow);
  TypePtr rt = check(e->b, flow);
  bool l_num = sub_.subtype(lt, t_num());
  bool r_num = sub_.subtype(rt, t_num());
  switch (e->binop) {
    case core::BinOpKind::Add: {
      if (l_num && r_num) return t_num();
      bool l_str = sub_.subtype(lt, t_str());
      bool r_str = sub_.subtype(rt, t_str());
      // Concatenation erases string-set precision; mixed operands would
      // trigger implicit conversions and are rejected.
      if (l_str && r_str) return t_str();
      diag(E_SUBTYPE, e->span,
           "+ needs two Nums or two Strs, got " + print_type(lt) + " and " + print_type(rt));
      return t_bot();
    }
    case core::BinOpKind::Sub:
    case core::BinOpKind::Mul:
    case core::BinOpKind::Div:
    case core::BinOpKind::Mod:
      if (!l_num || !r_num) {
        diag(E_SUBTYPE, e->span,
             "arithmetic needs Num operands, got " + print_type(lt) + " and " + print_type(rt));
        return t_bot();
      }
      return t_num();
    default:
      if (!l_num || !r_num) {
        diag(E_SUBTYPE, e->span,
             "comparison needs Num operands, got " + print_type(lt) + " and " + print_type(rt));
        return t_bot();
      }
      return bool_t_;
  }
}

// --- refinement ----------------------------------------------------------------

namespace {

// Selects union members by a typeof tag; `matched` reports whether any
// member could produce the tag.
enum class TagMatch { Yes, No, Maybe };

}  // namespace

static TagMatch member_matches_tag(const TypePtr& m, const std::string& tag, SubtypeCtx& sub) {
  TypePtr head = sub.resolve_head(m);
  switch (head->tag) {
    case TypeTag::Prim:
      switch (head->prim) {
        case PrimKind::Num: return tag == "number" ? TagMatch::Yes : TagMatch::No;
        case PrimKind::Str: return tag == "string" ? TagMatch::Yes : TagMatch::No;
        case PrimKind::True:
        case PrimKind::False: return tag == "boolean" ? TagMatch::Yes : TagMatch::No;
        case PrimKind::Undef: return tag == "undefined" ? TagMatch::Yes : TagMatch::No;
        case PrimKind::Null: return tag == "object" ? TagMatch::Yes : TagMatch::No;
      }
      return TagMatch::No;
    case TypeTag::StrSet:
      return tag == "string" ? TagMatch::Yes : TagMatch::No;
    case TypeTag::Func:
      return tag == "function" ? TagMatch::Yes : TagMatch::No;
    case TypeTag::Array:
      return tag == "object" ? TagMatch::Yes : TagMatch::No;
    case TypeTag::Ref:
      if (head->obj->code) {
        // could be a callable or a plain object
        return (tag == "object" || tag == "function") ? TagMatch::Maybe : TagMatch::No;
      }
      return tag == "object" ? TagMatch::Yes : TagMatch::No;
    case TypeTag::Union: {
      bool any = false, all = true;
      for (const auto& mm : head->members) {
        TagMatch r = member_matches_tag(mm, tag, sub);
        any = any || r != TagMatch::No;
        all = all && r == TagMatch::Yes;
      }
      if (!any) return TagMatch::No;
      return all ? TagMatch::Yes : TagMatch::Maybe;
    }
    default:
      return TagMatch::Maybe;
  }
}

Checker::Refinement Checker::refine(const core::ExprPtr& cond,
                                    const std::map<std::string, TypePtr>& types) {
  Refinement out = refine_impl(cond, types);
  // Narrowing decomposes aliases; fold a result back to an original member
  // (or the whole original) when it is equivalent, so that, for example,
  // removing Global from Widget | Global yields Widget itself.
  auto compact = [&](std::map<std::string, TypePtr>& narrowed) {
    for (auto& [key, t] : narrowed) {
      auto it = types.find(key);
      TypePtr original = it != types.end() ? it->second : env_.binding(key);
      if (!original) continue;
      std::vector<TypePtr> candidates{original};
      if (original->tag == TypeTag::Union) {
        for (const auto& m : original->members) candidates.push_back(m);
      }
      for (const auto& cand : candidates) {
        if (type_equal(t, cand)) break;
        if (sub_.subtype(t, cand) && sub_.subtype(cand, t)) {
          t = cand;
          break;
        }
      }
    }
  };
  compact(out.then_narrow);
  compact(out.else_narrow);
  return out;
}

Checker::Refinement Checker::refine_impl(const core::ExprPtr& cond,
                                         const std::map<std::string, TypePtr>& types) {
  Refinement out;
  if (!cond) return out;

  auto type_of = [&](const std::string& key) -> TypePtr {
    auto it = types.find(key);
    if (it != types.end()) return it->second;
    TypePtr t = env_.binding(key);
    return t ? t : nullptr;
  };
  auto static_type = [&](const ExprPtr& x) -> TypePtr {
    if (auto k = narrow_key(x)) {
      TypePtr t = type_of(*k);
      if (t) return t;
    }
    if (x->kind == ExprKind::Value) {
      if (x->rt.kind == RtValue::Kind::Object) return heap_.at(x->rt.loc);
    }
    return nullptr;
  };

  // !c  (desugared form of negation)
  if (cond->kind == ExprKind::If && cond->b && cond->c &&
      cond->b->kind == ExprKind::Const && cond->b->cval.kind == core::ConstVal::Kind::Bool &&
      !cond->b->cval.b && cond->c->kind == ExprKind::Const &&
      cond->c->cval.kind == core::ConstVal::Kind::Bool && cond->c->cval.b) {
    Refinement inner = refine_impl(cond->a, types);
    out.then_narrow = inner.else_narrow;
    out.else_narrow = inner.then_narrow;
    return out;
  }
  // a && b / a || b  (desugared through a temporary)
  if (cond->kind == ExprKind::Let && cond->b && cond->b->kind == ExprKind::If) {
    const auto& iff = *cond->b;
    auto is_tmp = [&](const ExprPtr& x) {
      return x && x->kind == ExprKind::Var && x->name == cond->name;
    };
    if (is_tmp(iff.a) && is_tmp(iff.c) && !is_tmp(iff.b)) {  // and
      Refinement r1 = refine_impl(cond->a, types);
      std::map<std::string, TypePtr> t2 = types;
      for (const auto& [k, t] : r1.then_narrow) t2[k] = t;
      Refinement r2 = refine_impl(iff.b, t2);
      out.then_narrow = r1.then_narrow;
      for (const auto& [k, t] : r2.then_narrow) out.then_narrow[k] = t;
      return out;
    }
    if (is_tmp(iff.a) && is_tmp(iff.b) && !is_tmp(iff.c)) {  // or
      Refinement r1 = refine_impl(cond->a, types);
      std::map<std::string, TypePtr> t2 = types;
      for (const auto& [k, t] : r1.else_narrow) t2[k] = t;
      Refinement r2 = refine_impl(iff.c, t2);
      out.else_narrow = r1.else_narrow;
      for (const auto& [k, t] : r2.else_narrow) out.else_narrow[k] = t;
      return out;
    }
  }
  // blacklist predicate: f(x) where f : (Unsafe -> True) & (Safe -> Bool).
  // A falsy result proves the argument avoided the unsafe domain.
  if (cond->kind == ExprKind::App && cond->elems.size() == 1) {
    TypePtr ft = static_type(cond->a);
    auto xkey = narrow_key(cond->elems[0]);
    if (ft && xkey) {
      TypePtr fhead = sub_.resolve_head(ft);
      if (fhead->tag == TypeTag::Intersect) {
        std::optional<StringSet> safe_dom;
        for (const auto& arm : fhead->members) {
          TypePtr ah = sub_.resolve_head(arm);
          if (ah->tag != TypeTag::Func || ah->fn->fixed.size() != 1) continue;
          TypePtr res = sub_.resolve_head(ah->fn->result);
          if (is_prim(res, PrimKind::True)) continue;  // the unsafe arm
          auto dom = index_set(ah->fn->fixed[0]);
          if (dom) safe_dom = safe_dom ? sset_union(*safe_dom, *dom) : *dom;
        }
        TypePtr xt = type_of(*xkey);
        if (safe_dom && xt) {
          std::vector<TypePtr> else_parts;
          for (const auto& m : union_members(xt)) {
            TypePtr head = sub_.resolve_head(m);
            if (head->tag == TypeTag::StrSet) {
              StringSet narrowed = sset_intersect(head->sset, *safe_dom);
              if (!narrowed.is_empty()) else_parts.push_back(t_strset(narrowed));
            } else if (head->tag == TypeTag::Prim && head->prim == PrimKind::Str) {
              else_parts.push_back(t_strset(*safe_dom));
            } else {
              else_parts.push_back(m);
            }
          }
          out.else_narrow[*xkey] = union_of(std::move(else_parts));
        }
      }
    }
    return out;
  }
  // truthiness of a variable
  if (auto key = narrow_key(cond)) {
    TypePtr t = type_of(*key);
    if (t) {
      std::vector<TypePtr> then_parts, else_parts;
      for (const auto& m : union_members(t)) {
        TypePtr head = sub_.resolve_head(m);
        bool falsy_only = head->tag == TypeTag::Prim &&
                          (head->prim == PrimKind::Undef || head->prim == PrimKind::Null ||
                           head->prim == PrimKind::False);
        bool truthy_only = head->tag == TypeTag::Prim && head->prim == PrimKind::True;
        if (!falsy_only) then_parts.push_back(m);
        if (!truthy_only) else_parts.push_back(m);
      }
      out.then_narrow[*key] = union_of(std::move(then_parts));
      out.else_narrow[*key] = union_of(std::move(else_parts));
    }
    return out;
  }
  if (cond->kind != ExprKind::StrictEq) return out;

  ExprPtr lhs = cond->a;
  ExprPtr rhs = cond->b;
  // typeof x === "tag"
  for (int side = 0; side < 2; ++side) {
    const ExprPtr& a = side ? rhs : lhs;
    const ExprPtr& b = side ? lhs : rhs;
    if (a->kind == ExprKind::TypeOf && b->kind == ExprKind::Const &&
        b->cval.kind == core::ConstVal::Kind::Str) {
      auto key = narrow_key(a->a);
      if (!key) return out;
      TypePtr t = type_of(*key);
      if (!t) return out;
      const std::string& tag = b->cval.str;
      std::vector<TypePtr> then_parts, else_parts;
      for (const auto& m : union_members(t)) {
        TagMatch r = member_matches_tag(m, tag, sub_);
        if (r != TagMatch::No) then_parts.push_back(m);
        if (r != TagMatch::Yes) else_parts.push_back(m);
      }
      out.then_narrow[*key] = union_of(std::move(then_parts));
      out.else_narrow[*key] = union_of(std::move(else_parts));
      return out;
    }
  }
  // x === <literal> and x === window
  for (int side = 0; side < 2; ++side) {
    const ExprPtr& a = side ? rhs : lhs;
    const ExprPtr& b = side ? lhs : rhs;
    auto key = narrow_key(a);
    if (!key) continue;
    TypePtr t = type_of(*key);
    if (!t) continue;

    if (b->kind == ExprKind::Const && b->cval.kind == core::ConstVal::Kind::Str) {
      const std::string& lit = b->cval.str;
      std::vector<TypePtr> then_parts, else_parts;
      for (const auto& m : union_members(t)) {
        TypePtr head = sub_.resolve_head(m);
        if (head->tag == TypeTag::StrSet) {
          if (sset_member(lit, head->sset)) {
            then_parts.push_back(t_strset(StringSet::singleton(lit)));
          }
          StringSet narrowed = head->sset;
          if (!narrowed.negative) {
            narrowed = sset_subtract(narrowed, StringSet::singleton(lit));
            if (!narrowed.is_empty()) else_parts.push_back(t_strset(narrowed));
          } else {
            else_parts.push_back(t_strset(sset_subtract(narrowed, StringSet::singleton(lit))));
          }
        } else if (head->tag == TypeTag::Prim && head->prim == PrimKind::Str) {
          then_parts.push_back(t_strset(StringSet::singleton(lit)));
          else_parts.push_back(t_strset(StringSet::negative_of({lit})));
        } else {
          else_parts.push_back(m);  // non-strings survive only the else branch
        }
      }
      out.then_narrow[*key] = union_of(std::move(then_parts));
      out.else_narrow[*key] = union_of(std::move(else_parts));
      return out;
    }
    if (b->kind == ExprKind::Const &&
        (b->cval.kind == core::ConstVal::Kind::Bool ||
         b->cval.kind == core::ConstVal::Kind::Null ||
         b->cval.kind == core::ConstVal::Kind::Undef)) {
      TypePtr lit_t;
      if (b->cval.kind == core::ConstVal::Kind::Bool) {
        lit_t = b->cval.b ? t_true() : t_false();
      } else {
        lit_t = b->cval.kind == core::ConstVal::Kind::Null ? t_null() : t_undef();
      }
      std::vector<TypePtr> then_parts, else_parts;
      for (const auto& m : union_members(t)) {
        TypePtr head = sub_.resolve_head(m);
        bool exact = type_equal(head, lit_t);
        bool could = sub_.subtype(lit_t, m) || sub_.subtype(m, lit_t);
        if (could) then_parts.push_back(lit_t);
        if (!exact) else_parts.push_back(m);
      }
      out.then_narrow[*key] = union_of(std::move(then_parts));
      out.else_narrow[*key] = union_of(std::move(else_parts));
      return out;
    }
    TypePtr other_t = static_type(b);
    if (other_t && is_global_type(other_t)) {
      std::vector<TypePtr> then_parts, else_parts;
      for (const auto& m : union_members(t)) {
        if (is_global_type(m)) {
          then_parts.push_back(m);
        } else {
          else_parts.push_back(m);
        }
      }
      out.then_narrow[*key] = union_of(std::move(then_parts));
      out.else_narrow[*key] = union_of(std::move(else_parts));
      return out;
    }
  }
  return out;
}

// --- dispatch -------------------------------------------------------------------

TypePtr Checker::check_node(const core::ExprPtr& e, Flow& flow) {
  switch (e->kind) {
    case ExprKind::Const:
      switch (e->cval.kind) {
        case core::ConstVal::Kind::Num: return t_num();
        case core::ConstVal::Kind::Str: return t_strset(StringSet::singleton(e->cval.str));
        case core::ConstVal::Kind::Bool: return e->cval.b ? t_true() : t_false();
        case core::ConstVal::Kind::Null: return t_null();
        case core::ConstVal::Kind::Undef: return t_undef();
      }
      return t_bot();
    case ExprKind::Var: {
      Binding* b = find_binding(flow, e->name);
      if (!b) {
        diag(E_UNBOUND, e->span, "unbound identifier '" + e->name + "'");
        return t_bot();
      }
      return b->flow;
    }
    case ExprKind::Value:
      return value_type(e->rt, e->span);
    case ExprKind::GetCell: {
      std::string key = cell_key(e->cell);
      auto it = flow.find(key);
      if (it != flow.end()) return it->second.flow;
      TypePtr t = heap_.at(e->cell);
      if (!t) {
        diag(E_UNBOUND, e->span, "cell " + std::to_string(e->cell) + " missing from heap typing");
        return t_bot();
      }
      flow.emplace(key, Binding{t, t, false});
      return t;
    }
    case ExprKind::SetCell: {
      TypePtr v = check(e->a, flow);
      TypePtr declared = heap_.at(e->cell);
      if (!declared) {
        diag(E_UNBOUND, e->span, "cell " + std::to_string(e->cell) + " missing from heap typing");
        return v;
      }
      if (!sub_.subtype(v, declared)) {
        diag(E_SUBTYPE, e->span,
             "assignment of " + print_type(v) + " to a cell declared " + print_type(declared));
      } else {
        flow[cell_key(e->cell)] = Binding{declared, v, false};
      }
      return v;
    }
    case ExprKind::Object:
      return check_object(e, flow);
    case ExprKind::ArrayLit:
      return check_array(e, flow);
    case ExprKind::Func:
      return check_func(e, flow);
    case ExprKind::GetField:
      return check_get(e, flow);
    case ExprKind::SetField:
      return check_set(e, flow);
    case ExprKind::DelField:
      return check_del(e, flow);
    case ExprKind::App:
      return check_app(e, flow);
    case ExprKind::Let: {
      TypePtr init_t = check(e->a, flow);
      Binding nb;
      if (e->declared) {
        if (!sub_.subtype(init_t, e->declared)) {
          diag(E_SUBTYPE, e->span,
               "initializer types as " + print_type(init_t) + ", not " + print_type(e->declared));
          nb = Binding{e->declared, e->declared, false};
        } else {
          nb = Binding{e->declared, init_t, false};
        }
      } else if (is_undef_const(e->a)) {
        nb = Binding{nullptr, t_undef(), true};
      } else {
        nb = Binding{init_t, init_t, false};
      }
      auto saved = flow.find(e->name) != flow.end()
                       ? std::optional<Binding>(flow[e->name])
                       : std::nullopt;
      flow[e->name] = nb;
      TypePtr body_t = check(e->b, flow);
      if (saved) {
        flow[e->name] = *saved;
      } else {
        flow.erase(e->name);
      }
      return body_t;
    }
    case ExprKind::SetVar: {
      TypePtr v = check(e->a, flow);
      Binding* b = find_binding(flow, e->name);
      if (!b) {
        diag(E_UNBOUND, e->span, "assignment to unbound identifier '" + e->name + "'");
        return v;
      }
      if (b->infer && !b->declared) {
        b->declared = v;
        b->flow = v;
        b->infer = false;
        return v;
      }
      if (!sub_.subtype(v, b->declared ? b->declared : b->flow)) {
        diag(E_SUBTYPE, e->span,
             "assignment of " + print_type(v) + " to '" + e->name + "' declared " +
                 print_type(b->declared ? b->declared : b->flow));
      } else {
        b->flow = v;
      }
      return v;
    }
    case ExprKind::Seq:
      check(e->a, flow);
      return check(e->b, flow);
    case ExprKind::If:
      return check_if(e, flow);
    case ExprKind::While:
      return check_while(e, flow);
    case ExprKind::TypeOf: {
      TypePtr t = check(e->a, flow);
      return t_strset(typeof_set(t, sub_));
    }
    case ExprKind::StrictEq:
      check(e->a, flow);
      check(e->b, flow);
      return bool_t_;
    case ExprKind::BinOp:
      return check_binop(e, flow);
    case ExprKind::Throw:
      check(e->a, flow);
      return t_bot();
    case ExprKind::Ascribe: {
      if (e->ann && e->ann->cheat) {
        report_.cheats.push_back({e->span, e->ann->type});
        return e->ann->type;
      }
      return check(e->a, flow);
    }
  }
  return t_bot();
}

CheckReport check_program(const std::vector<Unit>& units, const TypeEnv& env,
                          const AbstractHeap& heap, CheckOptions opts) {
  CheckReport merged;
  for (const auto& u : units) {
    Checker c(env, heap, opts);
    c.check_unit(u.expr);
    CheckReport r = std::move(c.report());
    for (auto& d : r.diagnostics) merged.diagnostics.push_back(std::move(d));
    for (auto& ch : r.cheats) merged.cheats.push_back(std::move(ch));
  }
  merged.finalize();
  return merged;
}

}  // namespace sandcheck
