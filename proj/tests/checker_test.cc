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

#include <functional>

#include "doctest.h"
#include "sandcheck/fields.h"
#include "test_util.h"

namespace sandcheck {
namespace {

using testing::check_monitor;
using testing::check_widget;
using testing::test_env;

FieldsResult lookup(const char* obj, StringSet s) {
  SubtypeCtx ctx(&test_env().aliases);
  return fields(parse_type(obj), std::move(s), ctx);
}

TEST_CASE("the six golden lookup rows") {
  // 1: a named hit contributes exactly its type
  FieldsResult r1 = lookup("Ref {proto: Null, * : Bool, \"x\": Num}",
                           StringSet::positive({"x"}));
  REQUIRE(r1.ok());
  CHECK(type_equal(r1.type, parse_type("Num")));

  // 2: an unnamed name adds the star entry and the Null-proto undefined
  FieldsResult r2 = lookup("Ref {proto: Null, * : Bool, \"x\": Num}",
                           StringSet::positive({"x", "y"}));
  REQUIRE(r2.ok());
  CHECK(type_equal(r2.type, parse_type("Num | Bool | Undef")));

  // 3: prototype members join the star entry
  FieldsResult r3 = lookup("Ref {proto: Object, * : Num}", StringSet::positive({"toString"}));
  REQUIRE(r3.ok());
  CHECK(type_equal(r3.type, parse_type("Num | (-> Str)")));

  // 4: an absent field skips the local object entirely
  FieldsResult r4 = lookup("Ref {proto: Object, * : Num, \"toString\": absent}",
                           StringSet::positive({"toString"}));
  REQUIRE(r4.ok());
  CHECK(type_equal(r4.type, parse_type("-> Str")));

  // 5: a negative set that avoids the banned name stays typable
  FieldsResult r5 = lookup(
      "Ref {proto: Null, * : Str, \"x\": Num, \"y\": Bool, \"eval\": banned}",
      StringSet::negative_of({"eval"}));
  REQUIRE(r5.ok());
  CHECK(type_equal(r5.type, parse_type("Str | Num | Bool | Undef")));

  // 6: including it poisons the whole lookup
  FieldsResult r6 = lookup(
      "Ref {proto: Null, * : Str, \"x\": Num, \"y\": Bool, \"eval\": banned}",
      StringSet::positive({"eval"}));
  CHECK_FALSE(r6.ok());
  REQUIRE(r6.banned_name.has_value());
  CHECK(*r6.banned_name == "eval");
}

TEST_CASE("lookup distributes over unions and bottoms out on the empty set") {
  SubtypeCtx ctx(&test_env().aliases);
  const char* objs[] = {
      "Ref {proto: Null, * : Bool, \"x\": Num}",
      "Ref {proto: Object, * : absent, \"y\": Str}",
      "Ref {proto: Null, * : Str, \"x\": Num, \"eval\": banned}",
  };
  StringSet sets[] = {StringSet::positive({"x"}), StringSet::positive({"x", "y"}),
                      StringSet::negative_of({"eval"}), StringSet::all_strings()};
  for (const char* a : objs) {
    for (const char* b : objs) {
      for (const auto& s : sets) {
        TypePtr ta = parse_type(a);
        TypePtr tb = parse_type(b);
        FieldsResult joint = fields(union_of({ta, tb}), s, ctx);
        FieldsResult fa = fields(ta, s, ctx);
        FieldsResult fb = fields(tb, s, ctx);
        if (!fa.ok() || !fb.ok()) {
          CHECK_FALSE(joint.ok());
          continue;
        }
        REQUIRE(joint.ok());
        CHECK(type_equal(joint.type, union_of({fa.type, fb.type})));
      }
    }
  }
  for (const char* a : objs) {
    FieldsResult empty = fields(parse_type(a), StringSet::none(), ctx);
    CHECK(type_equal(empty.type, t_bot()));
  }
}

// Single-name lookup by direct chain walking; the oracle's union over the
// concrete names of S (alphabet plus one outside representative) must
// agree with the implementation.
namespace chain {

struct Miss {};
using Single = std::function<FieldsResult(const TypePtr&, const std::string&)>;

FieldsResult single(const TypePtr& t, const std::string& name, SubtypeCtx& ctx) {
  TypePtr head = ctx.resolve_head(t);
  FieldsResult out;
  if (head->tag == TypeTag::Union) {
    std::vector<TypePtr> parts;
    for (const auto& m : head->members) {
      FieldsResult r = single(m, name, ctx);
      if (r.banned_name) return r;
      if (r.ok() && r.type->tag != TypeTag::Bot) parts.push_back(r.type);
    }
    out.type = union_of(std::move(parts));
    return out;
  }
  if (head->tag != TypeTag::Ref) {
    out.type = t_bot();
    return out;
  }
  const ObjectType& o = *head->obj;
  auto it = o.named.find(name);
  if (it != o.named.end()) {
    switch (it->second.kind) {
      case FieldPresence::Kind::Banned:
        out.banned_name = name;
        return out;
      case FieldPresence::Kind::Present:
        out.type = it->second.type;
        return out;
      case FieldPresence::Kind::Absent: {
        // fall through to the prototype only
        TypePtr proto = ctx.resolve_head(o.proto);
        if (proto->tag == TypeTag::Prim && proto->prim == PrimKind::Null) {
          out.type = t_undef();
          return out;
        }
        return single(o.proto, name, ctx);
      }
    }
  }
  // unnamed: maybe the star entry, maybe the prototype
  std::vector<TypePtr> parts;
  if (o.star.is_banned()) {
    out.banned_name = "*";
    return out;
  }
  if (o.star.is_present()) parts.push_back(o.star.type);
  TypePtr proto = ctx.resolve_head(o.proto);
  if (proto->tag == TypeTag::Prim && proto->prim == PrimKind::Null) {
    parts.push_back(t_undef());
  } else {
    FieldsResult below = single(o.proto, name, ctx);
    if (below.banned_name) return below;
    if (below.ok()) parts.push_back(below.type);
  }
  out.type = union_of(std::move(parts));
  return out;
}

}  // namespace chain

TEST_CASE("lookup agrees with a brute-force chain walk") {
  SubtypeCtx ctx(&test_env().aliases);
  const std::vector<std::string> alphabet = {"f1", "f2", "f3", "f4", "f5"};
  const std::string fresh = "other";

  // a deterministic family of object types: up to 3 named fields over the
  // alphabet, varied presences, proto chains of depth <= 2
  std::mt19937_64 rng(99);
  auto pick = [&](int n) { return static_cast<int>(rng() % n); };
  auto payload = [&]() -> TypePtr {
    switch (pick(4)) {
      case 0: return t_num();
      case 1: return t_str();
      case 2: return union_of({t_true(), t_false()});
      default: return t_strset(StringSet::positive({"v"}));
    }
  };
  auto make_obj = [&](int depth, auto&& self) -> TypePtr {
    ObjectType o;
    if (depth <= 0 || pick(3) == 0) {
      o.proto = t_null();
    } else {
      o.proto = self(depth - 1, self);
    }
    switch (pick(3)) {
      case 0: o.star = FieldPresence::absent(); break;
      case 1: o.star = FieldPresence::present(payload()); break;
      default: o.star = FieldPresence::present(t_undef()); break;
    }
    int fields_n = pick(4);
    for (int i = 0; i < fields_n && i < 3; ++i) {
      const std::string& name = alphabet[pick(5)];
      switch (pick(4)) {
        case 0: o.named[name] = FieldPresence::banned(); break;
        case 1: o.named[name] = FieldPresence::absent(); break;
        default: o.named[name] = FieldPresence::present(payload()); break;
      }
    }
    return t_ref(std::move(o));
  };

  int agreements = 0;
  for (int trial = 0; trial < 400; ++trial) {
    TypePtr obj = make_obj(2, make_obj);
    // a string set over the alphabet, either polarity
    StringSet s;
    s.negative = pick(2) == 1;
    int n = pick(4) + (s.negative ? 0 : 1);
    for (int i = 0; i < n; ++i) s.names.insert(alphabet[pick(5)]);

    FieldsResult impl = fields(obj, s, ctx);

    // oracle: union of single-name lookups over every concrete name in S
    std::vector<TypePtr> parts;
    std::optional<std::string> banned;
    std::vector<std::string> concrete;
    for (const auto& name : alphabet) {
      if (sset_member(name, s)) concrete.push_back(name);
    }
    if (sset_member(fresh, s)) concrete.push_back(fresh);
    for (const auto& name : concrete) {
      FieldsResult r = chain::single(obj, name, ctx);
      if (r.banned_name) {
        banned = r.banned_name;
        break;
      }
      if (r.ok()) parts.push_back(r.type);
    }

    CAPTURE(print_type(obj));
    CAPTURE(sset_to_string(s));
    if (banned) {
      CHECK(impl.banned_name.has_value());
    } else if (concrete.empty()) {
      CHECK(type_equal(impl.type, t_bot()));
    } else {
      REQUIRE(impl.ok());
      CHECK(type_equal(impl.type, union_of(std::move(parts))));
    }
    ++agreements;
  }
  CHECK(agreements == 400);
}

TEST_CASE("bigger index sets can only lose a lookup, never gain one") {
  // if a lookup is accepted at S, it stays accepted at any subset of S
  SubtypeCtx ctx(&test_env().aliases);
  TypePtr obj = parse_type(
      "Ref {proto: Null, * : Str, \"x\": Num, \"y\": Bool, \"eval\": banned}");
  StringSet big = StringSet::negative_of({"eval"});
  REQUIRE(fields(obj, big, ctx).ok());
  StringSet smaller[] = {StringSet::positive({"x"}), StringSet::positive({"x", "y"}),
                         StringSet::negative_of({"eval", "z"})};
  for (const auto& s : smaller) {
    REQUIRE(sset_subset(s, big));
    CHECK(fields(obj, s, ctx).ok());
  }
}

// --- flow refinement ---------------------------------------------------------

Checker::Refinement refine_cond(const std::string& cond_src,
                                const std::map<std::string, TypePtr>& types) {
  // parse the condition as the test of a conditional inside a function, so
  // `this` refers to the function's this-parameter
  auto prog = parse_surface("var f = function () { if (" + cond_src +
                            ") { 1; } else { 2; } };");
  auto coree = desugar_program(prog, DesugarOptions{});
  // walk to the If node
  core::ExprPtr cond;
  core::walk(coree, [&](const core::ExprPtr& n) {
    if (!cond && n->kind == core::ExprKind::If && !n->synthetic) cond = n->a;
  });
  REQUIRE(cond);
  AbstractHeap heap;
  Checker c(test_env(), heap, CheckOptions{});
  return c.refine(cond, types);
}

TEST_CASE("typeof narrows a widget to its matching members") {
  TypePtr widget = t_named("Widget");
  auto r = refine_cond("typeof func === \"function\"", {{"func", widget}});
  REQUIRE(r.then_narrow.count("func"));
  TypePtr narrowed = r.then_narrow["func"];
  // only the object member with code survives
  SubtypeCtx ctx(&test_env().aliases);
  TypePtr head = ctx.resolve_head(narrowed);
  REQUIRE(head->tag == TypeTag::Ref);
  CHECK(head->obj->code != nullptr);
  CHECK(subtype(narrowed, widget, test_env().aliases));

  // and the narrowed function fits setTimeout's first parameter
  TypePtr st = test_env().binding("setTimeout");
  CHECK(subtype(narrowed, st->fn->fixed[0], test_env().aliases));
  CHECK_FALSE(subtype(widget, st->fn->fixed[0], test_env().aliases));
}

TEST_CASE("the global test splits this between Global and Widget") {
  TypePtr both = union_of({t_named("Global"), t_named("Widget")});
  auto r = refine_cond("this === window", {{"%this", both}});
  REQUIRE(r.else_narrow.count("%this"));
  CHECK(type_equal(r.else_narrow["%this"], t_named("Widget")));
  REQUIRE(r.then_narrow.count("%this"));
  CHECK(type_equal(r.then_narrow["%this"], t_named("Global")));
}

TEST_CASE("string literal tests narrow string sets exactly") {
  TypePtr tags = parse_type("(\"div\", \"p\", \"b\")+");
  auto r = refine_cond("tagName === \"div\"", {{"tagName", tags}});
  CHECK(type_equal(r.then_narrow["tagName"], parse_type("(\"div\")+")));
  CHECK(type_equal(r.else_narrow["tagName"], parse_type("(\"p\", \"b\")+")));

  // brute force over the three-name alphabet: each concrete string lands
  // on the branch whose refined set contains it
  for (const std::string name : {"div", "p", "b"}) {
    bool then_side = name == "div";
    StringSet then_set = r.then_narrow["tagName"]->sset;
    StringSet else_set = r.else_narrow["tagName"]->sset;
    CHECK(sset_member(name, then_side ? then_set : else_set));
    CHECK_FALSE(sset_member(name, then_side ? else_set : then_set));
  }
}

TEST_CASE("negation and conjunction compose refinements") {
  TypePtr widget = t_named("Widget");
  auto r = refine_cond("!(typeof x === \"string\")", {{"x", widget}});
  // branches swapped: the else side is the string side
  REQUIRE(r.else_narrow.count("x"));
  CHECK(subtype(r.else_narrow["x"], t_str(), test_env().aliases));

  auto r2 = refine_cond("typeof x === \"string\" && x === \"on\"", {{"x", widget}});
  REQUIRE(r2.then_narrow.count("x"));
  CHECK(type_equal(r2.then_narrow["x"], parse_type("(\"on\")+")));
}

TEST_CASE("refinement only shrinks") {
  TypePtr widget = t_named("Widget");
  const char* conds[] = {
      "typeof x === \"function\"", "typeof x === \"string\"", "typeof x === \"number\"",
      "typeof x === \"object\"",   "x === \"lit\"",           "x",
      "x === true",                "x === undefined",         "!(x === null)",
  };
  for (const char* c : conds) {
    CAPTURE(c);
    auto r = refine_cond(c, {{"x", widget}});
    for (auto& [k, t] : r.then_narrow) {
      (void)k;
      CHECK(subtype(t, widget, test_env().aliases));
    }
    for (auto& [k, t] : r.else_narrow) {
      (void)k;
      CHECK(subtype(t, widget, test_env().aliases));
    }
  }
}

TEST_CASE("unrecognized conditions refine nothing") {
  auto r = refine_cond("f(1, 2)", {{"f", t_named("Widget")}});
  CHECK(r.then_narrow.empty());
  CHECK(r.else_narrow.empty());
}

// --- whole-unit checking -------------------------------------------------------

TEST_CASE("intersection-typed predicates apply by domain coverage") {
  const char* prelude =
      "var reject_name = function (name)\n"
      "/*: cheat ((\"eval\", \"watch\")+ -> True) & ((\"eval\", \"watch\")- -> True | False) */\n"
      "{ return true; };\n";

  // a fully covered string argument splits across both arms
  CheckReport ok = check_monitor(std::string(prelude) +
                                 "var use = function (s)\n"
                                 "/*: [Widget | Global] Str -> Widget */\n"
                                 "{ return reject_name(s); };");
  CHECK(ok.ok);

  // a known-unsafe literal takes the True arm
  CheckReport lit = check_monitor(std::string(prelude) +
                                  "var use = function ()\n"
                                  "/*: [Widget | Global] -> True */\n"
                                  "{ return reject_name(\"eval\"); };");
  CHECK(lit.ok);

  // non-strings fit no arm
  CheckReport bad = check_monitor(std::string(prelude) + "reject_name(42);");
  CHECK(bad.has_code(E_SUBTYPE));
}

TEST_CASE("update rules reject banned and absent targets") {
  CheckReport banned = check_widget("var o = {}; o.constructor = 1;");
  CHECK(banned.has_code(E_BANNED_FIELD));

  CheckReport absent = check_widget("var o = {}; o.toString = 1;");
  CHECK(absent.has_code(E_SUBTYPE));

  CheckReport star = check_monitor(
      "var tight = {\"a\": 1};\n"
      "var poke = function (x)\n"
      "/*: [Widget | Global] Widget -> Widget */\n"
      "{ tight.a = 2; return true; };\n"
      "poke;");
  CHECK(star.ok);
}

TEST_CASE("arity and variadic application") {
  const char* f2 =
      "var f = function (a, b)\n"
      "/*: [Widget | Global] Num * Num -> Num */\n"
      "{ return a; };\n";
  CHECK(check_monitor(std::string(f2) + "f(1, 2);").ok);
  CHECK(check_monitor(std::string(f2) + "f(1);").has_code(E_ARITY));
  CHECK(check_monitor(std::string(f2) + "f(1, 2, 3);").has_code(E_ARITY));

  const char* fv =
      "var f = function (a)\n"
      "/*: [Widget | Global] Num * Str ... -> Num */\n"
      "{ return a; };\n";
  CHECK(check_monitor(std::string(fv) + "f(1, \"x\", \"y\");").ok);
  CHECK(check_monitor(std::string(fv) + "f(1, 2);").has_code(E_SUBTYPE));
}

TEST_CASE("polymorphic annotations are rejected as unsupported") {
  CheckReport r = check_monitor(
      "var id = function (x)\n"
      "/*: forall a . a -> a */\n"
      "{ return x; };");
  CHECK(r.has_code(E_UNSUPPORTED));
}

TEST_CASE("unbound identifiers are reported") {
  CheckReport r = check_monitor("missing(1);");
  CHECK(r.has_code(E_UNBOUND));
}

TEST_CASE("reports are deterministic") {
  const char* src = "var o = {}; o.constructor = 1; o.__proto__; window[\"eval\"];";
  CheckReport a = check_monitor(src);
  CheckReport b = check_monitor(src);
  CHECK(a.to_text() == b.to_text());
  CHECK(a.to_json() == b.to_json());
}

}  // namespace
}  // namespace sandcheck
