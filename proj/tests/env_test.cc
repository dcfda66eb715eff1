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

#include "doctest.h"
#include "sandcheck/fields.h"
#include "test_util.h"

namespace sandcheck {
namespace {

using testing::check_monitor;
using testing::test_env;

TEST_CASE("the builtin environment carries the expected aliases") {
  const TypeEnv& env = test_env();
  for (const char* name : {"Widget", "Global", "HTML", "Bunch", "Object", "Function",
                           "Array", "RegExp", "String", "Number", "Boolean"}) {
    CAPTURE(name);
    CHECK(env.alias(name) != nullptr);
  }
  CHECK(unresolved_aliases(env).empty());
}

TEST_CASE("Widget matches its published definition") {
  const TypeEnv& env = test_env();
  TypePtr widget = env.alias("Widget");
  REQUIRE(widget->tag == TypeTag::Mu);
  TypePtr u = unroll(widget);
  REQUIRE(u->tag == TypeTag::Union);

  const ObjectType* obj = nullptr;
  int prims = 0;
  for (const auto& m : u->members) {
    if (m->tag == TypeTag::Ref) obj = m->obj.get();
    if (m->tag == TypeTag::Prim || (m->tag == TypeTag::Named && m->name == "Bool")) ++prims;
  }
  REQUIRE(obj != nullptr);
  CHECK(prims == 5);  // Str, Num, Null, Bool, Undef

  // the star entry recursively holds Widget values
  REQUIRE(obj->star.is_present());
  CHECK(type_equal(obj->star.type, widget));

  // banned and absent fields, spelled exactly
  for (const char* banned : {"caller", "callee", "eval", "prototype", "watch",
                             "constructor", "__proto__", "unwatch", "arguments"}) {
    CAPTURE(banned);
    REQUIRE(obj->named.count(banned) == 1);
    CHECK(obj->named.at(banned).is_banned());
  }
  for (const char* absent : {"valueOf", "toString"}) {
    REQUIRE(obj->named.count(absent) == 1);
    CHECK(obj->named.at(absent).is_absent());
  }
  CHECK(type_equal(obj->named.at("___nodes___").type,
                   parse_type("Array<HTML> | Undef")));
  CHECK(type_equal(obj->named.at("___star___").type, parse_type("Bool | Undef")));

  // code: [Global | a] a ... -> a, with a unrolled to Widget here
  REQUIRE(obj->code);
  REQUIRE(obj->code->tag == TypeTag::Func);
  const FuncType& code = *obj->code->fn;
  CHECK(code.fixed.empty());
  REQUIRE(code.rest);
  CHECK(type_equal(code.rest, widget));
  CHECK(type_equal(code.result, widget));
  CHECK(type_equal(code.this_type, union_of({t_named("Global"), widget})));

  // proto: the eight safe prototypes
  CHECK(type_equal(obj->proto,
                   parse_type("Object | Function | Bunch | Array | RegExp | String "
                              "| Number | Boolean")));
}

TEST_CASE("the window fragment bans code loading") {
  const TypeEnv& env = test_env();
  SubtypeCtx ctx(&env.aliases);

  FieldsResult ev = fields(env.binding("window"), StringSet::singleton("eval"), ctx);
  REQUIRE(ev.banned_name.has_value());
  CHECK(*ev.banned_name == "eval");

  FieldsResult wr = fields(env.alias("Document"), StringSet::singleton("write"), ctx);
  CHECK(wr.banned_name.has_value());

  // setTimeout: (Widget -> Widget) x Widget -> Num, and never a string
  TypePtr st = env.binding("setTimeout");
  REQUIRE(st);
  REQUIRE(st->tag == TypeTag::Func);
  CHECK(st->fn->fixed.size() == 2);
  CHECK(type_equal(st->fn->result, t_num()));
  CHECK_FALSE(ctx.subtype(t_str(), st->fn->fixed[0]));

  // document.createElement : ("script")- -> HTML
  FieldsResult ce = fields(env.alias("Document"), StringSet::singleton("createElement"), ctx);
  REQUIRE(ce.ok());
  CHECK(type_equal(ce.type, parse_type("[Top] (\"script\")- -> HTML")));

  // RegExp's test method wants a primitive string
  FieldsResult te = fields(env.alias("RegExp"), StringSet::singleton("test"), ctx);
  REQUIRE(te.ok());
  CHECK(type_equal(te.type, parse_type("[Top] Str -> Bool")));
}

TEST_CASE("checking against the environment examples") {
  // window["eval"] is a banned-field error
  CheckReport r = check_monitor("window[\"eval\"];");
  CHECK(r.has_code(E_BANNED_FIELD));

  // setTimeout applied to (string, number) is an argument subtype error
  CheckReport r2 = check_monitor("setTimeout(\"alert(1)\", 10);");
  CHECK(r2.has_code(E_SUBTYPE));
}

TEST_CASE("env files merge over the builtin environment") {
  auto [env, heap] = builtin_env();
  (void)heap;
  load_env_text(env,
                "alias Pair = Ref {proto: Object, * : Num}\n"
                "p : Pair\n");
  REQUIRE(env.alias("Pair"));
  REQUIRE(env.binding("p"));
  CHECK(type_equal(env.binding("p"), t_named("Pair")));

  // an empty file changes nothing
  auto [env2, h2] = builtin_env();
  (void)h2;
  size_t aliases = env2.aliases.defs.size();
  size_t bindings = env2.bindings.size();
  load_env_text(env2, "\n# nothing here\n");
  CHECK(env2.aliases.defs.size() == aliases);
  CHECK(env2.bindings.size() == bindings);

  // multi-line declarations continue until brackets balance
  load_env_text(env2,
                "alias Wide = Ref {proto: Object,\n"
                "  \"x\": Num,\n"
                "  \"y\": Str}\n");
  CHECK(env2.alias("Wide"));

  CHECK_THROWS_AS(load_env_text(env2, "alias Broken\n"), EnvError);
}

TEST_CASE("shadowing setTimeout changes the verdict") {
  const char* src =
      "var later = function (func, timeout)\n"
      "/*: Widget * Widget -> Widget */\n"
      "{ setTimeout(func, timeout || 0); return undefined; };";

  CheckReport before = check_monitor(src);
  CHECK_FALSE(before.ok);  // unguarded widget argument

  auto [env, heap] = builtin_env();
  load_env_text(env, "setTimeout : [Top] Widget * Widget -> Num\n");
  auto prog = parse_surface(src);
  auto coree = desugar_program(prog, DesugarOptions{});
  CheckReport after = check_program({{"t", coree}}, env, heap);
  CHECK(after.ok);
  CHECK(before.to_text() != after.to_text());
}

TEST_CASE("corollary walks over the shipped environment") {
  WalkReport w = corollary_walks(test_env());
  for (const auto& v : w.violations) {
    CAPTURE(v);
  }
  CHECK(w.eval_guarded);
  CHECK(w.html_confined);
  CHECK(w.violations.empty());

  // HTML values never pass as Widgets
  CHECK_FALSE(subtype(test_env().alias("HTML"), test_env().alias("Widget"),
                      test_env().aliases));

  // and a deliberately broken environment is caught
  auto [env, heap] = builtin_env();
  (void)heap;
  load_env_text(env, "alias Bunch = Ref {proto: Object, * : absent,\n"
                     "  \"grab\": [Widget | Global] Widget ... -> HTML}\n");
  WalkReport bad = corollary_walks(env);
  CHECK_FALSE(bad.html_confined);
}

}  // namespace
}  // namespace sandcheck
