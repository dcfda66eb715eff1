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
#include "sandcheck/fuzz.h"
#include "sandcheck/interp.h"
#include "test_util.h"

namespace sandcheck {
namespace {

using core::ExprKind;
using core::ExprPtr;

ExprPtr desugar_src(const std::string& src) {
  return desugar_program(parse_surface(src), DesugarOptions{});
}

TEST_CASE("surface parsing basics") {
  surface::Program p = parse_surface("var x = 1;");
  REQUIRE(p.statements.size() == 1);
  CHECK(p.statements[0]->kind == surface::StmtKind::Var);
  CHECK(p.statements[0]->decls[0].name == "x");
  CHECK(p.statements[0]->decls[0].init->kind == surface::ExprKind::Num);

  // annotations attach between the parameter list and the body
  surface::Program later = parse_surface(
      "var later = function (func, timeout)\n"
      "/*: Widget * Widget -> Widget */\n"
      "{ return func; };");
  const auto& init = later.statements[0]->decls[0].init;
  REQUIRE(init->kind == surface::ExprKind::Func);
  REQUIRE(init->ann.has_value());
  CHECK_FALSE(init->ann->cheat);
  CHECK(init->ann->type->tag == TypeTag::Func);
  CHECK(later.annotation_count == 1);

  // the prefix position works too
  surface::Program pre = parse_surface("var f = /*: Widget -> Widget */ function (x) {};");
  CHECK(pre.statements[0]->decls[0].init->ann.has_value());

  // __proto__ parses; rejecting it is the checker's job
  CHECK_NOTHROW(parse_surface("var o = {}; o.__proto__;"));

  CHECK_THROWS_AS(parse_surface("var x = 1"), ParseError);          // missing semicolon
  CHECK_THROWS_AS(parse_surface("for (;;) {}"), ParseError);        // outside the subset
  CHECK_THROWS_AS(parse_surface("var x = a == b;"), ParseError);    // loose equality
  CHECK_THROWS_AS(parse_surface("/*: Num */ var x = 1;"), ParseError);
  CHECK_THROWS_AS(
      parse_surface("var f = function () { while (true) { return 1; } };"), ParseError);
}

TEST_CASE("desugaring shapes") {
  // dot access becomes bracket access with a literal string index
  ExprPtr e = desugar_src("var o = {}; o.x;");
  bool saw_get = false;
  core::walk(e, [&](const ExprPtr& n) {
    if (n->kind == ExprKind::GetField) {
      saw_get = true;
      REQUIRE(n->b->kind == ExprKind::Const);
      CHECK(n->b->cval.str == "x");
    }
  });
  CHECK(saw_get);

  // a plain call passes the global object as this
  ExprPtr call = desugar_src("var f = function () {}; f();");
  bool saw_app = false;
  core::walk(call, [&](const ExprPtr& n) {
    if (n->kind == ExprKind::App) {
      saw_app = true;
      REQUIRE(n->b->kind == ExprKind::Var);
      CHECK(n->b->name == "%global");
      CHECK(n->b->synthetic);
    }
  });
  CHECK(saw_app);

  // a method call evaluates the receiver once and passes it as this
  ExprPtr mc = desugar_src("var o = {m: function (x) {}}; o.m(1);");
  bool saw_method = false;
  core::walk(mc, [&](const ExprPtr& n) {
    if (n->kind == ExprKind::App && n->a->kind == ExprKind::GetField) {
      saw_method = true;
      CHECK(n->b->kind == ExprKind::Var);
      CHECK(n->a->a->kind == ExprKind::Var);
      CHECK(n->a->a->name == n->b->name);  // same temporary
    }
  });
  CHECK(saw_method);

  // numeric literal indices read as canonical names
  ExprPtr idx = desugar_src("var a = [1]; a[0];");
  bool saw_zero = false;
  core::walk(idx, [&](const ExprPtr& n) {
    if (n->kind == ExprKind::GetField && n->b->kind == ExprKind::Const &&
        n->b->cval.str == "0") {
      saw_zero = true;
    }
  });
  CHECK(saw_zero);
}

Outcome eval_src(const std::string& src, int fuel = 100000) {
  auto coree = desugar_src(src);
  Store st = make_builtin_store();
  auto bound = bind_globals(coree, st);
  return eval_expr(st, bound, fuel);
}

TEST_CASE("short-circuit operators match their conditional expansion") {
  struct Case {
    const char* lit;
    bool truthy;
  };
  const Case cases[] = {{"0", false},    {"1", true},      {"\"\"", false}, {"\"x\"", true},
                        {"null", false}, {"undefined", false}, {"true", true}, {"false", false}};
  for (const auto& c : cases) {
    // a || 0 yields a when truthy, else 0
    Outcome o = eval_src(std::string("var a = ") + c.lit + "; a || 0;");
    REQUIRE(o.is_value());
    Outcome direct = eval_src(std::string("var a = ") + c.lit + "; a;");
    Store dummy;
    if (c.truthy) {
      CHECK(show_value(dummy, o.value) == show_value(dummy, direct.value));
    } else {
      CHECK(show_value(dummy, o.value) == "0");
    }
    // a && 1 yields a when falsy, else 1
    Outcome a = eval_src(std::string("var a = ") + c.lit + "; a && 1;");
    REQUIRE(a.is_value());
    if (c.truthy) {
      CHECK(show_value(dummy, a.value) == "1");
    } else {
      CHECK(show_value(dummy, a.value) == show_value(dummy, direct.value));
    }
  }
}

TEST_CASE("desugaring is total over parser-accepted programs") {
  int parsed = 0;
  for (uint64_t seed = 0; seed < 1000; ++seed) {
    std::string src = generate_widget_source(900000 + seed, 4, false);
    surface::Program prog;
    try {
      prog = parse_surface(src);
    } catch (const ParseError&) {
      continue;  // the generator only emits parseable programs, but be safe
    }
    ++parsed;
    CHECK_NOTHROW(desugar_program(prog, DesugarOptions{}));
  }
  CHECK(parsed == 1000);
}

TEST_CASE("hoisted declarations keep function scope") {
  // a var declared in a branch is visible after it
  Outcome o = eval_src("var c = true; if (c) { var y = 5; } y;");
  REQUIRE(o.is_value());
  Store dummy;
  CHECK(show_value(dummy, o.value) == "5");

  // re-declaration of a parameter keeps the parameter binding
  Outcome p = eval_src("var f = function (x) { var x = 9; return x; }; f(1);");
  REQUIRE(p.is_value());
  CHECK(show_value(dummy, p.value) == "9");
}

TEST_CASE("surface fixtures evaluate to their reference outputs") {
  Store dummy;
  struct Case {
    const char* src;
    const char* expect;
  };
  const Case cases[] = {
      {"1 + 2 * 3;", "7"},
      {"\"a\" + \"b\";", "\"ab\""},
      {"typeof \"s\";", "\"string\""},
      {"typeof null;", "\"object\""},
      {"var o = {a: 1}; delete o.a; o.a;", "undefined"},
      {"var o = {}; o.x = 4; o.x;", "4"},
      {"5 % 2;", "1"},
      {"!false;", "true"},
      {"1 !== 2;", "true"},
      {"var a = [7, 8]; a[1];", "8"},
      {"var a = []; a.push(3); a.length;", "1"},
      {"var f = function (n) { return -n; }; f(3);", "-3"},
  };
  for (const auto& c : cases) {
    CAPTURE(c.src);
    Outcome o = eval_src(c.src);
    REQUIRE(o.is_value());
    CHECK(show_value(dummy, o.value) == c.expect);
  }
}

}  // namespace
}  // namespace sandcheck
