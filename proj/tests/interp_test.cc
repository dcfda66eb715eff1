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
#include "sandcheck/interp.h"
#include "test_util.h"

namespace sandcheck {
namespace {

using testing::test_env;

struct Run {
  Store store;
  Outcome outcome;
};

Run eval_src(const std::string& src, int fuel = 100000) {
  Run r{make_builtin_store(), {}};
  auto coree = desugar_program(parse_surface(src), DesugarOptions{});
  auto bound = bind_globals(coree, r.store);
  r.outcome = eval_expr(r.store, bound, fuel);
  return r;
}

TEST_CASE("strict equality reduces in one step") {
  Store st = make_builtin_store();
  core::Expr eq;
  eq.kind = core::ExprKind::StrictEq;
  core::ConstVal one;
  one.kind = core::ConstVal::Kind::Num;
  one.num = 1;
  eq.a = core::c_const(one, {});
  eq.b = core::c_const(one, {});
  StepResult r = step(st, core::make(std::move(eq)));
  REQUIRE(r.kind == StepResult::Kind::Stepped);
  StepResult done = step(st, r.next);
  REQUIRE(done.kind == StepResult::Kind::Done);
  CHECK(done.value.kind == RtValue::Kind::Bool);
  CHECK(done.value.b);
}

TEST_CASE("missing fields fall through the prototype chain") {
  Run r = eval_src("var o = {}; var f = o.toString; f();");
  REQUIRE(r.outcome.is_value());
  CHECK(show_value(r.store, r.outcome.value) == "\"[object Object]\"");

  Run miss = eval_src("var o = {}; o.nothing;");
  REQUIRE(miss.outcome.is_value());
  CHECK(miss.outcome.value.kind == RtValue::Kind::Undef);
}

TEST_CASE("runtime errors instead of stuck states") {
  Run apply = eval_src("var five = 5; five(1);");
  REQUIRE(apply.outcome.kind == Outcome::Kind::Error);
  CHECK(apply.outcome.error.kind == std::string(E_APPLY));

  Run null_read = eval_src("var z = null; z.a;");
  REQUIRE(null_read.outcome.kind == Outcome::Kind::Error);
  CHECK(null_read.outcome.error.kind == std::string(E_NULL_LOOKUP));

  Run fuel = eval_src("var b = true; while (b) { b = true; }", 1000);
  CHECK(fuel.outcome.kind == Outcome::Kind::Fuel);
}

TEST_CASE("locations are fresh and never reused") {
  Store st = make_builtin_store();
  Loc before = st.next_loc();
  Loc a = st.alloc_var(RtValue::number(1), t_num());
  Loc b = st.alloc_var(RtValue::number(2), t_num());
  CHECK(a == before);
  CHECK(b == a + 1);
  CHECK(st.next_loc() == b + 1);
}

TEST_CASE("store typing on hand-built stores") {
  const TypeEnv& env = test_env();

  Store empty;
  AbstractHeap none;
  CHECK(store_typing_check(empty, none, env).ok);

  Store st;
  Loc cell = st.alloc_var(RtValue::number(5), t_num());
  AbstractHeap h;
  h.typing[cell] = t_num();
  CHECK(store_typing_check(st, h, env).ok);
  h.typing[cell] = t_str();
  CHECK_FALSE(store_typing_check(st, h, env).ok);

  // the builtin store conforms to its own heap typing
  Store builtin = make_builtin_store();
  CHECK(store_typing_check(builtin, heap_for(builtin), env).ok);
}

TEST_CASE("evaluation is deterministic") {
  const char* src =
      "var log = [];\n"
      "var f = function (x) { log.push(x); return x; };\n"
      "f(1); f(\"two\"); f(true);\n"
      "log.join(\",\");";
  Run a = eval_src(src);
  Run b = eval_src(src);
  REQUIRE(a.outcome.is_value());
  CHECK(show_value(a.store, a.outcome.value) == show_value(b.store, b.outcome.value));
  CHECK(a.store.effects == b.store.effects);
  CHECK(a.store.cells.size() == b.store.cells.size());
}

TEST_CASE("the timer wrapper records callbacks without firing them") {
  Run r = eval_src("setTimeout(function () { return window.eval; }, 0);");
  REQUIRE(r.outcome.is_value());
  CHECK(show_value(r.store, r.outcome.value) == "1");  // first timer id
  REQUIRE(r.store.effects.size() == 1);
  CHECK(r.store.effects[0].rfind("setTimeout", 0) == 0);
}

TEST_CASE("string natives used by the blacklist predicate") {
  Run c = eval_src("\"_private\".charAt(0);");
  REQUIRE(c.outcome.is_value());
  CHECK(show_value(c.store, c.outcome.value) == "\"_\"");

  Run s = eval_src("\"name_\".slice(-1);");
  REQUIRE(s.outcome.is_value());
  CHECK(show_value(s.store, s.outcome.value) == "\"_\"");
}

TEST_CASE("regexp test matches the url filter and demands a string") {
  Run yes = eval_src("url_re.test(\"background: URL(evil)\");");
  REQUIRE(yes.outcome.is_value());
  CHECK(yes.outcome.value.b);

  Run no = eval_src("url_re.test(\"plain red\");");
  REQUIRE(no.outcome.is_value());
  CHECK_FALSE(no.outcome.value.b);

  Run obj = eval_src("url_re.test({toString: function () { return \"x\"; }});");
  CHECK(obj.outcome.kind == Outcome::Kind::Error);
}

}  // namespace
}  // namespace sandcheck
