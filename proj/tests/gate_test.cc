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

#include <sstream>

#include "doctest.h"
#include "test_util.h"

namespace sandcheck {
namespace {

using testing::check_widget;

TEST_CASE("the lexical underscore rule") {
  CHECK(underscore_name("_x_"));
  CHECK(underscore_name("__proto__"));
  CHECK(underscore_name("___nodes___"));
  CHECK(underscore_name("_"));
  CHECK_FALSE(underscore_name("x"));
  CHECK_FALSE(underscore_name("_x"));
  CHECK_FALSE(underscore_name("x_"));
  CHECK_FALSE(underscore_name("to__x"));
}

TEST_CASE("quoted private fields are rejected at the gate") {
  CheckReport r = check_widget("var fakeBunch = {\"___nodes___\": [1]};");
  CHECK(r.has_code(E_UNDERSCORE_NAME));
  CHECK(r.has_code(E_SUBTYPE));  // the field must hold wrapped nodes, not widgets
}

TEST_CASE("this is not widget-typed") {
  CheckReport r = check_widget("var f = function () { return this; };");
  CHECK(r.has_code(E_THIS_ESCAPES));
}

TEST_CASE("array members reachable through the safe prototypes are fine") {
  CheckReport r = check_widget("var a = [1, 2]; a.concat;");
  CHECK(r.ok);
}

TEST_CASE("computed banned names are caught by the all-strings index") {
  CheckReport r = check_widget("var obj = {}; obj[\"__pro\" + \"to__\"];");
  CHECK(r.has_code(E_BANNED_FIELD));
  CHECK_FALSE(r.has_code(E_UNDERSCORE_NAME));  // neither literal is underscore-wrapped
}

TEST_CASE("annotations are rejected in widgets") {
  CheckReport r = check_widget(
      "var f = function (x)\n/*: Widget -> Widget */\n{ return x; };");
  CHECK(r.has_code(E_UNSUPPORTED));
}

TEST_CASE("gate acceptance is closed under statement prefixes") {
  const char* prog =
      "var o = {a: 1, b: \"two\"};\n"
      "o.c = [1, 2, 3];\n"
      "var f = function (x) { return x; };\n"
      "var r = f(o.a);\n"
      "r;\n";
  // the whole program is accepted, and so is every prefix of it
  std::string src;
  std::istringstream lines(prog);
  std::string line;
  while (std::getline(lines, line)) {
    src += line + "\n";
    CAPTURE(src);
    CHECK(check_widget(src).ok);
  }
}

TEST_CASE("accepted widgets never suppress banned-field checks") {
  // acceptance means zero diagnostics of any kind, banned fields included
  const char* accepted[] = {
      "var x = 1; x = x;",
      "var o = {k: \"v\"}; o.k;",
      "var a = []; a.push(1); a.length;",
  };
  for (const char* src : accepted) {
    CheckReport r = check_widget(src);
    CHECK(r.ok);
    CHECK_FALSE(r.has_code(E_BANNED_FIELD));
    CHECK(r.diagnostics.empty());
  }
}

TEST_CASE("widgets cannot reach unwrapped document functions") {
  CHECK_FALSE(check_widget("document.write(\"x\");").ok);
  CHECK_FALSE(check_widget("var d = document;").ok);
  CHECK_FALSE(check_widget("setTimeout(function (x) { return x; }, 0);").ok);
}

TEST_CASE("gate verdicts for the one-way lint comparison") {
  // typable although ad hoc lint filters reject these
  CHECK(check_widget("var o = {a: 1}; var v = o[\"a\"]; v;").ok);
  CHECK(check_widget("var constructor = 1; constructor + 2;").ok);
}

}  // namespace
}  // namespace sandcheck
