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

#include <set>
#include <vector>

#include "doctest.h"
#include "test_util.h"

namespace sandcheck {
namespace {

using testing::test_env;
using testing::TypeGen;

bool sub(const char* a, const char* b) {
  return subtype(parse_type(a), parse_type(b), test_env().aliases);
}

TEST_CASE("parse_type denotes the grammar") {
  TypePtr u = parse_type("Num | Str");
  REQUIRE(u->tag == TypeTag::Union);
  CHECK(u->members.size() == 2);

  TypePtr s = parse_type("(\"x\",\"foo\")+");
  REQUIRE(s->tag == TypeTag::StrSet);
  CHECK_FALSE(s->sset.negative);
  CHECK(s->sset.names == std::set<std::string>{"foo", "x"});

  TypePtr m = parse_type("rec a . Num | Ref {* : a, proto: Null}");
  REQUIRE(m->tag == TypeTag::Mu);
  TypePtr body = m->inner;
  REQUIRE(body->tag == TypeTag::Union);
  bool saw_ref = false;
  for (const auto& mem : body->members) {
    if (mem->tag == TypeTag::Ref) {
      saw_ref = true;
      CHECK(mem->obj->star.is_present());
      CHECK(mem->obj->star.type->tag == TypeTag::TypeVar);
      CHECK(is_prim(mem->obj->proto, PrimKind::Null));
    }
  }
  CHECK(saw_ref);

  CHECK_THROWS_AS(parse_type("rec a . b"), TypeParseError);
  CHECK_THROWS_AS(parse_type("Num |"), TypeParseError);
  // carried by the grammar, rejected later by the checker
  CHECK(parse_type("forall a . a -> a")->tag == TypeTag::Forall);
}

TEST_CASE("canonicalize flattens, dedupes and collapses") {
  TypePtr nested = t_union({t_num(), t_union({t_num(), t_str()})});
  TypePtr c = canonicalize(nested);
  REQUIRE(c->tag == TypeTag::Union);
  CHECK(c->members.size() == 2);

  CHECK(type_equal(canonicalize(t_union({t_num(), t_bot()})), t_num()));
  CHECK(type_equal(canonicalize(t_union({t_str()})), t_str()));
  CHECK(type_equal(canonicalize(t_intersect({t_top(), t_num()})), t_num()));

  TypeGen gen(11);
  for (int i = 0; i < 200; ++i) {
    TypePtr t = gen.closed(3);
    TypePtr once = canonicalize(t);
    CHECK(type_equal(once, canonicalize(once)));
  }
}

TEST_CASE("string set membership and subtraction") {
  StringSet xy = StringSet::positive({"x", "y"});
  CHECK(sset_member("x", xy));
  CHECK_FALSE(sset_member("z", xy));
  StringSet not_eval = StringSet::negative_of({"eval"});
  CHECK_FALSE(sset_member("eval", not_eval));
  CHECK(sset_member("z", StringSet::all_strings()));

  StringSet d1 = sset_subtract(xy, StringSet::positive({"y"}));
  CHECK(d1 == StringSet::positive({"x"}));
  StringSet d2 = sset_subtract(not_eval, StringSet::positive({"x"}));
  CHECK(d2 == StringSet::negative_of({"eval", "x"}));
  StringSet d3 = sset_subtract(StringSet::positive({"x"}), StringSet::positive({"x"}));
  CHECK(d3.is_empty());
  CHECK_THROWS_AS(sset_subtract(xy, StringSet::negative_of({"y"})), std::invalid_argument);
}

TEST_CASE("string set subtyping rules") {
  CHECK(sub("(\"x\")+", "(\"x\",\"y\")+"));
  CHECK(sub("(\"x\")+", "(\"y\",\"z\")-"));
  CHECK_FALSE(sub("(\"y\")+", "(\"y\",\"z\")-"));
  CHECK(sub("(\"a\",\"b\")+", "Str"));
  CHECK(sub("(\"a\")-", "Str"));
  CHECK(sub("Str", "()-"));
  CHECK_FALSE(sub("Str", "(\"x\")-"));
  CHECK_FALSE(sub("Str", "(\"x\")+"));
}

// Brute-force evaluation of the quantified definitions over a small
// alphabet plus one representative string outside it.
namespace oracle {

const std::vector<std::string> kAlphabet = {"a", "b", "c", "d", "e", "f"};
const std::string kFresh = "zz";

std::vector<StringSet> all_sets() {
  std::vector<StringSet> out;
  for (int neg = 0; neg < 2; ++neg) {
    for (unsigned mask = 0; mask < 64; ++mask) {
      StringSet s;
      s.negative = neg == 1;
      for (int i = 0; i < 6; ++i) {
        if (mask & (1u << i)) s.names.insert(kAlphabet[i]);
      }
      out.push_back(std::move(s));
    }
  }
  return out;
}

bool member(const std::string& f, const StringSet& s) {
  bool listed = s.names.count(f) > 0;
  return s.negative ? !listed : listed;
}

bool subset(const StringSet& a, const StringSet& b) {
  for (const auto& f : kAlphabet) {
    if (member(f, a) && !member(f, b)) return false;
  }
  if (member(kFresh, a) && !member(kFresh, b)) return false;
  return true;
}

}  // namespace oracle

TEST_CASE("set semantics agree with the quantified definitions") {
  auto sets = oracle::all_sets();
  int checked = 0;
  for (const auto& s1 : sets) {
    for (const auto& name : oracle::kAlphabet) {
      CHECK(sset_member(name, s1) == oracle::member(name, s1));
    }
    for (const auto& s2 : sets) {
      // subtype agrees with semantic inclusion
      bool impl = subtype(t_strset(s1), t_strset(s2), test_env().aliases);
      bool want = oracle::subset(s1, s2);
      if (impl != want) {
        CAPTURE(sset_to_string(s1));
        CAPTURE(sset_to_string(s2));
        CHECK(impl == want);
      }
      ++checked;
      // subtraction (defined for positive subtrahends) removes exactly
      if (!s2.negative) {
        StringSet d = sset_subtract(s1, s2);
        for (const auto& name : oracle::kAlphabet) {
          CHECK(sset_member(name, d) ==
                (oracle::member(name, s1) && !oracle::member(name, s2)));
        }
        CHECK(sset_member(oracle::kFresh, d) ==
              (oracle::member(oracle::kFresh, s1) && !oracle::member(oracle::kFresh, s2)));
      }
    }
  }
  CHECK(checked == 128 * 128);
}

TEST_CASE("subtype is reflexive and transitive on small closed types") {
  TypeGen gen(17);
  std::vector<TypePtr> corpus;
  for (int i = 0; i < 24; ++i) corpus.push_back(canonicalize(gen.closed(3)));
  corpus.push_back(parse_type("Num"));
  corpus.push_back(parse_type("Num | Str"));
  corpus.push_back(parse_type("(\"x\")+"));
  corpus.push_back(parse_type("()-"));
  corpus.push_back(parse_type("Str"));
  corpus.push_back(parse_type("Ref {proto: Null, * : Num}"));
  corpus.push_back(parse_type("Top"));
  corpus.push_back(parse_type("Bot"));

  SubtypeCtx ctx(&test_env().aliases);
  for (const auto& t : corpus) CHECK(ctx.subtype(t, t));

  std::vector<std::vector<bool>> rel(corpus.size(), std::vector<bool>(corpus.size()));
  for (size_t i = 0; i < corpus.size(); ++i) {
    for (size_t j = 0; j < corpus.size(); ++j) {
      rel[i][j] = ctx.subtype(corpus[i], corpus[j]);
    }
  }
  for (size_t i = 0; i < corpus.size(); ++i) {
    for (size_t j = 0; j < corpus.size(); ++j) {
      if (!rel[i][j]) continue;
      for (size_t k = 0; k < corpus.size(); ++k) {
        if (rel[j][k]) CHECK(rel[i][k]);
      }
    }
  }
}

TEST_CASE("subtype reflexivity on 200 random closed types") {
  TypeGen gen(23);
  SubtypeCtx ctx(&test_env().aliases);
  for (int i = 0; i < 200; ++i) {
    TypePtr t = canonicalize(gen.closed(4));
    REQUIRE(type_closed(t));
    CHECK(ctx.subtype(t, t));
  }
}

TEST_CASE("canonicalization does not change subtyping") {
  TypeGen gen(29);
  SubtypeCtx ctx(&test_env().aliases);
  for (int i = 0; i < 120; ++i) {
    TypePtr a = gen.closed(3);
    TypePtr b = gen.closed(3);
    CHECK(ctx.subtype(a, b) == ctx.subtype(canonicalize(a), canonicalize(b)));
  }
}

TEST_CASE("Widget and Global are unrelated") {
  CHECK_FALSE(sub("Widget", "Global"));
  CHECK_FALSE(sub("Global", "Widget"));
}

TEST_CASE("unroll substitutes the binder with the whole type") {
  TypePtr m = parse_type("rec a . Num | Ref {* : a, proto: Null}");
  TypePtr u = unroll(m);
  REQUIRE(u->tag == TypeTag::Union);
  bool ok = false;
  for (const auto& mem : u->members) {
    if (mem->tag == TypeTag::Ref && mem->obj->star.is_present()) {
      ok = type_equal(mem->obj->star.type, m);
    }
  }
  CHECK(ok);

  // Widget's star field is Widget itself
  TypePtr widget = test_env().alias("Widget");
  TypePtr uw = unroll(widget);
  for (const auto& mem : uw->members) {
    if (mem->tag == TypeTag::Ref) CHECK(type_equal(mem->obj->star.type, widget));
  }

  SubtypeCtx ctx(&test_env().aliases);
  TypeGen gen(31);
  for (int i = 0; i < 100; ++i) {
    TypePtr t = canonicalize(gen.mu(2));
    TypePtr un = unroll(t);
    CHECK(ctx.subtype(un, t));
    CHECK(ctx.subtype(t, un));
  }
}

TEST_CASE("every string set is a string; only the empty negative set covers Str") {
  auto sets = oracle::all_sets();
  for (const auto& s : sets) {
    CHECK(sub(sset_to_string(s).c_str(), "Str"));
    bool covers = subtype(t_str(), t_strset(s), test_env().aliases);
    CHECK(covers == s.is_all());
  }
}

TEST_CASE("printing round-trips through the parser") {
  const char* samples[] = {
      "Num | Str",
      "(\"x\", \"foo\")+",
      "()-",
      "Ref {proto: Null, * : Bool, \"x\": Num}",
      "[Widget | Global] Widget ... -> Widget",
      "[Top] (\"script\")- -> HTML",
      "rec a . Num | Ref {proto: Null, * : a}",
      "Array<HTML> | Undef",
      "(Num -> Str) & (Str -> Num)",
      "-> Str",
  };
  for (const char* s : samples) {
    TypePtr t = parse_type(s);
    CHECK(type_equal(parse_type(print_type(t)), t));
  }
  TypeGen gen(37);
  for (int i = 0; i < 150; ++i) {
    TypePtr t = canonicalize(gen.closed(3));
    CAPTURE(print_type(t));
    CHECK(type_equal(parse_type(print_type(t)), t));
  }
  // the shipped Widget definition round-trips too
  TypePtr widget = test_env().alias("Widget");
  CHECK(type_equal(parse_type(print_type(widget)), widget));
}

}  // namespace
}  // namespace sandcheck
