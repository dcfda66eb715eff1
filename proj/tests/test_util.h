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

#pragma once

#include <random>
#include <vector>

#include "sandcheck/checker.h"
#include "sandcheck/desugar.h"
#include "sandcheck/env.h"
#include "sandcheck/gate.h"
#include "sandcheck/parser.h"
#include "sandcheck/type_parser.h"

namespace sandcheck::testing {

inline const TypeEnv& test_env() {
  static TypeEnv env = builtin_env().first;
  return env;
}

inline CheckReport check_monitor(const std::string& src) {
  auto prog = parse_surface(src);
  auto coree = desugar_program(prog, DesugarOptions{});
  AbstractHeap heap;
  return check_program({{"test", coree}}, test_env(), heap);
}

inline CheckReport check_widget(const std::string& src) {
  auto prog = parse_surface(src);
  AbstractHeap heap;
  return widget_check(prog, test_env(), heap);
}

// Deterministic generator of small closed types for property tests.
class TypeGen {
 public:
  explicit TypeGen(uint64_t seed) : rng_(seed) {}

  TypePtr closed(int depth) {
    switch (pick(depth <= 0 ? 4 : 10)) {
      case 0: return t_num();
      case 1: return t_str();
      case 2: return pick(2) ? t_true() : t_undef();
      case 3: return t_strset(strset());
      case 4: return t_union({closed(depth - 1), closed(depth - 1)});
      case 5: {
        ObjectType o;
        o.proto = pick(2) ? t_null() : t_named("Object");
        o.star = pick(2) ? FieldPresence::absent() : FieldPresence::present(closed(depth - 1));
        int n = pick(3);
        const char* names[] = {"a", "b", "c"};
        for (int i = 0; i < n; ++i) {
          switch (pick(3)) {
            case 0: o.named[names[i]] = FieldPresence::present(closed(depth - 1)); break;
            case 1: o.named[names[i]] = FieldPresence::banned(); break;
            default: o.named[names[i]] = FieldPresence::absent(); break;
          }
        }
        return t_ref(std::move(o));
      }
      case 6: {
        FuncType f;
        f.this_type = t_top();
        int n = pick(3);
        for (int i = 0; i < n; ++i) f.fixed.push_back(closed(depth - 1));
        if (pick(2)) f.rest = closed(depth - 1);
        f.result = closed(depth - 1);
        return t_func(std::move(f));
      }
      case 7: return t_array(closed(depth - 1));
      case 8: return mu(depth);
      default: return pick(2) ? t_null() : t_false();
    }
  }

  TypePtr mu(int depth) {
    // body always mentions the variable under a Ref, keeping it contractive
    ObjectType o;
    o.proto = t_null();
    o.star = FieldPresence::present(t_typevar("m"));
    if (pick(2)) o.named["a"] = FieldPresence::present(closed(depth - 1));
    return t_mu("m", t_union({closed(depth - 1), t_ref(std::move(o))}));
  }

  StringSet strset() {
    StringSet s;
    s.negative = pick(2) == 1;
    const char* names[] = {"p", "q", "r"};
    int n = pick(3) + (s.negative ? 0 : 1);
    for (int i = 0; i < n; ++i) s.names.insert(names[pick(3)]);
    return s;
  }

  int pick(int n) { return static_cast<int>(rng_() % static_cast<uint64_t>(n)); }

 private:
  std::mt19937_64 rng_;
};

}  // namespace sandcheck::testing
