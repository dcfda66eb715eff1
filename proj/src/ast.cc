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

#include "sandcheck/ast.h"

#include <functional>

namespace sandcheck::core {

ExprPtr make(Expr e) { return std::make_shared<const Expr>(std::move(e)); }

ExprPtr c_const(ConstVal v, Span sp, bool synthetic) {
  Expr e;
  e.kind = ExprKind::Const;
  e.cval = std::move(v);
  e.span = sp;
  e.synthetic = synthetic;
  return make(std::move(e));
}

ExprPtr c_undef(Span sp) {
  ConstVal v;
  v.kind = ConstVal::Kind::Undef;
  return c_const(std::move(v), sp, true);
}

ExprPtr c_str(const std::string& s, Span sp, bool synthetic) {
  ConstVal v;
  v.kind = ConstVal::Kind::Str;
  v.str = s;
  return c_const(std::move(v), sp, synthetic);
}

ExprPtr c_var(const std::string& name, Span sp, bool synthetic) {
  Expr e;
  e.kind = ExprKind::Var;
  e.name = name;
  e.span = sp;
  e.synthetic = synthetic;
  return make(std::move(e));
}

ExprPtr c_seq(ExprPtr a, ExprPtr b, Span sp) {
  Expr e;
  e.kind = ExprKind::Seq;
  e.a = std::move(a);
  e.b = std::move(b);
  e.span = sp;
  e.synthetic = true;
  return make(std::move(e));
}

ExprPtr c_value(RtValue v) {
  Expr e;
  e.kind = ExprKind::Value;
  e.rt = std::move(v);
  e.synthetic = true;
  return make(std::move(e));
}

void walk(const ExprPtr& e, const std::function<void(const ExprPtr&)>& fn) {
  if (!e) return;
  fn(e);
  for (const auto& [k, v] : e->fields) {
    (void)k;
    walk(v, fn);
  }
  for (const auto& m : e->elems) walk(m, fn);
  walk(e->a, fn);
  walk(e->b, fn);
  walk(e->c, fn);
}

}  // namespace sandcheck::core
