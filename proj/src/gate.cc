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

#include "sandcheck/gate.h"

namespace sandcheck {

bool underscore_name(const std::string& name) {
  return name.size() >= 1 && name.front() == '_' && name.back() == '_';
}

namespace {

// Rejects underscore-wrapped names wherever they could reach a field: as
// identifiers, object keys, dot access, string-literal indices, and
// parameters. This is the lexical half of the lint behavior; computed
// names are left to the string-set types.
class LexicalScan {
 public:
  explicit LexicalScan(CheckReport& report) : report_(report) {}

  void program(const surface::Program& p) {
    for (const auto& s : p.statements) stmt(*s);
  }

 private:
  void flag(const std::string& name, Span sp) {
    report_.add(E_UNDERSCORE_NAME, sp,
                "name '" + name + "' starts and ends with an underscore");
  }

  void check_name(const std::string& name, Span sp) {
    if (underscore_name(name)) flag(name, sp);
  }

  void stmt(const surface::Stmt& s) {
    switch (s.kind) {
      case surface::StmtKind::Var:
        for (const auto& d : s.decls) {
          check_name(d.name, d.span);
          if (d.init) expr(*d.init);
        }
        break;
      case surface::StmtKind::Expr:
      case surface::StmtKind::Return:
      case surface::StmtKind::Throw:
        if (s.expr) expr(*s.expr);
        break;
      case surface::StmtKind::If:
        expr(*s.expr);
        for (const auto& b : s.body) stmt(*b);
        for (const auto& b : s.else_body) stmt(*b);
        break;
      case surface::StmtKind::While:
        expr(*s.expr);
        for (const auto& b : s.body) stmt(*b);
        break;
    }
  }

  void expr(const surface::Expr& e) {
    switch (e.kind) {
      case surface::ExprKind::Ident:
        check_name(e.str, e.span);
        break;
      case surface::ExprKind::Member:
        check_name(e.str, e.span);
        expr(*e.a);
        break;
      case surface::ExprKind::Index:
        if (e.b->kind == surface::ExprKind::Str) check_name(e.b->str, e.b->span);
        expr(*e.a);
        expr(*e.b);
        break;
      case surface::ExprKind::Object:
        for (const auto& f : e.fields) {
          check_name(f.key, f.key_span);
          expr(*f.value);
        }
        break;
      case surface::ExprKind::Func:
        for (size_t i = 0; i < e.params.size(); ++i) {
          check_name(e.params[i], i < e.param_spans.size() ? e.param_spans[i] : e.span);
        }
        for (const auto& s : e.body) stmt(*s);
        break;
      default:
        break;
    }
    if (e.kind != surface::ExprKind::Member && e.kind != surface::ExprKind::Index &&
        e.kind != surface::ExprKind::Object && e.kind != surface::ExprKind::Func) {
      if (e.a) expr(*e.a);
      if (e.b) expr(*e.b);
      if (e.c) expr(*e.c);
      for (const auto& el : e.elems) expr(*el);
    }
  }

  CheckReport& report_;
};

struct AnnotationScan {
  CheckReport& report;

  void expr(const surface::Expr& e) {
    if (e.ann) {
      report.add(E_UNSUPPORTED, e.ann->span, "annotations are not allowed in widgets");
    }
    if (e.a) expr(*e.a);
    if (e.b) expr(*e.b);
    if (e.c) expr(*e.c);
    for (const auto& el : e.elems) expr(*el);
    for (const auto& f : e.fields) expr(*f.value);
    for (const auto& s : e.body) stmt(*s);
  }

  void stmt(const surface::Stmt& s) {
    for (const auto& d : s.decls) {
      if (d.init) expr(*d.init);
    }
    if (s.expr) expr(*s.expr);
    for (const auto& b : s.body) stmt(*b);
    for (const auto& b : s.else_body) stmt(*b);
  }
};

void reject_annotations(const surface::Program& p, CheckReport& report) {
  AnnotationScan scan{report};
  for (const auto& s : p.statements) scan.stmt(*s);
}

}  // namespace

core::ExprPtr desugar_widget(const surface::Program& p, const TypeEnv& env) {
  DesugarOptions opts;
  opts.gate_defaults = true;
  opts.widget_type = t_named("Widget");
  TypePtr widget = env.alias("Widget");
  FuncType f;
  f.this_type = union_of({t_named("Global"), t_named("Widget")});
  f.rest = t_named("Widget");
  f.result = t_named("Widget");
  opts.widget_fn = t_func(std::move(f));
  (void)widget;
  return desugar_program(p, opts);
}

CheckReport widget_check(const surface::Program& p, const TypeEnv& env,
                         const AbstractHeap& heap) {
  CheckReport pre;
  LexicalScan scan(pre);
  scan.program(p);
  if (p.annotation_count > 0) reject_annotations(p, pre);

  core::ExprPtr coree = desugar_widget(p, env);
  CheckOptions opts;
  opts.gate_mode = true;
  Checker checker(env, heap, opts);
  checker.check_unit(coree);

  CheckReport out = std::move(checker.report());
  for (auto& d : pre.diagnostics) out.diagnostics.push_back(std::move(d));
  out.finalize();
  return out;
}

}  // namespace sandcheck
