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

#include "sandcheck/desugar.h"

#include <cmath>
#include <set>

namespace sandcheck {

namespace {

using core::BinOpKind;
using core::ConstVal;
using core::Expr;
using core::ExprKind;
using core::ExprPtr;

class Desugarer {
 public:
  explicit Desugarer(const DesugarOptions& opts) : opts_(opts) {}

  ExprPtr program(const surface::Program& p) {
    // Top level behaves like a function body whose `this` is the global
    // object and that yields the value of its last statement.
    return scope_body({}, p.statements, /*top_level=*/true);
  }

 private:
  std::string fresh() { return "%t" + std::to_string(temp_counter_++); }

  TypePtr gate_decl() const { return opts_.gate_defaults ? opts_.widget_type : nullptr; }

  // Desugar-introduced temporaries hold whatever the subexpression held;
  // their type is inferred from the initializer rather than declared.
  ExprPtr let_node(const std::string& name, ExprPtr init, ExprPtr body, Span sp) {
    Expr e;
    e.kind = ExprKind::Let;
    e.name = name;
    e.a = std::move(init);
    e.b = std::move(body);
    e.span = sp;
    e.synthetic = true;
    return make(std::move(e));
  }

  // --- var scoping -------------------------------------------------------

  static void collect_vars(const std::vector<surface::StmtPtr>& stmts,
                           bool top, std::set<std::string>& toplevel_once,
                           std::set<std::string>& hoisted) {
    std::set<std::string> seen;
    std::function<void(const std::vector<surface::StmtPtr>&, bool)> go =
        [&](const std::vector<surface::StmtPtr>& list, bool at_top) {
          for (const auto& s : list) {
            switch (s->kind) {
              case surface::StmtKind::Var:
                for (const auto& d : s->decls) {
                  if (!at_top || seen.count(d.name)) {
                    hoisted.insert(d.name);
                    toplevel_once.erase(d.name);
                  } else {
                    toplevel_once.insert(d.name);
                  }
                  seen.insert(d.name);
                }
                break;
              case surface::StmtKind::If:
                go(s->body, false);
                go(s->else_body, false);
                break;
              case surface::StmtKind::While:
                go(s->body, false);
                break;
              default:
                break;
            }
          }
        };
    go(stmts, top);
    (void)top;
  }

  static bool contains_return(const std::vector<surface::StmtPtr>& stmts) {
    for (const auto& s : stmts) {
      switch (s->kind) {
        case surface::StmtKind::Return:
          return true;
        case surface::StmtKind::If:
          if (contains_return(s->body) || contains_return(s->else_body)) return true;
          break;
        case surface::StmtKind::While:
          if (contains_return(s->body)) return true;
          break;
        default:
          break;
      }
    }
    return false;
  }

  // Desugars a function (or top-level) body: hoisted vars first, then the
  // statement chain.
  ExprPtr scope_body(const std::vector<std::string>& params,
                     const std::vector<surface::StmtPtr>& stmts, bool top_level) {
    std::set<std::string> inline_ok, hoisted;
    collect_vars(stmts, true, inline_ok, hoisted);
    std::set<std::string> redeclared;
    for (const auto& p : params) {
      if (inline_ok.count(p) || hoisted.count(p)) {
        // re-declaring a parameter keeps the parameter binding
        hoisted.erase(p);
        inline_ok.erase(p);
        redeclared.insert(p);
      }
    }
    scopes_.push_back({inline_ok, hoisted, top_level, redeclared});
    ExprPtr chain = stmt_chain(stmts, 0);
    Span sp = stmts.empty() ? Span{} : stmts.front()->span;
    for (auto it = hoisted.rbegin(); it != hoisted.rend(); ++it) {
      ExprPtr init = core::c_undef(sp);
      Expr e;
      e.kind = ExprKind::Let;
      e.name = *it;
      e.a = std::move(init);
      e.b = std::move(chain);
      e.span = sp;
      e.synthetic = true;
      e.declared = gate_decl();
      chain = make(std::move(e));
    }
    scopes_.pop_back();
    return chain;
  }

  struct Scope {
    std::set<std::string> inline_ok;
    std::set<std::string> hoisted;
    bool top_level;
    std::set<std::string> redeclared_params;
  };

  bool is_hoisted_here(const std::string& name) const {
    return !scopes_.empty() && scopes_.back().hoisted.count(name) > 0;
  }

  ExprPtr stmt_chain(const std::vector<surface::StmtPtr>& stmts, size_t i) {
    if (i >= stmts.size()) return core::c_undef(stmts.empty() ? Span{} : stmts.back()->span);
    const surface::Stmt& s = *stmts[i];
    switch (s.kind) {
      case surface::StmtKind::Var: {
        // Chain declarators; hoisted ones become assignments in place.
        return var_chain(stmts, i, 0);
      }
      case surface::StmtKind::Expr: {
        ExprPtr e = expr(s.expr);
        // the top level yields the value of its final statement
        if (i + 1 == stmts.size() && !scopes_.empty() && scopes_.back().top_level) {
          return e;
        }
        return core::c_seq(std::move(e), stmt_chain(stmts, i + 1), s.span);
      }
      case surface::StmtKind::Return: {
        return s.expr ? expr(s.expr) : core::c_undef(s.span);
      }
      case surface::StmtKind::Throw: {
        Expr t;
        t.kind = ExprKind::Throw;
        t.a = expr(s.expr);
        t.span = s.span;
        return make(std::move(t));
      }
      case surface::StmtKind::While: {
        Expr w;
        w.kind = ExprKind::While;
        w.a = expr(s.expr);
        w.b = block(s.body);
        w.span = s.span;
        return core::c_seq(make(std::move(w)), stmt_chain(stmts, i + 1), s.span);
      }
      case surface::StmtKind::If: {
        bool needs_merge = contains_return(s.body) || contains_return(s.else_body);
        if (!needs_merge) {
          Expr f;
          f.kind = ExprKind::If;
          f.a = expr(s.expr);
          f.b = block(s.body);
          f.c = block(s.else_body);
          f.span = s.span;
          return core::c_seq(make(std::move(f)), stmt_chain(stmts, i + 1), s.span);
        }
        // A branch returns: the statements after the if run on whichever
        // branch falls through, so they are desugared into both arms.
        std::vector<surface::StmtPtr> then_side = s.body;
        std::vector<surface::StmtPtr> else_side = s.else_body;
        for (size_t k = i + 1; k < stmts.size(); ++k) {
          then_side.push_back(stmts[k]);
          else_side.push_back(stmts[k]);
        }
        Expr f;
        f.kind = ExprKind::If;
        f.a = expr(s.expr);
        f.b = stmt_chain(then_side, 0);
        f.c = stmt_chain(else_side, 0);
        f.span = s.span;
        return make(std::move(f));
      }
    }
    return core::c_undef(s.span);
  }

  ExprPtr var_chain(const std::vector<surface::StmtPtr>& stmts, size_t i, size_t d) {
    const surface::Stmt& s = *stmts[i];
    if (d >= s.decls.size()) return stmt_chain(stmts, i + 1);
    const surface::VarDecl& decl = s.decls[d];
    bool as_assign = is_hoisted_here(decl.name) ||
                     (!scopes_.empty() && scopes_.back().redeclared_params.count(decl.name));
    if (as_assign) {
      if (!decl.init) return var_chain(stmts, i, d + 1);
      Expr a;
      a.kind = ExprKind::SetVar;
      a.name = decl.name;
      a.a = expr(decl.init);
      a.span = decl.span;
      return core::c_seq(make(std::move(a)), var_chain(stmts, i, d + 1), decl.span);
    }
    ExprPtr init = decl.init ? expr(decl.init) : core::c_undef(decl.span);
    Expr e;
    e.kind = ExprKind::Let;
    e.name = decl.name;
    e.a = std::move(init);
    e.b = var_chain(stmts, i, d + 1);
    e.span = decl.span;
    e.declared = gate_decl();
    return make(std::move(e));
  }

  // A nested block used as an if/while arm: no returns inside (the parser
  // rejects return-in-while and return-bearing ifs are merged above), so
  // the chain's value is simply discarded.
  ExprPtr block(const std::vector<surface::StmtPtr>& stmts) {
    if (stmts.empty()) return core::c_undef(Span{});
    return stmt_chain(stmts, 0);
  }

  // --- expressions -------------------------------------------------------

  ExprPtr this_ref(Span sp) {
    bool top = scopes_.empty() || scopes_.back().top_level;
    ExprPtr v = core::c_var(top ? "%global" : "%this", sp, false);
    auto mut = std::make_shared<Expr>(*v);
    mut->from_this = true;
    return mut;
  }

  ExprPtr global_ref(Span sp) { return core::c_var("%global", sp, true); }

  ExprPtr expr(const surface::ExprPtr& se) {
    const surface::Expr& s = *se;
    switch (s.kind) {
      case surface::ExprKind::Num: {
        ConstVal v;
        v.kind = ConstVal::Kind::Num;
        v.num = s.num;
        return finish_ann(se, core::c_const(std::move(v), s.span));
      }
      case surface::ExprKind::Str:
        return finish_ann(se, core::c_str(s.str, s.span));
      case surface::ExprKind::True:
      case surface::ExprKind::False: {
        ConstVal v;
        v.kind = ConstVal::Kind::Bool;
        v.b = s.kind == surface::ExprKind::True;
        return finish_ann(se, core::c_const(std::move(v), s.span));
      }
      case surface::ExprKind::Null: {
        ConstVal v;
        v.kind = ConstVal::Kind::Null;
        return finish_ann(se, core::c_const(std::move(v), s.span));
      }
      case surface::ExprKind::Undefined: {
        ConstVal v;
        v.kind = ConstVal::Kind::Undef;
        return finish_ann(se, core::c_const(std::move(v), s.span));
      }
      case surface::ExprKind::Ident:
        return finish_ann(se, core::c_var(s.str, s.span));
      case surface::ExprKind::This:
        return finish_ann(se, this_ref(s.span));
      case surface::ExprKind::Array: {
        Expr e;
        e.kind = ExprKind::ArrayLit;
        for (const auto& el : s.elems) e.elems.push_back(expr(el));
        e.span = s.span;
        e.hint = gate_decl();
        return finish_ann(se, make(std::move(e)));
      }
      case surface::ExprKind::Object: {
        Expr e;
        e.kind = ExprKind::Object;
        for (const auto& f : s.fields) {
          e.fields.emplace_back(f.key, expr(f.value));
          e.field_spans.push_back(f.key_span);
        }
        e.span = s.span;
        e.hint = gate_decl();
        return finish_ann(se, make(std::move(e)));
      }
      case surface::ExprKind::Func: {
        Expr e;
        e.kind = ExprKind::Func;
        e.params = s.params;
        e.span = s.span;
        e.ann = s.ann;
        if (!e.ann && opts_.gate_defaults && opts_.widget_fn) {
          Annotation ann;
          ann.cheat = false;
          ann.type = opts_.widget_fn;
          ann.span = s.span;
          e.ann = ann;
        }
        e.hint = gate_decl();
        e.a = scope_body(s.params, s.body, /*top_level=*/false);
        return make(std::move(e));
      }
      case surface::ExprKind::Member: {
        Expr e;
        e.kind = ExprKind::GetField;
        e.a = expr(s.a);
        e.b = core::c_str(s.str, s.span, false);
        e.span = s.span;
        return finish_ann(se, make(std::move(e)));
      }
      case surface::ExprKind::Index: {
        Expr e;
        e.kind = ExprKind::GetField;
        e.a = expr(s.a);
        e.b = index_expr(s.b);
        e.span = s.span;
        return finish_ann(se, make(std::move(e)));
      }
      case surface::ExprKind::Call:
        return finish_ann(se, call(s));
      case surface::ExprKind::Assign:
        return finish_ann(se, assign(s));
      case surface::ExprKind::Delete: {
        const surface::Expr& target = *s.a;
        Expr e;
        e.kind = ExprKind::DelField;
        e.a = expr(target.a);
        e.b = target.kind == surface::ExprKind::Member
                  ? core::c_str(target.str, target.span, false)
                  : index_expr(target.b);
        e.span = s.span;
        return finish_ann(se, make(std::move(e)));
      }
      case surface::ExprKind::Unary:
        return finish_ann(se, unary(s));
      case surface::ExprKind::Binary:
        return finish_ann(se, binary(s));
    }
    return core::c_undef(s.span);
  }

  // Numeric literal indices read as their canonical property name.
  ExprPtr index_expr(const surface::ExprPtr& idx) {
    if (idx->kind == surface::ExprKind::Num) {
      double v = idx->num;
      if (std::floor(v) == v && std::abs(v) < 9007199254740992.0) {
        return core::c_str(std::to_string(static_cast<long long>(v)), idx->span, false);
      }
    }
    return expr(idx);
  }

  ExprPtr call(const surface::Expr& s) {
    const surface::ExprPtr& callee = s.a;
    if (callee->kind == surface::ExprKind::Member || callee->kind == surface::ExprKind::Index) {
      // o.m(a) evaluates o once, then applies with this bound to it.
      std::string tmp = fresh();
      Expr get;
      get.kind = ExprKind::GetField;
      get.a = core::c_var(tmp, callee->span, true);
      get.b = callee->kind == surface::ExprKind::Member
                  ? core::c_str(callee->str, callee->span, false)
                  : index_expr(callee->b);
      get.span = callee->span;

      Expr app;
      app.kind = ExprKind::App;
      app.a = make(std::move(get));
      app.b = core::c_var(tmp, callee->span, true);
      for (const auto& arg : s.elems) app.elems.push_back(expr(arg));
      app.span = s.span;

      return let_node(tmp, expr(callee->a), make(std::move(app)), s.span);
    }
    Expr app;
    app.kind = ExprKind::App;
    app.a = expr(callee);
    app.b = global_ref(s.span);
    for (const auto& arg : s.elems) app.elems.push_back(expr(arg));
    app.span = s.span;
    return make(std::move(app));
  }

  ExprPtr assign(const surface::Expr& s) {
    const surface::Expr& target = *s.a;
    if (target.kind == surface::ExprKind::Ident) {
      Expr e;
      e.kind = ExprKind::SetVar;
      e.name = target.str;
      e.a = expr(s.b);
      e.span = s.span;
      return make(std::move(e));
    }
    Expr e;
    e.kind = ExprKind::SetField;
    e.a = expr(target.a);
    e.b = target.kind == surface::ExprKind::Member
              ? core::c_str(target.str, target.span, false)
              : index_expr(target.b);
    e.c = expr(s.b);
    e.span = s.span;
    return make(std::move(e));
  }

  ExprPtr bool_const(bool v, Span sp) {
    ConstVal c;
    c.kind = ConstVal::Kind::Bool;
    c.b = v;
    return core::c_const(std::move(c), sp, true);
  }

  ExprPtr unary(const surface::Expr& s) {
    if (s.str == "typeof") {
      Expr e;
      e.kind = ExprKind::TypeOf;
      e.a = expr(s.a);
      e.span = s.span;
      return make(std::move(e));
    }
    if (s.str == "!") {
      Expr e;
      e.kind = ExprKind::If;
      e.a = expr(s.a);
      e.b = bool_const(false, s.span);
      e.c = bool_const(true, s.span);
      e.span = s.span;
      e.synthetic = true;
      return make(std::move(e));
    }
    // unary minus
    Expr e;
    e.kind = ExprKind::BinOp;
    e.binop = BinOpKind::Sub;
    ConstVal zero;
    zero.kind = ConstVal::Kind::Num;
    zero.num = 0;
    e.a = core::c_const(std::move(zero), s.span, true);
    e.b = expr(s.a);
    e.span = s.span;
    return make(std::move(e));
  }

  ExprPtr binary(const surface::Expr& s) {
    const std::string& op = s.str;
    if (op == "&&" || op == "||") {
      std::string tmp = fresh();
      Expr iff;
      iff.kind = ExprKind::If;
      iff.a = core::c_var(tmp, s.span, true);
      if (op == "&&") {
        iff.b = expr(s.b);
        iff.c = core::c_var(tmp, s.span, true);
      } else {
        iff.b = core::c_var(tmp, s.span, true);
        iff.c = expr(s.b);
      }
      iff.span = s.span;
      iff.synthetic = true;
      return let_node(tmp, expr(s.a), make(std::move(iff)), s.span);
    }
    if (op == "===" || op == "!==") {
      Expr eq;
      eq.kind = ExprKind::StrictEq;
      eq.a = expr(s.a);
      eq.b = expr(s.b);
      eq.span = s.span;
      ExprPtr eqp = make(std::move(eq));
      if (op == "===") return eqp;
      Expr notE;
      notE.kind = ExprKind::If;
      notE.a = std::move(eqp);
      notE.b = bool_const(false, s.span);
      notE.c = bool_const(true, s.span);
      notE.span = s.span;
      notE.synthetic = true;
      return make(std::move(notE));
    }
    Expr e;
    e.kind = ExprKind::BinOp;
    if (op == "+") e.binop = BinOpKind::Add;
    else if (op == "-") e.binop = BinOpKind::Sub;
    else if (op == "*") e.binop = BinOpKind::Mul;
    else if (op == "/") e.binop = BinOpKind::Div;
    else if (op == "%") e.binop = BinOpKind::Mod;
    else if (op == "<") e.binop = BinOpKind::Lt;
    else if (op == ">") e.binop = BinOpKind::Gt;
    else if (op == "<=") e.binop = BinOpKind::Le;
    else e.binop = BinOpKind::Ge;
    e.a = expr(s.a);
    e.b = expr(s.b);
    e.span = s.span;
    return make(std::move(e));
  }

  // Wraps an expression in Ascribe when the surface node carried a cheat
  // annotation (function annotations stay on the Func node itself).
  ExprPtr finish_ann(const surface::ExprPtr& se, ExprPtr out) {
    if (se->ann && se->kind != surface::ExprKind::Func) {
      Expr e;
      e.kind = ExprKind::Ascribe;
      e.ann = se->ann;
      e.a = std::move(out);
      e.span = se->span;
      return make(std::move(e));
    }
    return out;
  }

  const DesugarOptions& opts_;
  int temp_counter_ = 0;
  std::vector<Scope> scopes_;
};

}  // namespace

core::ExprPtr desugar_program(const surface::Program& p, const DesugarOptions& opts) {
  Desugarer d(opts);
  return d.program(p);
}

}  // namespace sandcheck
