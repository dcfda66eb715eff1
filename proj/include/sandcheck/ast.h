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

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "sandcheck/span.h"
#include "sandcheck/types.h"

namespace sandcheck {

// A type annotation read from a /*: ... */ comment. Cheat annotations are
// assumed without checking and reported.
struct Annotation {
  bool cheat = false;
  TypePtr type;
  Span span;
};

namespace surface {

struct Expr;
struct Stmt;
using ExprPtr = std::shared_ptr<Expr>;
using StmtPtr = std::shared_ptr<Stmt>;

enum class ExprKind {
  Num, Str, True, False, Null, Undefined,
  Ident, This,
  Array, Object, Func,
  Member,   // e.name
  Index,    // e[e]
  Call,
  Assign,   // target = value
  Delete,
  Unary,    // ! - typeof
  Binary,   // === !== && || + - * / % < > <= >=
};

struct ObjectField {
  std::string key;
  Span key_span;
  ExprPtr value;
};

struct Expr {
  ExprKind kind;
  Span span;

  double num = 0;
  std::string str;              // Str literal, Ident name, Member name, Unary/Binary op
  std::vector<ExprPtr> elems;   // Array elems, Call args
  std::vector<ObjectField> fields;
  std::vector<std::string> params;   // Func
  std::vector<Span> param_spans;
  std::vector<StmtPtr> body;         // Func
  std::optional<Annotation> ann;     // Func or cheat-ascribed expression
  ExprPtr a, b, c;              // operands: Member/Index obj, Call callee, Assign target...
};

enum class StmtKind { Var, Expr, If, While, Return, Throw };

struct VarDecl {
  std::string name;
  Span span;
  ExprPtr init;  // may be null
};

struct Stmt {
  StmtKind kind;
  Span span;
  std::vector<VarDecl> decls;       // Var
  ExprPtr expr;                     // Expr/Return/Throw value, If/While condition
  std::vector<StmtPtr> body;        // If then, While body
  std::vector<StmtPtr> else_body;   // If else
};

struct Program {
  std::vector<StmtPtr> statements;
  int annotation_count = 0;
};

}  // namespace surface

// Runtime values are small; objects and closures live in the store and are
// referenced by location.
using Loc = uint32_t;

struct RtValue {
  enum class Kind { Undef, Null, Bool, Num, Str, Object };
  Kind kind = Kind::Undef;
  bool b = false;
  double num = 0;
  std::string str;
  Loc loc = 0;

  static RtValue undef() { return {}; }
  static RtValue null() { RtValue v; v.kind = Kind::Null; return v; }
  static RtValue boolean(bool x) { RtValue v; v.kind = Kind::Bool; v.b = x; return v; }
  static RtValue number(double x) { RtValue v; v.kind = Kind::Num; v.num = x; return v; }
  static RtValue string(std::string s) {
    RtValue v;
    v.kind = Kind::Str;
    v.str = std::move(s);
    return v;
  }
  static RtValue object(Loc l) { RtValue v; v.kind = Kind::Object; v.loc = l; return v; }
};

namespace core {

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

enum class ExprKind {
  Const,
  Var,
  Object,
  ArrayLit,
  Func,
  GetField,
  SetField,
  DelField,
  App,       // callee, explicit this, args
  Let,
  SetVar,
  Seq,
  If,
  While,
  TypeOf,
  StrictEq,
  BinOp,
  Throw,
  Ascribe,
  // Runtime-only forms produced by reduction.
  Value,     // an injected runtime value
  GetCell,
  SetCell,
};

enum class BinOpKind { Add, Sub, Mul, Div, Mod, Lt, Gt, Le, Ge };

struct ConstVal {
  enum class Kind { Num, Str, Bool, Null, Undef };
  Kind kind = Kind::Undef;
  double num = 0;
  std::string str;
  bool b = false;
};

struct Expr {
  ExprKind kind;
  Span span;
  bool synthetic = false;     // introduced by desugaring, exempt from the gate sweep
  bool from_this = false;     // originated from a source-level `this`

  ConstVal cval;              // Const
  std::string name;           // Var/Let/SetVar identifier; object field key lists below
  std::vector<std::pair<std::string, ExprPtr>> fields;  // Object
  std::vector<Span> field_spans;
  std::vector<ExprPtr> elems;                           // ArrayLit, App args
  std::vector<std::string> params;                      // Func
  std::optional<Annotation> ann;                        // Func annotation / Ascribe
  ExprPtr a, b, c;            // generic operand slots
  BinOpKind binop = BinOpKind::Add;

  TypePtr declared;           // Let: declared type; null means infer
  TypePtr hint;               // allocation hint for the store typing
  RtValue rt;                 // Value
  Loc cell = 0;               // GetCell/SetCell
};

ExprPtr make(Expr e);

// Operand layout helpers, to keep call sites readable.
ExprPtr c_const(ConstVal v, Span sp, bool synthetic = false);
ExprPtr c_undef(Span sp);
ExprPtr c_str(const std::string& s, Span sp, bool synthetic = false);
ExprPtr c_var(const std::string& name, Span sp, bool synthetic = false);
ExprPtr c_seq(ExprPtr a, ExprPtr b, Span sp);
ExprPtr c_value(RtValue v);

// Walks every node in evaluation order.
void walk(const ExprPtr& e, const std::function<void(const ExprPtr&)>& fn);

}  // namespace core

}  // namespace sandcheck
