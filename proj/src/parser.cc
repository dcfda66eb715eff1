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

#include "sandcheck/parser.h"

#include <cctype>
#include <cmath>
#include <set>

#include "sandcheck/type_parser.h"

namespace sandcheck {

namespace {

using surface::Expr;
using surface::ExprKind;
using surface::ExprPtr;
using surface::Program;
using surface::Stmt;
using surface::StmtKind;
using surface::StmtPtr;

const std::set<std::string> kKeywords = {
    "var", "function", "return", "if", "else", "while", "typeof", "delete",
    "throw", "this", "true", "false", "null", "undefined",
};

const std::set<std::string> kRejectedKeywords = {
    "new", "for", "do", "switch", "case", "default", "try", "catch", "finally",
    "with", "instanceof", "void", "in", "let", "const", "class",
    "break", "continue",
};

struct Tok {
  enum Kind { Ident, Keyword, Num, Str, Punct, Annot, End };
  Kind kind = End;
  std::string text;     // ident/keyword name, punct spelling, annot body
  double num = 0;
  Span span;
  bool cheat = false;   // Annot
};

class Lexer {
 public:
  explicit Lexer(const std::string& src) : src_(src) { advance(); }

  const Tok& peek() const { return tok_; }
  const Tok& peek2() {
    if (!have2_) {
      saved_ = tok_;
      advance();
      tok2_ = tok_;
      tok_ = saved_;
      have2_ = true;
    }
    return tok2_;
  }

  Tok take() {
    Tok t = tok_;
    if (have2_) {
      tok_ = tok2_;
      have2_ = false;
    } else {
      advance();
    }
    return t;
  }

 private:
  Span here() const { return {line_, col_}; }

  char cur() const { return i_ < src_.size() ? src_[i_] : '\0'; }
  char at(size_t k) const { return i_ + k < src_.size() ? src_[i_ + k] : '\0'; }

  void bump() {
    if (i_ < src_.size()) {
      if (src_[i_] == '\n') {
        ++line_;
        col_ = 1;
      } else {
        ++col_;
      }
      ++i_;
    }
  }

  void advance() {
    for (;;) {
      while (std::isspace(static_cast<unsigned char>(cur()))) bump();
      if (cur() == '/' && at(1) == '/') {
        while (cur() && cur() != '\n') bump();
        continue;
      }
      if (cur() == '/' && at(1) == '*' && at(2) == ':') {
        Span sp = here();
        bump(); bump(); bump();
        std::string body;
        while (cur() && !(cur() == '*' && at(1) == '/')) {
          body.push_back(cur());
          bump();
        }
        if (!cur()) throw ParseError(sp, "unterminated annotation comment");
        bump(); bump();
        tok_ = Tok{Tok::Annot, body, 0, sp, false};
        // leading "cheat" marker
        size_t p = 0;
        while (p < body.size() && std::isspace(static_cast<unsigned char>(body[p]))) ++p;
        if (body.compare(p, 5, "cheat") == 0 &&
            (p + 5 == body.size() ||
             !std::isalnum(static_cast<unsigned char>(body[p + 5])))) {
          tok_.cheat = true;
          tok_.text = body.substr(p + 5);
        }
        return;
      }
      if (cur() == '/' && at(1) == '*') {
        Span sp = here();
        bump(); bump();
        while (cur() && !(cur() == '*' && at(1) == '/')) bump();
        if (!cur()) throw ParseError(sp, "unterminated comment");
        bump(); bump();
        continue;
      }
      break;
    }

    Span sp = here();
    char c = cur();
    if (!c) {
      tok_ = Tok{Tok::End, "", 0, sp, false};
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '$') {
      std::string name;
      while (std::isalnum(static_cast<unsigned char>(cur())) || cur() == '_' || cur() == '$') {
        name.push_back(cur());
        bump();
      }
      if (kRejectedKeywords.count(name)) {
        throw ParseError(sp, "'" + name + "' is outside the supported subset");
      }
      tok_ = Tok{kKeywords.count(name) ? Tok::Keyword : Tok::Ident, name, 0, sp, false};
      return;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::string lit;
      while (std::isdigit(static_cast<unsigned char>(cur()))) {
        lit.push_back(cur());
        bump();
      }
      if (cur() == '.' && std::isdigit(static_cast<unsigned char>(at(1)))) {
        lit.push_back(cur());
        bump();
        while (std::isdigit(static_cast<unsigned char>(cur()))) {
          lit.push_back(cur());
          bump();
        }
      }
      tok_ = Tok{Tok::Num, lit, std::stod(lit), sp, false};
      return;
    }
    if (c == '"' || c == '\'') {
      char quote = c;
      bump();
      std::string out;
      while (cur() && cur() != quote) {
        if (cur() == '\\') {
          bump();
          switch (cur()) {
            case 'n': out.push_back('\n'); break;
            case 't': out.push_back('\t'); break;
            case '\\': out.push_back('\\'); break;
            case '"': out.push_back('"'); break;
            case '\'': out.push_back('\''); break;
            default: out.push_back(cur()); break;
          }
          bump();
          continue;
        }
        if (cur() == '\n') throw ParseError(sp, "newline in string literal");
        out.push_back(cur());
        bump();
      }
      if (!cur()) throw ParseError(sp, "unterminated string literal");
      bump();
      tok_ = Tok{Tok::Str, out, 0, sp, false};
      return;
    }

    auto punct = [&](const char* p) {
      size_t len = std::string(p).size();
      for (size_t k = 0; k < len; ++k) bump();
      tok_ = Tok{Tok::Punct, p, 0, sp, false};
    };
    // longest-match punctuation
    static const char* three[] = {"===", "!=="};
    for (const char* p : three) {
      if (c == p[0] && at(1) == p[1] && at(2) == p[2]) {
        punct(p);
        return;
      }
    }
    if ((c == '=' && at(1) == '=') || (c == '!' && at(1) == '=')) {
      throw ParseError(sp, "loose equality is outside the supported subset; use === or !==");
    }
    static const char* two[] = {"&&", "||", "<=", ">="};
    for (const char* p : two) {
      if (c == p[0] && at(1) == p[1]) {
        punct(p);
        return;
      }
    }
    static const char* one = "(){}[];,.=<>+-*/%!:";
    for (const char* p = one; *p; ++p) {
      if (c == *p) {
        char buf[2] = {c, 0};
        punct(buf);
        return;
      }
    }
    throw ParseError(sp, std::string("unexpected character '") + c + "'");
  }

  const std::string& src_;
  size_t i_ = 0;
  int line_ = 1;
  int col_ = 1;
  Tok tok_, tok2_, saved_;
  bool have2_ = false;
};

class Parser {
 public:
  explicit Parser(const std::string& src) : lex_(src) {}

  Program parse_program() {
    Program p;
    while (lex_.peek().kind != Tok::End) {
      p.statements.push_back(parse_statement());
    }
    p.annotation_count = annotation_count_;
    return p;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) { throw ParseError(lex_.peek().span, msg); }

  bool at_punct(const char* p) const {
    return lex_.peek().kind == Tok::Punct && lex_.peek().text == p;
  }
  bool at_keyword(const char* k) const {
    return lex_.peek().kind == Tok::Keyword && lex_.peek().text == k;
  }

  Tok expect_punct(const char* p) {
    if (!at_punct(p)) fail(std::string("expected '") + p + "'");
    return lex_.take();
  }

  void expect_semi() { expect_punct(";"); }

  Annotation parse_annotation_token() {
    Tok t = lex_.take();
    Annotation ann;
    ann.cheat = t.cheat;
    ann.span = t.span;
    try {
      ann.type = parse_type(t.text);
    } catch (const TypeParseError& e) {
      throw ParseError(t.span, std::string("bad type annotation: ") + e.what());
    }
    ++annotation_count_;
    return ann;
  }

  StmtPtr parse_statement() {
    Span sp = lex_.peek().span;
    if (at_keyword("var")) {
      lex_.take();
      auto s = std::make_shared<Stmt>();
      s->kind = StmtKind::Var;
      s->span = sp;
      for (;;) {
        if (lex_.peek().kind != Tok::Ident) fail("expected variable name");
        Tok name = lex_.take();
        surface::VarDecl d;
        d.name = name.text;
        d.span = name.span;
        if (at_punct("=")) {
          lex_.take();
          d.init = parse_assignment();
        }
        s->decls.push_back(std::move(d));
        if (at_punct(",")) {
          lex_.take();
          continue;
        }
        break;
      }
      expect_semi();
      return s;
    }
    if (at_keyword("function")) {
      // function declaration: sugar for var f = function ...
      const Tok& second = lex_.peek2();
      if (second.kind == Tok::Ident) {
        lex_.take();
        Tok name = lex_.take();
        ExprPtr fn = parse_function_literal(sp);
        auto s = std::make_shared<Stmt>();
        s->kind = StmtKind::Var;
        s->span = sp;
        surface::VarDecl d;
        d.name = name.text;
        d.span = name.span;
        d.init = std::move(fn);
        s->decls.push_back(std::move(d));
        return s;
      }
    }
    if (at_keyword("if")) {
      lex_.take();
      auto s = std::make_shared<Stmt>();
      s->kind = StmtKind::If;
      s->span = sp;
      expect_punct("(");
      s->expr = parse_expression();
      expect_punct(")");
      s->body = parse_block_or_single();
      if (at_keyword("else")) {
        lex_.take();
        if (at_keyword("if")) {
          s->else_body.push_back(parse_statement());
        } else {
          s->else_body = parse_block_or_single();
        }
      }
      return s;
    }
    if (at_keyword("while")) {
      lex_.take();
      auto s = std::make_shared<Stmt>();
      s->kind = StmtKind::While;
      s->span = sp;
      expect_punct("(");
      s->expr = parse_expression();
      expect_punct(")");
      ++loop_depth_;
      s->body = parse_block_or_single();
      --loop_depth_;
      return s;
    }
    if (at_keyword("return")) {
      if (loop_depth_ > 0) fail("return inside while is outside the supported subset");
      if (fn_depth_ == 0) fail("return outside a function");
      lex_.take();
      auto s = std::make_shared<Stmt>();
      s->kind = StmtKind::Return;
      s->span = sp;
      if (!at_punct(";")) s->expr = parse_expression();
      expect_semi();
      return s;
    }
    if (at_keyword("throw")) {
      lex_.take();
      auto s = std::make_shared<Stmt>();
      s->kind = StmtKind::Throw;
      s->span = sp;
      s->expr = parse_expression();
      expect_semi();
      return s;
    }
    auto s = std::make_shared<Stmt>();
    s->kind = StmtKind::Expr;
    s->span = sp;
    s->expr = parse_expression();
    expect_semi();
    return s;
  }

  std::vector<StmtPtr> parse_block_or_single() {
    std::vector<StmtPtr> out;
    if (at_punct("{")) {
      lex_.take();
      while (!at_punct("}")) {
        if (lex_.peek().kind == Tok::End) fail("unterminated block");
        out.push_back(parse_statement());
      }
      lex_.take();
    } else {
      out.push_back(parse_statement());
    }
    return out;
  }

  ExprPtr parse_expression() { return parse_assignment(); }

  ExprPtr parse_assignment() {
    ExprPtr lhs = parse_or();
    if (at_punct("=")) {
      Span sp = lex_.peek().span;
      lex_.take();
      if (lhs->kind != ExprKind::Ident && lhs->kind != ExprKind::Member &&
          lhs->kind != ExprKind::Index) {
        throw ParseError(sp, "invalid assignment target");
      }
      auto e = std::make_shared<Expr>();
      e->kind = ExprKind::Assign;
      e->span = sp;
      e->a = std::move(lhs);
      e->b = parse_assignment();
      return e;
    }
    return lhs;
  }

  ExprPtr binary(const char* op, ExprPtr l, ExprPtr r, Span sp) {
    auto e = std::make_shared<Expr>();
    e->kind = ExprKind::Binary;
    e->str = op;
    e->span = sp;
    e->a = std::move(l);
    e->b = std::move(r);
    return e;
  }

  ExprPtr parse_or() {
    ExprPtr l = parse_and();
    while (at_punct("||")) {
      Span sp = lex_.take().span;
      l = binary("||", std::move(l), parse_and(), sp);
    }
    return l;
  }

  ExprPtr parse_and() {
    ExprPtr l = parse_equality();
    while (at_punct("&&")) {
      Span sp = lex_.take().span;
      l = binary("&&", std::move(l), parse_equality(), sp);
    }
    return l;
  }

  ExprPtr parse_equality() {
    ExprPtr l = parse_relational();
    while (at_punct("===") || at_punct("!==")) {
      Tok t = lex_.take();
      l = binary(t.text.c_str(), std::move(l), parse_relational(), t.span);
    }
    return l;
  }

  ExprPtr parse_relational() {
    ExprPtr l = parse_additive();
    while (at_punct("<") || at_punct(">") || at_punct("<=") || at_punct(">=")) {
      Tok t = lex_.take();
      l = binary(t.text.c_str(), std::move(l), parse_additive(), t.span);
    }
    return l;
  }

  ExprPtr parse_additive() {
    ExprPtr l = parse_multiplicative();
    while (at_punct("+") || at_punct("-")) {
      Tok t = lex_.take();
      l = binary(t.text.c_str(), std::move(l), parse_multiplicative(), t.span);
    }
    return l;
  }

  ExprPtr parse_multiplicative() {
    ExprPtr l = parse_unary();
    while (at_punct("*") || at_punct("/") || at_punct("%")) {
      Tok t = lex_.take();
      l = binary(t.text.c_str(), std::move(l), parse_unary(), t.span);
    }
    return l;
  }

  ExprPtr parse_unary() {
    Span sp = lex_.peek().span;
    if (at_punct("!") || at_punct("-")) {
      Tok t = lex_.take();
      auto e = std::make_shared<Expr>();
      e->kind = ExprKind::Unary;
      e->str = t.text;
      e->span = sp;
      e->a = parse_unary();
      return e;
    }
    if (at_keyword("typeof")) {
      lex_.take();
      auto e = std::make_shared<Expr>();
      e->kind = ExprKind::Unary;
      e->str = "typeof";
      e->span = sp;
      e->a = parse_unary();
      return e;
    }
    if (at_keyword("delete")) {
      lex_.take();
      auto e = std::make_shared<Expr>();
      e->kind = ExprKind::Delete;
      e->span = sp;
      e->a = parse_unary();
      if (e->a->kind != ExprKind::Member && e->a->kind != ExprKind::Index) {
        throw ParseError(sp, "delete expects a field access");
      }
      return e;
    }
    return parse_postfix();
  }

  ExprPtr parse_postfix() {
    ExprPtr e = parse_primary();
    for (;;) {
      if (at_punct(".")) {
        Span sp = lex_.take().span;
        if (lex_.peek().kind != Tok::Ident && lex_.peek().kind != Tok::Keyword) {
          fail("expected field name after '.'");
        }
        Tok name = lex_.take();
        auto m = std::make_shared<Expr>();
        m->kind = ExprKind::Member;
        m->str = name.text;
        m->span = sp;
        m->a = std::move(e);
        e = std::move(m);
        continue;
      }
      if (at_punct("[")) {
        Span sp = lex_.take().span;
        auto m = std::make_shared<Expr>();
        m->kind = ExprKind::Index;
        m->span = sp;
        m->a = std::move(e);
        m->b = parse_expression();
        expect_punct("]");
        e = std::move(m);
        continue;
      }
      if (at_punct("(")) {
        Span sp = lex_.take().span;
        auto call = std::make_shared<Expr>();
        call->kind = ExprKind::Call;
        call->span = sp;
        call->a = std::move(e);
        while (!at_punct(")")) {
          call->elems.push_back(parse_assignment());
          if (at_punct(",")) {
            lex_.take();
            continue;
          }
          break;
        }
        expect_punct(")");
        e = std::move(call);
        continue;
      }
      break;
    }
    return e;
  }

  ExprPtr parse_function_literal(Span sp) {
    auto e = std::make_shared<Expr>();
    e->kind = ExprKind::Func;
    e->span = sp;
    expect_punct("(");
    while (!at_punct(")")) {
      if (lex_.peek().kind != Tok::Ident) fail("expected parameter name");
      Tok p = lex_.take();
      e->params.push_back(p.text);
      e->param_spans.push_back(p.span);
      if (at_punct(",")) {
        lex_.take();
        continue;
      }
      break;
    }
    expect_punct(")");
    if (lex_.peek().kind == Tok::Annot) {
      e->ann = parse_annotation_token();
    }
    expect_punct("{");
    ++fn_depth_;
    int saved_loop = loop_depth_;
    loop_depth_ = 0;
    while (!at_punct("}")) {
      if (lex_.peek().kind == Tok::End) fail("unterminated function body");
      e->body.push_back(parse_statement());
    }
    loop_depth_ = saved_loop;
    --fn_depth_;
    lex_.take();
    return e;
  }

  ExprPtr parse_primary() {
    const Tok& t = lex_.peek();
    Span sp = t.span;
    switch (t.kind) {
      case Tok::Annot: {
        Annotation ann = parse_annotation_token();
        ExprPtr e = parse_unary();
        if (e->kind == ExprKind::Func) {
          if (e->ann) throw ParseError(ann.span, "function already has an annotation");
          e->ann = ann;
          return e;
        }
        if (ann.cheat) {
          e->ann = ann;  // cheat ascription on a single expression
          return e;
        }
        throw ParseError(ann.span, "annotation must precede a function literal");
      }
      case Tok::Num: {
        Tok num = lex_.take();
        auto e = std::make_shared<Expr>();
        e->kind = ExprKind::Num;
        e->num = num.num;
        e->span = sp;
        return e;
      }
      case Tok::Str: {
        Tok s = lex_.take();
        auto e = std::make_shared<Expr>();
        e->kind = ExprKind::Str;
        e->str = s.text;
        e->span = sp;
        return e;
      }
      case Tok::Keyword: {
        if (t.text == "true" || t.text == "false") {
          bool v = t.text == "true";
          lex_.take();
          auto e = std::make_shared<Expr>();
          e->kind = v ? ExprKind::True : ExprKind::False;
          e->span = sp;
          return e;
        }
        if (t.text == "null") {
          lex_.take();
          auto e = std::make_shared<Expr>();
          e->kind = ExprKind::Null;
          e->span = sp;
          return e;
        }
        if (t.text == "undefined") {
          lex_.take();
          auto e = std::make_shared<Expr>();
          e->kind = ExprKind::Undefined;
          e->span = sp;
          return e;
        }
        if (t.text == "this") {
          lex_.take();
          auto e = std::make_shared<Expr>();
          e->kind = ExprKind::This;
          e->span = sp;
          return e;
        }
        if (t.text == "function") {
          lex_.take();
          return parse_function_literal(sp);
        }
        fail("unexpected keyword '" + t.text + "'");
      }
      case Tok::Ident: {
        Tok id = lex_.take();
        auto e = std::make_shared<Expr>();
        e->kind = ExprKind::Ident;
        e->str = id.text;
        e->span = sp;
        return e;
      }
      case Tok::Punct: {
        if (t.text == "(") {
          lex_.take();
          ExprPtr inner = parse_expression();
          expect_punct(")");
          return inner;
        }
        if (t.text == "[") {
          lex_.take();
          auto e = std::make_shared<Expr>();
          e->kind = ExprKind::Array;
          e->span = sp;
          while (!at_punct("]")) {
            e->elems.push_back(parse_assignment());
            if (at_punct(",")) {
              lex_.take();
              continue;
            }
            break;
          }
          expect_punct("]");
          return e;
        }
        if (t.text == "{") {
          lex_.take();
          auto e = std::make_shared<Expr>();
          e->kind = ExprKind::Object;
          e->span = sp;
          while (!at_punct("}")) {
            const Tok& k = lex_.peek();
            if (k.kind != Tok::Str && k.kind != Tok::Ident && k.kind != Tok::Keyword &&
                k.kind != Tok::Num) {
              fail("expected object key");
            }
            Tok key = lex_.take();
            surface::ObjectField f;
            f.key = key.kind == Tok::Num ? key.text : key.text;
            f.key_span = key.span;
            expect_punct(":");
            f.value = parse_assignment();
            e->fields.push_back(std::move(f));
            if (at_punct(",")) {
              lex_.take();
              continue;
            }
            break;
          }
          expect_punct("}");
          return e;
        }
        fail("unexpected token '" + t.text + "'");
      }
      case Tok::End:
        fail("unexpected end of input");
    }
    fail("unexpected token");
  }

  Lexer lex_;
  int annotation_count_ = 0;
  int loop_depth_ = 0;
  int fn_depth_ = 0;
};

}  // namespace

surface::Program parse_surface(const std::string& source) {
  Parser p(source);
  return p.parse_program();
}

}  // namespace sandcheck
