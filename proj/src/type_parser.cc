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

#include "sandcheck/type_parser.h"

#include <cctype>
#include <vector>

namespace sandcheck {

namespace {

struct Tok {
  enum Kind {
    Ident, String, LParen, RParen, LBrace, RBrace, LBracket, RBracket,
    Lt, Gt, Pipe, Amp, Star, Arrow, Ellipsis, Colon, Comma, Dot, Plus, Minus,
    End,
  };
  Kind kind;
  std::string text;
  size_t pos;
};

class TypeLexer {
 public:
  explicit TypeLexer(const std::string& src) : src_(src) { next(); }

  const Tok& peek() const { return tok_; }

  Tok take() {
    Tok t = tok_;
    next();
    return t;
  }

 private:
  void next() {
    while (i_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[i_]))) ++i_;
    tok_.pos = i_;
    if (i_ >= src_.size()) {
      tok_ = {Tok::End, "", i_};
      return;
    }
    char c = src_[i_];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t start = i_;
      while (i_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[i_])) || src_[i_] == '_')) {
        ++i_;
      }
      tok_ = {Tok::Ident, src_.substr(start, i_ - start), start};
      return;
    }
    if (c == '"') {
      size_t start = i_++;
      std::string out;
      while (i_ < src_.size() && src_[i_] != '"') {
        if (src_[i_] == '\\' && i_ + 1 < src_.size()) ++i_;
        out.push_back(src_[i_++]);
      }
      if (i_ >= src_.size()) throw TypeParseError(start, "unterminated string literal");
      ++i_;
      tok_ = {Tok::String, out, start};
      return;
    }
    auto simple = [&](Tok::Kind k, size_t len) {
      tok_ = {k, src_.substr(i_, len), i_};
      i_ += len;
    };
    switch (c) {
      case '(': simple(Tok::LParen, 1); return;
      case ')': simple(Tok::RParen, 1); return;
      case '{': simple(Tok::LBrace, 1); return;
      case '}': simple(Tok::RBrace, 1); return;
      case '[': simple(Tok::LBracket, 1); return;
      case ']': simple(Tok::RBracket, 1); return;
      case '<': simple(Tok::Lt, 1); return;
      case '>': simple(Tok::Gt, 1); return;
      case '|': simple(Tok::Pipe, 1); return;
      case '&': simple(Tok::Amp, 1); return;
      case '*': simple(Tok::Star, 1); return;
      case ':': simple(Tok::Colon, 1); return;
      case ',': simple(Tok::Comma, 1); return;
      case '+': simple(Tok::Plus, 1); return;
      case '-':
        if (i_ + 1 < src_.size() && src_[i_ + 1] == '>') {
          simple(Tok::Arrow, 2);
        } else {
          simple(Tok::Minus, 1);
        }
        return;
      case '.':
        if (i_ + 2 < src_.size() && src_[i_ + 1] == '.' && src_[i_ + 2] == '.') {
          simple(Tok::Ellipsis, 3);
        } else {
          simple(Tok::Dot, 1);
        }
        return;
      default:
        throw TypeParseError(i_, std::string("unexpected character '") + c + "' in type");
    }
  }

  const std::string& src_;
  size_t i_ = 0;
  Tok tok_{Tok::End, "", 0};
};

class TypeParser {
 public:
  explicit TypeParser(const std::string& src) : lex_(src) {}

  TypePtr parse() {
    TypePtr t = parse_type();
    expect(Tok::End, "end of type");
    return t;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) { throw TypeParseError(lex_.peek().pos, msg); }

  Tok expect(Tok::Kind k, const char* what) {
    if (lex_.peek().kind != k) fail(std::string("expected ") + what);
    return lex_.take();
  }

  bool eat(Tok::Kind k) {
    if (lex_.peek().kind == k) {
      lex_.take();
      return true;
    }
    return false;
  }

  TypePtr parse_type() {
    TypePtr this_type;
    if (lex_.peek().kind == Tok::LBracket) {
      lex_.take();
      this_type = parse_type();
      expect(Tok::RBracket, "']' after this-annotation");
      return parse_arrow_tail(this_type);
    }
    if (lex_.peek().kind == Tok::Arrow) {
      // zero-argument arrow, e.g. "-> Str"
      lex_.take();
      FuncType f;
      f.this_type = t_top();
      f.result = parse_type();
      return canonicalize(t_func(std::move(f)));
    }
    TypePtr first = parse_union();
    if (lex_.peek().kind == Tok::Star || lex_.peek().kind == Tok::Ellipsis ||
        lex_.peek().kind == Tok::Arrow) {
      return parse_arrow_args(t_top(), first);
    }
    return first;
  }

  TypePtr parse_arrow_tail(TypePtr this_type) {
    if (eat(Tok::Arrow)) {
      FuncType f;
      f.this_type = std::move(this_type);
      f.result = parse_type();
      return canonicalize(t_func(std::move(f)));
    }
    TypePtr first = parse_union();
    return parse_arrow_args(std::move(this_type), std::move(first));
  }

  TypePtr parse_arrow_args(TypePtr this_type, TypePtr first) {
    std::vector<TypePtr> args{std::move(first)};
    while (eat(Tok::Star)) args.push_back(parse_union());
    FuncType f;
    f.this_type = std::move(this_type);
    if (eat(Tok::Ellipsis)) {
      f.rest = args.back();
      args.pop_back();
    }
    f.fixed = std::move(args);
    expect(Tok::Arrow, "'->' in function type");
    f.result = parse_type();
    return canonicalize(t_func(std::move(f)));
  }

  TypePtr parse_union() {
    std::vector<TypePtr> parts{parse_intersect()};
    while (eat(Tok::Pipe)) parts.push_back(parse_intersect());
    if (parts.size() == 1) return parts[0];
    return canonicalize(t_union(std::move(parts)));
  }

  TypePtr parse_intersect() {
    std::vector<TypePtr> parts{parse_atom()};
    while (eat(Tok::Amp)) parts.push_back(parse_atom());
    if (parts.size() == 1) return parts[0];
    return canonicalize(t_intersect(std::move(parts)));
  }

  FieldPresence parse_presence() {
    if (lex_.peek().kind == Tok::Ident && lex_.peek().text == "banned") {
      lex_.take();
      return FieldPresence::banned();
    }
    if (lex_.peek().kind == Tok::Ident && lex_.peek().text == "absent") {
      lex_.take();
      return FieldPresence::absent();
    }
    return FieldPresence::present(parse_type());
  }

  TypePtr parse_ref() {
    expect(Tok::LBrace, "'{' after Ref");
    ObjectType o;
    bool saw_proto = false;
    while (lex_.peek().kind != Tok::RBrace) {
      if (eat(Tok::Star)) {
        expect(Tok::Colon, "':' after '*'");
        o.star = parse_presence();
      } else if (lex_.peek().kind == Tok::Ident && lex_.peek().text == "proto") {
        lex_.take();
        expect(Tok::Colon, "':' after proto");
        o.proto = parse_type();
        saw_proto = true;
      } else if (lex_.peek().kind == Tok::Ident && lex_.peek().text == "code") {
        lex_.take();
        expect(Tok::Colon, "':' after code");
        o.code = parse_type();
      } else if (lex_.peek().kind == Tok::String || lex_.peek().kind == Tok::Ident) {
        std::string name = lex_.take().text;
        if (name == "*" || name == "proto" || name == "code") fail("reserved field name");
        expect(Tok::Colon, "':' after field name");
        if (o.named.count(name)) fail("duplicate field '" + name + "'");
        o.named.emplace(std::move(name), parse_presence());
      } else {
        fail("expected field name in object type");
      }
      if (!eat(Tok::Comma)) break;
    }
    expect(Tok::RBrace, "'}' closing object type");
    if (!saw_proto) o.proto = t_named("Object");
    return t_ref(std::move(o));
  }

  TypePtr parse_atom() {
    const Tok& t = lex_.peek();
    switch (t.kind) {
      case Tok::Ident: {
        std::string name = lex_.take().text;
        if (name == "Num") return t_num();
        if (name == "Str") return t_str();
        if (name == "True") return t_true();
        if (name == "False") return t_false();
        if (name == "Undef") return t_undef();
        if (name == "Null") return t_null();
        if (name == "Top") return t_top();
        if (name == "Bot") return t_bot();
        if (name == "Array" && lex_.peek().kind == Tok::Lt) {
          lex_.take();
          TypePtr elem = parse_type();
          expect(Tok::Gt, "'>' closing Array");
          return t_array(std::move(elem));
        }
        if (name == "Ref") return parse_ref();
        if (name == "rec" || name == "forall") {
          Tok var = expect(Tok::Ident, "type variable");
          expect(Tok::Dot, "'.' after binder");
          bound_.push_back(var.text);
          TypePtr body = parse_type();
          bound_.pop_back();
          return name == "rec" ? t_mu(var.text, std::move(body))
                               : t_forall(var.text, std::move(body));
        }
        if (name == "banned" || name == "absent") fail("presence keyword used as a type");
        bool lower = !name.empty() && std::islower(static_cast<unsigned char>(name[0]));
        if (lower) {
          for (auto it = bound_.rbegin(); it != bound_.rend(); ++it) {
            if (*it == name) return t_typevar(name);
          }
          throw TypeParseError(t.pos, "unbound type variable '" + name + "'");
        }
        return t_named(name);
      }
      case Tok::LParen: {
        lex_.take();
        if (lex_.peek().kind == Tok::String || lex_.peek().kind == Tok::RParen) {
          StringSet s;
          while (lex_.peek().kind == Tok::String) {
            s.names.insert(lex_.take().text);
            if (!eat(Tok::Comma)) break;
          }
          expect(Tok::RParen, "')' closing string set");
          if (eat(Tok::Plus)) {
            s.negative = false;
          } else if (eat(Tok::Minus)) {
            s.negative = true;
          } else {
            fail("expected '+' or '-' after string set");
          }
          return t_strset(std::move(s));
        }
        TypePtr inner = parse_type();
        expect(Tok::RParen, "')'");
        return inner;
      }
      default:
        fail("expected a type");
    }
  }

  TypeLexer lex_;
  std::vector<std::string> bound_;
};

}  // namespace

TypePtr parse_type(const std::string& text) {
  TypeParser p(text);
  return canonicalize(p.parse());
}

}  // namespace sandcheck
