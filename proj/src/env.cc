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

#include "sandcheck/env.h"

#include <fstream>
#include <set>
#include <sstream>

#include "sandcheck/type_parser.h"

namespace sandcheck {

// The desk-scale browser model. Only members the checked corpus touches are
// declared; everything here can be shadowed from an env file without
// rebuilding. One field per line, in the style of a foreign-function
// interface for the DOM.
const std::string& builtin_env_text() {
  static const std::string text = R"ENV(
# ---- primitive shorthands ----------------------------------------------
alias Bool = True | False
alias Prim = Str | Num | Null | Bool | Undef

# ---- safe prototypes ----------------------------------------------------
alias Object = Ref {proto: Null, * : absent,
  "toString": -> Str}

alias Function = Ref {proto: Object, * : absent}

alias Array = Ref {proto: Object, * : absent,
  "concat": [Widget | Global] Widget ... -> Widget,
  "join": [Widget | Global] Widget ... -> Str,
  "push": [Widget | Global] Widget ... -> Num}

alias String = Ref {proto: Object, * : absent,
  "charAt": [Widget | Global] Widget ... -> Str,
  "slice": [Widget | Global] Widget ... -> Str}

alias Number = Ref {proto: Object, * : absent}

alias Boolean = Ref {proto: Object, * : absent}

alias RegExp = Ref {proto: Object, * : absent,
  "test": [Top] Str -> Bool}

alias Bunch = Ref {proto: Object, * : absent,
  "append": [Widget | Global] Widget ... -> Widget,
  "getStyle": [Widget | Global] Widget ... -> Widget,
  "q": [Widget | Global] Widget ... -> Widget,
  "style": [Widget | Global] Widget ... -> Widget,
  "value": [Widget | Global] Widget ... -> Widget}

# ---- the Widget type ----------------------------------------------------
alias Widget = rec a . Str | Num | Null | Bool | Undef | Ref {
  proto: Object | Function | Bunch | Array | RegExp | String | Number | Boolean,
  code: [Global | a] a ... -> a,
  * : a,
  "___nodes___": Array<HTML> | Undef,
  "___star___": Bool | Undef,
  "caller": banned,
  "callee": banned,
  "eval": banned,
  "prototype": banned,
  "watch": banned,
  "constructor": banned,
  "__proto__": banned,
  "unwatch": banned,
  "arguments": banned,
  "valueOf": absent,
  "toString": absent}

# ---- DOM and window fragment --------------------------------------------
alias HTML = Ref {proto: Null, * : Str,
  "appendChild": [HTML | Undef] (HTML | Undef) -> Undef,
  "removeChild": [HTML | Undef] (HTML | Undef) -> Undef,
  "ownerDocument": Document,
  "tagName": Str,
  "value": Str}

alias Style = Ref {proto: Null, * : Str,
  "__proto__": banned,
  "constructor": banned}

alias Document = Ref {proto: Object, * : absent,
  "createElement": [Top] ("script")- -> HTML,
  "createTextNode": [Top] Str -> HTML,
  "defaultView": Global,
  "write": banned,
  "writeln": banned}

alias Global = Ref {proto: Object, * : Top,
  "eval": banned,
  "Function": banned,
  "document": Document,
  "window": Global,
  "setTimeout": [Top] ([Global | Widget] Widget -> Widget) * Widget -> Num,
  "getComputedStyle": [Global] (HTML | Undef) -> Style,
  "alert": [Global] Widget ... -> Undef}

# ---- top-level bindings --------------------------------------------------
window : Global
%global : Global
document : Document
setTimeout : [Top] ([Global | Widget] Widget -> Widget) * Widget -> Num
url_re : Ref {proto: RegExp, * : absent}

# monitor facade visible to widgets
ADSAFE : Widget
dom : Widget
lib : Widget
)ENV";
  return text;
}

namespace {

bool balanced(const std::string& s) {
  int depth = 0;
  bool in_str = false;
  char quote = 0;
  for (size_t i = 0; i < s.size(); ++i) {
    char c = s[i];
    if (in_str) {
      if (c == '\\') {
        ++i;
      } else if (c == quote) {
        in_str = false;
      }
      continue;
    }
    if (c == '"' || c == '\'') {
      in_str = true;
      quote = c;
    } else if (c == '-' && i + 1 < s.size() && s[i + 1] == '>') {
      ++i;  // arrow, not a closing bracket
    } else if (c == '(' || c == '{' || c == '[' || c == '<') {
      ++depth;
    } else if (c == ')' || c == '}' || c == ']' || c == '>') {
      --depth;
    }
  }
  return depth <= 0 && !in_str;
}

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

void collect_named(const TypePtr& t, std::set<std::string>& out) {
  switch (t->tag) {
    case TypeTag::Named:
      out.insert(t->name);
      return;
    case TypeTag::Array:
    case TypeTag::Mu:
    case TypeTag::Forall:
      collect_named(t->inner, out);
      return;
    case TypeTag::Union:
    case TypeTag::Intersect:
      for (const auto& m : t->members) collect_named(m, out);
      return;
    case TypeTag::Ref: {
      const auto& o = *t->obj;
      if (o.star.is_present()) collect_named(o.star.type, out);
      collect_named(o.proto, out);
      if (o.code) collect_named(o.code, out);
      for (const auto& [k, f] : o.named) {
        (void)k;
        if (f.is_present()) collect_named(f.type, out);
      }
      return;
    }
    case TypeTag::Func: {
      const auto& f = *t->fn;
      collect_named(f.this_type, out);
      for (const auto& a : f.fixed) collect_named(a, out);
      if (f.rest) collect_named(f.rest, out);
      collect_named(f.result, out);
      return;
    }
    default:
      return;
  }
}

}  // namespace

void load_env_text(TypeEnv& env, const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::string pending;
  int line_no = 0;
  int decl_line = 0;
  auto flush = [&](const std::string& decl, int at_line) {
    std::string d = trim(decl);
    if (d.empty()) return;
    try {
      if (d.rfind("alias ", 0) == 0) {
        size_t eq = d.find('=');
        if (eq == std::string::npos) throw EnvError(at_line, "alias needs '='");
        std::string name = trim(d.substr(6, eq - 6));
        if (name.empty()) throw EnvError(at_line, "alias needs a name");
        env.aliases.defs[name] = parse_type(d.substr(eq + 1));
        return;
      }
      size_t colon = d.find(':');
      if (colon == std::string::npos) throw EnvError(at_line, "expected 'name : TYPE'");
      std::string name = trim(d.substr(0, colon));
      if (name.empty() || name.find(' ') != std::string::npos) {
        throw EnvError(at_line, "bad binding name '" + name + "'");
      }
      env.bindings[name] = parse_type(d.substr(colon + 1));
    } catch (const TypeParseError& e) {
      throw EnvError(at_line, std::string("type syntax: ") + e.what());
    }
  };
  while (std::getline(in, line)) {
    ++line_no;
    std::string t = trim(line);
    if (pending.empty()) {
      if (t.empty() || t[0] == '#') continue;
      pending = line;
      decl_line = line_no;
    } else {
      pending += "\n" + line;
    }
    if (balanced(pending)) {
      flush(pending, decl_line);
      pending.clear();
    }
  }
  if (!pending.empty()) {
    if (balanced(pending)) {
      flush(pending, decl_line);
    } else {
      throw EnvError(decl_line, "unbalanced declaration at end of file");
    }
  }
}

std::pair<TypeEnv, AbstractHeap> builtin_env() {
  static const TypeEnv cached = [] {
    TypeEnv env;
    load_env_text(env, builtin_env_text());
    auto missing = unresolved_aliases(env);
    if (!missing.empty()) {
      throw std::logic_error("builtin environment references unknown alias: " + missing.front());
    }
    return env;
  }();
  return {cached, AbstractHeap{}};
}

std::pair<TypeEnv, AbstractHeap> load_env(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw EnvError(0, "cannot open env file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  auto [env, heap] = builtin_env();
  load_env_text(env, buf.str());
  auto missing = unresolved_aliases(env);
  if (!missing.empty()) {
    throw EnvError(0, "unknown alias '" + missing.front() + "' in " + path);
  }
  return {env, heap};
}

std::vector<std::string> unresolved_aliases(const TypeEnv& env) {
  std::set<std::string> used;
  for (const auto& [name, t] : env.aliases.defs) {
    (void)name;
    collect_named(t, used);
  }
  for (const auto& [name, t] : env.bindings) {
    (void)name;
    collect_named(t, used);
  }
  std::vector<std::string> missing;
  for (const auto& n : used) {
    if (!env.aliases.defs.count(n)) missing.push_back(n);
  }
  return missing;
}

namespace {

// Covariant reachability over the type graph. Arrow arguments and this
// positions are what a widget supplies, not what it obtains, so they are
// not edges.
class Walker {
 public:
  Walker(const TypeEnv& env, std::set<std::string> skip_fields)
      : env_(env), skip_fields_(std::move(skip_fields)) {}

  void run(const TypePtr& start) { visit(start); }

  const std::vector<TypePtr>& objects() const { return objects_; }
  const std::set<std::string>& named_seen() const { return named_seen_; }

 private:
  void visit(const TypePtr& t) {
    if (!seen_.insert(t).second) return;
    switch (t->tag) {
      case TypeTag::Named: {
        named_seen_.insert(t->name);
        TypePtr def = env_.aliases.lookup(t->name);
        if (def) visit(def);
        return;
      }
      case TypeTag::Mu:
        visit(unroll(t));
        return;
      case TypeTag::Union:
      case TypeTag::Intersect:
        for (const auto& m : t->members) visit(m);
        return;
      case TypeTag::Array:
        visit(t->inner);
        return;
      case TypeTag::Ref: {
        objects_.push_back(t);
        const auto& o = *t->obj;
        if (o.star.is_present()) visit(o.star.type);
        visit(o.proto);
        if (o.code) visit(o.code);
        for (const auto& [k, f] : o.named) {
          if (skip_fields_.count(k)) continue;
          if (f.is_present()) visit(f.type);
        }
        return;
      }
      case TypeTag::Func:
        visit(t->fn->result);
        return;
      default:
        return;
    }
  }

  const TypeEnv& env_;
  std::set<std::string> skip_fields_;
  std::set<TypePtr, TypePtrLess> seen_;
  std::vector<TypePtr> objects_;
  std::set<std::string> named_seen_;
};

// Conservative "cannot be invoked" check for a field payload.
bool primitive_only(const TypePtr& t, const TypeEnv& env, std::set<std::string>& seen) {
  switch (t->tag) {
    case TypeTag::Prim:
    case TypeTag::StrSet:
    case TypeTag::Bot:
      return true;
    case TypeTag::Union:
    case TypeTag::Intersect:
      for (const auto& m : t->members) {
        if (!primitive_only(m, env, seen)) return false;
      }
      return true;
    case TypeTag::Named: {
      if (!seen.insert(t->name).second) return true;
      TypePtr def = env.aliases.lookup(t->name);
      return def ? primitive_only(def, env, seen) : false;
    }
    default:
      return false;
  }
}

const std::set<std::string> kEvalLike = {"eval", "write", "writeln", "Function"};

}  // namespace

WalkReport corollary_walks(const TypeEnv& env) {
  WalkReport report;
  TypePtr widget = env.alias("Widget");
  if (!widget) {
    report.eval_guarded = false;
    report.html_confined = false;
    report.violations.push_back("no Widget alias in environment");
    return report;
  }

  // (a) every reachable object keeps eval-capable members banned
  Walker wa(env, {});
  wa.run(widget);
  for (const auto& t : wa.objects()) {
    const auto& o = *t->obj;
    for (const auto& name : kEvalLike) {
      auto it = o.named.find(name);
      if (it != o.named.end()) {
        if (!it->second.is_banned()) {
          report.eval_guarded = false;
          report.violations.push_back("field '" + name + "' not banned on " + print_type(t));
        }
      } else if (name == "eval" && o.star.is_present()) {
        std::set<std::string> seen;
        if (!primitive_only(o.star.type, env, seen)) {
          report.eval_guarded = false;
          report.violations.push_back("star entry could expose callable 'eval' on " +
                                      print_type(t));
        }
      }
    }
  }
  // setTimeout must not take string code
  if (TypePtr st = env.binding("setTimeout")) {
    TypePtr head = SubtypeCtx(&env.aliases).resolve_head(st);
    if (head->tag == TypeTag::Func && !head->fn->fixed.empty()) {
      if (subtype(t_str(), head->fn->fixed[0], env.aliases)) {
        report.eval_guarded = false;
        report.violations.push_back("setTimeout accepts string code");
      }
    }
  }

  // (b) with the ___nodes___ edge cut, HTML is unreachable
  Walker wb(env, {"___nodes___"});
  wb.run(widget);
  if (wb.named_seen().count("HTML")) {
    report.html_confined = false;
    report.violations.push_back("HTML reachable from Widget outside ___nodes___");
  }
  // and HTML values never pass as Widgets
  if (TypePtr html = env.alias("HTML")) {
    if (subtype(html, widget, env.aliases)) {
      report.html_confined = false;
      report.violations.push_back("HTML is a subtype of Widget");
    }
  }
  return report;
}

}  // namespace sandcheck
