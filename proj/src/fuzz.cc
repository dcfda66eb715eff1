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

#include "sandcheck/fuzz.h"

#include <random>
#include <sstream>

#include "sandcheck/checker.h"
#include "sandcheck/gate.h"
#include "sandcheck/interp.h"
#include "sandcheck/parser.h"

namespace sandcheck {

namespace {

// Weighted program generator over the widget subset. Arithmetic stays on
// literals so that typability never depends on flow facts; guards and
// string tests are still produced, they are just never load-bearing.
class Generator {
 public:
  Generator(uint64_t seed, int depth, bool mutate)
      : rng_(seed), depth_(depth), mutate_(mutate) {}

  std::string program() {
    out_.str("");
    vars_.clear();
    counter_ = 0;
    int stmts = 2 + pick(2 + depth_);
    for (int i = 0; i < stmts; ++i) statement(0);
    return out_.str();
  }

 private:
  struct Var {
    std::string name;
    char kind;  // n s b o f a w
  };

  int pick(int n) { return static_cast<int>(rng_() % static_cast<uint64_t>(n)); }
  bool chance(int percent) { return pick(100) < percent; }

  std::string fresh(char kind) {
    std::string name = std::string(1, kind) + std::to_string(counter_++);
    vars_.push_back({name, kind});
    return name;
  }

  const Var* any_var(char kind) {
    std::vector<const Var*> match;
    for (const auto& v : vars_) {
      if (kind == 'w' || v.kind == kind) match.push_back(&v);
    }
    if (match.empty()) return nullptr;
    return match[pick(static_cast<int>(match.size()))];
  }

  void indent(int d) {
    for (int i = 0; i < d; ++i) out_ << "  ";
  }

  std::string key() {
    static const char* keys[] = {"a", "b", "c", "d", "e", "state", "count", "title"};
    return keys[pick(8)];
  }

  std::string str_lit() {
    static const char* strs[] = {"hi", "div", "p", "left", "red", "on", ""};
    return std::string("\"") + strs[pick(7)] + "\"";
  }

  std::string num_expr(int d) {
    if (d < depth_ && chance(30)) {
      static const char* ops[] = {" + ", " - ", " * "};
      return "(" + num_expr(d + 1) + ops[pick(3)] + num_expr(d + 1) + ")";
    }
    return std::to_string(pick(100));
  }

  std::string bool_expr(int) {
    switch (pick(4)) {
      case 0: return chance(50) ? "true" : "false";
      case 1: {
        const Var* v = any_var('w');
        if (v) return "typeof " + v->name + " === \"" + type_tag() + "\"";
        return "true";
      }
      case 2: {
        const Var* v = any_var('w');
        if (v) return v->name + " === " + str_lit();
        return "false";
      }
      default: {
        const Var* v = any_var('b');
        return v ? v->name : "true";
      }
    }
  }

  std::string type_tag() {
    static const char* tags[] = {"string", "number", "boolean", "object",
                                 "function", "undefined"};
    return tags[pick(6)];
  }

  std::string object_expr(int d) {
    std::ostringstream o;
    o << "{";
    int n = pick(3);
    for (int i = 0; i <= n; ++i) {
      if (i) o << ", ";
      o << "\"" << key() << "\": " << expr('w', d + 1);
    }
    o << "}";
    return o.str();
  }

  std::string array_expr(int d) {
    std::ostringstream o;
    o << "[";
    int n = pick(3);
    for (int i = 0; i < n; ++i) {
      if (i) o << ", ";
      o << expr('w', d + 1);
    }
    o << "]";
    return o.str();
  }

  std::string func_expr(int d) {
    std::ostringstream o;
    std::vector<Var> saved = vars_;
    std::string p0 = fresh('w');
    std::string p1 = fresh('w');
    o << "function (" << p0 << ", " << p1 << ") { return " << expr('w', d + 1) << "; }";
    vars_ = std::move(saved);
    return o.str();
  }

  std::string call_expr(int d) {
    const Var* f = any_var(chance(80) ? 'f' : 'w');
    if (!f) return "undefined";
    std::ostringstream o;
    o << f->name << "(";
    int n = pick(3);
    for (int i = 0; i < n; ++i) {
      if (i) o << ", ";
      o << expr('w', d + 1);
    }
    o << ")";
    return o.str();
  }

  std::string expr(char kind, int d) {
    if (d >= depth_) {
      switch (kind) {
        case 'n': return std::to_string(pick(100));
        case 's': return str_lit();
        case 'b': return chance(50) ? "true" : "false";
        default: return chance(50) ? str_lit() : std::to_string(pick(100));
      }
    }
    switch (kind) {
      case 'n': return num_expr(d);
      case 's': {
        const Var* v = chance(30) ? any_var('s') : nullptr;
        if (v) return v->name;
        if (chance(25)) return "(" + str_lit() + " + " + str_lit() + ")";
        return str_lit();
      }
      case 'b': return bool_expr(d);
      case 'o': {
        const Var* v = chance(25) ? any_var('o') : nullptr;
        return v ? v->name : object_expr(d);
      }
      case 'a': return array_expr(d);
      case 'f': return func_expr(d);
      default:
        switch (pick(10)) {
          case 0: return num_expr(d);
          case 1: return str_lit();
          case 2: return "null";
          case 3: return "undefined";
          case 4: return object_expr(d);
          case 5: return array_expr(d);
          case 6: return func_expr(d);
          case 7: {
            const Var* v = any_var('o');
            if (v) return v->name + "." + key();
            return str_lit();
          }
          case 8:
            return call_expr(d);
          default: {
            const Var* v = any_var('w');
            return v ? v->name : "0";
          }
        }
    }
  }

  void statement(int d) {
    int roll = pick(100);
    if (roll < 40 || vars_.empty()) {
      static const char kinds[] = {'n', 's', 'b', 'o', 'o', 'a', 'f', 'w'};
      char kind = kinds[pick(8)];
      std::string rhs = expr(kind, d);
      std::string name = fresh(kind);
      indent(d);
      out_ << "var " << name << " = " << rhs << ";\n";
      return;
    }
    if (roll < 50) {  // reassignment, same kind
      const Var* v = any_var('w');
      indent(d);
      out_ << v->name << " = " << expr(v->kind, d) << ";\n";
      return;
    }
    if (roll < 62) {  // field write
      const Var* o = any_var('o');
      if (o) {
        indent(d);
        if (mutate_ && chance(35)) {
          out_ << o->name << ".valueOf = " << num_expr(d + 1) << ";\n";
        } else {
          out_ << o->name << "." << key() << " = " << expr('w', d + 1) << ";\n";
        }
        return;
      }
      roll = 70;
    }
    if (roll < 70) {  // call statement
      indent(d);
      out_ << call_expr(d) << ";\n";
      return;
    }
    if (roll < 84 && d < depth_) {  // if statement
      indent(d);
      out_ << "if (" << bool_expr(0) << ") {\n";
      size_t mark = vars_.size();
      statement(d + 1);
      vars_.resize(mark);  // branch-local decls stay branch-local
      indent(d);
      if (chance(50)) {
        out_ << "} else {\n";
        statement(d + 1);
        vars_.resize(mark);
        indent(d);
      }
      out_ << "}\n";
      return;
    }
    if (roll < 92 && d < depth_) {  // flag-controlled loop
      std::string flag = fresh('b');
      indent(d);
      out_ << "var " << flag << " = true;\n";
      indent(d);
      out_ << "while (" << flag << ") {\n";
      indent(d + 1);
      out_ << flag << " = false;\n";
      size_t mark = vars_.size();
      statement(d + 1);
      vars_.resize(mark);
      indent(d);
      out_ << "}\n";
      return;
    }
    if (roll < 96) {  // delete
      const Var* o = any_var('o');
      if (o) {
        indent(d);
        out_ << "delete " << o->name << "." << key() << ";\n";
        return;
      }
    }
    // gate bait: rejected constructs keep the acceptance path honest
    indent(d);
    switch (pick(3)) {
      case 0: out_ << "var t" << counter_++ << " = this;\n"; break;
      case 1: out_ << "var o" << counter_++ << " = {\"__proto__\": 1};\n"; break;
      default: out_ << "var w" << counter_++ << " = window;\n"; break;
    }
  }

  std::mt19937_64 rng_;
  int depth_;
  bool mutate_;
  std::ostringstream out_;
  std::vector<Var> vars_;
  int counter_ = 0;
};

bool heap_extends(const AbstractHeap& before, const AbstractHeap& after) {
  for (const auto& [loc, t] : before.typing) {
    TypePtr nt = after.at(loc);
    if (!nt || !type_equal(nt, t)) return false;
  }
  return true;
}

}  // namespace

std::string generate_widget_source(uint64_t seed, int depth, bool mutate) {
  Generator g(seed, depth, mutate);
  return g.program();
}

FuzzReport preservation_fuzz(const FuzzOptions& opts, const TypeEnv& env) {
  FuzzReport report;
  AbstractHeap no_heap;
  TypePtr widget = t_named("Widget");

  uint64_t draw = 0;
  for (int accepted = 0; accepted < opts.count;) {
    uint64_t seed = opts.seed * 1000003ULL + draw++;
    std::string src = generate_widget_source(seed, opts.depth, opts.mutate_update_rule);
    ++report.generated;
    if (report.generated > opts.count * 64) break;  // generator misconfigured

    surface::Program prog;
    try {
      prog = parse_surface(src);
    } catch (const ParseError&) {
      continue;
    }
    CheckOptions gate_opts;
    gate_opts.gate_mode = true;
    gate_opts.disable_update_ban = opts.mutate_update_rule;
    core::ExprPtr coree;
    {
      CheckReport pre;
      coree = desugar_widget(prog, env);
      Checker gate(env, no_heap, gate_opts);
      gate.check_unit(coree);
      gate.report().finalize();
      if (!gate.report().ok) continue;
    }
    ++accepted;
    ++report.accepted;

    Store store = make_builtin_store();
    core::ExprPtr e = bind_globals(coree, store);
    AbstractHeap heap = heap_for(store);
    bool failed = false;
    auto fail = [&](const std::string& why) {
      if (!failed) {
        ++report.violations;
        report.failures.push_back("seed " + std::to_string(seed) + ": " + why);
        failed = true;
      }
    };

    bool settled = false;
    for (int i = 0; i < opts.fuel; ++i) {
      // retype the residual program at Widget
      {
        // the residual of a widget is still a widget: literals check
        // against Widget and every surviving source expression must too
        CheckOptions ropts;
        ropts.gate_mode = true;
        ropts.disable_update_ban = opts.mutate_update_rule;
        Checker re(env, heap, ropts);
        TypePtr t = re.check_unit(e);
        re.report().finalize();
        if (!re.report().ok) {
          fail("step " + std::to_string(i) +
               ": residual fails to typecheck: " + re.report().diagnostics[0].code + " " +
               re.report().diagnostics[0].message);
        } else if (!subtype(t, widget, env.aliases)) {
          fail("step " + std::to_string(i) + ": residual types as " + print_type(t) +
               ", no longer Widget");
        }
      }
      StoreTypingResult stc = store_typing_check(store, heap, env);
      if (!stc.ok) {
        fail("step " + std::to_string(i) + ": store typing: loc " +
             std::to_string(stc.first_bad) + " " + stc.reason);
      }
      if (failed) break;

      StepResult r = step(store, e);
      AbstractHeap heap2 = heap_for(store);
      if (!heap_extends(heap, heap2)) {
        fail("step " + std::to_string(i) + ": heap extension is not monotone");
        break;
      }
      heap = std::move(heap2);
      ++report.total_steps;
      if (r.kind == StepResult::Kind::Stepped) {
        e = r.next;
        continue;
      }
      if (r.kind == StepResult::Kind::Done) {
        ++report.completed;
      } else if (r.kind == StepResult::Kind::Error) {
        ++report.runtime_errors;
      } else {
        ++report.stuck;
        fail("step " + std::to_string(i) + ": stuck: " + r.stuck);
      }
      settled = true;
      break;
    }
    if (!settled && !failed) ++report.fuel_exhausted;
  }
  return report;
}

std::string FuzzReport::summary() const {
  std::ostringstream out;
  out << "fuzz: " << accepted << "/" << generated << " generated programs passed the gate\n";
  out << "steps: " << total_steps << ", completed: " << completed
      << ", runtime errors: " << runtime_errors << ", fuel exhausted: " << fuel_exhausted
      << ", stuck: " << stuck << "\n";
  out << "violations: " << violations << "\n";
  for (size_t i = 0; i < failures.size() && i < 10; ++i) {
    out << "  " << failures[i] << "\n";
  }
  return out.str();
}

}  // namespace sandcheck
