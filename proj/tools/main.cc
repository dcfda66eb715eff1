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

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "sandcheck/checker.h"
#include "sandcheck/corpus.h"
#include "sandcheck/fuzz.h"
#include "sandcheck/gate.h"
#include "sandcheck/interp.h"

namespace {

using namespace sandcheck;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

TypeEnv load_environment(std::vector<std::string> env_paths) {
  if (env_paths.empty()) {
    if (const char* p = std::getenv("SANDCHECK_ENV")) env_paths.push_back(p);
  }
  auto [env, heap] = builtin_env();
  (void)heap;
  for (const auto& path : env_paths) {
    load_env_text(env, read_file(path));
  }
  auto missing = unresolved_aliases(env);
  if (!missing.empty()) {
    throw std::runtime_error("unknown alias '" + missing.front() + "' in environment");
  }
  return env;
}

void print_report(const CheckReport& report, const std::string& file, bool json) {
  if (json) {
    std::cout << report.to_json();
    return;
  }
  for (const auto& d : report.diagnostics) {
    std::cout << file << ":" << d.span.line << ":" << d.span.col << ": " << d.code << ": "
              << d.message << "\n";
  }
  for (const auto& c : report.cheats) {
    std::cout << file << ":" << c.span.line << ":" << c.span.col
              << ": cheat ascription: " << print_type(c.type) << "\n";
  }
}

int cmd_check(const std::vector<std::string>& files, const std::vector<std::string>& envs,
              bool json) {
  TypeEnv env = load_environment(envs);
  AbstractHeap heap;
  bool all_ok = true;
  size_t cheat_count = 0;
  for (const auto& file : files) {
    surface::Program prog;
    try {
      prog = parse_surface(read_file(file));
    } catch (const ParseError& e) {
      std::cout << file << ":" << e.span.line << ":" << e.span.col << ": " << E_PARSE << ": "
                << e.what() << "\n";
      all_ok = false;
      continue;
    }
    core::ExprPtr coree = desugar_program(prog, DesugarOptions{});
    CheckReport report = check_program({{file, coree}}, env, heap);
    print_report(report, file, json);
    cheat_count += report.cheats.size();
    all_ok = all_ok && report.ok;
  }
  if (!json) {
    std::cout << (all_ok ? "ok" : "rejected") << ", " << cheat_count
              << (cheat_count == 1 ? " cheat recorded" : " cheats recorded") << "\n";
  }
  return all_ok ? 0 : 1;
}

int cmd_widget_lint(const std::vector<std::string>& files, const std::vector<std::string>& envs,
                    bool json) {
  TypeEnv env = load_environment(envs);
  AbstractHeap heap;
  bool all_ok = true;
  for (const auto& file : files) {
    surface::Program prog;
    try {
      prog = parse_surface(read_file(file));
    } catch (const ParseError& e) {
      std::cout << file << ":" << e.span.line << ":" << e.span.col << ": " << E_PARSE << ": "
                << e.what() << "\n";
      all_ok = false;
      continue;
    }
    CheckReport report = widget_check(prog, env, heap);
    print_report(report, file, json);
    if (!json) std::cout << file << ": " << (report.ok ? "accepted" : "rejected") << "\n";
    all_ok = all_ok && report.ok;
  }
  return all_ok ? 0 : 1;
}

int cmd_run(const std::string& file, int fuel, const std::vector<std::string>& envs) {
  load_environment(envs);  // validates extra env files up front
  surface::Program prog = parse_surface(read_file(file));
  core::ExprPtr coree = desugar_program(prog, DesugarOptions{});
  Store store = make_builtin_store();
  core::ExprPtr bound = bind_globals(coree, store);
  Outcome o = eval_expr(store, bound, fuel);
  std::cout << show_outcome(store, o) << "\n";
  for (const auto& e : store.effects) std::cout << "effect: " << e << "\n";
  return o.kind == Outcome::Kind::Value ? 0 : 1;
}

int cmd_fuzz(uint64_t seed, int count, int depth, int fuel, bool mutate,
             const std::vector<std::string>& envs) {
  TypeEnv env = load_environment(envs);
  FuzzOptions opts;
  opts.seed = seed;
  opts.count = count;
  opts.depth = depth;
  opts.fuel = fuel;
  opts.mutate_update_rule = mutate;
  FuzzReport report = preservation_fuzz(opts, env);
  std::cout << report.summary();
  if (mutate) return report.violations > 0 ? 0 : 1;
  return report.violations == 0 && report.stuck == 0 ? 0 : 1;
}

int cmd_corpus(const std::string& manifest, const std::string& filter,
               const std::vector<std::string>& envs) {
  TypeEnv env = load_environment(envs);
  CorpusSummary summary = run_corpus(manifest, filter, env);
  std::cout << summary.to_text();
  return summary.ok() ? 0 : 1;
}

int cmd_dump_type(const std::string& name, const std::vector<std::string>& envs) {
  TypeEnv env = load_environment(envs);
  TypePtr t = env.alias(name);
  if (!t) t = env.binding(name);
  if (!t) {
    std::cerr << "no alias or binding named '" << name << "'\n";
    return 2;
  }
  std::cout << print_type(t) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sandcheck: type-based verification for sandboxed widgets"};
  app.require_subcommand(1);

  std::vector<std::string> files, envs;
  std::string format = "text";
  std::string file, manifest = "corpus/manifest.json", filter, name;
  int fuel = 100000;
  uint64_t seed = 1;
  int count = 100, depth = 4, fuzz_fuel = 4000;
  bool mutate = false;

  auto* check = app.add_subcommand("check", "type-check annotated monitor code");
  check->add_option("files", files)->required()->expected(-1);
  check->add_option("--env", envs, "extra environment file (repeatable)");
  check->add_option("--format", format)->check(CLI::IsMember({"text", "json"}));

  auto* lint = app.add_subcommand("widget-lint", "gate untrusted widgets");
  lint->add_option("files", files)->required()->expected(-1);
  lint->add_option("--env", envs);
  lint->add_option("--format", format)->check(CLI::IsMember({"text", "json"}));

  auto* run = app.add_subcommand("run", "evaluate a program");
  run->add_option("file", file)->required();
  run->add_option("--fuel", fuel);
  run->add_option("--env", envs);

  auto* fuzz = app.add_subcommand("fuzz", "preservation fuzzing");
  fuzz->add_option("--seed", seed);
  fuzz->add_option("--count", count);
  fuzz->add_option("--depth", depth);
  fuzz->add_option("--fuel", fuzz_fuel);
  fuzz->add_flag("--mutate", mutate, "disable the update ban and expect violations");
  fuzz->add_option("--env", envs);

  auto* corpus = app.add_subcommand("corpus", "run the fixture corpus");
  corpus->add_option("--manifest", manifest);
  corpus->add_option("--filter", filter);
  corpus->add_option("--env", envs);

  auto* dump = app.add_subcommand("dump-type", "print an alias in canonical syntax");
  dump->add_option("name", name)->required();
  dump->add_option("--env", envs);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*check) return cmd_check(files, envs, format == "json");
    if (*lint) return cmd_widget_lint(files, envs, format == "json");
    if (*run) return cmd_run(file, fuel, envs);
    if (*fuzz) return cmd_fuzz(seed, count, depth, fuzz_fuel, mutate, envs);
    if (*corpus) return cmd_corpus(manifest, filter, envs);
    if (*dump) return cmd_dump_type(name, envs);
  } catch (const ParseError& e) {
    std::cerr << "parse error at " << e.span.line << ":" << e.span.col << ": " << e.what()
              << "\n";
    return 2;
  } catch (const EnvError& e) {
    std::cerr << "environment error (line " << e.line << "): " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
