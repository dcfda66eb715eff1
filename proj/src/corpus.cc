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

#include "sandcheck/corpus.h"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "sandcheck/checker.h"
#include "sandcheck/gate.h"
#include "sandcheck/interp.h"
#include "sandcheck/parser.h"

namespace sandcheck {

namespace {

std::string dirname_of(const std::string& path) {
  size_t slash = path.find_last_of('/');
  return slash == std::string::npos ? std::string(".") : path.substr(0, slash);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

FixtureResult run_one(const Fixture& fx, const std::string& base, const TypeEnv& env) {
  FixtureResult out;
  out.fixture = fx;
  std::string source;
  try {
    source = read_file(base + "/" + fx.path);
  } catch (const std::exception& e) {
    out.detail = std::string("missing fixture: ") + e.what();
    return out;
  }

  AbstractHeap heap;
  try {
    if (fx.mode == "widget" || fx.mode == "monitor") {
      surface::Program prog = parse_surface(source);
      CheckReport report;
      if (fx.mode == "widget") {
        report = widget_check(prog, env, heap);
      } else {
        core::ExprPtr coree = desugar_program(prog, DesugarOptions{});
        report = check_program({{fx.path, coree}}, env, heap);
      }
      bool accepted = report.ok;
      if (fx.expected == "accept") {
        if (!accepted) {
          out.detail = "expected accept, got: " + report.diagnostics[0].code + " " +
                       report.diagnostics[0].message;
          return out;
        }
        if (fx.cheats && static_cast<int>(report.cheats.size()) != *fx.cheats) {
          out.detail = "expected " + std::to_string(*fx.cheats) + " cheats, saw " +
                       std::to_string(report.cheats.size());
          return out;
        }
        out.pass = true;
        out.detail = "accepted, " + std::to_string(report.cheats.size()) + " cheats";
        return out;
      }
      if (fx.expected == "reject") {
        if (accepted) {
          out.detail = "expected reject, program was accepted";
          return out;
        }
        for (const auto& code : fx.codes) {
          if (!report.has_code(code)) {
            out.detail = "expected diagnostic " + code + ", got " +
                         report.diagnostics[0].code;
            return out;
          }
        }
        out.pass = true;
        out.detail = "rejected with " + (fx.codes.empty() ? report.diagnostics[0].code
                                                          : fx.codes[0]);
        return out;
      }
      out.detail = "bad expectation '" + fx.expected + "' for mode " + fx.mode;
      return out;
    }
    if (fx.mode == "run") {
      surface::Program prog = parse_surface(source);
      core::ExprPtr coree = desugar_program(prog, DesugarOptions{});
      Store store = make_builtin_store();
      core::ExprPtr bound = bind_globals(coree, store);
      Outcome o = eval_expr(store, bound, fx.fuel);
      std::string rendered = show_outcome(store, o);
      if (rendered.rfind(fx.outcome, 0) != 0) {
        out.detail = "expected outcome '" + fx.outcome + "', got '" + rendered + "'";
        return out;
      }
      size_t at = 0;
      for (const auto& want : fx.effects) {
        bool found = false;
        for (; at < store.effects.size(); ++at) {
          if (store.effects[at] == want) {
            found = true;
            ++at;
            break;
          }
        }
        if (!found) {
          out.detail = "missing effect '" + want + "'";
          return out;
        }
      }
      out.pass = true;
      out.detail = rendered;
      return out;
    }
    out.detail = "unknown mode '" + fx.mode + "'";
    return out;
  } catch (const ParseError& e) {
    if (fx.expected == "reject") {
      // a parse rejection still counts when no specific codes are pinned
      if (fx.codes.empty() || (fx.codes.size() == 1 && fx.codes[0] == E_PARSE)) {
        out.pass = true;
        out.detail = "rejected at parse";
        return out;
      }
    }
    out.detail = std::string("parse error: ") + e.what();
    return out;
  }
}

}  // namespace

std::vector<Fixture> load_manifest(const std::string& manifest_path) {
  nlohmann::json doc = nlohmann::json::parse(read_file(manifest_path));
  std::vector<Fixture> out;
  for (const auto& j : doc) {
    Fixture fx;
    fx.path = j.at("path").get<std::string>();
    fx.mode = j.at("mode").get<std::string>();
    fx.expected = j.at("expected").get<std::string>();
    if (j.contains("codes")) fx.codes = j["codes"].get<std::vector<std::string>>();
    if (j.contains("cheats")) fx.cheats = j["cheats"].get<int>();
    if (j.contains("outcome")) fx.outcome = j["outcome"].get<std::string>();
    if (j.contains("effects")) fx.effects = j["effects"].get<std::vector<std::string>>();
    if (j.contains("fuel")) fx.fuel = j["fuel"].get<int>();
    if (j.contains("tags")) fx.tags = j["tags"].get<std::vector<std::string>>();
    if (j.contains("notes")) fx.notes = j["notes"].get<std::string>();
    out.push_back(std::move(fx));
  }
  return out;
}

CorpusSummary run_corpus(const std::string& manifest_path, const std::string& filter_tag,
                         const TypeEnv& env) {
  CorpusSummary summary;
  std::string base = dirname_of(manifest_path);
  for (const auto& fx : load_manifest(manifest_path)) {
    if (!filter_tag.empty() &&
        std::find(fx.tags.begin(), fx.tags.end(), filter_tag) == fx.tags.end()) {
      continue;
    }
    summary.results.push_back(run_one(fx, base, env));
    if (summary.results.back().pass) {
      ++summary.passed;
    } else {
      ++summary.failed;
    }
  }
  return summary;
}

std::string CorpusSummary::to_text() const {
  std::ostringstream out;
  for (const auto& r : results) {
    out << (r.pass ? "PASS" : "FAIL") << " " << r.fixture.mode << " " << r.fixture.path
        << " - " << r.detail << "\n";
  }
  out << passed << " passed, " << failed << " failed\n";
  return out.str();
}

}  // namespace sandcheck
