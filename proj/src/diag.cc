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

#include "sandcheck/diag.h"

#include <algorithm>
#include <sstream>

#include "json.hpp"

namespace sandcheck {

void CheckReport::add(std::string code, Span span, std::string message) {
  diagnostics.push_back({std::move(code), span, std::move(message)});
  ok = false;
}

void CheckReport::finalize() {
  std::sort(diagnostics.begin(), diagnostics.end());
  diagnostics.erase(std::unique(diagnostics.begin(), diagnostics.end()), diagnostics.end());
  std::sort(cheats.begin(), cheats.end(), [](const CheatRecord& a, const CheatRecord& b) {
    return a.span < b.span;
  });
  ok = diagnostics.empty();
}

bool CheckReport::has_code(const std::string& code) const {
  for (const auto& d : diagnostics) {
    if (d.code == code) return true;
  }
  return false;
}

std::string CheckReport::to_text() const {
  std::ostringstream out;
  for (const auto& d : diagnostics) {
    out << d.code << ":" << d.span.line << ":" << d.span.col << ":" << d.message << "\n";
  }
  for (const auto& c : cheats) {
    out << "CHEAT:" << c.span.line << ":" << c.span.col << ":" << print_type(c.type) << "\n";
  }
  out << (ok ? "ok" : "rejected") << " (" << diagnostics.size() << " diagnostics, "
      << cheats.size() << " cheats)\n";
  return out.str();
}

std::string CheckReport::to_json() const {
  nlohmann::ordered_json j;
  j["ok"] = ok;
  j["diagnostics"] = nlohmann::ordered_json::array();
  for (const auto& d : diagnostics) {
    nlohmann::ordered_json jd;
    jd["code"] = d.code;
    jd["line"] = d.span.line;
    jd["col"] = d.span.col;
    jd["message"] = d.message;
    j["diagnostics"].push_back(jd);
  }
  j["cheats"] = nlohmann::ordered_json::array();
  for (const auto& c : cheats) {
    nlohmann::ordered_json jc;
    jc["line"] = c.span.line;
    jc["col"] = c.span.col;
    jc["type"] = print_type(c.type);
    j["cheats"].push_back(jc);
  }
  return j.dump(2) + "\n";
}

}  // namespace sandcheck
