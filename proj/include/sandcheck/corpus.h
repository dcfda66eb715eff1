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

#include <optional>
#include <string>
#include <vector>

#include "sandcheck/env.h"

namespace sandcheck {

// One corpus entry: a program plus its expected verdict.
//   mode: "widget" (gate), "monitor" (annotated check), "run" (evaluate)
//   expected: "accept", "reject", or "outcome"
struct Fixture {
  std::string path;
  std::string mode;
  std::string expected;
  std::vector<std::string> codes;    // reject: diagnostics that must appear
  std::optional<int> cheats;         // accept: exact cheat count when given
  std::string outcome;               // run: prefix of the rendered outcome
  std::vector<std::string> effects;  // run: effects that must occur, in order
  int fuel = 100000;
  std::vector<std::string> tags;
  std::string notes;
};

struct FixtureResult {
  Fixture fixture;
  bool pass = false;
  std::string detail;  // deterministic one-line description
};

struct CorpusSummary {
  std::vector<FixtureResult> results;
  int passed = 0;
  int failed = 0;

  std::string to_text() const;
  bool ok() const { return failed == 0; }
};

std::vector<Fixture> load_manifest(const std::string& manifest_path);

// Runs every fixture (optionally restricted to a tag) against the given
// environment. Paths resolve relative to the manifest.
CorpusSummary run_corpus(const std::string& manifest_path, const std::string& filter_tag,
                         const TypeEnv& env);

}  // namespace sandcheck
