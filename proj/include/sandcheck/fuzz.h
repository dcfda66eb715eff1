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

#include <cstdint>
#include <string>
#include <vector>

#include "sandcheck/env.h"

namespace sandcheck {

struct FuzzOptions {
  uint64_t seed = 1;
  int count = 100;
  int depth = 4;
  int fuel = 4000;
  // Mutation harness: emit writes to absent-required fields and check them
  // with the update ban disabled; the store typing must then catch them.
  bool mutate_update_rule = false;
};

struct FuzzReport {
  int generated = 0;      // programs drawn, including gate-rejected ones
  int accepted = 0;       // programs that passed the gate and were run
  int total_steps = 0;
  int violations = 0;     // preservation or store-typing failures
  int stuck = 0;          // progress failures (never expected)
  int completed = 0;
  int runtime_errors = 0;
  int fuel_exhausted = 0;
  std::vector<std::string> failures;  // first line per failing program

  std::string summary() const;
};

// Generates one random widget program from the surface subset.
std::string generate_widget_source(uint64_t seed, int depth, bool mutate);

// Draws seeded widget programs until `count` pass the gate, then runs each
// one, re-typechecking the residual expression and the store typing at
// every reduction step. Sigma grows monotonically: locations are typed once
// at allocation and never change.
FuzzReport preservation_fuzz(const FuzzOptions& opts, const TypeEnv& env);

}  // namespace sandcheck
