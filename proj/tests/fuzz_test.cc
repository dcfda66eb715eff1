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

#include "doctest.h"
#include "sandcheck/fuzz.h"
#include "test_util.h"

namespace sandcheck {
namespace {

using testing::test_env;

TEST_CASE("preservation holds on seeded gate-accepted programs") {
  FuzzOptions opts;
  opts.seed = 1;
  opts.count = 25;
  opts.depth = 4;
  FuzzReport r = preservation_fuzz(opts, test_env());
  CHECK(r.accepted == 25);
  CHECK(r.violations == 0);
  CHECK(r.stuck == 0);
  CHECK(r.total_steps > 100);
}

TEST_CASE("the generator keeps at least half of its draws") {
  FuzzOptions opts;
  opts.seed = 5;
  opts.count = 40;
  FuzzReport r = preservation_fuzz(opts, test_env());
  CHECK(r.accepted == 40);
  CHECK(r.accepted * 2 >= r.generated);
}

TEST_CASE("a disabled update rule is caught by the store typing") {
  FuzzOptions opts;
  opts.seed = 7;
  opts.count = 25;
  opts.mutate_update_rule = true;
  FuzzReport r = preservation_fuzz(opts, test_env());
  CHECK(r.violations > 0);
}

TEST_CASE("a zero-count run reports nothing") {
  FuzzOptions opts;
  opts.count = 0;
  FuzzReport r = preservation_fuzz(opts, test_env());
  CHECK(r.generated == 0);
  CHECK(r.accepted == 0);
  CHECK(r.total_steps == 0);
  CHECK(r.violations == 0);
}

TEST_CASE("fuzz reports are reproducible") {
  FuzzOptions opts;
  opts.seed = 11;
  opts.count = 10;
  FuzzReport a = preservation_fuzz(opts, test_env());
  FuzzReport b = preservation_fuzz(opts, test_env());
  CHECK(a.summary() == b.summary());
  CHECK(generate_widget_source(42, 4, false) == generate_widget_source(42, 4, false));
}

}  // namespace
}  // namespace sandcheck
