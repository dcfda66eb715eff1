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

#include "sandcheck/subtype.h"
#include "sandcheck/types.h"

namespace sandcheck {

struct FieldsResult {
  TypePtr type;                             // null on error
  std::optional<std::string> banned_name;   // a banned field is reachable by S
  std::optional<std::string> error;         // no object structure to look in
  bool empty_lookup = false;                // the result was bottom

  bool ok() const { return type != nullptr; }
};

// Property lookup over an object type with a string-set index:
//   - named fields contribute their types when their name is in S
//   - the star entry contributes when S minus all named keys is nonempty
//   - the proto contributes for names not locally present (Absent fields
//     fall through); a Null proto contributes Undef
//   - unions distribute, the empty set yields bottom, and any banned field
//     reachable by S poisons the whole lookup
// Primitive members of unions are skipped: looking up a field on them is a
// runtime error the relaxed rules tolerate.
FieldsResult fields(const TypePtr& t, const StringSet& s, SubtypeCtx& ctx);

// Semantic union of two property-name sets.
StringSet sset_union(const StringSet& a, const StringSet& b);

// The set of strings `typeof` can produce for values of this type.
StringSet typeof_set(const TypePtr& t, SubtypeCtx& ctx);

}  // namespace sandcheck
