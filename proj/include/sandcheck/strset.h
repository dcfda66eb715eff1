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

#include <set>
#include <stdexcept>
#include <string>

namespace sandcheck {

// A finite string set used as a property-name type: (f, ...)+ names exactly
// the listed strings, (f, ...)- names every string except the listed ones.
struct StringSet {
  bool negative = false;
  std::set<std::string> names;

  static StringSet positive(std::set<std::string> ns) { return {false, std::move(ns)}; }
  static StringSet negative_of(std::set<std::string> ns) { return {true, std::move(ns)}; }
  static StringSet singleton(const std::string& s) { return {false, {s}}; }
  // ()- : every string, the set equivalent of Str.
  static StringSet all_strings() { return {true, {}}; }
  // ()+ : the empty set; any lookup with it is bottom.
  static StringSet none() { return {false, {}}; }

  bool is_empty() const { return !negative && names.empty(); }
  bool is_all() const { return negative && names.empty(); }

  bool operator==(const StringSet& o) const {
    return negative == o.negative && names == o.names;
  }
  bool operator<(const StringSet& o) const {
    if (negative != o.negative) return negative < o.negative;
    return names < o.names;
  }
};

// f in (f1, ...)+  iff  exists fi . f = fi
// f in (f1, ...)-  iff  forall fi . f != fi
inline bool sset_member(const std::string& f, const StringSet& s) {
  bool listed = s.names.count(f) > 0;
  return s.negative ? !listed : listed;
}

// Set subtraction with a positive subtrahend, per the lookup algebra:
//   (f1, ...)+ - (s1, ...)+ = the fi not listed in s, still positive
//   (f1, ...)- - (s1, ...)+ = (f1, ..., s1, ...)-
// Subtraction by a negative set is undefined and rejected.
inline StringSet sset_subtract(const StringSet& s, const StringSet& p) {
  if (p.negative) {
    throw std::invalid_argument("string-set subtraction requires a positive subtrahend");
  }
  StringSet out;
  if (!s.negative) {
    out.negative = false;
    for (const auto& n : s.names) {
      if (!p.names.count(n)) out.names.insert(n);
    }
  } else {
    out.negative = true;
    out.names = s.names;
    out.names.insert(p.names.begin(), p.names.end());
  }
  return out;
}

// Semantic inclusion over all strings. Positive sets are finite, negative
// sets are cofinite, so the four polarity cases are decidable directly.
inline bool sset_subset(const StringSet& a, const StringSet& b) {
  if (!a.negative && !b.negative) {
    for (const auto& n : a.names) {
      if (!b.names.count(n)) return false;
    }
    return true;
  }
  if (!a.negative && b.negative) {
    for (const auto& n : a.names) {
      if (b.names.count(n)) return false;
    }
    return true;
  }
  if (a.negative && !b.negative) return false;  // cofinite never fits in finite
  // negative <= negative: complement inclusion flips to b.names <= a.names
  for (const auto& n : b.names) {
    if (!a.names.count(n)) return false;
  }
  return true;
}

// Semantic intersection.
inline StringSet sset_intersect(const StringSet& a, const StringSet& b) {
  StringSet out;
  if (!a.negative && !b.negative) {
    for (const auto& n : a.names) {
      if (b.names.count(n)) out.names.insert(n);
    }
    return out;
  }
  if (!a.negative) {  // positive minus b's exclusions
    for (const auto& n : a.names) {
      if (!b.names.count(n)) out.names.insert(n);
    }
    return out;
  }
  if (!b.negative) return sset_intersect(b, a);
  out.negative = true;
  out.names = a.names;
  out.names.insert(b.names.begin(), b.names.end());
  return out;
}

// True when the two sets share at least one string.
inline bool sset_intersects(const StringSet& a, const StringSet& b) {
  if (!a.negative && !b.negative) {
    for (const auto& n : a.names) {
      if (b.names.count(n)) return true;
    }
    return false;
  }
  if (!a.negative) {  // a positive, b negative
    for (const auto& n : a.names) {
      if (!b.names.count(n)) return true;
    }
    return false;
  }
  if (!b.negative) return sset_intersects(b, a);
  return true;  // two cofinite sets always intersect
}

std::string sset_to_string(const StringSet& s);

}  // namespace sandcheck
