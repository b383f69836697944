#pragma once

// Exhaustive search for nonnegative integer combinations of a finite list of
// rationals hitting an exact target. Internal to the library.
//
// Items are processed in the given order. Before position k is decided, the
// remainder must be a combination of items k.. (plus an optional integer
// tail), so for every tracked prime p its valuation is at least the suffix
// minimum of the item valuations. That turns each coefficient into a fixed
// residue class modulo a prime power, which keeps the search linear on the
// families with controlling primes.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "puiseux/monoid.hpp"

namespace puiseux::detail {

struct SearchItem {
  Index index = 0;
  Rational value;
  std::optional<Integer> hard_cap;  // part of the problem, not a truncation
};

enum class LengthMode { none, exact, at_most };

struct SearchSpec {
  std::vector<SearchItem> items;
  Rational target;
  bool integer_tail = false;  // allow a free nonnegative integer leftover
  std::optional<Integer> soft_cap;
  LengthMode length_mode = LengthMode::none;
  unsigned long length = 0;
  std::size_t max_nodes = 2'000'000;
  std::size_t max_solutions = SIZE_MAX;
};

struct SearchSolution {
  Coefficients coefficients;
  Integer tail;
};

struct SearchOutcome {
  std::vector<SearchSolution> solutions;
  bool budget_exhausted = false;
  bool soft_cap_hit = false;
  bool stopped_early = false;
  std::size_t nodes = 0;

  /// Every solution of the stated problem was found.
  bool complete() const {
    return !budget_exhausted && !soft_cap_hit && !stopped_early;
  }
};

SearchOutcome search(const SearchSpec& spec);

/// r reduced modulo m; d(r) must be coprime to m.
Integer residue_of(const Rational& r, const Integer& modulus);

}  // namespace puiseux::detail
