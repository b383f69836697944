#pragma once

// Puiseux monoids described by a generating sequence (q_n).
//
// A MonoidDescriptor is either one of the builtin infinite families or an
// explicit finite list. Builtin families can carry a rational scale factor,
// in which case they describe s*M.

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "puiseux/errors.hpp"
#include "puiseux/exact_arith.hpp"
#include "puiseux/primes.hpp"

namespace puiseux {

using Index = std::size_t;

enum class Family {
  prime_reciprocal,
  grams,
  gap,
  geometric,
  power_reciprocal,
  mixed_5_2,
  custom
};

std::string to_string(Family f);
std::optional<Family> family_from_string(const std::string& name);

namespace family {

// <1/p_n>
struct PrimeReciprocal {
  friend bool operator==(const PrimeReciprocal&,
                         const PrimeReciprocal&) = default;
};
// <1/(b^n p_n)>, p_n ranging over primes coprime to b.
struct Grams {
  unsigned long base = 2;
  friend bool operator==(const Grams&, const Grams&) = default;
};
// <1/(p_n p_{n+ell})>
struct Gap {
  unsigned long ell = 1;
  friend bool operator==(const Gap&, const Gap&) = default;
};
// <q^n>, n >= 0 with the unit, n >= 1 without it.
struct Geometric {
  Rational ratio;
  bool include_unit = true;
  friend bool operator==(const Geometric&, const Geometric&) = default;
};
// <1/b^n>
struct PowerReciprocal {
  unsigned long base = 2;
  friend bool operator==(const PowerReciprocal&,
                         const PowerReciprocal&) = default;
};
// <1/(2^m p_m), 1/p_n | m <= k < n>, p_n odd primes.
struct Mixed52 {
  unsigned long k = 1;
  friend bool operator==(const Mixed52&, const Mixed52&) = default;
};
// Explicit finite list q_1, ..., q_N.
struct Custom {
  std::vector<Rational> terms;
  std::vector<std::optional<Integer>> controlling;  // derived from terms
  friend bool operator==(const Custom& a, const Custom& b) {
    return a.terms == b.terms;
  }
};

}  // namespace family

using FamilyRule =
    std::variant<family::PrimeReciprocal, family::Grams, family::Gap,
                 family::Geometric, family::PowerReciprocal, family::Mixed52,
                 family::Custom>;

class MonoidDescriptor {
 public:
  static MonoidDescriptor prime_reciprocal(
      std::vector<unsigned long> primes = {});
  static MonoidDescriptor grams(unsigned long base = 2,
                                std::vector<unsigned long> primes = {});
  static MonoidDescriptor gap(unsigned long ell,
                              std::vector<unsigned long> primes = {});
  static MonoidDescriptor geometric(const Rational& q, bool include_unit = true);
  static MonoidDescriptor power_reciprocal(unsigned long base);
  static MonoidDescriptor mixed_5_2(unsigned long k,
                                    std::vector<unsigned long> primes = {});
  static MonoidDescriptor custom(std::vector<Rational> terms);

  Family family() const;
  const FamilyRule& rule() const { return rule_; }
  /// The prime sequence of prime-indexed families.
  const std::optional<PrimeSequence>& primes() const { return primes_; }
  /// Builtin families describe scale() * M; custom lists always have scale 1.
  const Rational& scale() const { return scale_; }
  bool is_finite() const { return family() == Family::custom; }

  Index first_index() const;
  /// Last valid index for finite lists.
  std::optional<Index> last_index() const;
  bool has_index(Index n) const;

  /// Human-readable name, e.g. "grams(base=2)".
  std::string describe() const;

  friend bool operator==(const MonoidDescriptor&,
                         const MonoidDescriptor&) = default;

 private:
  MonoidDescriptor(FamilyRule rule, std::optional<PrimeSequence> primes)
      : rule_(std::move(rule)), primes_(std::move(primes)), scale_(1) {}
  friend MonoidDescriptor scale(const MonoidDescriptor&, const Rational&);

  FamilyRule rule_;
  std::optional<PrimeSequence> primes_;
  Rational scale_;
};

struct GeneratorTerm {
  Index index = 0;
  Rational value;
  /// Prime dividing d(value) and no other generator's denominator.
  std::optional<Integer> controlling_prime;
};

/// The n-th generator. Throws std::out_of_range outside the index range.
GeneratorTerm generator(const MonoidDescriptor& desc, Index n);
/// Just the value, without the controlling-prime lookup.
Rational generator_value(const MonoidDescriptor& desc, Index n);

/// Sparse nonnegative coefficients over generator indices.
using Coefficients = std::map<Index, Integer>;

/// sum of c_i * q_i. Throws std::out_of_range on an invalid index and
/// std::domain_error on a negative coefficient.
Rational combination_value(const MonoidDescriptor& desc,
                           const Coefficients& coeffs);

/// Lexicographic order on the dense coefficient vectors (index ascending).
int compare_coefficients(const Coefficients& a, const Coefficients& b);

/// Indices n with p | d(q_n).
struct IndexSet {
  enum class Kind { exact, all, unknown };
  Kind kind = Kind::exact;
  std::vector<Index> indices;  // ascending; only for exact
  std::string note;

  static IndexSet exact(std::vector<Index> idx) {
    return {Kind::exact, std::move(idx), {}};
  }
  static IndexSet all() { return {Kind::all, {}, {}}; }
  static IndexSet unknown(std::string why) {
    return {Kind::unknown, {}, std::move(why)};
  }
};

inline constexpr Index kDefaultScanBound = 100'000;

IndexSet index_set_for_prime(const MonoidDescriptor& desc, const Integer& p,
                             Index scan_bound = kDefaultScanBound);

/// The index whose controlling prime is p, if any.
std::optional<Index> index_controlled_by(const MonoidDescriptor& desc,
                                         const Integer& p);

/// True when every generator has a controlling prime.
bool is_controlled(const MonoidDescriptor& desc);

enum class Tri { yes, no, unknown };
std::string to_string(Tri t);

struct Flag {
  Tri value = Tri::unknown;
  std::string why;
};

struct ClassificationReport {
  Flag reciprocal;
  Flag weak_reciprocal;
  Flag almost_reciprocal;
  Flag strongly_bounded;
  Flag bounded;
  Flag atomic;
  Flag uad;

  /// reciprocal => weak reciprocal => strongly bounded => bounded, and
  /// reciprocal => almost reciprocal => atomic, almost reciprocal => UAD.
  bool satisfies_implication_chain() const;
};

ClassificationReport classify(const MonoidDescriptor& desc);

/// (m, desc') with desc' generating (1/m)M and every generator of desc' a
/// unit fraction. Throws UnsupportedError when numerators are unbounded.
std::pair<Integer, MonoidDescriptor> normalize_strongly_bounded(
    const MonoidDescriptor& desc);

/// Descriptor of qM. Throws std::domain_error for q == 0.
MonoidDescriptor scale(const MonoidDescriptor& desc, const Rational& q);

}  // namespace puiseux
