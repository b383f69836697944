#pragma once

// Atomic decompositions q = eta + sum zeta_i a_i with 0 <= zeta_i < d(a_i),
// membership and divisibility.

#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "puiseux/monoid.hpp"

namespace puiseux {

struct AtomicDecomposition {
  Integer eta = 0;
  Coefficients zeta;  // nonzero entries only
  Rational value;

  /// eta + sum zeta_i * q_i
  Rational evaluate(const MonoidDescriptor& desc) const;
  Integer zeta_sum() const;

  friend bool operator==(const AtomicDecomposition&,
                         const AtomicDecomposition&) = default;
};

struct SearchBounds {
  Index max_index = 50;
  /// Cap on any single coefficient in bounded searches.
  Integer max_block_coeff = 1'000'000;
  std::size_t max_nodes = 2'000'000;
};

enum class Obstruction {
  denominator_support,  // a prime of d(q) divides no generator denominator
  valuation,            // v_p(q) below every generator valuation at p
  negative_remainder,   // the forced residues already overshoot q
  numerator_semigroup,  // eta is not a sum of numerators
  exhaustive_search     // complete search over a finite list
};

std::string to_string(Obstruction o);

struct Member {
  Coefficients coefficients;  // sum c_i q_i == q
  std::optional<AtomicDecomposition> decomposition;
  std::string method;
};

/// A refutation. Obstructions are stated for `subject` in the unscaled
/// monoid: for s*M the subject is q/s.
struct NotMember {
  Obstruction kind = Obstruction::negative_remainder;
  mpq_class subject;  // signed, so that r > q in divides() is expressible
  std::optional<Integer> prime;
  long valuation_bound = 0;    // valuation: v_p(subject) < valuation_bound
  Coefficients residues;       // negative_remainder: least forced coefficients
  mpq_class remainder;         // subject - sum residues * q_i
  std::string detail;
};

struct Unknown {
  SearchBounds bounds;
  std::string detail;
};

using MembershipVerdict = std::variant<Member, NotMember, Unknown>;

/// Re-checks a refutation by pure arithmetic, independently of the path that
/// produced it.
bool verify_obstruction(const MonoidDescriptor& desc, const NotMember& nm,
                        const SearchBounds& bounds = {});

/// Generators with pairwise coprime denominators (almost reciprocal).
bool has_closed_form_decomposition(const MonoidDescriptor& desc);

using DecomposeResult = std::variant<AtomicDecomposition, NotMember>;

/// The unique atomic decomposition of q. Throws UnsupportedError unless
/// has_closed_form_decomposition(desc).
DecomposeResult atomic_decompose(const MonoidDescriptor& desc,
                                 const Rational& q);

MembershipVerdict member(const MonoidDescriptor& desc, const Rational& q,
                         const SearchBounds& bounds = {});

/// Does r divide q, i.e. is q - r in M?
MembershipVerdict divides(const MonoidDescriptor& desc, const Rational& r,
                          const Rational& q, const SearchBounds& bounds = {});

struct DecompositionList {
  std::vector<AtomicDecomposition> items;
  /// All decompositions of q, not only those inside the index bound.
  bool complete = false;
  /// The search inside the index bound finished.
  bool exhaustive = true;
};

/// Every atomic decomposition of q supported on indices <= max_index, sorted
/// by (eta, zeta_first, zeta_first+1, ...).
DecompositionList enumerate_decompositions(const MonoidDescriptor& desc,
                                           const Rational& q, Index max_index,
                                           std::size_t max_nodes = 2'000'000);

}  // namespace puiseux
