#pragma once

// Factorizations, sets of lengths and atom certificates.

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "puiseux/decomposition.hpp"
#include "puiseux/monoid.hpp"

namespace puiseux {

struct Factorization {
  Coefficients exponents;  // atom index -> positive multiplicity
  Integer length = 0;

  static Factorization from(Coefficients exponents);
  Rational value(const MonoidDescriptor& desc) const;

  friend bool operator==(const Factorization&, const Factorization&) = default;
};

/// (length, exponent vector) order.
bool operator<(const Factorization& a, const Factorization& b);

enum class Completeness { complete, complete_up_to_bounds, unknown };
std::string to_string(Completeness c);

struct CompletenessInfo {
  Completeness kind = Completeness::unknown;
  std::optional<unsigned long> max_length;
  std::optional<Index> max_index;
  std::string note;
};

struct FactorizationSet {
  std::vector<Factorization> items;  // sorted, no duplicates
  CompletenessInfo completeness;
};

struct LengthSet {
  std::set<Integer> lengths;
  CompletenessInfo completeness;
  std::vector<Factorization> witnesses;  // one per length
};

/// Indices that can occur in a factorization of q with at most `length`
/// atoms: controlling prime divides d(q) or is <= length. Throws
/// UnsupportedError unless is_controlled(desc).
std::vector<Index> relevant_indices(const MonoidDescriptor& desc,
                                    const Rational& q, unsigned long length);

/// Z(q, length), complete for controlled families.
FactorizationSet factorizations_of_length(const MonoidDescriptor& desc,
                                          const Rational& q,
                                          unsigned long length,
                                          std::size_t max_nodes = 5'000'000);

FactorizationSet enumerate_factorizations(const MonoidDescriptor& desc,
                                          const Rational& q,
                                          unsigned long max_length,
                                          const SearchBounds& bounds = {});

/// L(q) intersected with [1, up_to].
LengthSet length_set(const MonoidDescriptor& desc, const Rational& q,
                     unsigned long up_to, std::size_t max_nodes = 5'000'000);

struct AtomCertificate {
  enum class Verdict { atom, not_atom, unknown };
  Index index = 0;
  Verdict verdict = Verdict::unknown;
  std::optional<Factorization> witness;  // not_atom only
  std::string reason;
  SearchBounds bounds;
};

std::string to_string(AtomCertificate::Verdict v);

AtomCertificate is_atom(const MonoidDescriptor& desc, Index n,
                        const SearchBounds& bounds = {});

}  // namespace puiseux
