#pragma once

// Divisibility chains q_1, q_2, ... with q_{k+1} strictly dividing q_k, each
// step carrying the explicit combination of generators equal to the
// difference.

#include <compare>
#include <string>
#include <vector>

#include "puiseux/decomposition.hpp"
#include "puiseux/monoid.hpp"

namespace puiseux {

struct ChainStep {
  Coefficients certificate;  // sum = elements[k] - elements[k+1]
};

struct ChainWitness {
  std::vector<Rational> elements;
  std::vector<ChainStep> steps;  // elements.size() - 1 entries
};

inline constexpr std::size_t kDefaultChainSteps = 64;

/// 1/b, 1/b^2, ..., 1/b^(n_steps+1) in grams(b). Throws UnsupportedError on
/// other families.
ChainWitness grams_chain(const MonoidDescriptor& desc, std::size_t n_steps);

/// 1/p_l, 1/p_2l, ..., in gap(l).
ChainWitness gap_chain(const MonoidDescriptor& desc, std::size_t n_steps);

struct StepCheck {
  std::size_t step = 0;
  bool ok = false;
  std::string message;
};

struct ChainCheck {
  bool ok = true;
  std::vector<StepCheck> steps;
};

ChainCheck verify_chain(const MonoidDescriptor& desc,
                        const ChainWitness& witness);

struct DescentMeasure {
  Integer eta = 0;
  Integer zeta_sum = 0;

  friend bool operator==(const DescentMeasure& a, const DescentMeasure& b) {
    return a.eta == b.eta && a.zeta_sum == b.zeta_sum;
  }
  /// Lexicographic on (eta, zeta_sum).
  friend std::strong_ordering operator<=>(const DescentMeasure& a,
                                          const DescentMeasure& b) {
    int c = cmp(a.eta, b.eta);
    if (c == 0) c = cmp(a.zeta_sum, b.zeta_sum);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater
                          : std::strong_ordering::equal);
  }
};

/// (eta(q), sum zeta_i(q)). Throws UnsupportedError without a closed-form
/// decomposition and std::domain_error when q is not in the monoid.
DescentMeasure descent_measure(const MonoidDescriptor& desc, const Rational& q);

}  // namespace puiseux
