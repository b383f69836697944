#include "puiseux/chains.hpp"

#include <sstream>

namespace puiseux {

ChainWitness grams_chain(const MonoidDescriptor& desc, std::size_t n_steps) {
  const auto* g = std::get_if<family::Grams>(&desc.rule());
  if (!g || desc.scale() != Rational(1))
    throw UnsupportedError("grams_chain needs a grams family, got " +
                           desc.describe());
  const Integer b(g->base);
  ChainWitness w;
  for (std::size_t k = 1; k <= n_steps + 1; ++k)
    w.elements.push_back(Rational(Integer(1), pow(b, k)));
  // 1/b^k - 1/b^(k+1) = (b-1) p_{k+1} * 1/(b^(k+1) p_{k+1})
  for (std::size_t k = 1; k <= n_steps; ++k)
    w.steps.push_back({{{k + 1, (b - 1) * desc.primes()->at(k + 1)}}});
  return w;
}

ChainWitness gap_chain(const MonoidDescriptor& desc, std::size_t n_steps) {
  const auto* g = std::get_if<family::Gap>(&desc.rule());
  if (!g || desc.scale() != Rational(1))
    throw UnsupportedError("gap_chain needs a gap family, got " +
                           desc.describe());
  const auto& seq = *desc.primes();
  const Index l = g->ell;
  ChainWitness w;
  for (std::size_t n = 1; n <= n_steps + 1; ++n)
    w.elements.push_back(Rational(Integer(1), Integer(seq.at(l * n))));
  // 1/p_ln - 1/p_l(n+1) = (p_l(n+1) - p_ln) * 1/(p_ln p_l(n+1))
  for (std::size_t n = 1; n <= n_steps; ++n) {
    Integer coeff = Integer(seq.at(l * (n + 1))) - seq.at(l * n);
    w.steps.push_back({{{l * n, coeff}}});
  }
  return w;
}

ChainCheck verify_chain(const MonoidDescriptor& desc,
                        const ChainWitness& witness) {
  ChainCheck out;
  if (witness.elements.empty()) {
    out.ok = witness.steps.empty();
    return out;
  }
  if (witness.steps.size() + 1 != witness.elements.size()) {
    out.ok = false;
    out.steps.push_back({0, false, "step count does not match element count"});
    return out;
  }
  for (std::size_t k = 0; k < witness.steps.size(); ++k) {
    StepCheck sc{k + 1, true, "ok"};
    SignedDifference diff = subtract(witness.elements[k], witness.elements[k + 1]);
    if (diff.negative() || sgn(diff.signed_value()) == 0) {
      sc.ok = false;
      sc.message = "difference is not positive";
    } else {
      try {
        Rational sum = combination_value(desc, witness.steps[k].certificate);
        if (sum != diff.accept()) {
          std::ostringstream os;
          os << "certificate sums to " << sum << ", difference is "
             << diff.accept();
          sc.ok = false;
          sc.message = os.str();
        }
      } catch (const std::exception& e) {
        sc.ok = false;
        sc.message = e.what();
      }
    }
    out.ok = out.ok && sc.ok;
    out.steps.push_back(std::move(sc));
  }
  return out;
}

DescentMeasure descent_measure(const MonoidDescriptor& desc, const Rational& q) {
  DecomposeResult r = atomic_decompose(desc, q);
  if (const auto* nm = std::get_if<NotMember>(&r))
    throw std::domain_error(q.to_string() + " is not in " + desc.describe() +
                            ": " + nm->detail);
  const auto& d = std::get<AtomicDecomposition>(r);
  return {d.eta, d.zeta_sum()};
}

}  // namespace puiseux
