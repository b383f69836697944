#include "puiseux/factorization.hpp"

#include <algorithm>
#include <sstream>

#include "search.hpp"

namespace puiseux {

namespace {

MonoidDescriptor unscaled(const MonoidDescriptor& desc) {
  if (desc.scale() == Rational(1)) return desc;
  return scale(desc, Rational(1) / desc.scale());
}

std::vector<Factorization> to_factorizations(detail::SearchOutcome& out) {
  std::vector<Factorization> items;
  for (auto& s : out.solutions)
    items.push_back(Factorization::from(std::move(s.coefficients)));
  std::sort(items.begin(), items.end());
  items.erase(std::unique(items.begin(), items.end()), items.end());
  return items;
}

std::vector<detail::SearchItem> items_for(const MonoidDescriptor& desc,
                                          std::vector<Index> indices,
                                          const Rational& limit) {
  std::sort(indices.rbegin(), indices.rend());
  std::vector<detail::SearchItem> items;
  for (Index n : indices) {
    Rational g = generator_value(desc, n);
    if (g <= limit) items.push_back({n, g, std::nullopt});
  }
  return items;
}

std::vector<Index> index_range(const MonoidDescriptor& desc, Index max_index) {
  std::vector<Index> out;
  Index last = desc.last_index() ? std::min(*desc.last_index(), max_index)
                                 : max_index;
  for (Index n = desc.first_index(); n <= last; ++n) out.push_back(n);
  return out;
}

CompletenessInfo budget_note(std::size_t max_nodes) {
  return {Completeness::unknown, std::nullopt, std::nullopt,
          "node budget " + std::to_string(max_nodes) + " spent"};
}

bool reciprocal_with_uad(const MonoidDescriptor& desc) {
  return has_closed_form_decomposition(desc) &&
         classify(desc).reciprocal.value == Tri::yes;
}

AtomCertificate certified_atom(Index n, std::string reason,
                               const SearchBounds& b) {
  return {n, AtomCertificate::Verdict::atom, std::nullopt, std::move(reason), b};
}

// A sum of generators smaller than a_n has p-adic valuation at least the
// least valuation among them, so v_p(a_n) below that bound rules out a
// factorization of length >= 2.
std::optional<AtomCertificate> valuation_certificate(
    const MonoidDescriptor& desc, Index n, const SearchBounds& b) {
  Rational g = generator_value(desc, n);
  if (auto* geo = std::get_if<family::Geometric>(&desc.rule());
      geo && geo->ratio.num() != 1) {
    const Rational& q = geo->ratio;
    bool shrinking = q < Rational(1);
    Integer p = prime_divisors(shrinking ? q.num() : q.den()).front();
    std::ostringstream os;
    if (shrinking)
      os << "every smaller generator is q^k with k > " << n << ", and v_" << p
         << "(q^k) > v_" << p << "(q^" << n << ")";
    else
      os << "every smaller generator is q^k with k < " << n << ", and v_" << p
         << "(q^k) > v_" << p << "(q^" << n << ")";
    return certified_atom(n, os.str(), b);
  }
  for (const auto& p : prime_divisors(g.den())) {
    IndexSet s = index_set_for_prime(desc, p);
    if (s.kind != IndexSet::Kind::exact) continue;
    long least = 0;
    for (Index k : s.indices) {
      if (k == n) continue;
      Rational gk = generator_value(desc, k);
      if (gk < g) least = std::min(least, p_adic_valuation(gk, p));
    }
    long own = p_adic_valuation(g, p);
    if (own < least) {
      std::ostringstream os;
      os << "v_" << p << "(" << g << ") = " << own
         << " while every smaller generator has v_" << p << " >= " << least;
      return certified_atom(n, os.str(), b);
    }
  }
  return std::nullopt;
}

}  // namespace

Factorization Factorization::from(Coefficients exponents) {
  Factorization f;
  for (auto it = exponents.begin(); it != exponents.end();)
    it = sgn(it->second) == 0 ? exponents.erase(it) : std::next(it);
  for (const auto& [i, c] : exponents) f.length += c;
  f.exponents = std::move(exponents);
  return f;
}

Rational Factorization::value(const MonoidDescriptor& desc) const {
  return combination_value(desc, exponents);
}

bool operator<(const Factorization& a, const Factorization& b) {
  if (a.length != b.length) return a.length < b.length;
  return compare_coefficients(a.exponents, b.exponents) < 0;
}

std::string to_string(Completeness c) {
  switch (c) {
    case Completeness::complete: return "complete";
    case Completeness::complete_up_to_bounds: return "complete_up_to_bounds";
    case Completeness::unknown: return "unknown";
  }
  return "?";
}

std::string to_string(AtomCertificate::Verdict v) {
  switch (v) {
    case AtomCertificate::Verdict::atom: return "atom";
    case AtomCertificate::Verdict::not_atom: return "not_atom";
    case AtomCertificate::Verdict::unknown: return "unknown";
  }
  return "?";
}

std::vector<Index> relevant_indices(const MonoidDescriptor& desc,
                                    const Rational& q, unsigned long length) {
  if (!is_controlled(desc))
    throw UnsupportedError(desc.describe() +
                           " has generators without a controlling prime");
  std::set<Index> out;
  for (const auto& p : prime_divisors(q.den()))
    if (auto i = index_controlled_by(desc, p)) out.insert(*i);
  auto sieve = PrimeTable::instance().covering(length);
  for (unsigned long p : sieve->primes) {
    if (p > length) break;
    if (auto i = index_controlled_by(desc, Integer(p))) out.insert(*i);
  }
  return {out.begin(), out.end()};
}

FactorizationSet factorizations_of_length(const MonoidDescriptor& desc,
                                          const Rational& q,
                                          unsigned long length,
                                          std::size_t max_nodes) {
  if (length == 0) throw std::invalid_argument("length must be >= 1");
  std::vector<Index> idx = relevant_indices(desc, q, length);
  FactorizationSet out;
  out.completeness = {Completeness::complete, length, std::nullopt,
                      "support limited to indices with controlling prime "
                      "dividing d(q) or at most the length"};
  if (q.is_zero()) return out;
  detail::SearchSpec spec;
  spec.items = items_for(desc, idx, q);
  spec.target = q;
  spec.length_mode = detail::LengthMode::exact;
  spec.length = length;
  spec.max_nodes = max_nodes;
  detail::SearchOutcome res = detail::search(spec);
  out.items = to_factorizations(res);
  if (!res.complete()) out.completeness = budget_note(max_nodes);
  return out;
}

FactorizationSet enumerate_factorizations(const MonoidDescriptor& desc,
                                          const Rational& q,
                                          unsigned long max_length,
                                          const SearchBounds& bounds) {
  if (max_length == 0 || bounds.max_index == 0 || bounds.max_nodes == 0)
    throw std::invalid_argument("bounds must be positive");
  FactorizationSet out;
  if (q.is_zero()) {
    out.items.push_back(Factorization{});
    out.completeness = {Completeness::complete, std::nullopt, std::nullopt,
                        "only the empty factorization"};
    return out;
  }

  if (is_controlled(desc)) {
    if (reciprocal_with_uad(desc)) {
      DecomposeResult d = atomic_decompose(desc, q);
      if (std::holds_alternative<NotMember>(d)) {
        out.completeness = {Completeness::complete, std::nullopt, std::nullopt,
                            "not in the monoid"};
        return out;
      }
      const auto& dec = std::get<AtomicDecomposition>(d);
      if (dec.eta == 0) {
        out.items.push_back(Factorization::from(dec.zeta));
        out.completeness = {Completeness::complete, std::nullopt, std::nullopt,
                            "reciprocal with unique atomic decomposition and "
                            "1 does not divide q"};
        return out;
      }
    }
    out.completeness = {Completeness::complete_up_to_bounds, max_length,
                        std::nullopt, "every length up to the bound searched"};
    for (unsigned long l = 1; l <= max_length; ++l) {
      FactorizationSet part =
          factorizations_of_length(desc, q, l, bounds.max_nodes);
      if (part.completeness.kind == Completeness::unknown)
        out.completeness = part.completeness;
      for (auto& f : part.items) out.items.push_back(std::move(f));
    }
    std::sort(out.items.begin(), out.items.end());
    return out;
  }

  // Generators that are atoms, within the index bound.
  std::vector<Index> atoms;
  bool uncertain = false;
  for (Index n : index_range(desc, bounds.max_index)) {
    if (generator_value(desc, n) > q) continue;
    AtomCertificate c = is_atom(desc, n, bounds);
    if (c.verdict == AtomCertificate::Verdict::atom) atoms.push_back(n);
    if (c.verdict == AtomCertificate::Verdict::unknown) uncertain = true;
  }
  detail::SearchSpec spec;
  spec.items = items_for(desc, atoms, q);
  spec.target = q;
  spec.length_mode = detail::LengthMode::at_most;
  spec.length = max_length;
  spec.max_nodes = bounds.max_nodes;
  detail::SearchOutcome res = detail::search(spec);
  out.items = to_factorizations(res);
  if (!res.complete()) {
    out.completeness = budget_note(bounds.max_nodes);
  } else if (uncertain) {
    out.completeness = {Completeness::unknown, max_length, bounds.max_index,
                        "atom status of some generator undecided"};
  } else {
    out.completeness = {Completeness::complete_up_to_bounds, max_length,
                        bounds.max_index, "bounded search over atoms"};
  }
  return out;
}

LengthSet length_set(const MonoidDescriptor& desc, const Rational& q,
                     unsigned long up_to, std::size_t max_nodes) {
  if (!is_controlled(desc))
    throw UnsupportedError(desc.describe() +
                           " has generators without a controlling prime");
  LengthSet out;
  out.completeness = {Completeness::complete_up_to_bounds, up_to, std::nullopt,
                      "every length up to the bound searched"};
  for (unsigned long l = 1; l <= up_to; ++l) {
    FactorizationSet part = factorizations_of_length(desc, q, l, max_nodes);
    if (part.completeness.kind == Completeness::unknown)
      out.completeness = part.completeness;
    if (!part.items.empty()) {
      out.lengths.insert(Integer(l));
      out.witnesses.push_back(part.items.front());
    }
  }
  return out;
}

AtomCertificate is_atom(const MonoidDescriptor& desc, Index n,
                        const SearchBounds& bounds) {
  Rational g = generator_value(desc, n);  // validates n
  if (desc.scale() != Rational(1)) {
    AtomCertificate c = is_atom(unscaled(desc), n, bounds);
    c.reason = "unscaled: " + c.reason;
    return c;
  }
  if (auto c = valuation_certificate(desc, n, bounds)) return *c;

  std::vector<Index> candidates;
  bool finite = desc.last_index().has_value();
  Index top = finite ? *desc.last_index() : bounds.max_index;
  for (Index k = desc.first_index(); k <= top; ++k)
    if (k != n && generator_value(desc, k) < g) candidates.push_back(k);

  detail::SearchSpec spec;
  spec.items = items_for(desc, candidates, g);
  spec.target = g;
  spec.max_nodes = bounds.max_nodes;
  spec.max_solutions = 1;
  if (!finite) spec.soft_cap = bounds.max_block_coeff;
  detail::SearchOutcome res = detail::search(spec);
  if (!res.solutions.empty()) {
    Factorization w = Factorization::from(res.solutions.front().coefficients);
    if (w.value(desc) != g || w.length < 2)
      throw std::logic_error("invalid non-atom witness");
    return {n, AtomCertificate::Verdict::not_atom, std::move(w),
            "sum of smaller generators", bounds};
  }
  if (finite && res.complete())
    return certified_atom(n, "no combination of smaller generators", bounds);
  std::ostringstream os;
  os << "no factorization found with indices <= " << bounds.max_index;
  return {n, AtomCertificate::Verdict::unknown, std::nullopt, os.str(), bounds};
}

}  // namespace puiseux
