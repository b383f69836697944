#include "puiseux/decomposition.hpp"

#include <algorithm>
#include <queue>
#include <set>
#include <sstream>

#include "search.hpp"

namespace puiseux {

namespace {

mpq_class signed_sum(const MonoidDescriptor& desc, const Coefficients& c) {
  mpq_class total = 0;
  for (const auto& [i, a] : c)
    total += mpq_class(a) * generator_value(desc, i).value();
  return total;
}

bool p_integral(const mpq_class& q, const Integer& p) {
  return !mpz_divisible_p(q.get_den_mpz_t(), p.get_mpz_t());
}

MonoidDescriptor unscaled(const MonoidDescriptor& desc) {
  if (desc.scale() == Rational(1)) return desc;
  return scale(desc, Rational(1) / desc.scale());
}

std::vector<Integer> numerators(const MonoidDescriptor& desc) {
  std::vector<Integer> out;
  const auto& c = std::get<family::Custom>(desc.rule());
  for (const auto& t : c.terms) out.push_back(t.num());
  return out;
}

// Writes target as sum t_i * gens[i] using shortest paths over residues
// modulo the smallest generator.
std::optional<std::vector<Integer>> represent(const Integer& target,
                                              const std::vector<Integer>& gens) {
  std::vector<Integer> t(gens.size(), Integer(0));
  if (target == 0) return t;
  std::size_t small = static_cast<std::size_t>(
      std::min_element(gens.begin(), gens.end()) - gens.begin());
  const Integer& m = gens[small];
  if (m == 1) {
    t[small] = target;
    return t;
  }
  if (m > 5'000'000)
    throw UnsupportedError("smallest numerator " + m.get_str() +
                           " too large for the numerator semigroup table");
  const std::size_t mod = m.get_ui();
  std::vector<std::optional<Integer>> dist(mod);
  std::vector<std::pair<std::size_t, std::size_t>> pred(mod);  // (residue, gen)
  using Entry = std::pair<Integer, std::size_t>;
  auto later = [](const Entry& a, const Entry& b) { return a.first > b.first; };
  std::priority_queue<Entry, std::vector<Entry>, decltype(later)> pq(later);
  dist[0] = Integer(0);
  pq.push({Integer(0), 0});
  while (!pq.empty()) {
    auto [d, r] = pq.top();
    pq.pop();
    if (d != *dist[r]) continue;
    for (std::size_t j = 0; j < gens.size(); ++j) {
      if (j == small) continue;
      Integer nd = d + gens[j];
      std::size_t nr = mpz_fdiv_ui(nd.get_mpz_t(), mod);
      if (!dist[nr] || nd < *dist[nr]) {
        dist[nr] = nd;
        pred[nr] = {r, j};
        pq.push({nd, nr});
      }
    }
  }
  std::size_t r = mpz_fdiv_ui(target.get_mpz_t(), mod);
  if (!dist[r] || *dist[r] > target) return std::nullopt;
  t[small] = (target - *dist[r]) / m;
  while (r != 0) {
    auto [prev, j] = pred[r];
    t[j] += 1;
    r = prev;
  }
  return t;
}

// Plain reachability table, used only to re-check a refutation.
bool representable_by_table(const Integer& target,
                            const std::vector<Integer>& gens) {
  if (target > 2'000'000) return represent(target, gens).has_value();
  std::size_t n = target.get_ui();
  std::vector<char> ok(n + 1, 0);
  ok[0] = 1;
  for (std::size_t v = 1; v <= n; ++v)
    for (const auto& g : gens)
      if (g <= v && ok[v - g.get_ui()]) {
        ok[v] = 1;
        break;
      }
  return ok[n];
}

// Product of p^v_p(d_i) over the primes of d_i that divide no other
// generator denominator. Any representation has its i-th coefficient fixed
// modulo this number.
Integer private_modulus(const MonoidDescriptor& desc, Index i,
                        std::vector<Integer>* primes_out = nullptr) {
  Rational g = generator_value(desc, i);
  Integer m = 1;
  for (const auto& p : prime_divisors(g.den())) {
    IndexSet s = index_set_for_prime(desc, p);
    if (s.kind == IndexSet::Kind::exact && s.indices.size() == 1 &&
        s.indices[0] == i) {
      m *= pow(p, integer_valuation(g.den(), p));
      if (primes_out) primes_out->push_back(p);
    }
  }
  return m;
}

bool residues_forced(const MonoidDescriptor& desc, const mpq_class& q,
                     const Coefficients& residues, bool full_denominator) {
  for (const auto& [i, z] : residues) {
    if (!desc.has_index(i) || sgn(z) < 0) return false;
    std::vector<Integer> ps;
    Integer m = private_modulus(desc, i, &ps);
    if (m == 1 || z >= m) return false;
    if (full_denominator && m != generator_value(desc, i).den()) return false;
    mpq_class diff = q - mpq_class(z) * generator_value(desc, i).value();
    for (const auto& p : ps)
      if (!p_integral(diff, p)) return false;
  }
  return true;
}

NotMember make_obstruction(Obstruction kind, const Rational& q,
                           std::string detail) {
  NotMember nm;
  nm.kind = kind;
  nm.subject = q.value();
  nm.remainder = 0;
  nm.detail = std::move(detail);
  return nm;
}

NotMember denominator_support(const Rational& q, const Integer& p) {
  NotMember nm = make_obstruction(
      Obstruction::denominator_support, q,
      "prime " + p.get_str() + " divides d(" + q.to_string() +
          ") but no generator denominator");
  nm.prime = p;
  return nm;
}

NotMember valuation_obstruction(const Rational& q, const Integer& p,
                                long bound) {
  std::ostringstream os;
  os << "v_" << p << "(" << q << ") = " << p_adic_valuation(q, p)
     << " < " << bound << ", the least valuation a sum of generators can have";
  NotMember nm = make_obstruction(Obstruction::valuation, q, os.str());
  nm.prime = p;
  nm.valuation_bound = bound;
  return nm;
}

NotMember negative_remainder(const MonoidDescriptor& desc, const Rational& q,
                             Coefficients residues) {
  NotMember nm = make_obstruction(Obstruction::negative_remainder, q, "");
  nm.remainder = q.value() - signed_sum(desc, residues);
  std::ostringstream os;
  os << "forced residues leave " << q << " - sum = " << nm.remainder << " < 0";
  nm.detail = os.str();
  nm.residues = std::move(residues);
  return nm;
}

// Least zeta in [0, m) with q - zeta*g integral at every prime of m.
// Needs g = c/d with m | d, gcd(m, d/m) = 1 and q*m integral at those primes.
Integer forced_residue(const Rational& q, const Rational& g, const Integer& m) {
  Rational qm = q * Rational(m);
  Rational gm = g * Rational(m);
  Integer inv = *mod_inverse(detail::residue_of(gm, m), m);
  return mod_floor(detail::residue_of(qm, m) * inv, m);
}

Member checked_member(const MonoidDescriptor& desc, const Rational& q,
                      Coefficients coeffs, std::string method) {
  for (auto it = coeffs.begin(); it != coeffs.end();)
    it = sgn(it->second) == 0 ? coeffs.erase(it) : std::next(it);
  if (combination_value(desc, coeffs) != q)
    throw std::logic_error("membership certificate does not evaluate to " +
                           q.to_string());
  return Member{std::move(coeffs), std::nullopt, std::move(method)};
}

MembershipVerdict uad_member(const MonoidDescriptor& desc, const Rational& q) {
  DecomposeResult r = atomic_decompose(desc, q);
  if (auto* nm = std::get_if<NotMember>(&r)) return *nm;
  const auto& dec = std::get<AtomicDecomposition>(r);
  Coefficients coeffs = dec.zeta;
  if (dec.eta > 0) {
    // eta = sum t_i c_i, and d_i * t_i copies of q_i add up to t_i c_i.
    if (desc.family() == Family::custom) {
      auto t = *represent(dec.eta, numerators(desc));
      for (std::size_t i = 0; i < t.size(); ++i)
        if (t[i] > 0) coeffs[i + 1] += t[i] * generator_value(desc, i + 1).den();
    } else {
      Index f = desc.first_index();
      coeffs[f] += dec.eta * generator_value(desc, f).den();
    }
  }
  Member m = checked_member(desc, q, std::move(coeffs),
                            "unique atomic decomposition");
  m.decomposition = dec;
  return m;
}

// Generators 1/(D_n p_n) with p_n controlling: grams(b) and mixed_5_2(k).
// Residues at the controlling primes are forced; what is left must lie in
// <1/D_n * ...> = Z[1/b] (grams) or (1/2^k)N_0 (mixed).
MembershipVerdict residue_member(const MonoidDescriptor& desc,
                                 const Rational& q, const SearchBounds& bounds) {
  const auto& seq = *desc.primes();
  const auto* grams = std::get_if<family::Grams>(&desc.rule());
  const auto* mixed = std::get_if<family::Mixed52>(&desc.rule());
  Coefficients zeta;
  for (const auto& p : prime_divisors(q.den())) {
    if (grams && Integer(grams->base) % p == 0) continue;
    if (mixed && p == 2) {
      long bound = -static_cast<long>(mixed->k);
      if (p_adic_valuation(q, p) < bound) return valuation_obstruction(q, p, bound);
      continue;
    }
    IndexSet s = index_set_for_prime(desc, p);
    if (s.kind == IndexSet::Kind::unknown) return Unknown{bounds, s.note};
    if (s.indices.empty()) return denominator_support(q, p);
    if (p_adic_valuation(q, p) < -1) return valuation_obstruction(q, p, -1);
    Index i = s.indices.front();
    Integer z = forced_residue(q, generator_value(desc, i), p);
    if (z > 0) zeta[i] = z;
  }
  mpq_class rem = q.value() - signed_sum(desc, zeta);
  if (sgn(rem) < 0) return negative_remainder(desc, q, std::move(zeta));
  Rational r(Integer(rem.get_num()), Integer(rem.get_den()));
  Coefficients coeffs = zeta;
  if (!r.is_zero()) {
    // r = a / B^j with B = b (grams) or 2 (mixed); p_j * q_j = 1/B^j.
    Integer base = grams ? Integer(grams->base) : Integer(2);
    unsigned long j = 0;
    while (!(r * Rational(pow(base, j))).is_integer()) ++j;
    Integer a = (r * Rational(pow(base, j))).num();
    if (j >= 1) {
      coeffs[j] += a * seq.at(j);
    } else if (grams) {
      coeffs[1] += a * base * seq.at(1);
    } else {
      coeffs[mixed->k + 1] += a * seq.at(mixed->k + 1);
    }
  }
  return checked_member(desc, q, std::move(coeffs),
                        "residues at controlling primes plus remainder in " +
                            std::string(grams ? "Z[1/b]" : "(1/2^k)N0"));
}

// <1/b^n> = Z[1/b] intersected with the nonnegative rationals.
MembershipVerdict power_member(const MonoidDescriptor& desc, const Rational& q,
                               const Integer& base) {
  for (const auto& p : prime_divisors(q.den()))
    if (base % p != 0) return denominator_support(q, p);
  unsigned long j = 0;
  while (!(q * Rational(pow(base, j))).is_integer()) ++j;
  Integer a = (q * Rational(pow(base, j))).num();
  Coefficients c;
  if (j >= 1)
    c[j] = a;
  else if (desc.first_index() == 0)
    c[0] = a;
  else
    c[1] = a * base;
  return checked_member(desc, q, std::move(c), "remainder in Z[1/b]");
}

std::vector<detail::SearchItem> descending_items(const MonoidDescriptor& desc,
                                                 Index max_index,
                                                 const Rational& limit) {
  std::vector<detail::SearchItem> items;
  Index last = desc.last_index() ? std::min(*desc.last_index(), max_index)
                                 : max_index;
  for (Index n = last + 1; n-- > desc.first_index();) {
    Rational g = generator_value(desc, n);
    if (g <= limit) items.push_back({n, g, std::nullopt});
  }
  return items;
}

MembershipVerdict generic_member(const MonoidDescriptor& desc,
                                 const Rational& q, const SearchBounds& bounds) {
  for (const auto& p : prime_divisors(q.den())) {
    IndexSet s = index_set_for_prime(desc, p);
    if (s.kind != IndexSet::Kind::exact) continue;
    if (s.indices.empty()) return denominator_support(q, p);
    long bound = 0;
    for (Index i : s.indices)
      bound = std::min(bound, p_adic_valuation(generator_value(desc, i), p));
    if (p_adic_valuation(q, p) < bound) return valuation_obstruction(q, p, bound);
  }
  detail::SearchSpec spec;
  spec.items = descending_items(desc, bounds.max_index, q);
  spec.target = q;
  spec.soft_cap = bounds.max_block_coeff;
  spec.max_nodes = bounds.max_nodes;
  spec.max_solutions = 1;
  detail::SearchOutcome out = detail::search(spec);
  if (!out.solutions.empty())
    return checked_member(desc, q, out.solutions.front().coefficients,
                          "bounded search");
  bool covers = desc.last_index() && bounds.max_index >= *desc.last_index();
  if (covers && !out.budget_exhausted && !out.soft_cap_hit)
    return make_obstruction(Obstruction::exhaustive_search, q,
                            "no combination of the listed generators equals " +
                                q.to_string());
  std::ostringstream os;
  os << "no combination found with indices <= " << bounds.max_index
     << ", coefficients <= " << bounds.max_block_coeff;
  if (out.budget_exhausted) os << " (node budget " << bounds.max_nodes << " spent)";
  return Unknown{bounds, os.str()};
}

}  // namespace

std::string to_string(Obstruction o) {
  switch (o) {
    case Obstruction::denominator_support: return "denominator_support";
    case Obstruction::valuation: return "valuation";
    case Obstruction::negative_remainder: return "negative_remainder";
    case Obstruction::numerator_semigroup: return "numerator_semigroup";
    case Obstruction::exhaustive_search: return "exhaustive_search";
  }
  return "?";
}

Rational AtomicDecomposition::evaluate(const MonoidDescriptor& desc) const {
  return Rational(eta) + combination_value(desc, zeta);
}

Integer AtomicDecomposition::zeta_sum() const {
  Integer s = 0;
  for (const auto& [i, z] : zeta) s += z;
  return s;
}

bool has_closed_form_decomposition(const MonoidDescriptor& desc) {
  if (desc.scale() != Rational(1)) return false;
  switch (desc.family()) {
    case Family::prime_reciprocal: return true;
    case Family::mixed_5_2:
      return std::get<family::Mixed52>(desc.rule()).k == 1;
    case Family::custom: {
      const auto& ts = std::get<family::Custom>(desc.rule()).terms;
      for (std::size_t i = 0; i < ts.size(); ++i)
        for (std::size_t j = i + 1; j < ts.size(); ++j)
          if (gcd(ts[i].den(), ts[j].den()) != 1) return false;
      return true;
    }
    default: return false;
  }
}

DecomposeResult atomic_decompose(const MonoidDescriptor& desc,
                                 const Rational& q) {
  if (!has_closed_form_decomposition(desc))
    throw UnsupportedError(desc.describe() +
                           " does not have pairwise coprime denominators");
  Coefficients zeta;
  for (const auto& p : prime_divisors(q.den())) {
    IndexSet s = index_set_for_prime(desc, p);
    if (s.kind == IndexSet::Kind::unknown) throw UnsupportedError(s.note);
    if (s.indices.empty()) return denominator_support(q, p);
    Index i = s.indices.front();
    if (zeta.count(i)) continue;
    Rational g = generator_value(desc, i);
    for (const auto& r : prime_divisors(g.den())) {
      long bound = -static_cast<long>(integer_valuation(g.den(), r));
      if (p_adic_valuation(q, r) < bound) return valuation_obstruction(q, r, bound);
    }
    zeta[i] = forced_residue(q, g, g.den());
  }
  for (auto it = zeta.begin(); it != zeta.end();)
    it = sgn(it->second) == 0 ? zeta.erase(it) : std::next(it);

  mpq_class rem = q.value() - signed_sum(desc, zeta);
  if (sgn(rem) < 0) return negative_remainder(desc, q, std::move(zeta));
  if (rem.get_den() != 1) throw std::logic_error("non-integral remainder");
  Integer eta = rem.get_num();
  if (desc.family() == Family::custom && eta > 0 &&
      !represent(eta, numerators(desc))) {
    NotMember nm = make_obstruction(
        Obstruction::numerator_semigroup, q,
        "eta = " + eta.get_str() + " is not a sum of the numerators");
    nm.residues = zeta;
    nm.remainder = eta;
    return nm;
  }
  return AtomicDecomposition{eta, std::move(zeta), q};
}

MembershipVerdict member(const MonoidDescriptor& desc, const Rational& q,
                         const SearchBounds& bounds) {
  if (bounds.max_index < 1 || bounds.max_block_coeff < 1 || bounds.max_nodes < 1)
    throw std::invalid_argument("search bounds must be positive");
  if (desc.scale() != Rational(1)) {
    // q in sM iff q/s in M, with the same coefficients.
    MembershipVerdict v = member(unscaled(desc), q / desc.scale(), bounds);
    if (auto* m = std::get_if<Member>(&v)) {
      m->decomposition.reset();
      m->method += " (unscaled)";
    }
    return v;
  }
  if (q.is_zero()) {
    Member m{{}, AtomicDecomposition{0, {}, q}, "zero"};
    if (!has_closed_form_decomposition(desc)) m.decomposition.reset();
    return m;
  }
  if (has_closed_form_decomposition(desc)) return uad_member(desc, q);
  switch (desc.family()) {
    case Family::grams:
    case Family::mixed_5_2:
      return residue_member(desc, q, bounds);
    case Family::power_reciprocal:
      return power_member(
          desc, q, Integer(std::get<family::PowerReciprocal>(desc.rule()).base));
    case Family::geometric: {
      const auto& g = std::get<family::Geometric>(desc.rule());
      if (g.ratio.num() == 1) return power_member(desc, q, g.ratio.den());
      return generic_member(desc, q, bounds);
    }
    default:
      return generic_member(desc, q, bounds);
  }
}

MembershipVerdict divides(const MonoidDescriptor& desc, const Rational& r,
                          const Rational& q, const SearchBounds& bounds) {
  SignedDifference d = subtract(q, r);
  if (d.negative()) {
    NotMember nm;
    nm.kind = Obstruction::negative_remainder;
    nm.subject = d.signed_value() / desc.scale().value();
    nm.remainder = nm.subject;
    nm.detail = q.to_string() + " - " + r.to_string() + " < 0";
    return nm;
  }
  return member(desc, d.accept(), bounds);
}

bool verify_obstruction(const MonoidDescriptor& desc, const NotMember& nm,
                        const SearchBounds& bounds) {
  MonoidDescriptor base = unscaled(desc);
  if (sgn(nm.subject) < 0) return nm.kind == Obstruction::negative_remainder;
  Rational q(Integer(nm.subject.get_num()), Integer(nm.subject.get_den()));
  switch (nm.kind) {
    case Obstruction::denominator_support: {
      if (!nm.prime || !mpz_divisible_p(q.den().get_mpz_t(), nm.prime->get_mpz_t()))
        return false;
      IndexSet s = index_set_for_prime(base, *nm.prime);
      return s.kind == IndexSet::Kind::exact && s.indices.empty();
    }
    case Obstruction::valuation: {
      if (!nm.prime || q.is_zero()) return false;
      IndexSet s = index_set_for_prime(base, *nm.prime);
      if (s.kind != IndexSet::Kind::exact) return false;
      long least = 0;
      for (Index i : s.indices)
        least = std::min(least,
                         p_adic_valuation(generator_value(base, i), *nm.prime));
      return nm.valuation_bound <= least &&
             p_adic_valuation(q, *nm.prime) < nm.valuation_bound;
    }
    case Obstruction::negative_remainder:
      return residues_forced(base, nm.subject, nm.residues, false) &&
             signed_sum(base, nm.residues) > nm.subject;
    case Obstruction::numerator_semigroup: {
      if (!has_closed_form_decomposition(base) || base.family() != Family::custom)
        return false;
      if (!residues_forced(base, nm.subject, nm.residues, true)) return false;
      mpq_class eta = nm.subject - signed_sum(base, nm.residues);
      if (sgn(eta) < 0 || eta.get_den() != 1) return false;
      return !representable_by_table(Integer(eta.get_num()), numerators(base));
    }
    case Obstruction::exhaustive_search: {
      if (!base.last_index()) return false;
      detail::SearchSpec spec;
      spec.items = descending_items(base, *base.last_index(), q);
      spec.target = q;
      spec.max_nodes = bounds.max_nodes;
      spec.max_solutions = 1;
      auto out = detail::search(spec);
      return out.solutions.empty() && out.complete();
    }
  }
  return false;
}

DecompositionList enumerate_decompositions(const MonoidDescriptor& desc,
                                           const Rational& q, Index max_index,
                                           std::size_t max_nodes) {
  DecompositionList out;
  if (q.is_zero()) {
    out.items.push_back({0, {}, q});
    out.complete = true;
    return out;
  }
  detail::SearchSpec spec;
  for (auto& item : descending_items(desc, max_index, q)) {
    Integer cap = item.value.den() - 1;
    if (cap == 0) continue;
    item.hard_cap = cap;
    spec.items.push_back(std::move(item));
  }
  spec.target = q;
  spec.integer_tail = true;
  spec.max_nodes = max_nodes;
  detail::SearchOutcome res = detail::search(spec);
  for (auto& s : res.solutions)
    out.items.push_back({s.tail, std::move(s.coefficients), q});
  std::sort(out.items.begin(), out.items.end(),
            [](const AtomicDecomposition& a, const AtomicDecomposition& b) {
              if (a.eta != b.eta) return a.eta < b.eta;
              return compare_coefficients(a.zeta, b.zeta) < 0;
            });
  out.exhaustive = res.complete();

  bool in_range = true;
  if (desc.last_index() && max_index >= *desc.last_index()) {
    out.complete = out.exhaustive;
  } else if (has_closed_form_decomposition(desc)) {
    for (const auto& p : prime_divisors(q.den())) {
      IndexSet s = index_set_for_prime(desc, p);
      if (s.kind != IndexSet::Kind::exact) in_range = false;
      for (Index i : s.indices) in_range = in_range && i <= max_index;
    }
    out.complete = out.exhaustive && in_range;
  }
  return out;
}

}  // namespace puiseux
