#include "puiseux/monoid.hpp"

#include <algorithm>
#include <sstream>

namespace puiseux {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::vector<std::optional<Integer>> custom_controlling(
    const std::vector<Rational>& terms) {
  std::vector<std::optional<Integer>> out(terms.size());
  for (std::size_t i = 0; i < terms.size(); ++i) {
    for (const auto& p : prime_divisors(terms[i].den())) {
      bool shared = false;
      for (std::size_t j = 0; j < terms.size() && !shared; ++j)
        shared = j != i && mpz_divisible_p(terms[j].den().get_mpz_t(),
                                           p.get_mpz_t());
      if (!shared) {
        out[i] = p;
        break;
      }
    }
  }
  return out;
}

// Primes of n(s) * d(s); generators at these primes change under scaling.
std::vector<Integer> scale_primes(const Rational& s) {
  return prime_divisors(Integer(s.num() * s.den()));
}

bool divides_scale(const Rational& s, const Integer& p) {
  return mpz_divisible_p(s.num().get_mpz_t(), p.get_mpz_t()) ||
         mpz_divisible_p(s.den().get_mpz_t(), p.get_mpz_t());
}

std::string join_primes(const std::vector<unsigned long>& ps) {
  std::string out;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(ps[i]);
  }
  return out;
}

}  // namespace

std::string to_string(Family f) {
  switch (f) {
    case Family::prime_reciprocal: return "prime_reciprocal";
    case Family::grams: return "grams";
    case Family::gap: return "gap";
    case Family::geometric: return "geometric";
    case Family::power_reciprocal: return "power_reciprocal";
    case Family::mixed_5_2: return "mixed_5_2";
    case Family::custom: return "custom";
  }
  return "?";
}

std::optional<Family> family_from_string(const std::string& name) {
  for (Family f : {Family::prime_reciprocal, Family::grams, Family::gap,
                   Family::geometric, Family::power_reciprocal,
                   Family::mixed_5_2, Family::custom})
    if (to_string(f) == name) return f;
  return std::nullopt;
}

std::string to_string(Tri t) {
  switch (t) {
    case Tri::yes: return "yes";
    case Tri::no: return "no";
    case Tri::unknown: return "unknown";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Construction

MonoidDescriptor MonoidDescriptor::prime_reciprocal(
    std::vector<unsigned long> primes) {
  return MonoidDescriptor(family::PrimeReciprocal{},
                          PrimeSequence(1, std::move(primes)));
}

MonoidDescriptor MonoidDescriptor::grams(unsigned long base,
                                         std::vector<unsigned long> primes) {
  if (base < 2) throw std::invalid_argument("grams base must be >= 2");
  for (unsigned long p : primes)
    if (base % p == 0)
      throw std::invalid_argument("grams prime " + std::to_string(p) +
                                  " divides the base " + std::to_string(base));
  return MonoidDescriptor(family::Grams{base},
                          PrimeSequence(base, std::move(primes)));
}

MonoidDescriptor MonoidDescriptor::gap(unsigned long ell,
                                       std::vector<unsigned long> primes) {
  if (ell < 1) throw std::invalid_argument("gap ell must be >= 1");
  return MonoidDescriptor(family::Gap{ell}, PrimeSequence(1, std::move(primes)));
}

MonoidDescriptor MonoidDescriptor::geometric(const Rational& q,
                                             bool include_unit) {
  if (q.is_zero()) throw std::invalid_argument("geometric ratio must be > 0");
  if (q.is_integer())
    throw std::invalid_argument("geometric ratio must not be an integer");
  return MonoidDescriptor(family::Geometric{q, include_unit}, std::nullopt);
}

MonoidDescriptor MonoidDescriptor::power_reciprocal(unsigned long base) {
  if (base < 2) throw std::invalid_argument("power_reciprocal base must be >= 2");
  return MonoidDescriptor(family::PowerReciprocal{base}, std::nullopt);
}

MonoidDescriptor MonoidDescriptor::mixed_5_2(unsigned long k,
                                             std::vector<unsigned long> primes) {
  if (k < 1) throw std::invalid_argument("mixed_5_2 k must be >= 1");
  for (unsigned long p : primes)
    if (p == 2) throw std::invalid_argument("mixed_5_2 primes must be odd");
  return MonoidDescriptor(family::Mixed52{k},
                          PrimeSequence(2, std::move(primes)));
}

MonoidDescriptor MonoidDescriptor::custom(std::vector<Rational> terms) {
  if (terms.empty()) throw std::invalid_argument("custom list must be nonempty");
  for (std::size_t i = 0; i < terms.size(); ++i)
    if (terms[i].is_zero())
      throw std::invalid_argument("custom term " + std::to_string(i + 1) +
                                  " is zero");
  auto ctl = custom_controlling(terms);
  return MonoidDescriptor(family::Custom{std::move(terms), std::move(ctl)},
                          std::nullopt);
}

Family MonoidDescriptor::family() const {
  return std::visit(
      overloaded{
          [](const family::PrimeReciprocal&) { return Family::prime_reciprocal; },
          [](const family::Grams&) { return Family::grams; },
          [](const family::Gap&) { return Family::gap; },
          [](const family::Geometric&) { return Family::geometric; },
          [](const family::PowerReciprocal&) {
            return Family::power_reciprocal;
          },
          [](const family::Mixed52&) { return Family::mixed_5_2; },
          [](const family::Custom&) { return Family::custom; },
      },
      rule_);
}

Index MonoidDescriptor::first_index() const {
  if (auto* g = std::get_if<family::Geometric>(&rule_))
    return g->include_unit ? 0 : 1;
  return 1;
}

std::optional<Index> MonoidDescriptor::last_index() const {
  if (auto* c = std::get_if<family::Custom>(&rule_)) return c->terms.size();
  return std::nullopt;
}

bool MonoidDescriptor::has_index(Index n) const {
  if (n < first_index()) return false;
  auto last = last_index();
  return !last || n <= *last;
}

std::string MonoidDescriptor::describe() const {
  std::ostringstream os;
  if (scale_ != Rational(1)) os << scale_ << " * ";
  std::string override_note;
  if (primes_ && !primes_->prefix().empty())
    override_note = "primes=" + join_primes(primes_->prefix());
  std::visit(
      overloaded{
          [&](const family::PrimeReciprocal&) {
            os << "prime_reciprocal";
            if (!override_note.empty()) os << "(" << override_note << ")";
          },
          [&](const family::Grams& g) {
            os << "grams(base=" << g.base;
            if (!override_note.empty()) os << ", " << override_note;
            os << ")";
          },
          [&](const family::Gap& g) {
            os << "gap(ell=" << g.ell;
            if (!override_note.empty()) os << ", " << override_note;
            os << ")";
          },
          [&](const family::Geometric& g) {
            os << "geometric(q=" << g.ratio
               << ", include_unit=" << (g.include_unit ? "true" : "false")
               << ")";
          },
          [&](const family::PowerReciprocal& p) {
            os << "power_reciprocal(base=" << p.base << ")";
          },
          [&](const family::Mixed52& m) {
            os << "mixed_5_2(k=" << m.k;
            if (!override_note.empty()) os << ", " << override_note;
            os << ")";
          },
          [&](const family::Custom& c) {
            os << "custom[";
            for (std::size_t i = 0; i < c.terms.size(); ++i)
              os << (i ? ", " : "") << c.terms[i];
            os << "]";
          },
      },
      rule_);
  return os.str();
}

// ---------------------------------------------------------------------------
// Generators

namespace {

void check_index(const MonoidDescriptor& desc, Index n) {
  if (!desc.has_index(n))
    throw std::out_of_range("generator index " + std::to_string(n) +
                            " out of range for " + desc.describe());
}

Rational unit_fraction(const Integer& d) { return Rational(Integer(1), d); }

Rational base_value(const MonoidDescriptor& desc, Index n) {
  const auto& seq = desc.primes();
  return std::visit(
      overloaded{
          [&](const family::PrimeReciprocal&) {
            return unit_fraction(Integer(seq->at(n)));
          },
          [&](const family::Grams& g) {
            return unit_fraction(pow(Integer(g.base), n) * seq->at(n));
          },
          [&](const family::Gap& g) {
            return unit_fraction(Integer(seq->at(n)) * seq->at(n + g.ell));
          },
          [&](const family::Geometric& g) { return pow(g.ratio, n); },
          [&](const family::PowerReciprocal& p) {
            return unit_fraction(pow(Integer(p.base), n));
          },
          [&](const family::Mixed52& m) {
            if (n <= m.k)
              return unit_fraction(pow(Integer(2), n) * seq->at(n));
            return unit_fraction(Integer(seq->at(n)));
          },
          [&](const family::Custom& c) { return c.terms[n - 1]; },
      },
      desc.rule());
}

std::optional<Integer> base_controlling_prime(const MonoidDescriptor& desc,
                                              Index n) {
  const auto& seq = desc.primes();
  return std::visit(
      overloaded{
          [&](const family::PrimeReciprocal&) -> std::optional<Integer> {
            return Integer(seq->at(n));
          },
          [&](const family::Grams&) -> std::optional<Integer> {
            return Integer(seq->at(n));
          },
          [&](const family::Gap& g) -> std::optional<Integer> {
            // p_n for n <= ell occurs only in d_n.
            if (n <= g.ell) return Integer(seq->at(n));
            return std::nullopt;
          },
          [&](const family::Geometric&) -> std::optional<Integer> {
            return std::nullopt;
          },
          [&](const family::PowerReciprocal&) -> std::optional<Integer> {
            return std::nullopt;
          },
          [&](const family::Mixed52&) -> std::optional<Integer> {
            return Integer(seq->at(n));
          },
          [&](const family::Custom& c) -> std::optional<Integer> {
            return c.controlling[n - 1];
          },
      },
      desc.rule());
}

IndexSet lookup_single(const PrimeSequence& seq, const Integer& p) {
  auto hit = seq.index_of(p);
  switch (hit.kind) {
    case PrimeLookup::Kind::found: return IndexSet::exact({hit.index});
    case PrimeLookup::Kind::absent: return IndexSet::exact({});
    case PrimeLookup::Kind::beyond_limit:
      return IndexSet::unknown("prime beyond the sieve limit");
  }
  return IndexSet::unknown("unreachable");
}

bool divides(const Integer& p, const Integer& n) {
  return mpz_divisible_p(n.get_mpz_t(), p.get_mpz_t()) != 0;
}

IndexSet base_index_set(const MonoidDescriptor& desc, const Integer& p,
                        Index scan_bound) {
  const auto& seq = desc.primes();
  return std::visit(
      overloaded{
          [&](const family::PrimeReciprocal&) { return lookup_single(*seq, p); },
          [&](const family::Grams& g) {
            if (divides(p, Integer(g.base))) return IndexSet::all();
            return lookup_single(*seq, p);
          },
          [&](const family::Gap& g) {
            IndexSet hit = lookup_single(*seq, p);
            if (hit.kind != IndexSet::Kind::exact || hit.indices.empty())
              return hit;
            Index k = hit.indices.front();
            std::vector<Index> out;
            if (k > g.ell) out.push_back(k - g.ell);
            out.push_back(k);
            return IndexSet::exact(std::move(out));
          },
          [&](const family::Geometric& g) {
            if (divides(p, g.ratio.den())) return IndexSet::all();
            return IndexSet::exact({});
          },
          [&](const family::PowerReciprocal& pr) {
            if (divides(p, Integer(pr.base))) return IndexSet::all();
            return IndexSet::exact({});
          },
          [&](const family::Mixed52& m) {
            if (p == 2) {
              std::vector<Index> out;
              for (Index i = 1; i <= m.k; ++i) out.push_back(i);
              return IndexSet::exact(std::move(out));
            }
            return lookup_single(*seq, p);
          },
          [&](const family::Custom& c) {
            if (c.terms.size() > scan_bound)
              return IndexSet::unknown("custom list longer than scan bound");
            std::vector<Index> out;
            for (Index i = 0; i < c.terms.size(); ++i)
              if (divides(p, c.terms[i].den())) out.push_back(i + 1);
            return IndexSet::exact(std::move(out));
          },
      },
      desc.rule());
}

std::optional<Index> base_index_controlled_by(const MonoidDescriptor& desc,
                                              const Integer& p) {
  auto from_sequence = [&](std::optional<Index> cap) -> std::optional<Index> {
    auto hit = desc.primes()->index_of(p);
    if (hit.kind == PrimeLookup::Kind::beyond_limit)
      throw UnsupportedError("prime " + p.get_str() +
                             " is beyond the sieve limit");
    if (hit.kind != PrimeLookup::Kind::found) return std::nullopt;
    if (cap && hit.index > *cap) return std::nullopt;
    return hit.index;
  };
  return std::visit(
      overloaded{
          [&](const family::PrimeReciprocal&) {
            return from_sequence(std::nullopt);
          },
          [&](const family::Grams&) { return from_sequence(std::nullopt); },
          [&](const family::Gap& g) {
            return from_sequence(static_cast<Index>(g.ell));
          },
          [&](const family::Geometric&) -> std::optional<Index> {
            return std::nullopt;
          },
          [&](const family::PowerReciprocal&) -> std::optional<Index> {
            return std::nullopt;
          },
          [&](const family::Mixed52&) { return from_sequence(std::nullopt); },
          [&](const family::Custom& c) -> std::optional<Index> {
            for (Index i = 0; i < c.controlling.size(); ++i)
              if (c.controlling[i] && *c.controlling[i] == p) return i + 1;
            return std::nullopt;
          },
      },
      desc.rule());
}

}  // namespace

Rational generator_value(const MonoidDescriptor& desc, Index n) {
  check_index(desc, n);
  return desc.scale() * base_value(desc, n);
}

GeneratorTerm generator(const MonoidDescriptor& desc, Index n) {
  check_index(desc, n);
  GeneratorTerm t;
  t.index = n;
  t.value = desc.scale() * base_value(desc, n);
  t.controlling_prime = base_controlling_prime(desc, n);
  if (t.controlling_prime && divides_scale(desc.scale(), *t.controlling_prime))
    t.controlling_prime.reset();
  return t;
}

Rational combination_value(const MonoidDescriptor& desc,
                           const Coefficients& coeffs) {
  Rational total;
  for (const auto& [n, c] : coeffs) {
    if (sgn(c) < 0)
      throw std::domain_error("negative coefficient at index " +
                              std::to_string(n));
    if (sgn(c) == 0) continue;
    total += Rational(c) * generator_value(desc, n);
  }
  return total;
}

int compare_coefficients(const Coefficients& a, const Coefficients& b) {
  auto ia = a.begin(), ib = b.begin();
  while (ia != a.end() || ib != b.end()) {
    // Skip explicit zeros so that {1:0} == {}.
    if (ia != a.end() && sgn(ia->second) == 0) { ++ia; continue; }
    if (ib != b.end() && sgn(ib->second) == 0) { ++ib; continue; }
    if (ia == a.end()) return -1;
    if (ib == b.end()) return 1;
    if (ia->first != ib->first) return ia->first < ib->first ? 1 : -1;
    int c = cmp(ia->second, ib->second);
    if (c != 0) return c < 0 ? -1 : 1;
    ++ia;
    ++ib;
  }
  return 0;
}

IndexSet index_set_for_prime(const MonoidDescriptor& desc, const Integer& p,
                             Index scan_bound) {
  if (divides_scale(desc.scale(), p))
    return IndexSet::unknown("prime " + p.get_str() +
                             " divides the scale factor");
  return base_index_set(desc, p, scan_bound);
}

std::optional<Index> index_controlled_by(const MonoidDescriptor& desc,
                                         const Integer& p) {
  if (divides_scale(desc.scale(), p)) return std::nullopt;
  return base_index_controlled_by(desc, p);
}

bool is_controlled(const MonoidDescriptor& desc) {
  switch (desc.family()) {
    case Family::prime_reciprocal:
    case Family::grams:
    case Family::mixed_5_2:
      for (const auto& r : scale_primes(desc.scale()))
        if (base_index_controlled_by(desc, r)) return false;
      return true;
    case Family::custom: {
      const auto& c = std::get<family::Custom>(desc.rule());
      return std::all_of(c.controlling.begin(), c.controlling.end(),
                         [](const auto& p) { return p.has_value(); });
    }
    default:
      return false;
  }
}

// ---------------------------------------------------------------------------
// Classification

namespace {

Flag yes(std::string why) { return {Tri::yes, std::move(why)}; }
Flag no(std::string why) { return {Tri::no, std::move(why)}; }
Flag unknown(std::string why) { return {Tri::unknown, std::move(why)}; }

std::string term(const Integer& coeff, const Rational& g) {
  return coeff.get_str() + "·(" + g.to_string() + ")";
}

// x = a*g_i = b*g_j with 0 < a < d(g_i), 0 < b < d(g_j): two distinct atomic
// decompositions of x with eta = 0.
Flag two_term_witness(const Rational& x, const Integer& a, const Rational& gi,
                      const Integer& b, const Rational& gj) {
  if (Rational(a) * gi != x || Rational(b) * gj != x || a >= gi.den() ||
      b >= gj.den())
    throw std::logic_error("invalid two-decomposition witness");
  return no(x.to_string() + " = " + term(a, gi) + " = " + term(b, gj) +
            " are two atomic decompositions");
}

ClassificationReport classify_custom(const family::Custom& c) {
  const std::string tag = "truncation-only: ";
  ClassificationReport r;
  const auto& ts = c.terms;
  bool unit_numerators = std::all_of(ts.begin(), ts.end(), [](const Rational& q) {
    return q.num() == 1;
  });
  std::optional<std::pair<std::size_t, std::size_t>> shared;
  for (std::size_t i = 0; i < ts.size() && !shared; ++i)
    for (std::size_t j = i + 1; j < ts.size() && !shared; ++j)
      if (gcd(ts[i].den(), ts[j].den()) != 1) shared = {i, j};

  if (unit_numerators)
    r.weak_reciprocal = yes(tag + "every listed generator is a unit fraction");
  else
    r.weak_reciprocal = no(tag + "a listed generator has numerator > 1");

  if (shared) {
    auto [i, j] = *shared;
    std::string why = tag + "denominators " + ts[i].den().get_str() + " and " +
                      ts[j].den().get_str() + " are not coprime";
    r.reciprocal = no(why);
    r.almost_reciprocal = no(why);
  } else {
    r.almost_reciprocal =
        yes(tag + "denominators pairwise coprime, terms in lowest terms");
    if (unit_numerators)
      r.reciprocal = yes(tag + "unit fractions with pairwise coprime "
                               "denominators");
    else
      r.reciprocal = no(tag + "a listed generator has numerator > 1");
  }
  r.strongly_bounded = yes(tag + "finite list, numerators bounded");
  r.bounded = yes(tag + "finite list");
  r.atomic = yes(tag + "finitely generated");

  if (r.almost_reciprocal.value == Tri::yes) {
    r.uad = yes(tag + "almost reciprocal list");
  } else {
    r.uad = unknown(tag + "no two-term witness found");
    for (std::size_t i = 0; i < ts.size(); ++i) {
      for (std::size_t j = 0; j < ts.size(); ++j) {
        if (i == j || ts[i] == ts[j]) continue;
        // s*g_i = r*g_j with g_i/g_j = r/s in lowest terms.
        Rational ratio = ts[i] / ts[j];
        const Integer& a = ratio.den();
        const Integer& b = ratio.num();
        if (a < ts[i].den() && b < ts[j].den()) {
          Flag f = two_term_witness(Rational(a) * ts[i], a, ts[i], b, ts[j]);
          f.why = tag + f.why;
          r.uad = f;
          return r;
        }
      }
    }
  }
  return r;
}

ClassificationReport classify_base(const MonoidDescriptor& desc) {
  ClassificationReport r;
  const auto& seq = desc.primes();
  auto g = [&](Index n) { return generator_value(desc, n); };
  std::visit(
      overloaded{
          [&](const family::PrimeReciprocal&) {
            r.reciprocal = yes("unit fractions 1/p_n over distinct primes");
            r.weak_reciprocal = yes("reciprocal");
            r.almost_reciprocal = yes("reciprocal");
            r.strongly_bounded = yes("every generator has numerator 1");
            r.bounded = yes("generators lie in (0, 1/2]");
            r.atomic = yes("p_n controls generator n");
            r.uad = yes("almost reciprocal");
          },
          [&](const family::Grams& gr) {
            std::string b = std::to_string(gr.base);
            r.reciprocal = no("every atom has " + b +
                              " in its denominator, and every generating set "
                              "contains the atoms");
            r.weak_reciprocal = yes("unit fractions with strictly increasing "
                                    "denominators b^n p_n");
            r.almost_reciprocal = no(r.reciprocal.why);
            r.strongly_bounded = yes("every generator has numerator 1");
            r.bounded = yes("generators lie in (0, 1)");
            r.atomic = yes("p_n controls generator n");
            // 1/b = p_1*g_1 = (b*p_2)*g_2
            r.uad = two_term_witness(unit_fraction(Integer(gr.base)),
                                     Integer(seq->at(1)), g(1),
                                     Integer(gr.base) * seq->at(2), g(2));
          },
          [&](const family::Gap& gp) {
            Index k = 1 + gp.ell;
            std::string shared = std::to_string(seq->at(k));
            r.reciprocal = no("atoms 1 and " + std::to_string(k) +
                              " share the prime " + shared);
            r.weak_reciprocal =
                yes("unit fractions with strictly increasing denominators");
            r.almost_reciprocal = no(r.reciprocal.why);
            r.strongly_bounded = yes("every generator has numerator 1");
            r.bounded = yes("generators lie in (0, 1)");
            r.atomic = yes("p_n divides the denominator of no smaller "
                           "generator, so every generator is an atom");
            // 1/p_{1+ell} = p_1*g_1 = p_{1+2ell}*g_{1+ell}
            r.uad = two_term_witness(unit_fraction(Integer(seq->at(k))),
                                     Integer(seq->at(1)), g(1),
                                     Integer(seq->at(k + gp.ell)), g(k));
          },
          [&](const family::Geometric& ge) {
            const Integer& a = ge.ratio.num();
            const Integer& b = ge.ratio.den();
            if (a == 1) {
              r.reciprocal = no("denominators b^n share the primes of b");
              r.weak_reciprocal = yes("unit fractions 1/b^n");
              r.almost_reciprocal = no(r.reciprocal.why);
              r.strongly_bounded = yes("every generator has numerator 1");
              r.bounded = yes("generators lie in (0, 1]");
              r.atomic = no("1/b^n = b·(1/b^(n+1)), so there are no atoms");
              r.uad = no("not atomic");
              return;
            }
            r.reciprocal = no("the atoms q^n have numerators a^n > 1");
            r.weak_reciprocal = no(r.reciprocal.why);
            r.almost_reciprocal = no("denominators of the atoms q^n share the "
                                     "primes of d(q)");
            r.strongly_bounded = no("atom numerators a^n are unbounded");
            if (ge.ratio < Rational(1))
              r.bounded = yes("generators q^n lie in (0, 1]");
            else
              r.bounded = no("the atoms q^n are unbounded");
            r.atomic = yes("n(q) > 1 and d(q) > 1: every power q^n is an atom");
            // zeta_1*q + b*q^2 is an integer for zeta_1 = -a mod b.
            Integer z1 = mod_floor(Integer(-a), b);
            Rational q = ge.ratio;
            Rational x = Rational(z1) * q + Rational(b) * pow(q, 2);
            if (!x.is_integer() || z1 == 0 || z1 >= b)
              throw std::logic_error("geometric witness failed");
            r.uad = no(x.to_string() + " = " + x.to_string() + " = " +
                       term(z1, q) + " + " + term(b, pow(q, 2)) +
                       " are two atomic decompositions");
          },
          [&](const family::PowerReciprocal& pr) {
            r.reciprocal = no("denominators b^n share the primes of b");
            r.weak_reciprocal = yes("unit fractions 1/b^n");
            r.almost_reciprocal = no(r.reciprocal.why);
            r.strongly_bounded = yes("every generator has numerator 1");
            r.bounded = yes("generators lie in (0, 1/2]");
            r.atomic = no("1/b^n = " + std::to_string(pr.base) +
                          "·(1/b^(n+1)), so there are no atoms");
            r.uad = no("not atomic");
          },
          [&](const family::Mixed52& m) {
            r.weak_reciprocal =
                yes("unit fractions with pairwise distinct denominators");
            r.strongly_bounded = yes("every generator has numerator 1");
            r.bounded = yes("generators lie in (0, 1)");
            r.atomic = yes("p_n controls generator n");
            if (m.k == 1) {
              r.reciprocal = yes("denominators 2p_1, p_2, p_3, ... are "
                                 "pairwise coprime");
              r.almost_reciprocal = yes("reciprocal");
              r.uad = yes("almost reciprocal");
            } else {
              r.reciprocal = no("atoms 1 and 2 share the prime 2");
              r.almost_reciprocal = no(r.reciprocal.why);
              // 1/2 = p_1*g_1 = (2 p_2)*g_2
              r.uad = two_term_witness(unit_fraction(Integer(2)),
                                       Integer(seq->at(1)), g(1),
                                       Integer(2) * seq->at(2), g(2));
            }
          },
          [&](const family::Custom& c) { r = classify_custom(c); },
      },
      desc.rule());
  return r;
}

}  // namespace

bool ClassificationReport::satisfies_implication_chain() const {
  auto implies = [](const Flag& a, const Flag& b) {
    return a.value != Tri::yes || b.value == Tri::yes;
  };
  auto implies_no = [](const Flag& a, const Flag& b) {
    // contrapositive: b == no forces a == no
    return b.value != Tri::no || a.value == Tri::no;
  };
  return implies(reciprocal, weak_reciprocal) &&
         implies(weak_reciprocal, strongly_bounded) &&
         implies(strongly_bounded, bounded) &&
         implies(reciprocal, almost_reciprocal) &&
         implies(almost_reciprocal, atomic) && implies(almost_reciprocal, uad) &&
         implies_no(reciprocal, weak_reciprocal) &&
         implies_no(weak_reciprocal, strongly_bounded) &&
         implies_no(strongly_bounded, bounded) &&
         implies_no(almost_reciprocal, atomic) &&
         implies_no(almost_reciprocal, uad);
}

ClassificationReport classify(const MonoidDescriptor& desc) {
  if (desc.scale() == Rational(1)) return classify_base(desc);
  // s*M is isomorphic to M: atomicity and boundedness carry over, the shape
  // of the scaled generating set does not.
  MonoidDescriptor base = scale(desc, Rational(1) / desc.scale());
  ClassificationReport b = classify_base(base);
  ClassificationReport r;
  std::string note = "scaled copy of " + base.describe() + ": ";
  r.reciprocal = unknown(note + "generating-set shape not determined");
  r.weak_reciprocal = r.reciprocal;
  r.almost_reciprocal = r.reciprocal;
  r.uad = unknown(note + "atomic decompositions not preserved by scaling");
  r.strongly_bounded = {b.strongly_bounded.value, note + b.strongly_bounded.why};
  r.bounded = {b.bounded.value, note + b.bounded.why};
  r.atomic = {b.atomic.value, note + "isomorphic; " + b.atomic.why};
  return r;
}

MonoidDescriptor scale(const MonoidDescriptor& desc, const Rational& q) {
  if (q.is_zero()) throw std::domain_error("cannot scale a monoid by zero");
  if (auto* c = std::get_if<family::Custom>(&desc.rule())) {
    std::vector<Rational> terms;
    terms.reserve(c->terms.size());
    for (const auto& t : c->terms) terms.push_back(q * t);
    return MonoidDescriptor::custom(std::move(terms));
  }
  MonoidDescriptor out = desc;
  out.scale_ = desc.scale_ * q;
  return out;
}

std::pair<Integer, MonoidDescriptor> normalize_strongly_bounded(
    const MonoidDescriptor& desc) {
  Integer m = 1;
  if (auto* c = std::get_if<family::Custom>(&desc.rule())) {
    for (const auto& t : c->terms) m = lcm(m, t.num());
    return {m, scale(desc, Rational(Integer(1), m))};
  }
  if (auto* g = std::get_if<family::Geometric>(&desc.rule());
      g && g->ratio.num() != 1)
    throw UnsupportedError("numerators a^n of " + desc.describe() +
                           " are unbounded");
  // Base numerators are all 1, so every numerator divides n(s). For a prime
  // r | n(s), the largest r-power in a numerator is reached either at an
  // index outside the finite index set of r or, when r divides every
  // denominator, at the first index.
  std::size_t span = 1;
  MonoidDescriptor base = scale(desc, Rational(1) / desc.scale());
  for (const auto& r : prime_divisors(desc.scale().num())) {
    IndexSet s = index_set_for_prime(base, r);
    if (s.kind == IndexSet::Kind::unknown)
      throw UnsupportedError("cannot bound numerators: " + s.note);
    if (s.kind == IndexSet::Kind::exact)
      span = std::max(span, s.indices.size() + 1);
  }
  Index first = desc.first_index();
  for (Index n = first; n < first + span; ++n)
    m = lcm(m, generator_value(desc, n).num());
  return {m, scale(desc, Rational(Integer(1), m))};
}

}  // namespace puiseux
