#include "puiseux/exact_arith.hpp"

#include <algorithm>
#include <random>
#include <sstream>
#include <stdexcept>

#include "puiseux/primes.hpp"

namespace puiseux {

Rational::Rational(const Integer& num, const Integer& den) {
  if (den == 0) throw std::domain_error("rational with zero denominator");
  if (sgn(num) < 0 || sgn(den) < 0)
    throw std::domain_error("negative rational outside the monoid layer");
  value_ = mpq_class(num, den);
  value_.canonicalize();
}

Integer Rational::floor() const {
  Integer q;
  mpz_fdiv_q(q.get_mpz_t(), num().get_mpz_t(), den().get_mpz_t());
  return q;
}

std::string Rational::to_string() const {
  if (den() == 1) return num().get_str();
  return num().get_str() + "/" + den().get_str();
}

std::ostream& operator<<(std::ostream& os, const Rational& q) {
  return os << q.to_string();
}

Rational operator+(const Rational& a, const Rational& b) {
  return Rational(mpq_class(a.value_ + b.value_), Rational::Unchecked{});
}

Rational operator*(const Rational& a, const Rational& b) {
  return Rational(mpq_class(a.value_ * b.value_), Rational::Unchecked{});
}

Rational operator/(const Rational& a, const Rational& b) {
  if (b.is_zero()) throw std::domain_error("division by zero rational");
  return Rational(mpq_class(a.value_ / b.value_), Rational::Unchecked{});
}

Rational SignedDifference::accept() const {
  if (negative())
    throw std::domain_error("negative difference " + value_.get_str());
  return Rational(value_, Rational::Unchecked{});
}

std::optional<Rational> SignedDifference::nonnegative() const {
  if (negative()) return std::nullopt;
  return Rational(value_, Rational::Unchecked{});
}

Rational make_rational(const Integer& num, const Integer& den) {
  return Rational(num, den);
}

std::pair<Integer, Integer> num_den(const Rational& q) {
  return {q.num(), q.den()};
}

namespace {

Integer parse_digits(std::string_view s, std::string_view whole) {
  if (s.empty() || !std::all_of(s.begin(), s.end(), [](char c) {
        return c >= '0' && c <= '9';
      }))
    throw std::invalid_argument("malformed rational literal '" +
                                std::string(whole) + "'");
  return Integer(std::string(s), 10);
}

}  // namespace

Rational parse_rational(std::string_view text) {
  auto slash = text.find('/');
  if (slash == std::string_view::npos) return Rational(parse_digits(text, text));
  Integer n = parse_digits(text.substr(0, slash), text);
  Integer d = parse_digits(text.substr(slash + 1), text);
  if (d == 0)
    throw std::domain_error("zero denominator in '" + std::string(text) + "'");
  return Rational(n, d);
}

bool is_prime(const Integer& n) {
  if (n < 2) return false;
  // Baillie-PSW plus extra Miller-Rabin rounds; exact below 2^64.
  return mpz_probab_prime_p(n.get_mpz_t(), 40) > 0;
}

namespace {

// Pollard rho (Floyd cycle finding) on an odd composite n.
Integer pollard_rho(const Integer& n) {
  if (mpz_even_p(n.get_mpz_t())) return Integer(2);
  std::mt19937_64 rng(0x5eed);
  for (;;) {
    Integer c(static_cast<unsigned long>(rng() % 1000 + 1));
    auto f = [&](const Integer& v) { return mod_floor(Integer(v * v + c), n); };
    Integer x = 2, y = 2, d = 1;
    while (d == 1) {
      x = f(x);
      y = f(f(y));
      d = gcd(Integer(abs(x - y)), n);
    }
    if (d != n) return d;
  }
}

void factor_large(const Integer& n, PrimeFactorization& out) {
  if (n == 1) return;
  if (mpz_probab_prime_p(n.get_mpz_t(), 40) > 0) {
    ++out[n];
    return;
  }
  // rho needs about sqrt(p) steps on p^k, so split perfect powers first.
  if (mpz_perfect_power_p(n.get_mpz_t())) {
    for (unsigned long k = mpz_sizeinbase(n.get_mpz_t(), 2); k >= 2; --k) {
      Integer root;
      if (mpz_root(root.get_mpz_t(), n.get_mpz_t(), k)) {
        PrimeFactorization inner;
        factor_large(root, inner);
        for (const auto& [p, e] : inner) out[p] += e * k;
        return;
      }
    }
  }
  Integer d = pollard_rho(n);
  factor_large(d, out);
  factor_large(Integer(n / d), out);
}

}  // namespace

PrimeFactorization factor(const Integer& n, const FactorOptions& opts) {
  if (sgn(n) <= 0) throw std::domain_error("factor() needs n >= 1");
  PrimeFactorization out;
  Integer rest = n;
  auto sieve = PrimeTable::instance().covering(
      std::min(opts.trial_bound, PrimeTable::max_limit()));
  for (unsigned long p : sieve->primes) {
    if (p > opts.trial_bound) break;
    Integer pp(p);
    if (pp * pp > rest) break;
    while (mpz_divisible_ui_p(rest.get_mpz_t(), p)) {
      ++out[pp];
      rest /= pp;
    }
  }
  if (rest == 1) return out;
  Integer bound(opts.trial_bound);
  if (rest <= bound * bound) {
    ++out[rest];
    return out;
  }
  factor_large(rest, out);
  return out;
}

Integer expand(const PrimeFactorization& f) {
  Integer r = 1;
  for (const auto& [p, e] : f) r *= pow(p, e);
  return r;
}

std::vector<Integer> prime_divisors(const Integer& n) {
  std::vector<Integer> out;
  for (const auto& [p, e] : factor(n)) out.push_back(p);
  return out;
}

unsigned long integer_valuation(const Integer& n, const Integer& p) {
  if (n == 0) throw std::domain_error("valuation of zero");
  Integer rest = abs(n);
  unsigned long v = 0;
  while (mpz_divisible_p(rest.get_mpz_t(), p.get_mpz_t())) {
    rest /= p;
    ++v;
  }
  return v;
}

long p_adic_valuation(const Rational& q, const Integer& p) {
  if (q.is_zero()) throw std::domain_error("p-adic valuation of zero");
  long up = static_cast<long>(integer_valuation(q.num(), p));
  long down = static_cast<long>(integer_valuation(q.den(), p));
  return up - down;
}

Integer gcd(const Integer& a, const Integer& b) {
  Integer g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g;
}

Integer lcm(const Integer& a, const Integer& b) {
  Integer l;
  mpz_lcm(l.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return l;
}

std::optional<Integer> mod_inverse(const Integer& a, const Integer& m) {
  if (m == 1) return Integer(0);
  Integer r;
  if (mpz_invert(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t()) == 0)
    return std::nullopt;
  return r;
}

Integer mod_floor(const Integer& a, const Integer& m) {
  Integer r;
  mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
  return r;
}

Integer pow(const Integer& b, unsigned long e) {
  Integer r;
  mpz_pow_ui(r.get_mpz_t(), b.get_mpz_t(), e);
  return r;
}

Rational pow(const Rational& b, unsigned long e) {
  return Rational(pow(b.num(), e), pow(b.den(), e));
}

}  // namespace puiseux
