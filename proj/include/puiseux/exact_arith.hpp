#pragma once

// Exact nonnegative rationals and integer factorization helpers.
//
// Every value in the library is an exact GMP-backed number. There is no
// floating point anywhere in the core.

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace puiseux {

using Integer = mpz_class;

/// Nonnegative rational in lowest terms. Zero is stored as 0/1.
class Rational {
 public:
  Rational() : value_(0) {}
  Rational(long n) : Rational(Integer(n)) {}  // NOLINT(runtime/explicit)
  Rational(const Integer& n) : Rational(n, Integer(1)) {}  // NOLINT
  Rational(const Integer& num, const Integer& den);

  const Integer& num() const { return value_.get_num(); }
  const Integer& den() const { return value_.get_den(); }
  const mpq_class& value() const { return value_; }

  bool is_zero() const { return sgn(value_) == 0; }
  bool is_integer() const { return den() == 1; }

  /// floor(q) as an integer.
  Integer floor() const;

  std::string to_string() const;

  friend Rational operator+(const Rational& a, const Rational& b);
  friend Rational operator*(const Rational& a, const Rational& b);
  /// Division by a positive rational. Throws std::domain_error on zero.
  friend Rational operator/(const Rational& a, const Rational& b);

  Rational& operator+=(const Rational& o) { return *this = *this + o; }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.value_ == b.value_;
  }
  friend std::strong_ordering operator<=>(const Rational& a,
                                          const Rational& b) {
    int c = cmp(a.value_, b.value_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater
                          : std::strong_ordering::equal);
  }

 private:
  struct Unchecked {};
  Rational(mpq_class v, Unchecked) : value_(std::move(v)) {}
  friend class SignedDifference;

  mpq_class value_;
};

std::ostream& operator<<(std::ostream& os, const Rational& q);

/// Result of a - b for nonnegative a, b. The sign has to be inspected
/// before the magnitude can re-enter the monoid layer.
class SignedDifference {
 public:
  SignedDifference(const Rational& a, const Rational& b)
      : value_(a.value() - b.value()) {}

  bool negative() const { return sgn(value_) < 0; }
  const mpq_class& signed_value() const { return value_; }
  /// The difference as a nonnegative rational; throws std::domain_error
  /// when it is negative.
  Rational accept() const;
  std::optional<Rational> nonnegative() const;

 private:
  mpq_class value_;
};

inline SignedDifference subtract(const Rational& a, const Rational& b) {
  return SignedDifference(a, b);
}

/// Canonical rational num/den. Throws std::domain_error when den == 0 or
/// either argument is negative.
Rational make_rational(const Integer& num, const Integer& den);

/// (n(q), d(q)), coprime with d(q) >= 1. Zero maps to (0, 1).
std::pair<Integer, Integer> num_den(const Rational& q);

/// Parses "a/b" or "a" with decimal digits only: no signs, no whitespace.
/// Throws std::invalid_argument on malformed input and std::domain_error on a
/// zero denominator.
Rational parse_rational(std::string_view text);

/// prime -> positive exponent. An empty map is the factorization of 1.
using PrimeFactorization = std::map<Integer, unsigned long>;

struct FactorOptions {
  /// Trial division is exhaustive up to this bound; larger cofactors go to
  /// Miller-Rabin plus Pollard rho.
  unsigned long trial_bound = 1'000'000;
};

/// Exact prime factorization of n >= 1. Throws std::domain_error on n <= 0.
PrimeFactorization factor(const Integer& n, const FactorOptions& opts = {});

/// Product of p^e over the factorization.
Integer expand(const PrimeFactorization& f);

/// Distinct primes of n, ascending.
std::vector<Integer> prime_divisors(const Integer& n);

/// The exponent of p in q, negative when p | d(q). Throws std::domain_error
/// for q == 0.
long p_adic_valuation(const Rational& q, const Integer& p);

/// Valuation of a nonzero integer.
unsigned long integer_valuation(const Integer& n, const Integer& p);

bool is_prime(const Integer& n);

Integer gcd(const Integer& a, const Integer& b);
Integer lcm(const Integer& a, const Integer& b);

/// Inverse of a modulo m (m >= 1). Returns nullopt when gcd(a, m) != 1.
std::optional<Integer> mod_inverse(const Integer& a, const Integer& m);

/// Least nonnegative residue of a mod m.
Integer mod_floor(const Integer& a, const Integer& m);

/// b^e for a small exponent.
Integer pow(const Integer& b, unsigned long e);
Rational pow(const Rational& b, unsigned long e);

}  // namespace puiseux
