#pragma once

// Deterministic prime sieve shared by all builtin families, plus the prime
// sequences (p_n) that index them.

#include <cstddef>
#include <memory>
#include <mutex>
#include <vector>

#include "puiseux/exact_arith.hpp"

namespace puiseux {

struct Sieve {
  unsigned long limit = 0;
  std::vector<bool> composite;
  std::vector<unsigned long> primes;
};

/// Process-wide sieve of Eratosthenes that only ever grows. Readers work on
/// immutable snapshots, so a snapshot stays valid while another thread
/// extends the table.
class PrimeTable {
 public:
  static PrimeTable& instance();

  /// Hard cap on the sieve; lookups past it report "beyond limit".
  static constexpr unsigned long max_limit() { return 50'000'000; }

  /// Snapshot covering at least min(bound, max_limit()).
  std::shared_ptr<const Sieve> covering(unsigned long bound) const;
  /// Snapshot holding at least n primes. Throws std::range_error past the cap.
  std::shared_ptr<const Sieve> with_count(std::size_t n) const;

  /// n-th prime, 1-indexed (prime(1) == 2).
  unsigned long prime(std::size_t n) const;
  /// pi(p) when p is prime; nullopt otherwise. Requires p <= max_limit().
  std::optional<std::size_t> index_of(unsigned long p) const;
  bool is_prime(unsigned long n) const;

 private:
  PrimeTable();
  std::shared_ptr<const Sieve> current() const;
  void grow(unsigned long bound) const;

  mutable std::mutex mu_;
  mutable std::shared_ptr<const Sieve> sieve_;
};

/// Outcome of locating a prime inside a sequence.
struct PrimeLookup {
  enum class Kind { found, absent, beyond_limit };
  Kind kind = Kind::absent;
  std::size_t index = 0;  // 1-based, meaningful when found

  static PrimeLookup found_at(std::size_t i) { return {Kind::found, i}; }
  static PrimeLookup absent() { return {Kind::absent, 0}; }
  static PrimeLookup beyond_limit() { return {Kind::beyond_limit, 0}; }
};

/// Strictly increasing prime sequence p_1 < p_2 < ...: an explicit prefix
/// (possibly empty) followed by every larger prime coprime to `coprime_to`.
class PrimeSequence {
 public:
  PrimeSequence() = default;
  explicit PrimeSequence(unsigned long coprime_to,
                         std::vector<unsigned long> prefix = {});

  /// p_n, 1-indexed.
  unsigned long at(std::size_t n) const;
  PrimeLookup index_of(const Integer& p) const;

  const std::vector<unsigned long>& prefix() const { return prefix_; }
  unsigned long coprime_to() const { return coprime_to_; }

  friend bool operator==(const PrimeSequence&, const PrimeSequence&) = default;

 private:
  // Position of p among primes coprime to coprime_to_ (p assumed admissible).
  std::size_t filtered_rank(unsigned long p) const;
  unsigned long nth_filtered(std::size_t j) const;
  bool admissible(unsigned long p) const { return coprime_to_ % p != 0; }

  unsigned long coprime_to_ = 1;
  std::vector<unsigned long> prefix_;
};

}  // namespace puiseux
