#include "puiseux/primes.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace puiseux {

namespace {

std::shared_ptr<const Sieve> build_sieve(unsigned long limit) {
  auto s = std::make_shared<Sieve>();
  s->limit = limit;
  s->composite.assign(limit + 1, false);
  s->composite[0] = true;
  if (limit >= 1) s->composite[1] = true;
  for (unsigned long i = 2; i * i <= limit; ++i) {
    if (s->composite[i]) continue;
    for (unsigned long j = i * i; j <= limit; j += i) s->composite[j] = true;
  }
  for (unsigned long i = 2; i <= limit; ++i)
    if (!s->composite[i]) s->primes.push_back(i);
  return s;
}

}  // namespace

PrimeTable& PrimeTable::instance() {
  static PrimeTable table;
  return table;
}

PrimeTable::PrimeTable() : sieve_(build_sieve(1 << 16)) {}

std::shared_ptr<const Sieve> PrimeTable::current() const {
  std::lock_guard<std::mutex> lock(mu_);
  return sieve_;
}

void PrimeTable::grow(unsigned long bound) const {
  bound = std::min(bound, max_limit());
  std::lock_guard<std::mutex> lock(mu_);
  if (sieve_->limit >= bound) return;
  unsigned long next = sieve_->limit;
  while (next < bound) next = std::min(next * 2, max_limit());
  sieve_ = build_sieve(next);
}

std::shared_ptr<const Sieve> PrimeTable::covering(unsigned long bound) const {
  auto s = current();
  if (s->limit >= std::min(bound, max_limit())) return s;
  grow(bound);
  return current();
}

std::shared_ptr<const Sieve> PrimeTable::with_count(std::size_t n) const {
  auto s = current();
  while (s->primes.size() < n) {
    if (s->limit >= max_limit())
      throw std::range_error("prime index beyond the sieve limit");
    grow(s->limit * 2);
    s = current();
  }
  return s;
}

unsigned long PrimeTable::prime(std::size_t n) const {
  if (n == 0) throw std::out_of_range("prime indices start at 1");
  return with_count(n)->primes[n - 1];
}

std::optional<std::size_t> PrimeTable::index_of(unsigned long p) const {
  if (p > max_limit()) throw std::range_error("prime beyond the sieve limit");
  auto s = covering(p);
  if (s->composite[p]) return std::nullopt;
  auto it = std::lower_bound(s->primes.begin(), s->primes.end(), p);
  return static_cast<std::size_t>(it - s->primes.begin()) + 1;
}

bool PrimeTable::is_prime(unsigned long n) const {
  if (n > max_limit())
    return mpz_probab_prime_p(Integer(n).get_mpz_t(), 40) > 0;
  return !covering(n)->composite[n];
}

PrimeSequence::PrimeSequence(unsigned long coprime_to,
                             std::vector<unsigned long> prefix)
    : coprime_to_(coprime_to == 0 ? 1 : coprime_to),
      prefix_(std::move(prefix)) {
  for (std::size_t i = 0; i < prefix_.size(); ++i) {
    if (!puiseux::is_prime(Integer(prefix_[i])))
      throw std::invalid_argument("prime override contains non-prime " +
                                  std::to_string(prefix_[i]));
    if (i > 0 && prefix_[i] <= prefix_[i - 1])
      throw std::invalid_argument("prime override must be strictly increasing");
  }
}

std::size_t PrimeSequence::filtered_rank(unsigned long p) const {
  const auto& table = PrimeTable::instance();
  std::size_t rank = *table.index_of(p);
  for (const auto& r : prime_divisors(Integer(coprime_to_)))
    if (r <= p) --rank;
  return rank;
}

unsigned long PrimeSequence::nth_filtered(std::size_t j) const {
  const auto& table = PrimeTable::instance();
  const auto excluded = prime_divisors(Integer(coprime_to_));
  // rank(prime(i)) = i - #{excluded <= prime(i)} <= i, so start at i = j.
  for (std::size_t i = j;; ++i) {
    unsigned long p = table.prime(i);
    if (!admissible(p)) continue;
    std::size_t skipped = static_cast<std::size_t>(
        std::count_if(excluded.begin(), excluded.end(),
                      [p](const Integer& r) { return r <= p; }));
    if (i - skipped == j) return p;
  }
}

unsigned long PrimeSequence::at(std::size_t n) const {
  if (n == 0) throw std::out_of_range("sequence indices start at 1");
  if (n <= prefix_.size()) return prefix_[n - 1];
  // Admissible primes up to the last explicit entry are already consumed.
  std::size_t base = prefix_.empty() ? 0 : filtered_rank(prefix_.back());
  return nth_filtered(base + (n - prefix_.size()));
}

PrimeLookup PrimeSequence::index_of(const Integer& p) const {
  for (std::size_t i = 0; i < prefix_.size(); ++i)
    if (p == prefix_[i]) return PrimeLookup::found_at(i + 1);
  if (!prefix_.empty() && p <= prefix_.back()) return PrimeLookup::absent();
  if (!p.fits_ulong_p() || p.get_ui() > PrimeTable::max_limit())
    return PrimeLookup::beyond_limit();
  unsigned long pv = p.get_ui();
  if (!puiseux::is_prime(p) || !admissible(pv)) return PrimeLookup::absent();
  std::size_t base = prefix_.empty() ? 0 : filtered_rank(prefix_.back());
  return PrimeLookup::found_at(prefix_.size() + filtered_rank(pv) - base);
}

}  // namespace puiseux
