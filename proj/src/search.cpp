#include "search.hpp"

#include <algorithm>
#include <climits>
#include <set>
#include <string>
#include <unordered_set>

namespace puiseux::detail {

namespace {

constexpr long kInfinity = LONG_MAX;

long valuation(const mpq_class& q, const Integer& p) {
  if (sgn(q) == 0) return kInfinity;
  Integer tmp;
  long up = static_cast<long>(
      mpz_remove(tmp.get_mpz_t(), q.get_num_mpz_t(), p.get_mpz_t()));
  long down = static_cast<long>(
      mpz_remove(tmp.get_mpz_t(), q.get_den_mpz_t(), p.get_mpz_t()));
  return up - down;
}

mpq_class power_of(const Integer& p, long e) {
  mpq_class out;
  Integer pe = pow(p, static_cast<unsigned long>(e < 0 ? -e : e));
  if (e >= 0)
    out = mpq_class(pe);
  else
    out = mpq_class(Integer(1), pe);
  out.canonicalize();
  return out;
}

// p-integral rational modulo m (den coprime to m).
Integer reduce_mod(const mpq_class& q, const Integer& m) {
  auto inv = mod_inverse(Integer(q.get_den()), m);
  if (!inv) throw std::logic_error("denominator not invertible");
  return mod_floor(Integer(q.get_num()) * *inv, m);
}

struct Constraint {
  Integer p;
  long t = 0;        // v_p(g_k)
  Integer modulus;   // p^(suffix - t)
  Integer unit_inv;  // (g_k / p^t)^-1 mod modulus
};

class Searcher {
 public:
  explicit Searcher(const SearchSpec& spec) : spec_(spec) {}

  SearchOutcome run() {
    const auto& items = spec_.items;
    const std::size_t n = items.size();
    for (const auto& it : items)
      if (it.value.is_zero())
        throw std::invalid_argument("search item with zero value");

    std::set<Integer> primes;
    for (const auto& p : prime_divisors(spec_.target.den())) primes.insert(p);
    for (const auto& it : items) {
      for (const auto& p : prime_divisors(it.value.den())) primes.insert(p);
      for (const auto& p : prime_divisors(it.value.num())) primes.insert(p);
    }

    constraints_.assign(n, {});
    bool feasible = true;
    mpq_class target = spec_.target.value();
    for (const auto& p : primes) {
      std::vector<long> v(n);
      for (std::size_t k = 0; k < n; ++k) v[k] = valuation(items[k].value.value(), p);
      std::vector<long> suf(n + 1);
      suf[n] = spec_.integer_tail ? 0 : kInfinity;
      for (std::size_t k = n; k-- > 0;) suf[k] = std::min(v[k], suf[k + 1]);
      if (sgn(target) != 0 && valuation(target, p) < suf[0]) feasible = false;
      for (std::size_t k = 0; k < n; ++k) {
        if (suf[k + 1] == kInfinity || v[k] >= suf[k + 1]) continue;
        Constraint c;
        c.p = p;
        c.t = v[k];
        c.modulus = pow(p, static_cast<unsigned long>(suf[k + 1] - v[k]));
        mpq_class unit = items[k].value.value() / power_of(p, v[k]);
        unit.canonicalize();
        auto inv = mod_inverse(reduce_mod(unit, c.modulus), c.modulus);
        c.unit_inv = *inv;
        constraints_[k].push_back(std::move(c));
      }
    }

    suffix_min_.assign(n + 1, mpq_class(0));
    suffix_max_.assign(n + 1, mpq_class(0));
    for (std::size_t k = n; k-- > 0;) {
      const mpq_class& g = items[k].value.value();
      suffix_min_[k] = (k + 1 == n) ? g : std::min(g, suffix_min_[k + 1]);
      suffix_max_[k] = (k + 1 == n) ? g : std::max(g, suffix_max_[k + 1]);
    }

    current_.assign(n, Integer(0));
    if (feasible) {
      try {
        dfs(0, target, static_cast<long>(spec_.length));
      } catch (const Stop&) {
      }
    }
    return std::move(out_);
  }

 private:
  struct Stop {};

  bool length_limited() const {
    return spec_.length_mode != LengthMode::none;
  }

  void record(const mpq_class& tail) {
    SearchSolution s;
    for (std::size_t k = 0; k < current_.size(); ++k)
      if (sgn(current_[k]) > 0) s.coefficients[spec_.items[k].index] += current_[k];
    s.tail = Integer(tail.get_num());
    out_.solutions.push_back(std::move(s));
    if (out_.solutions.size() >= spec_.max_solutions) {
      out_.stopped_early = true;
      throw Stop{};
    }
  }

  std::string key(std::size_t k, const mpq_class& r, long rem) const {
    return std::to_string(k) + ":" + std::to_string(rem) + ":" + r.get_str();
  }

  // Returns true when a solution was recorded below this node.
  bool dfs(std::size_t k, const mpq_class& r, long rem) {
    const std::size_t n = spec_.items.size();
    if (k == n) {
      if (spec_.length_mode == LengthMode::exact && rem != 0) return false;
      if (spec_.integer_tail ? r.get_den() == 1 : sgn(r) == 0) {
        record(r);
        return true;
      }
      return false;
    }
    if (++out_.nodes > spec_.max_nodes) {
      out_.budget_exhausted = true;
      throw Stop{};
    }
    if (sgn(r) == 0) {
      if (spec_.length_mode == LengthMode::exact && rem != 0) return false;
      for (std::size_t j = k; j < n; ++j) current_[j] = 0;
      record(r);
      return true;
    }
    if (length_limited() && !spec_.integer_tail) {
      if (r > suffix_max_[k] * rem) return false;
      if (spec_.length_mode == LengthMode::exact && r < suffix_min_[k] * rem)
        return false;
    }
    std::string memo_key = key(k, r, rem);
    if (dead_.count(memo_key)) return false;

    const SearchItem& item = spec_.items[k];
    const mpq_class& g = item.value.value();
    mpq_class ratio = r / g;
    Integer top = Integer(ratio.get_num()) / Integer(ratio.get_den());
    if (item.hard_cap && *item.hard_cap < top) top = *item.hard_cap;
    if (length_limited() && top > rem) top = rem;
    if (spec_.soft_cap && *spec_.soft_cap < top) {
      top = *spec_.soft_cap;
      out_.soft_cap_hit = true;
    }

    bool found = false;
    bool last_exact = (k + 1 == n) && !spec_.integer_tail;
    if (last_exact) {
      if (ratio.get_den() == 1 && Integer(ratio.get_num()) <= top) {
        current_[k] = ratio.get_num();
        long left = rem - (length_limited() ? current_[k].get_si() : 0);
        found = dfs(k + 1, mpq_class(0), left);
        current_[k] = 0;
      }
    } else {
      // Combine the residue classes forced by each constraint prime.
      Integer x = 0, m = 1;
      for (const auto& c : constraints_[k]) {
        mpq_class shifted = r / power_of(c.p, c.t);
        shifted.canonicalize();
        Integer xp = mod_floor(reduce_mod(shifted, c.modulus) * c.unit_inv,
                               c.modulus);
        // x + m*s == xp (mod modulus)
        Integer s = mod_floor((xp - x) * *mod_inverse(m, c.modulus), c.modulus);
        x += m * s;
        m *= c.modulus;
      }
      for (Integer a = x; a <= top; a += m) {
        current_[k] = a;
        mpq_class next = r - mpq_class(a) * g;
        long left = rem - (length_limited() ? a.get_si() : 0);
        if (dfs(k + 1, next, left)) found = true;
      }
      current_[k] = 0;
    }
    if (!found) dead_.insert(std::move(memo_key));
    return found;
  }

  const SearchSpec& spec_;
  std::vector<std::vector<Constraint>> constraints_;
  std::vector<mpq_class> suffix_min_, suffix_max_;
  std::vector<Integer> current_;
  std::unordered_set<std::string> dead_;
  SearchOutcome out_;
};

}  // namespace

SearchOutcome search(const SearchSpec& spec) {
  if (spec.length_mode != LengthMode::none &&
      spec.length > static_cast<unsigned long>(LONG_MAX / 2))
    throw std::out_of_range("length bound too large");
  return Searcher(spec).run();
}

Integer residue_of(const Rational& r, const Integer& modulus) {
  return reduce_mod(r.value(), modulus);
}

}  // namespace puiseux::detail
