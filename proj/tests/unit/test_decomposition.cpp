#include <gtest/gtest.h>

#include <random>

#include "puiseux/decomposition.hpp"
#include "support/oracles.hpp"

using namespace puiseux;

namespace {

Rational r(long a, long b = 1) { return make_rational(Integer(a), Integer(b)); }

const Member* as_member(const MembershipVerdict& v) { return std::get_if<Member>(&v); }
const NotMember* as_not(const MembershipVerdict& v) { return std::get_if<NotMember>(&v); }

AtomicDecomposition decompose_ok(const MonoidDescriptor& d, const Rational& q) {
  DecomposeResult res = atomic_decompose(d, q);
  if (!std::holds_alternative<AtomicDecomposition>(res))
    throw std::runtime_error(q.to_string() + " unexpectedly not a member");
  return std::get<AtomicDecomposition>(res);
}

std::vector<mpq_class> first_values(const MonoidDescriptor& d, Index count) {
  std::vector<mpq_class> out;
  for (Index n = d.first_index(); out.size() < count && d.has_index(n); ++n)
    out.push_back(generator_value(d, n).value());
  return out;
}

// The oracle's decomposition as library coefficients (1-based positions).
Coefficients to_coefficients(const oracle::Decomposition& d, Index first) {
  Coefficients c;
  for (std::size_t i = 0; i < d.zeta.size(); ++i)
    if (d.zeta[i]) c[first + i] = d.zeta[i];
  return c;
}

void expect_sound(const MonoidDescriptor& d, const Rational& q,
                  const MembershipVerdict& v) {
  if (const auto* m = as_member(v)) {
    EXPECT_EQ(combination_value(d, m->coefficients), q) << d.describe() << " " << q;
  } else if (const auto* nm = as_not(v)) {
    EXPECT_TRUE(verify_obstruction(d, *nm)) << d.describe() << " " << q << " "
                                            << to_string(nm->kind);
  }
}

}  // namespace

TEST(AtomicDecompose, Examples) {
  auto pr = MonoidDescriptor::prime_reciprocal();
  AtomicDecomposition a = decompose_ok(pr, r(7, 6));
  EXPECT_EQ(a.eta, 0);
  EXPECT_EQ(a.zeta, (Coefficients{{1, 1}, {2, 2}}));

  AtomicDecomposition two = decompose_ok(pr, r(2));
  EXPECT_EQ(two.eta, 2);
  EXPECT_TRUE(two.zeta.empty());

  DecomposeResult quarter = atomic_decompose(pr, r(1, 4));
  ASSERT_TRUE(std::holds_alternative<NotMember>(quarter));
  EXPECT_TRUE(verify_obstruction(pr, std::get<NotMember>(quarter)));

  DecomposeResult seventh = atomic_decompose(MonoidDescriptor::prime_reciprocal({3, 5}), r(1, 2));
  ASSERT_TRUE(std::holds_alternative<NotMember>(seventh));
  EXPECT_EQ(std::get<NotMember>(seventh).kind, Obstruction::denominator_support);
}

TEST(AtomicDecompose, UnsupportedWithoutClosedForm) {
  EXPECT_THROW(atomic_decompose(MonoidDescriptor::grams(2), r(1, 2)), UnsupportedError);
  EXPECT_THROW(atomic_decompose(MonoidDescriptor::gap(1), r(1, 2)), UnsupportedError);
  EXPECT_THROW(atomic_decompose(MonoidDescriptor::geometric(r(2, 3)), r(2)), UnsupportedError);
  EXPECT_FALSE(has_closed_form_decomposition(MonoidDescriptor::custom({r(1, 2), r(1, 4)})));
  EXPECT_TRUE(has_closed_form_decomposition(MonoidDescriptor::custom({r(1, 2), r(3, 5)})));
  EXPECT_TRUE(has_closed_form_decomposition(MonoidDescriptor::mixed_5_2(1)));
  EXPECT_FALSE(has_closed_form_decomposition(MonoidDescriptor::mixed_5_2(2)));
}

TEST(AtomicDecompose, MatchesBruteForceOnPrimeReciprocal) {
  auto pr = MonoidDescriptor::prime_reciprocal();
  auto gens = first_values(pr, 4);  // 1/2, 1/3, 1/5, 1/7
  std::mt19937_64 rng(3);
  for (int i = 0; i < 300; ++i) {
    long den = std::vector<long>{1, 2, 3, 5, 6, 7, 10, 14, 15, 21, 30, 35, 42, 70, 105, 210}[rng() % 16];
    Rational q = r(rng() % (3 * den), den);
    auto want = oracle::decompositions(gens, q.value());
    if (want.empty()) {
      // e.g. 1/21: the forced residues 1/3 + 5/7 overshoot by 1
      DecomposeResult res = atomic_decompose(pr, q);
      ASSERT_TRUE(std::holds_alternative<NotMember>(res)) << q;
      EXPECT_TRUE(verify_obstruction(pr, std::get<NotMember>(res))) << q;
      continue;
    }
    ASSERT_EQ(want.size(), 1u) << q;
    AtomicDecomposition got = decompose_ok(pr, q);
    EXPECT_EQ(got.eta, want[0].eta) << q;
    EXPECT_EQ(got.zeta, to_coefficients(want[0], 1)) << q;
    EXPECT_EQ(got.evaluate(pr), q);
  }
}

TEST(AtomicDecompose, CustomAlmostReciprocal) {
  // 3/4 + 2/9 style: numerators coprime to their denominators
  auto c = MonoidDescriptor::custom({r(3, 4), r(2, 9), r(5, 7)});
  auto gens = first_values(c, 3);
  for (long den : {1, 4, 9, 7, 36, 28, 63, 252})
    for (long a = 0; a < 3 * den; ++a) {
      Rational q = r(a, den);
      auto want = oracle::decompositions(gens, q.value());
      DecomposeResult got = atomic_decompose(c, q);
      if (!oracle::representable(gens, q.value())) {
        ASSERT_TRUE(std::holds_alternative<NotMember>(got)) << q;
        EXPECT_TRUE(verify_obstruction(c, std::get<NotMember>(got))) << q;
        continue;
      }
      ASSERT_TRUE(std::holds_alternative<AtomicDecomposition>(got)) << q;
      const auto& d = std::get<AtomicDecomposition>(got);
      ASSERT_EQ(want.size(), 1u) << q;
      EXPECT_EQ(d.eta, want[0].eta) << q;
      EXPECT_EQ(d.zeta, to_coefficients(want[0], 1)) << q;
    }
}

TEST(AtomicDecompose, CarryAccounting) {
  auto pr = MonoidDescriptor::prime_reciprocal();
  std::mt19937_64 rng(8);
  auto random_member = [&] {
    Coefficients c;
    for (Index i = 1; i <= 6; ++i) c[i] = rng() % 12;
    return combination_value(pr, c) + Rational(long(rng() % 3));
  };
  for (int i = 0; i < 300; ++i) {
    Rational a = random_member(), b = random_member();
    auto da = decompose_ok(pr, a), db = decompose_ok(pr, b), ds = decompose_ok(pr, a + b);
    EXPECT_GE(ds.eta, da.eta + db.eta);
    if (ds.eta == da.eta + db.eta) {
      Coefficients sum = da.zeta;
      for (const auto& [k, v] : db.zeta) sum[k] += v;
      EXPECT_EQ(compare_coefficients(ds.zeta, sum), 0);
    }
  }
}

TEST(Member, Examples) {
  auto grams = MonoidDescriptor::grams(2);
  MembershipVerdict half = member(grams, r(1, 2));
  ASSERT_TRUE(as_member(half));
  EXPECT_EQ(as_member(half)->coefficients, (Coefficients{{1, 3}}));

  MembershipVerdict ninth = member(grams, r(1, 9));
  ASSERT_TRUE(as_not(ninth));
  EXPECT_EQ(as_not(ninth)->kind, Obstruction::valuation);
  EXPECT_EQ(as_not(ninth)->prime, Integer(3));
  EXPECT_TRUE(verify_obstruction(grams, *as_not(ninth)));

  MembershipVerdict gap = member(MonoidDescriptor::gap(1), r(1, 2));
  ASSERT_TRUE(as_member(gap));
  EXPECT_EQ(as_member(gap)->coefficients, (Coefficients{{1, 3}}));

  MembershipVerdict zero = member(MonoidDescriptor::gap(2), Rational());
  EXPECT_TRUE(as_member(zero));
}

TEST(Member, NegativeRemainderIsCertified) {
  auto grams = MonoidDescriptor::grams(2);
  MembershipVerdict v = member(grams, r(7, 30));
  ASSERT_TRUE(as_not(v));
  EXPECT_EQ(as_not(v)->kind, Obstruction::negative_remainder);
  EXPECT_TRUE(verify_obstruction(grams, *as_not(v)));
  // A tampered certificate is caught.
  NotMember forged = *as_not(v);
  forged.subject = mpq_class(7, 15);
  EXPECT_FALSE(verify_obstruction(grams, forged));
}

TEST(Member, UnknownCarriesBounds) {
  SearchBounds b;
  b.max_index = 5;
  b.max_nodes = 20'000;
  MembershipVerdict v = member(MonoidDescriptor::gap(1), r(1, 10), b);
  if (const auto* u = std::get_if<Unknown>(&v)) {
    EXPECT_EQ(u->bounds.max_index, 5u);
    EXPECT_FALSE(u->detail.empty());
  } else {
    expect_sound(MonoidDescriptor::gap(1), r(1, 10), v);
  }
}

TEST(Member, GeometricAndPowerFamilies) {
  auto pw = MonoidDescriptor::power_reciprocal(2);
  EXPECT_TRUE(as_member(member(pw, r(3, 8))));
  EXPECT_TRUE(as_not(member(pw, r(1, 3))));
  auto geo = MonoidDescriptor::geometric(r(1, 3));
  EXPECT_TRUE(as_member(member(geo, r(5, 27))));
  EXPECT_TRUE(as_not(member(geo, r(1, 2))));
  auto two_thirds = MonoidDescriptor::geometric(r(2, 3));
  MembershipVerdict v = member(two_thirds, r(2));
  ASSERT_TRUE(as_member(v));
  expect_sound(two_thirds, r(2), v);
  expect_sound(two_thirds, r(1, 3), member(two_thirds, r(1, 3)));
}

TEST(Member, SoundOnRandomInputs) {
  std::mt19937_64 rng(21);
  SearchBounds b;
  b.max_nodes = 200'000;
  std::vector<MonoidDescriptor> descs = {
      MonoidDescriptor::prime_reciprocal(), MonoidDescriptor::grams(2),
      MonoidDescriptor::grams(3),           MonoidDescriptor::gap(1),
      MonoidDescriptor::gap(2),             MonoidDescriptor::mixed_5_2(3, {3, 5, 7}),
      MonoidDescriptor::power_reciprocal(6), MonoidDescriptor::geometric(r(2, 3)),
      MonoidDescriptor::custom({r(1, 2), r(1, 4), r(3, 5)}),
      scale(MonoidDescriptor::prime_reciprocal(), r(2, 7))};
  for (const auto& d : descs)
    for (int i = 0; i < 60; ++i) {
      long den = std::vector<long>{1, 2, 3, 4, 6, 8, 9, 12, 15, 20, 30, 56, 60, 63}[rng() % 14];
      Rational q = r(rng() % (2 * den), den);
      expect_sound(d, q, member(d, q, b));
    }
}

TEST(Member, ClosedFormAgreesWithExhaustiveSearch) {
  // Denominators built from the first six controlling primes.
  auto pr = MonoidDescriptor::prime_reciprocal();
  auto gens = first_values(pr, 6);
  std::mt19937_64 rng(99);
  const long primes[] = {2, 3, 5, 7, 11, 13};
  for (int i = 0; i < 200; ++i) {
    long den = 1;
    for (long p : primes)
      for (int e = rng() % 3; e > 0; --e) den *= p;
    long num = 1 + rng() % (den + 1);
    Rational q = r(num, den);
    bool want = oracle::representable(gens, q.value());
    MembershipVerdict got = member(pr, q);
    EXPECT_EQ(bool(as_member(got)), want) << q;
    EXPECT_EQ(bool(as_not(got)), !want) << q;
    expect_sound(pr, q, got);
  }
}

TEST(Member, ScaledDescriptor) {
  auto d = scale(MonoidDescriptor::prime_reciprocal(), r(3));
  EXPECT_TRUE(as_member(member(d, r(5, 2))));  // 3 * (1/2 + 1/3)
  EXPECT_TRUE(as_not(member(d, r(1, 2))));
}

TEST(Divides, Examples) {
  auto grams = MonoidDescriptor::grams(2);
  EXPECT_TRUE(as_member(divides(grams, r(1, 4), r(1, 2))));
  auto pr = MonoidDescriptor::prime_reciprocal();
  MembershipVerdict v = divides(pr, r(1, 2), r(5, 6));
  ASSERT_TRUE(as_member(v));
  EXPECT_EQ(as_member(v)->coefficients, (Coefficients{{2, 1}}));
  EXPECT_TRUE(as_member(divides(pr, Rational(), r(5, 6))));
  MembershipVerdict big = divides(pr, r(1), r(1, 2));
  ASSERT_TRUE(as_not(big));
  EXPECT_EQ(as_not(big)->kind, Obstruction::negative_remainder);
  EXPECT_TRUE(verify_obstruction(pr, *as_not(big)));
}

TEST(EnumerateDecompositions, PrimeReciprocal) {
  DecompositionList l = enumerate_decompositions(MonoidDescriptor::prime_reciprocal(), r(5, 6), 10);
  ASSERT_EQ(l.items.size(), 1u);
  EXPECT_EQ(l.items[0].eta, 0);
  EXPECT_EQ(l.items[0].zeta, (Coefficients{{1, 1}, {2, 1}}));
  EXPECT_TRUE(l.complete);
}

TEST(EnumerateDecompositions, ZeroHasOnlyTheEmptyDecomposition) {
  for (const auto& d : {MonoidDescriptor::prime_reciprocal(), MonoidDescriptor::grams(2),
                        MonoidDescriptor::geometric(r(2, 3)), MonoidDescriptor::gap(1)}) {
    DecompositionList l = enumerate_decompositions(d, Rational(), 5);
    ASSERT_EQ(l.items.size(), 1u) << d.describe();
    EXPECT_EQ(l.items[0].eta, 0);
    EXPECT_TRUE(l.items[0].zeta.empty());
  }
}

TEST(EnumerateDecompositions, GeometricMatchesBruteForce) {
  auto geo = MonoidDescriptor::geometric(r(2, 3));
  auto gens = first_values(geo, 6);  // q^0 .. q^5
  std::vector<mpq_class> non_unit(gens.begin() + 1, gens.end());
  for (const Rational& q : {r(2), r(1), r(5, 3), r(10, 9)}) {
    auto want = oracle::decompositions(non_unit, q.value());
    DecompositionList got = enumerate_decompositions(geo, q, 5);
    ASSERT_EQ(got.items.size(), want.size()) << q;
    for (std::size_t i = 0; i < want.size(); ++i) {
      EXPECT_EQ(got.items[i].eta, want[i].eta) << q;
      EXPECT_EQ(got.items[i].zeta, to_coefficients(want[i], 1)) << q;
      EXPECT_EQ(got.items[i].evaluate(geo), q);
    }
  }
  // Both decompositions from 2 = q + 3q^2 are among them.
  DecompositionList two = enumerate_decompositions(geo, r(2), 5);
  auto has = [&](long eta, Coefficients z) {
    return std::any_of(two.items.begin(), two.items.end(), [&](const auto& d) {
      return d.eta == eta && d.zeta == z;
    });
  };
  EXPECT_TRUE(has(2, {}));
  EXPECT_TRUE(has(0, {{1, 1}, {2, 3}}));
}

TEST(EnumerateDecompositions, GramsHasSeveral) {
  DecompositionList l = enumerate_decompositions(MonoidDescriptor::grams(2), r(1, 2), 4);
  auto gens = first_values(MonoidDescriptor::grams(2), 4);
  auto want = oracle::decompositions(gens, mpq_class(1, 2));
  ASSERT_EQ(l.items.size(), want.size());
  EXPECT_GE(l.items.size(), 2u);
  for (std::size_t i = 0; i < want.size(); ++i)
    EXPECT_EQ(l.items[i].zeta, to_coefficients(want[i], 1));
}
