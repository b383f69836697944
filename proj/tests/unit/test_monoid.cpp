#include <gtest/gtest.h>

#include <set>

#include "puiseux/monoid.hpp"

using namespace puiseux;

namespace {

Rational r(long a, long b = 1) { return make_rational(Integer(a), Integer(b)); }

std::vector<MonoidDescriptor> builtins() {
  return {MonoidDescriptor::prime_reciprocal(),
          MonoidDescriptor::prime_reciprocal({3, 7}),
          MonoidDescriptor::grams(2),
          MonoidDescriptor::grams(3),
          MonoidDescriptor::grams(6),
          MonoidDescriptor::gap(1),
          MonoidDescriptor::gap(2),
          MonoidDescriptor::geometric(r(2, 3)),
          MonoidDescriptor::geometric(r(2, 3), false),
          MonoidDescriptor::geometric(r(1, 4)),
          MonoidDescriptor::geometric(r(3, 2)),
          MonoidDescriptor::power_reciprocal(2),
          MonoidDescriptor::power_reciprocal(6),
          MonoidDescriptor::mixed_5_2(1),
          MonoidDescriptor::mixed_5_2(3, {3, 5, 7})};
}

std::vector<Rational> values(const MonoidDescriptor& d, Index count) {
  std::vector<Rational> out;
  for (Index n = d.first_index(); out.size() < count && d.has_index(n); ++n)
    out.push_back(generator_value(d, n));
  return out;
}

MonoidDescriptor alternating(std::vector<long> primes) {
  // (2 + (-1)^n) / p_n
  std::vector<Rational> terms;
  for (std::size_t i = 0; i < primes.size(); ++i)
    terms.push_back(r(i % 2 == 0 ? 1 : 3, primes[i]));
  return MonoidDescriptor::custom(terms);
}

}  // namespace

TEST(Generator, Examples) {
  GeneratorTerm pr = generator(MonoidDescriptor::prime_reciprocal(), 1);
  EXPECT_EQ(pr.value, r(1, 2));
  EXPECT_EQ(pr.controlling_prime, Integer(2));

  GeneratorTerm g = generator(MonoidDescriptor::grams(2), 2);
  EXPECT_EQ(g.value, r(1, 20));
  EXPECT_EQ(g.controlling_prime, Integer(5));

  GeneratorTerm geo = generator(MonoidDescriptor::geometric(r(2, 3)), 2);
  EXPECT_EQ(geo.value, r(4, 9));
  EXPECT_FALSE(geo.controlling_prime.has_value());
}

TEST(Generator, FamilyFormulas) {
  EXPECT_EQ(values(MonoidDescriptor::grams(3), 3),
            (std::vector<Rational>{r(1, 6), r(1, 45), r(1, 189)}));
  EXPECT_EQ(values(MonoidDescriptor::gap(1), 3),
            (std::vector<Rational>{r(1, 6), r(1, 15), r(1, 35)}));
  EXPECT_EQ(values(MonoidDescriptor::gap(2), 2),
            (std::vector<Rational>{r(1, 10), r(1, 21)}));
  EXPECT_EQ(values(MonoidDescriptor::geometric(r(2, 3)), 3),
            (std::vector<Rational>{r(1), r(2, 3), r(4, 9)}));
  EXPECT_EQ(values(MonoidDescriptor::geometric(r(2, 3), false), 2),
            (std::vector<Rational>{r(2, 3), r(4, 9)}));
  EXPECT_EQ(values(MonoidDescriptor::power_reciprocal(2), 3),
            (std::vector<Rational>{r(1, 2), r(1, 4), r(1, 8)}));
  EXPECT_EQ(values(MonoidDescriptor::mixed_5_2(3, {3, 5, 7}), 6),
            (std::vector<Rational>{r(1, 6), r(1, 20), r(1, 56), r(1, 11), r(1, 13),
                                   r(1, 17)}));
  EXPECT_EQ(values(MonoidDescriptor::prime_reciprocal({3, 7}), 4),
            (std::vector<Rational>{r(1, 3), r(1, 7), r(1, 11), r(1, 13)}));
}

TEST(Generator, IndexRange) {
  auto custom = MonoidDescriptor::custom({r(1, 2), r(1, 3)});
  EXPECT_EQ(custom.first_index(), 1u);
  EXPECT_EQ(custom.last_index(), std::optional<Index>(2));
  EXPECT_THROW(generator(custom, 3), std::out_of_range);
  EXPECT_THROW(generator(MonoidDescriptor::prime_reciprocal(), 0), std::out_of_range);
  EXPECT_EQ(MonoidDescriptor::geometric(r(2, 3)).first_index(), 0u);
}

TEST(Descriptor, RejectsInvalidParameters) {
  EXPECT_THROW(MonoidDescriptor::grams(1), std::invalid_argument);
  EXPECT_THROW(MonoidDescriptor::grams(2, {3, 4}), std::invalid_argument);
  EXPECT_THROW(MonoidDescriptor::grams(2, {2, 3}), std::invalid_argument);
  EXPECT_THROW(MonoidDescriptor::prime_reciprocal({5, 3}), std::invalid_argument);
  EXPECT_THROW(MonoidDescriptor::gap(0), std::invalid_argument);
  EXPECT_THROW(MonoidDescriptor::geometric(r(2)), std::invalid_argument);
  EXPECT_THROW(MonoidDescriptor::geometric(Rational()), std::invalid_argument);
  EXPECT_THROW(MonoidDescriptor::power_reciprocal(1), std::invalid_argument);
  EXPECT_THROW(MonoidDescriptor::mixed_5_2(0), std::invalid_argument);
  EXPECT_THROW(MonoidDescriptor::mixed_5_2(2, {2, 3}), std::invalid_argument);
  EXPECT_THROW(MonoidDescriptor::custom({}), std::invalid_argument);
  EXPECT_THROW(MonoidDescriptor::custom({r(1, 2), Rational()}), std::invalid_argument);
}

TEST(Descriptor, StructuralEquality) {
  EXPECT_EQ(MonoidDescriptor::grams(2), MonoidDescriptor::grams(2));
  EXPECT_NE(MonoidDescriptor::grams(2), MonoidDescriptor::grams(3));
  EXPECT_NE(MonoidDescriptor::gap(1), MonoidDescriptor::gap(1, {2, 5}));
  EXPECT_EQ(MonoidDescriptor::grams(2).describe(), "grams(base=2)");
  EXPECT_EQ(MonoidDescriptor::custom({r(1, 2), r(1, 3)}).describe(), "custom[1/2, 1/3]");
}

TEST(IndexSetForPrime, Examples) {
  IndexSet pr = index_set_for_prime(MonoidDescriptor::prime_reciprocal(), 7);
  EXPECT_EQ(pr.kind, IndexSet::Kind::exact);
  EXPECT_EQ(pr.indices, std::vector<Index>{4});

  EXPECT_EQ(index_set_for_prime(MonoidDescriptor::grams(2), 2).kind, IndexSet::Kind::all);

  IndexSet gap = index_set_for_prime(MonoidDescriptor::gap(1), 3);  // p_2
  EXPECT_EQ(gap.kind, IndexSet::Kind::exact);
  EXPECT_EQ(gap.indices, (std::vector<Index>{1, 2}));

  EXPECT_TRUE(index_set_for_prime(MonoidDescriptor::grams(2), 13).indices ==
              std::vector<Index>{5});
  EXPECT_TRUE(index_set_for_prime(MonoidDescriptor::prime_reciprocal({3, 7}), 5)
                  .indices.empty());
  EXPECT_EQ(index_set_for_prime(MonoidDescriptor::mixed_5_2(3), 2).indices,
            (std::vector<Index>{1, 2, 3}));
}

TEST(ControllingPrime, DividesOnlyItsOwnDenominator) {
  for (const auto& d : builtins()) {
    if (!is_controlled(d)) continue;
    auto gens = values(d, 400);
    for (Index i = 0; i < 200; ++i) {
      GeneratorTerm t = generator(d, d.first_index() + i);
      ASSERT_TRUE(t.controlling_prime) << d.describe() << " n=" << t.index;
      const Integer& p = *t.controlling_prime;
      ASSERT_EQ(t.value.den() % p, 0);
      for (Index j = 0; j < gens.size(); ++j)
        if (j != i) ASSERT_NE(gens[j].den() % p, 0) << d.describe();
      ASSERT_EQ(index_controlled_by(d, p), std::optional<Index>(t.index));
    }
  }
}

TEST(Controlled, Families) {
  EXPECT_TRUE(is_controlled(MonoidDescriptor::prime_reciprocal()));
  EXPECT_TRUE(is_controlled(MonoidDescriptor::grams(2)));
  EXPECT_TRUE(is_controlled(MonoidDescriptor::mixed_5_2(3)));
  EXPECT_FALSE(is_controlled(MonoidDescriptor::gap(1)));
  EXPECT_FALSE(is_controlled(MonoidDescriptor::geometric(r(2, 3))));
  EXPECT_FALSE(is_controlled(MonoidDescriptor::power_reciprocal(2)));
  EXPECT_TRUE(is_controlled(MonoidDescriptor::custom({r(1, 2), r(3, 5)})));
  EXPECT_FALSE(is_controlled(MonoidDescriptor::custom({r(1, 2), r(1, 4)})));
}

TEST(Classify, Examples) {
  ClassificationReport g = classify(MonoidDescriptor::grams(2));
  EXPECT_EQ(g.weak_reciprocal.value, Tri::yes);
  EXPECT_EQ(g.reciprocal.value, Tri::no);
  EXPECT_EQ(g.almost_reciprocal.value, Tri::no);
  EXPECT_EQ(g.strongly_bounded.value, Tri::yes);
  EXPECT_EQ(g.bounded.value, Tri::yes);
  EXPECT_EQ(g.atomic.value, Tri::yes);
  EXPECT_EQ(g.uad.value, Tri::no);
  EXPECT_NE(g.uad.why.find("3·(1/6)"), std::string::npos);
  EXPECT_NE(g.uad.why.find("10·(1/20)"), std::string::npos);

  ClassificationReport pr = classify(MonoidDescriptor::prime_reciprocal());
  EXPECT_EQ(pr.reciprocal.value, Tri::yes);
  EXPECT_EQ(pr.atomic.value, Tri::yes);
  EXPECT_EQ(pr.uad.value, Tri::yes);

  ClassificationReport pw = classify(MonoidDescriptor::power_reciprocal(2));
  EXPECT_EQ(pw.weak_reciprocal.value, Tri::yes);
  EXPECT_EQ(pw.atomic.value, Tri::no);

  ClassificationReport geo = classify(MonoidDescriptor::geometric(r(2, 3)));
  EXPECT_EQ(geo.uad.value, Tri::no);
  EXPECT_EQ(geo.strongly_bounded.value, Tri::no);

  ClassificationReport up = classify(MonoidDescriptor::geometric(r(3, 2)));
  EXPECT_EQ(up.bounded.value, Tri::no);
}

TEST(Classify, CustomListsAreTruncationOnly) {
  ClassificationReport c = classify(MonoidDescriptor::custom({r(1, 2), r(1, 4)}));
  EXPECT_EQ(c.reciprocal.value, Tri::no);
  EXPECT_EQ(c.almost_reciprocal.value, Tri::no);
  EXPECT_EQ(c.reciprocal.why.rfind("truncation-only", 0), 0u);
  ClassificationReport a = classify(alternating({5, 7, 11, 13}));
  EXPECT_EQ(a.almost_reciprocal.value, Tri::yes);
  EXPECT_EQ(a.weak_reciprocal.value, Tri::no);
  EXPECT_EQ(a.atomic.value, Tri::yes);
}

TEST(Classify, ImplicationChainOnEveryBuiltin) {
  for (const auto& d : builtins()) {
    ClassificationReport c = classify(d);
    EXPECT_TRUE(c.satisfies_implication_chain()) << d.describe();
  }
}

TEST(Classify, FlagsHoldOnScannedGenerators) {
  for (const auto& d : builtins()) {
    ClassificationReport c = classify(d);
    auto gens = values(d, 200);
    if (c.weak_reciprocal.value == Tri::yes || c.reciprocal.value == Tri::yes) {
      // distinct unit fractions, so some ordering has increasing denominators
      std::set<Integer> dens;
      for (const auto& g : gens) {
        ASSERT_EQ(g.num(), 1) << d.describe();
        dens.insert(g.den());
      }
      ASSERT_EQ(dens.size(), gens.size()) << d.describe();
    }
    if (c.reciprocal.value == Tri::yes || c.almost_reciprocal.value == Tri::yes) {
      for (std::size_t i = 0; i < gens.size(); ++i)
        for (std::size_t j = i + 1; j < gens.size(); ++j)
          ASSERT_EQ(gcd(gens[i].den(), gens[j].den()), 1) << d.describe();
    }
    if (c.strongly_bounded.value == Tri::yes) {
      Integer top = 0;
      for (const auto& g : gens) top = std::max(top, g.num());
      ASSERT_LE(top, 1) << d.describe();
    }
  }
}

TEST(Normalize, Examples) {
  auto [m, d] = normalize_strongly_bounded(alternating({3, 5, 7, 11}));
  EXPECT_EQ(m, 3);
  EXPECT_EQ(values(d, 4), (std::vector<Rational>{r(1, 9), r(1, 5), r(1, 21), r(1, 11)}));

  auto [m1, d1] = normalize_strongly_bounded(MonoidDescriptor::prime_reciprocal());
  EXPECT_EQ(m1, 1);
  EXPECT_EQ(d1, MonoidDescriptor::prime_reciprocal());

  auto [m2, d2] = normalize_strongly_bounded(MonoidDescriptor::custom({r(3, 4), r(9, 5)}));
  EXPECT_EQ(m2, 9);
  EXPECT_EQ(values(d2, 2), (std::vector<Rational>{r(1, 12), r(1, 5)}));

  EXPECT_THROW(normalize_strongly_bounded(MonoidDescriptor::geometric(r(2, 3))),
               UnsupportedError);
}

TEST(Normalize, OutputIsWeakReciprocal) {
  for (const auto& d :
       {alternating({3, 5, 7, 11}), alternating({5, 7, 11, 13, 17, 19}),
        MonoidDescriptor::custom({r(3, 4), r(9, 5)}), MonoidDescriptor::grams(2),
        MonoidDescriptor::prime_reciprocal()}) {
    auto [m, n] = normalize_strongly_bounded(d);
    for (const auto& g : values(n, 50)) EXPECT_EQ(g.num(), 1) << d.describe();
    if (n.is_finite()) {
      // Distinct unit fractions listed in increasing denominator order.
      auto sorted = values(n, 50);
      std::sort(sorted.begin(), sorted.end(), std::greater<>());
      auto [m2, sorted_desc] =
          normalize_strongly_bounded(MonoidDescriptor::custom(sorted));
      EXPECT_EQ(m2, 1);
      EXPECT_EQ(classify(sorted_desc).weak_reciprocal.value, Tri::yes) << d.describe();
    } else {
      EXPECT_EQ(classify(n).weak_reciprocal.value, Tri::yes) << d.describe();
    }
    // m * desc' generates the same values as desc
    auto original = values(d, 50);
    auto rescaled = values(scale(n, Rational(m)), 50);
    EXPECT_EQ(original, rescaled) << d.describe();
  }
}

TEST(Scale, Examples) {
  EXPECT_EQ(scale(MonoidDescriptor::prime_reciprocal(), r(1)),
            MonoidDescriptor::prime_reciprocal());
  EXPECT_EQ(values(scale(MonoidDescriptor::custom({r(1, 2), r(1, 3)}), r(6)), 2),
            (std::vector<Rational>{r(3), r(2)}));
  EXPECT_EQ(values(scale(MonoidDescriptor::custom({r(3, 4)}), r(1, 3)), 1),
            std::vector<Rational>{r(1, 4)});
  EXPECT_THROW(scale(MonoidDescriptor::grams(2), Rational()), std::domain_error);
}

TEST(Scale, RoundTripReproducesGenerators) {
  for (const auto& d : builtins())
    for (const Rational& s : {r(6), r(1, 3), r(5, 7)}) {
      auto back = scale(scale(d, s), Rational(1) / s);
      EXPECT_EQ(values(back, 200), values(d, 200)) << d.describe();
      EXPECT_EQ(values(scale(d, s), 1).front(), values(d, 1).front() * s);
    }
}

TEST(CombinationValue, EvaluatesAndValidates) {
  auto pr = MonoidDescriptor::prime_reciprocal();
  EXPECT_EQ(combination_value(pr, {{1, 1}, {2, 2}}), r(7, 6));
  EXPECT_EQ(combination_value(pr, {}), Rational());
  EXPECT_THROW(combination_value(pr, {{1, -1}}), std::domain_error);
  EXPECT_THROW(combination_value(MonoidDescriptor::custom({r(1, 2)}), {{2, 1}}),
               std::out_of_range);
}

TEST(CompareCoefficients, DenseLexicographic) {
  EXPECT_EQ(compare_coefficients({{1, 1}}, {{1, 1}, {2, 0}}), 0);
  EXPECT_LT(compare_coefficients({{2, 5}}, {{1, 1}}), 0);
  EXPECT_GT(compare_coefficients({{1, 2}}, {{1, 1}, {3, 9}}), 0);
}
