#include <gtest/gtest.h>

#include <functional>
#include <random>

#include "isoresidual/stratum_core.hpp"

using namespace isoresidual;

namespace {

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorKind::BadInput;
}

}  // namespace

TEST(Signature, ValidAndInvalid) {
  EXPECT_EQ(make_signature(4, {2, 2, 2}).poles(), 3);
  EXPECT_EQ(make_signature(6, {2, 3, 3}).order(2), 3);
  EXPECT_EQ(kind_of([] { make_signature(4, {2, 2, 1}); }), ErrorKind::SumMismatch);
  EXPECT_EQ(kind_of([] { make_signature(1, {3, 0}); }), ErrorKind::BadOrder);
  EXPECT_EQ(kind_of([] { make_signature(0, {2}); }), ErrorKind::BadOrder);
  EXPECT_EQ(to_string(make_signature(6, {2, 3, 3})), "(6,[2,3,3])");
}

TEST(Resonance, Examples) {
  auto s = make_signature(4, {2, 2, 2});
  EXPECT_EQ(resonance_degree(s, PoleSubset::of({2}, 3)), (ResonanceDegree{1, 1}));
  auto t = make_signature(6, {2, 3, 3});
  EXPECT_EQ(resonance_degree(t, PoleSubset::of({1}, 3)), (ResonanceDegree{1, 1}));
  EXPECT_EQ(resonance_degree(t, Mask{0b110}).d, 5);
}

TEST(Resonance, ComplementIdentity) {
  for (int a = 1; a <= 7; ++a) {
    for (int p = 2; p <= 5 && p <= a + 2; ++p) {
      // one composition per (a, p): pile the excess on the first pole
      std::vector<int> b(static_cast<std::size_t>(p), 1);
      b[0] = a + 3 - p;
      auto sig = make_signature(a, b);
      for (Mask m = 1; m < full_mask(p); ++m) {
        auto x = resonance_degree(sig, m), y = resonance_degree(sig, full_mask(p) ^ m);
        EXPECT_EQ(x.d + y.d, a);
        EXPECT_EQ(x.c + y.c, p);
      }
      auto last = resonance_degree(sig, full_mask(p) ^ label_bit(p));
      EXPECT_EQ(last.c, p - 1);
      EXPECT_EQ(last.d, a + 1 - b.back());
    }
  }
}

TEST(Subsets, CanonicalOrder) {
  auto two = canonical_subsets(2);
  ASSERT_EQ(two.size(), 1u);
  EXPECT_EQ(to_string(two[0]), "{1}");
  auto three = canonical_subsets(3);
  ASSERT_EQ(three.size(), 3u);
  EXPECT_EQ(to_string(three[0]), "{1}");
  EXPECT_EQ(to_string(three[1]), "{2}");
  EXPECT_EQ(to_string(three[2]), "{1,2}");
  EXPECT_EQ(canonical_subsets(4).size(), 7u);
  EXPECT_EQ(PoleSubset::of({3}, 3), PoleSubset::of({1, 2}, 3));
  EXPECT_EQ(parse_subset("2,3", 3), PoleSubset::of({1}, 3));
}

TEST(SignFunctions, FromResidues) {
  auto psi = sign_function_of(parse_residues("1,-1/4,-3/4"));
  EXPECT_TRUE(psi.realizable());
  EXPECT_EQ(psi.at(0b001), Sign::Positive);
  EXPECT_EQ(psi.at(0b010), Sign::Negative);
  EXPECT_EQ(psi.at(0b100), Sign::Negative);
  EXPECT_EQ(psi.at(0b011), Sign::Positive);
  EXPECT_EQ(psi.at(0b101), Sign::Positive);

  auto wall = sign_function_of(parse_residues("1,0,-1"));
  EXPECT_EQ(wall.at(0b010), Sign::Zero);
  EXPECT_EQ(wall.at(0b101), Sign::Zero);
  EXPECT_EQ(wall.at(0b001), Sign::Positive);
  EXPECT_EQ(wall.at(0b100), Sign::Negative);
  EXPECT_FALSE(wall.nowhere_zero());
  ASSERT_EQ(wall.zero_set().size(), 1u);

  EXPECT_EQ(sign_function_of(parse_residues("1,-1")).key(), "+");
}

TEST(SignFunctions, ComplementIsNegated) {
  auto psi = sign_function_of(parse_residues("3,-1,-5,3"));
  for (Mask m = 1; m < full_mask(4); ++m) EXPECT_EQ(psi.at(m), negate(psi.at(full_mask(4) ^ m)));
}

TEST(SignFunctions, ConstantOnRaysAndNegation) {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> draw(-6, 6);
  for (int trial = 0; trial < 200; ++trial) {
    const int p = 2 + trial % 4;
    std::vector<Rational> lambda;
    Rational sum = 0;
    for (int j = 0; j + 1 < p; ++j) {
      lambda.emplace_back(draw(rng), 1 + (draw(rng) + 6) % 4);
      sum += lambda.back();
    }
    lambda.push_back(-sum);
    auto psi = sign_function_of(make_residues(lambda));
    auto scaled = lambda, negated = lambda;
    for (auto& x : scaled) x *= Rational(7, 3);
    for (auto& x : negated) x = -x;
    EXPECT_EQ(sign_function_of(make_residues(scaled)), psi);
    EXPECT_EQ(sign_function_of(make_residues(negated)), psi.negated());
  }
}

TEST(SignFunctions, ParsingForms) {
  auto psi = parse_sign_function("+-+", 3);
  EXPECT_EQ(psi.key(), "+-+");
  auto pairs = parse_sign_function("1=+;2=-;1,2=+", 3);
  EXPECT_EQ(pairs, psi);
  EXPECT_EQ(kind_of([] { parse_sign_function("1=+;2=-", 3); }), ErrorKind::BadInput);
  EXPECT_EQ(kind_of([] { parse_residues("1,1"); }), ErrorKind::BadInput);
  EXPECT_EQ(kind_of([] { parse_rational("1/0"); }), ErrorKind::BadInput);
  EXPECT_EQ(parse_rational(" -3/6 "), Rational(-1, 2));
}

TEST(SignFunctions, StandardFormHasOnePositiveRoot) {
  for (int p = 2; p <= 6; ++p) {
    auto psi = standard_sign_function(p);
    for (const auto& I : canonical_subsets(p)) EXPECT_EQ(psi(I) == Sign::Positive, I.contains(1));
  }
}
