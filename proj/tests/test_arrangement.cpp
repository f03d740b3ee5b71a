#include <gtest/gtest.h>

#include <set>

#include "isoresidual/arrangement.hpp"

using namespace isoresidual;

TEST(SamplePoint, RealizesTheSigns) {
  auto psi = sign_function_of(parse_residues("1,-1/4,-3/4"));
  auto w = sample_point(psi);
  EXPECT_EQ(sign_function_of(w), psi);

  EXPECT_FALSE(try_sample_point(SignFunction::from_key(3, "++-")).has_value());
  EXPECT_THROW(sample_point(SignFunction::from_key(3, "++-")), Error);

  auto zero = try_sample_point(SignFunction::from_key(2, "0"));
  ASSERT_TRUE(zero.has_value());
  EXPECT_EQ(zero->lambda, (std::vector<Rational>{0, 0}));
}

TEST(SamplePoint, RoundTripsEveryChamberAndFacet) {
  for (int p = 2; p <= 5; ++p) {
    const auto G = chamber_graph(p);
    for (const auto& c : G->chambers()) {
      EXPECT_EQ(sign_function_of(c.witness), c.psi);
      EXPECT_EQ(sign_function_of(sample_point(c.psi)), c.psi);
    }
    if (p > 4) continue;
    for (std::size_t i = 0; i < G->size(); ++i) {
      for (const auto& W : G->walls(i)) {
        auto face = G->chamber(i).psi.with(W, Sign::Zero);
        EXPECT_EQ(sign_function_of(sample_point(face)), face);
      }
    }
  }
}

TEST(Walls, SmallPoleCounts) {
  auto two = chamber_graph(2);
  ASSERT_EQ(two->size(), 2u);
  EXPECT_EQ(two->edge_count(), 1u);
  EXPECT_EQ(chamber_walls(two->chamber(0)).size(), 1u);

  auto three = chamber_graph(3);
  ASSERT_EQ(three->size(), 6u);
  EXPECT_EQ(three->edge_count(), 6u);
  for (std::size_t i = 0; i < three->size(); ++i) {
    EXPECT_EQ(three->adjacent(i).size(), 2u);  // a 6-cycle
    EXPECT_TRUE(is_simplicial(three->chamber(i)));
  }
}

TEST(Walls, ChamberCountsAndConnectivity) {
  const std::vector<std::size_t> counts{2, 6, 32, 370};
  for (int p = 2; p <= 5; ++p) {
    const auto G = chamber_graph(p);
    EXPECT_EQ(G->size(), counts[static_cast<std::size_t>(p - 2)]);
    EXPECT_TRUE(G->is_connected());
  }
  EXPECT_THROW(chamber_graph(6), Error);
}

TEST(Walls, NegationIsASymmetry) {
  for (int p = 2; p <= 5; ++p) {
    const auto G = chamber_graph(p);
    for (std::size_t i = 0; i < G->size(); ++i) {
      auto j = G->find(G->chamber(i).psi.negated());
      ASSERT_TRUE(j.has_value());
      std::set<Mask> wi, wj;
      for (const auto& W : G->walls(i)) wi.insert(W.mask());
      for (const auto& W : G->walls(*j)) wj.insert(W.mask());
      EXPECT_EQ(wi, wj);
    }
  }
}

TEST(Walls, AdjacentChambersDifferOnTheirWallOnly) {
  for (int p = 2; p <= 5; ++p) {
    const auto G = chamber_graph(p);
    for (std::size_t i = 0; i < G->size(); ++i) {
      for (const auto& a : G->adjacent(i)) {
        const auto& x = G->chamber(i).psi;
        const auto& y = G->chamber(a.neighbor).psi;
        for (const auto& I : canonical_subsets(p)) EXPECT_EQ(x(I) != y(I), I == a.wall);
      }
    }
  }
}

// z1, z2, z1+z2, z1+z3, z1+z4, -z3, -z4 > 0 with z1+..+z4 = 0.
TEST(Simplicial, FourPoleWitnessChamber) {
  auto psi = sign_function_of(parse_residues("5,1,-2,-4"));
  for (Mask m : {Mask{0b0001}, Mask{0b0010}, Mask{0b0011}, Mask{0b0101}, Mask{0b1001}})
    EXPECT_EQ(psi.at(m), Sign::Positive);
  EXPECT_EQ(psi.at(0b0100), Sign::Negative);
  EXPECT_EQ(psi.at(0b1000), Sign::Negative);
  std::set<std::string> walls;
  for (const auto& W : chamber_walls(psi)) walls.insert(to_string(W));
  // The hyperplanes of poles 3 and 4 only touch this chamber along lower-dimensional faces.
  EXPECT_EQ(walls, (std::set<std::string>{"{2}", "{1,3}", "{2,3}"}));
  EXPECT_TRUE(is_simplicial(make_chamber(psi)));
}

TEST(Simplicial, SmallPoleCountsVersusFive) {
  for (int p = 2; p <= 4; ++p) {
    const auto G = chamber_graph(p);
    for (const auto& c : G->chambers()) EXPECT_TRUE(is_simplicial(c)) << c.psi.key();
  }
  const auto G = chamber_graph(5);
  std::size_t non = 0;
  for (const auto& c : G->chambers()) non += is_simplicial(c) ? 0 : 1;
  EXPECT_EQ(non, 20u);
}
