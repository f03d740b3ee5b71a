#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "isoresidual/decorated_tree.hpp"
#include "isoresidual/fiber_enumeration.hpp"

using namespace isoresidual;

namespace {

constexpr auto In = Direction::Incoming;
constexpr auto Out = Direction::Outgoing;

// 3 -> 1 <- 2 with two half-edges everywhere.
DecoratedTree chain() {
  return DecoratedTree({Vertex{2, {{2, In, 0}, {3, In, 2}}}, Vertex{2, {{1, Out, 2}}}, Vertex{2, {{1, Out, 2}}}});
}

const auto kFig1 = make_signature(4, {2, 2, 2});

}  // namespace

TEST(Validate, Examples) {
  EXPECT_TRUE(validate(chain(), kFig1).ok);

  auto extra = chain();
  extra.vertex(1).half_edges = 3;
  extra.vertex(1).ends[1].gap_after = 3;
  auto r = validate(extra, kFig1);
  EXPECT_FALSE(r.ok);
  EXPECT_NE(r.violation.find("half-edge count"), std::string::npos) << r.violation;

  auto odd = chain();
  odd.vertex(1).ends[0].gap_after = 1;
  odd.vertex(1).ends[1].gap_after = 1;
  r = validate(odd, kFig1);
  EXPECT_FALSE(r.ok);
  EXPECT_NE(r.violation.find("parity"), std::string::npos) << r.violation;

  auto flipped = chain();
  flipped.vertex(2).ends[0].direction = In;
  EXPECT_FALSE(validate(flipped, kFig1).ok);
}

TEST(Key, ChainExample) {
  EXPECT_EQ(canonical_key(chain()), "1(<2(**)<3(**)**)");
  EXPECT_EQ(canonical_key(parse_key("1(<2(**)<3(**)**)")), "1(<2(**)<3(**)**)");
}

TEST(Key, RejectsMalformed) {
  EXPECT_THROW(parse_key("1(<2(**)"), Error);
  EXPECT_THROW(parse_key("1(<3(**))"), Error);
  EXPECT_THROW(parse_key("1(?)"), Error);
}

// Rotating every end list keeps the cyclic orders, so the key must not move.
TEST(Key, InvariantUnderRotationAndRoundTrip) {
  std::mt19937 rng(11);
  for (auto [a, b] : std::vector<std::pair<int, std::vector<int>>>{{4, {2, 2, 2}}, {6, {2, 3, 3}}, {5, {2, 2, 2, 1}}, {4, {2, 1, 2, 1}}}) {
    auto sig = make_signature(a, b);
    auto f = enumerate_fiber(sig, standard_sign_function(sig.poles()));
    ASSERT_FALSE(f.keys.empty());
    for (const auto& key : f.keys) {
      auto t = parse_key(key);
      ASSERT_TRUE(validate(t, sig).ok) << key;
      EXPECT_EQ(canonical_key(t), key);
      for (int trial = 0; trial < 5; ++trial) {
        auto u = t;
        for (int v = 1; v <= u.vertex_count(); ++v) {
          auto& ends = u.vertex(v).ends;
          std::rotate(ends.begin(), ends.begin() + static_cast<long>(rng() % ends.size()), ends.end());
        }
        EXPECT_EQ(canonical_key(u), key);
      }
    }
  }
}

TEST(Key, DistinctTreesDistinctKeys) {
  auto f = enumerate_fiber(kFig1, sign_function_of(parse_residues("1,-1/4,-3/4")));
  ASSERT_EQ(f.size(), 4u);
  for (std::size_t i = 0; i < f.size(); ++i)
    for (std::size_t j = i + 1; j < f.size(); ++j) EXPECT_NE(f.trees[i], f.trees[j]);
}

TEST(EdgePartition, Examples) {
  auto t = chain();
  auto e = edge_partition(t, Edge{3, 1});
  EXPECT_EQ(e.source_side, label_bit(3));
  EXPECT_EQ(e.subset, PoleSubset::of({3}, 3));
  EXPECT_THROW(edge_partition(t, Edge{1, 3}), Error);

  auto a = parse_key("1(<2(****)*>3(****)*)");
  EXPECT_EQ(edge_partition(a, Edge{1, 3}).source_side, label_bit(1) | label_bit(2));

  auto star = DecoratedTree({Vertex{0, {{2, Out, 0}}}, Vertex{2, {{1, In, 0}, {3, In, 2}}}, Vertex{0, {{2, Out, 0}}}});
  ASSERT_TRUE(validate(star, make_signature(2, {1, 2, 1})).ok);
  EXPECT_EQ(edge_partition(star, Edge{1, 2}).source_side, label_bit(1));
}

TEST(EdgePartition, SidesPartitionThePoles) {
  auto sig = make_signature(5, {2, 2, 2, 1});
  auto f = enumerate_fiber(sig, standard_sign_function(4));
  for (const auto& t : f.trees) {
    for (const auto& e : t.edges()) {
      Mask s = edge_partition(t, e).source_side, o = t.side_mask(e.target, e.source);
      EXPECT_EQ(s & o, 0u);
      EXPECT_EQ(s | o, full_mask(4));
    }
  }
}

TEST(Compatibility, Examples) {
  auto psi = sign_function_of(parse_residues("1,-1/4,-3/4"));
  EXPECT_TRUE(is_compatible(chain(), kFig1, psi));
  EXPECT_FALSE(is_compatible(chain(), kFig1, psi.negated()));
  auto wall = sign_function_of(parse_residues("1,0,-1"));
  EXPECT_FALSE(is_compatible(chain(), kFig1, wall));
  EXPECT_TRUE(is_degenerate(chain(), wall));
  EXPECT_FALSE(is_degenerate(chain(), psi));

  // 1 -> 3 <- 2 over a zero sum on {1,2}: neither edge separates {1,2}
  auto other = DecoratedTree({Vertex{2, {{3, Out, 2}}}, Vertex{2, {{3, Out, 2}}}, Vertex{2, {{1, In, 0}, {2, In, 2}}}});
  ASSERT_TRUE(validate(other, kFig1).ok);
  EXPECT_FALSE(is_degenerate(other, sign_function_of(parse_residues("-1,1,0"))));
}

TEST(Corners, CountsOnEveryEnumeratedTree) {
  for (auto [a, b] : std::vector<std::pair<int, std::vector<int>>>{{4, {2, 2, 2}}, {6, {2, 3, 3}}, {5, {2, 2, 2, 1}}, {3, {1, 1, 1, 1, 1}}, {3, {4, 1}}}) {
    auto sig = make_signature(a, b);
    for (const auto& t : enumerate_fiber(sig, standard_sign_function(sig.poles())).trees) {
      auto cs = corners(t);
      EXPECT_EQ(static_cast<int>(cs.size()), 2 * a + 2);
      EXPECT_EQ(std::count_if(cs.begin(), cs.end(), [](const Corner& c) { return c.legal; }), a + 1);
    }
  }
}

TEST(Collapse, NowhereZeroIsSingleton) {
  auto psi = sign_function_of(parse_residues("1,-1/4,-3/4"));
  auto r = collapse(chain(), psi);
  EXPECT_EQ(r.components.size(), 1u);
  EXPECT_TRUE(r.cuts.empty());
  EXPECT_EQ(reglue(r), chain());
}

TEST(Collapse, OneZeroEdge) {
  auto r = collapse(chain(), sign_function_of(parse_residues("1,0,-1")));
  ASSERT_EQ(r.components.size(), 2u);
  EXPECT_EQ(r.components[0].labels, (std::vector<int>{1, 3}));
  EXPECT_EQ(r.components[1].labels, (std::vector<int>{2}));
  EXPECT_EQ(r.components[1].pole_orders, (std::vector<int>{2}));
  EXPECT_FALSE(r.components[1].psi.has_value());
  EXPECT_EQ(canonical_key(reglue(r)), canonical_key(chain()));
}

// Under the chain residues every singleton 2..p-1 sums to zero, so each leaf among them
// is cut off on its own.
TEST(Collapse, ReglueRecoversEveryTree) {
  auto sig = make_signature(5, {2, 2, 2, 1});
  auto chain_psi = chain_sign_function(4);
  std::size_t with_two_cuts = 0;
  for (const auto& t : enumerate_fiber(sig, standard_sign_function(4)).trees) {
    auto r = collapse(t, chain_psi);
    EXPECT_EQ(r.components.size(), r.cuts.size() + 1);
    if (r.cuts.size() == 2) ++with_two_cuts;
    EXPECT_EQ(canonical_key(reglue(r)), canonical_key(t));
    for (const auto& c : r.components) EXPECT_EQ(c.tree.vertex_count(), static_cast<int>(c.labels.size()));
  }
  EXPECT_GT(with_two_cuts, 0u);
}
