#include <gtest/gtest.h>

#include <functional>
#include <map>
#include <set>

#include "isoresidual/monodromy.hpp"

using namespace isoresidual;

namespace {

std::vector<StratumSignature> all_strata(int a_max, int p_max) {
  std::vector<StratumSignature> out;
  for (int p = 2; p <= p_max; ++p) {
    for (int a = std::max(1, p - 2); a <= a_max; ++a) {
      std::vector<int> b(static_cast<std::size_t>(p));
      std::function<void(std::size_t, int)> fill = [&](std::size_t j, int left) {
        if (j + 1 == b.size()) {
          b[j] = left;
          if (left >= 1) out.push_back(make_signature(a, b));
          return;
        }
        for (int x = 1; x < left; ++x) {
          b[j] = x;
          fill(j + 1, left - x);
        }
      };
      fill(0, a + 2);
    }
  }
  return out;
}

class Strata : public ::testing::TestWithParam<StratumSignature> {};

std::string name_of(const ::testing::TestParamInfo<StratumSignature>& info) {
  std::string s = "a" + std::to_string(info.param.a) + "_b";
  for (int b : info.param.b) s += std::to_string(b);
  return s;
}

}  // namespace

TEST_P(Strata, EveryChamberHasTheGenericDegree) {
  const auto& sig = GetParam();
  IsoresidualCover cover(sig);
  for (std::size_t c = 0; c < cover.graph().size(); ++c) {
    EXPECT_EQ(static_cast<std::int64_t>(cover.fiber(c).size()), generic_degree(sig));
    for (const auto& t : cover.fiber(c).trees) EXPECT_TRUE(is_compatible(t, sig, cover.fiber(c).psi));
  }
}

// Counts over a face depend only on its zero set, and for a single wall match the closed form.
TEST_P(Strata, WallCountsDependOnlyOnTheZeroSet) {
  const auto& sig = GetParam();
  const int p = sig.poles();
  const auto G = chamber_graph(p);
  for (const auto& I : canonical_subsets(p)) {
    std::map<std::string, std::size_t> count_by_face;
    for (std::size_t c = 0; c < G->size(); ++c) {
      if (!G->neighbor(c, I)) continue;
      auto face = G->chamber(c).psi.with(I, Sign::Zero);
      if (count_by_face.count(face.key())) continue;
      count_by_face[face.key()] = enumerate_fiber(sig, face).size();
    }
    ASSERT_FALSE(count_by_face.empty());
    for (const auto& [k, n] : count_by_face) EXPECT_EQ(static_cast<std::int64_t>(n), single_resonance_count(sig, I)) << k;
  }
}

TEST_P(Strata, MeridiansMatchTheClosedForms) {
  const auto& sig = GetParam();
  IsoresidualCover cover(sig);
  const auto& G = cover.graph();
  bool even = true;
  for (std::size_t c = 0; c < G.size(); ++c) {
    for (const auto& adj : G.adjacent(c)) {
      auto g = cover.meridian(c, adj.wall);
      EXPECT_EQ(cycle_type(g), predicted_meridian_cycle_type(sig, adj.wall)) << to_string(adj.wall);
      EXPECT_EQ(g.is_identity(), meridian_is_trivial(sig, adj.wall)) << to_string(adj.wall);
      // only trees carrying an edge on the wall move
      const auto& f = cover.fiber(c);
      for (std::size_t i = 0; i < f.size(); ++i)
        if (g(i) != i) {
          EXPECT_TRUE(find_edge_with_partition(f.trees[i], adj.wall).has_value());
        }
      even = even && parity(g) == Parity::Even;
    }
  }
  EXPECT_EQ(even, monodromy_is_even(sig));
  EXPECT_EQ(cover.gallery_defects(), 0u);
}

TEST_P(Strata, OriginAndChainFibers) {
  const auto& sig = GetParam();
  const int p = sig.poles();
  EXPECT_EQ(enumerate_fiber(sig, SignFunction::constant(p, Sign::Zero)).size(), 0u);
  EXPECT_EQ(static_cast<std::int64_t>(enumerate_fiber(sig, chain_sign_function(p)).size()), deep_resonance_count(sig));
}

INSTANTIATE_TEST_SUITE_P(Small, Strata, ::testing::ValuesIn(all_strata(5, 4)), name_of);

TEST(Properties, AddingASimplePoleMultipliesByAPlusOne) {
  for (const auto& sig : all_strata(4, 4)) {
    std::vector<int> b = sig.b;
    b.push_back(1);
    auto big = make_signature(sig.a + 1, b);
    const int p = sig.poles();
    // the standard chamber on p+1 poles restricts to the standard one on the first p
    auto old_psi = standard_sign_function(p);
    auto new_psi = standard_sign_function(p + 1);
    std::set<std::string> made;
    for (const auto& t : enumerate_fiber(sig, old_psi).trees)
      for (const auto& c : corners(t))
        if (c.legal) made.insert(canonical_key(add_simple_pole(t, c.at)));
    auto f = enumerate_fiber(big, new_psi);
    EXPECT_EQ(made, std::set<std::string>(f.keys.begin(), f.keys.end())) << to_string(sig);
    EXPECT_EQ(static_cast<std::int64_t>(f.size()), (sig.a + 1) * generic_degree(sig));
  }
}
