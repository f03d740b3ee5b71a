#include <gtest/gtest.h>

#include "isoresidual/report.hpp"

using namespace isoresidual;

TEST(Report, FiberShape) {
  auto sig = make_signature(4, {2, 2, 2});
  auto f = enumerate_fiber(sig, sign_function_of(parse_residues("1,-1/4,-3/4")));
  Json j = to_json(f);
  EXPECT_EQ(j["stratum"]["a"], 4);
  EXPECT_EQ(j["stratum"]["b"], Json::array({2, 2, 2}));
  EXPECT_EQ(j["psi"]["1"], "+");
  EXPECT_EQ(j["psi"]["2"], "-");
  EXPECT_EQ(j["psi"]["1,2"], "+");
  ASSERT_TRUE(j["trees"].is_array());
  EXPECT_EQ(j["trees"].size(), 4u);
  for (const auto& k : j["trees"]) EXPECT_TRUE(validate(parse_key(k.get<std::string>()), sig).ok);
}

TEST(Report, DumpParseIsStable) {
  auto sig = make_signature(6, {2, 3, 3});
  std::vector<Json> docs{to_json(enumerate_fiber(sig, standard_sign_function(3))), to_json(*chamber_graph(3)),
                         to_json(monodromy_group(sig)), to_json(parse_residues("1/2,-3,5/2"))};
  for (const auto& d : docs) {
    const std::string once = d.dump();
    EXPECT_EQ(Json::parse(once).dump(), once);
    EXPECT_EQ(Json::parse(d.dump(2)), d);
  }
}

TEST(Report, GroupAndChambers) {
  Json g = to_json(monodromy_group(make_signature(4, {4, 1, 1})));
  EXPECT_EQ(g["order"], "4");
  EXPECT_EQ(g["identification"], "Cyclic(4)");
  EXPECT_EQ(g["transitive"], true);
  EXPECT_EQ(g["gallery_defects"], 0);

  Json c = to_json(*chamber_graph(3));
  EXPECT_EQ(c["chambers"], 6);
  EXPECT_EQ(c["edges"].size(), 6u);
  for (const auto& n : c["nodes"]) EXPECT_EQ(n["walls"].size(), 2u);
}

TEST(Report, Commutator) {
  auto r = commutator_structure(make_signature(4, {1, 2, 3}), PoleSubset::of({2}, 3), PoleSubset::of({3}, 3));
  Json j = to_json(r);
  EXPECT_EQ(j["first"], "{2}");
  EXPECT_EQ(j["second"], "{3}");
  EXPECT_EQ(j["rest"], "{1}");
  EXPECT_EQ(j["classification"], "ThreeCycles(1)");
  EXPECT_EQ(j["predicted"], "ThreeCycles(1)");
  EXPECT_EQ(j["matches_prediction"], true);

  auto s = commutator_structure(make_signature(5, {2, 2, 2, 1}), PoleSubset::of({1}, 4), PoleSubset::of({2}, 4));
  EXPECT_EQ(to_json(s)["predicted"], "EvenTranspositions");
}
