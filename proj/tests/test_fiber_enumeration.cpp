#include <gtest/gtest.h>

#include <algorithm>
#include <functional>
#include <map>
#include <set>

#include "isoresidual/arrangement.hpp"
#include "isoresidual/fiber_enumeration.hpp"

using namespace isoresidual;

// ---------------------------------------------------------------------------
// Brute-force oracle. Walks every labeled tree by Pruefer code, orients each edge from its
// negative side, then tries every cyclic order of ends and every parity-respecting split of
// the half-edges. Keys come from a serializer written separately from the library one.

namespace oracle {

struct End {
  int to;
  bool out;
  int gap;
};

using Rot = std::vector<std::vector<End>>;  // index 0 unused

int rank(char c) {
  const std::string order = "<>*()";
  auto k = order.find(c);
  return k == std::string::npos ? 5 + (c - '0') : static_cast<int>(k);
}

bool less(const std::string& x, const std::string& y) {
  return std::lexicographical_compare(x.begin(), x.end(), y.begin(), y.end(), [](char a, char b) { return rank(a) < rank(b); });
}

void write(const Rot& r, int v, int from, std::string& out) {
  out += std::to_string(v) + "(";
  const auto& ends = r[static_cast<std::size_t>(v)];
  std::size_t start = 0;
  if (from) {
    while (ends[start].to != from) ++start;
  }
  for (std::size_t i = 0; i < ends.size(); ++i) {
    const End& e = ends[(start + i) % ends.size()];
    if (!(from && i == 0)) {
      out += e.out ? '>' : '<';
      write(r, e.to, v, out);
    }
    out += std::string(static_cast<std::size_t>(e.gap), '*');
  }
  out += ")";
}

std::string key(Rot r) {
  std::string best;
  auto& root = r[1];
  for (std::size_t k = 0; k < root.size(); ++k) {
    std::string s;
    write(r, 1, 0, s);
    if (k == 0 || less(s, best)) best = s;
    std::rotate(root.begin(), root.begin() + 1, root.end());
  }
  return best;
}

std::vector<std::vector<std::pair<int, int>>> labeled_trees(int p) {
  std::vector<std::vector<std::pair<int, int>>> out;
  if (p == 2) return {{{1, 2}}};
  std::vector<int> code(static_cast<std::size_t>(p - 2), 1);
  while (true) {
    std::vector<int> degree(static_cast<std::size_t>(p + 1), 1);
    for (int x : code) ++degree[static_cast<std::size_t>(x)];
    std::vector<std::pair<int, int>> edges;
    for (int x : code) {
      int leaf = 1;
      while (degree[static_cast<std::size_t>(leaf)] != 1) ++leaf;
      edges.emplace_back(leaf, x);
      --degree[static_cast<std::size_t>(leaf)];
      --degree[static_cast<std::size_t>(x)];
    }
    std::vector<int> last;
    for (int v = 1; v <= p; ++v)
      if (degree[static_cast<std::size_t>(v)] == 1) last.push_back(v);
    edges.emplace_back(last[0], last[1]);
    out.push_back(edges);
    std::size_t i = 0;
    while (i < code.size() && code[i] == p) code[i++] = 1;
    if (i == code.size()) break;
    ++code[i];
  }
  return out;
}

// All arrangements of the ends around one vertex, first neighbor fixed.
std::vector<std::vector<End>> local(std::vector<std::pair<int, bool>> nbrs, int half_edges) {
  std::vector<std::vector<End>> out;
  std::sort(nbrs.begin() + 1, nbrs.end());
  do {
    const std::size_t k = nbrs.size();
    std::vector<End> ends;
    for (auto [to, o] : nbrs) ends.push_back({to, o, 0});
    std::function<void(std::size_t, int)> split = [&](std::size_t i, int left) {
      if (i + 1 == k) {
        bool same = ends[i].out == ends[0].out;
        if (k == 1 || (left % 2 == 0) == same) {
          ends[i].gap = left;
          out.push_back(ends);
        }
        return;
      }
      const int parity = ends[i].out == ends[i + 1].out ? 0 : 1;
      for (int g = parity; g <= left; g += 2) {
        ends[i].gap = g;
        split(i + 1, left - g);
      }
    };
    split(0, half_edges);
  } while (std::next_permutation(nbrs.begin() + 1, nbrs.end()));
  return out;
}

std::set<std::string> fiber(const StratumSignature& sig, const SignFunction& psi) {
  const int p = sig.poles();
  std::set<std::string> keys;
  for (const auto& edges : labeled_trees(p)) {
    std::vector<std::vector<int>> adj(static_cast<std::size_t>(p + 1));
    for (auto [u, v] : edges) {
      adj[static_cast<std::size_t>(u)].push_back(v);
      adj[static_cast<std::size_t>(v)].push_back(u);
    }
    auto side = [&](int u, int v) {
      Mask m = 0;
      std::vector<int> stack{u};
      std::vector<int> parent(static_cast<std::size_t>(p + 1), 0);
      parent[static_cast<std::size_t>(u)] = v;
      while (!stack.empty()) {
        int x = stack.back();
        stack.pop_back();
        m |= Mask{1} << (x - 1);
        for (int y : adj[static_cast<std::size_t>(x)])
          if (y != parent[static_cast<std::size_t>(x)]) {
            parent[static_cast<std::size_t>(y)] = x;
            stack.push_back(y);
          }
      }
      return m;
    };
    std::vector<std::vector<std::pair<int, bool>>> nbrs(static_cast<std::size_t>(p + 1));
    bool smooth = true;
    for (auto [u, v] : edges) {
      Sign s = psi.at(side(u, v));
      if (s == Sign::Zero) smooth = false;
      bool u_out = s == Sign::Negative;
      nbrs[static_cast<std::size_t>(u)].push_back({v, u_out});
      nbrs[static_cast<std::size_t>(v)].push_back({u, !u_out});
    }
    if (!smooth) continue;
    std::vector<std::vector<std::vector<End>>> options(static_cast<std::size_t>(p + 1));
    for (int v = 1; v <= p; ++v) options[static_cast<std::size_t>(v)] = local(nbrs[static_cast<std::size_t>(v)], 2 * sig.order(v) - 2);
    Rot r(static_cast<std::size_t>(p + 1));
    std::function<void(int)> pick = [&](int v) {
      if (v > p) {
        keys.insert(key(r));
        return;
      }
      for (const auto& o : options[static_cast<std::size_t>(v)]) {
        r[static_cast<std::size_t>(v)] = o;
        pick(v + 1);
      }
    };
    pick(1);
  }
  return keys;
}

}  // namespace oracle

namespace {

std::vector<StratumSignature> strata(int a_max, int p_max) {
  std::vector<StratumSignature> out;
  for (int p = 2; p <= p_max; ++p) {
    for (int a = std::max(1, p - 2); a <= a_max; ++a) {
      std::vector<int> b(static_cast<std::size_t>(p), 1);
      std::function<void(std::size_t, int)> fill = [&](std::size_t j, int left) {
        if (j + 1 == b.size()) {
          if (left >= 1) {
            b[j] = left;
            out.push_back(make_signature(a, b));
          }
          return;
        }
        for (int x = 1; x <= left - static_cast<int>(b.size() - j - 1); ++x) {
          b[j] = x;
          fill(j + 1, left - x);
        }
      };
      fill(0, a + 2);
    }
  }
  return out;
}

std::set<std::string> as_set(const FiberSet& f) { return {f.keys.begin(), f.keys.end()}; }

}  // namespace

TEST(Oracle, LabeledTreeCounts) {
  EXPECT_EQ(oracle::labeled_trees(2).size(), 1u);
  EXPECT_EQ(oracle::labeled_trees(3).size(), 3u);
  EXPECT_EQ(oracle::labeled_trees(4).size(), 16u);
  EXPECT_EQ(oracle::labeled_trees(5).size(), 125u);
}

TEST(Oracle, KeyOfChain) {
  oracle::Rot r(4);
  r[1] = {{3, false, 2}, {2, false, 0}};
  r[2] = {{1, true, 2}};
  r[3] = {{1, true, 2}};
  EXPECT_EQ(oracle::key(r), "1(<2(**)<3(**)**)");
}

TEST(Enumeration, MatchesOracleOnChambers) {
  std::size_t compared = 0;
  for (const auto& sig : strata(5, 4)) {
    const auto G = chamber_graph(sig.poles());
    const std::size_t step = std::max<std::size_t>(1, G->size() / 6);
    for (std::size_t c = 0; c < G->size(); c += step) {
      const auto& psi = G->chamber(c).psi;
      auto got = enumerate_fiber(sig, psi);
      EXPECT_EQ(as_set(got), oracle::fiber(sig, psi)) << to_string(sig) << " over " << psi.key();
      EXPECT_EQ(static_cast<std::int64_t>(got.size()), generic_degree(sig));
      ++compared;
    }
  }
  for (const auto& sig : strata(4, 5)) {
    if (sig.poles() != 5) continue;
    const auto G = chamber_graph(5);
    for (std::size_t c = 0; c < G->size(); c += 97) {
      EXPECT_EQ(as_set(enumerate_fiber(sig, G->chamber(c).psi)), oracle::fiber(sig, G->chamber(c).psi)) << to_string(sig);
      ++compared;
    }
  }
  EXPECT_GT(compared, 200u);
}

TEST(Enumeration, MatchesOracleOnWalls) {
  for (const auto& sig : strata(5, 4)) {
    const int p = sig.poles();
    const auto G = chamber_graph(p);
    for (const auto& I : canonical_subsets(p)) {
      for (std::size_t c = 0; c < G->size(); ++c) {
        if (!G->neighbor(c, I)) continue;
        auto psi = G->chamber(c).psi.with(I, Sign::Zero);
        auto got = enumerate_fiber(sig, psi);
        EXPECT_EQ(as_set(got), oracle::fiber(sig, psi)) << to_string(sig) << " on " << to_string(I);
        EXPECT_EQ(static_cast<std::int64_t>(got.size()), single_resonance_count(sig, I));
        break;
      }
    }
  }
}

TEST(Enumeration, PaperFiber) {
  auto sig = make_signature(4, {2, 2, 2});
  auto psi = sign_function_of(parse_residues("1,-1/4,-3/4"));
  auto f = enumerate_fiber(sig, psi);
  ASSERT_EQ(f.size(), 4u);
  for (const auto& t : f.trees) EXPECT_TRUE(is_compatible(t, sig, psi));
  EXPECT_TRUE(f.index_of("1(<2(**)<3(**)**)").has_value());
}

TEST(Enumeration, TwoPolesAndOrigin) {
  for (int a = 1; a <= 6; ++a) {
    auto f = enumerate_fiber(make_signature(a, {a, 2}), SignFunction::from_key(2, "+"));
    EXPECT_EQ(f.size(), 1u);
  }
  EXPECT_EQ(enumerate_fiber(make_signature(4, {2, 2, 2}), SignFunction::constant(3, Sign::Zero)).size(), 0u);
  EXPECT_EQ(enumerate_fiber(make_signature(4, {2, 2, 2}), sign_function_of(parse_residues("0,0,0"))).size(), 0u);
}

TEST(ClosedForms, Examples) {
  EXPECT_EQ(generic_degree(make_signature(4, {2, 2, 2})), 4);
  EXPECT_EQ(generic_degree(make_signature(6, {2, 3, 3})), 6);
  EXPECT_EQ(generic_degree(make_signature(2, {1, 1, 1, 1})), 2);

  EXPECT_EQ(single_resonance_count(make_signature(4, {2, 2, 2}), PoleSubset::of({2}, 3)), 1);
  auto five = make_signature(3, {1, 1, 1, 1, 1});
  auto I = PoleSubset::of({1, 2}, 5);
  EXPECT_EQ(single_resonance_count(five, I), 4);

  auto e = edge_marked_count(make_signature(4, {2, 2, 2}), standard_sign_function(3), PoleSubset::of({1, 3}, 3));
  EXPECT_EQ(e.total, 3);
  EXPECT_EQ(e.class_count, 1);
  EXPECT_EQ(e.class_size, 3);
  auto g = edge_marked_count(make_signature(2, {1, 1, 1, 1}), standard_sign_function(4), PoleSubset::of({1, 2}, 4));
  EXPECT_EQ(g.total, 1);
  EXPECT_EQ(g.class_count, 1);
  EXPECT_EQ(g.class_size, 1);
  EXPECT_EQ(edge_marked_count(make_signature(3, {3, 2}), standard_sign_function(2), PoleSubset::of({1}, 2)).total, 1);
}

TEST(ClosedForms, DeepResonance) {
  EXPECT_EQ(deep_resonance_count(make_signature(4, {2, 2, 2})), 1);
  EXPECT_EQ(deep_resonance_count(make_signature(5, {2, 3, 2})), 2);
  EXPECT_EQ(deep_resonance_count(make_signature(3, {4, 1})), 1);
  for (const auto& sig : strata(5, 4)) {
    auto psi = chain_sign_function(sig.poles());
    EXPECT_EQ(static_cast<std::int64_t>(enumerate_fiber(sig, psi).size()), deep_resonance_count(sig)) << to_string(sig);
  }
}

TEST(Surgery, AddSimplePoleOnChain) {
  auto sig = make_signature(4, {2, 2, 2});
  auto t = parse_key("1(<2(**)<3(**)**)");
  auto big = make_signature(5, {2, 2, 2, 1});
  std::set<std::string> made;
  for (const auto& c : corners(t)) {
    if (!c.legal) {
      try {
        add_simple_pole(t, c.at);
        ADD_FAILURE() << "illegal corner accepted";
      } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::IllegalCorner);
      }
      continue;
    }
    auto u = add_simple_pole(t, c.at);
    EXPECT_TRUE(validate(u, big).ok);
    made.insert(canonical_key(u));
    EXPECT_EQ(canonical_key(remove_simple_pole(u).first), canonical_key(t));
  }
  EXPECT_EQ(made.size(), 5u);
  EXPECT_EQ(enumerate_fiber(big, standard_sign_function(4)).size(), 20u);
  (void)sig;
}

TEST(Surgery, WeightTransferIsABijection) {
  auto s0 = make_signature(4, {2, 2, 2});
  auto s1 = weight_transfer_signature(s0, 2);
  auto s2 = weight_transfer_signature(s1, 3);
  EXPECT_EQ(s1, make_signature(4, {3, 1, 2}));
  EXPECT_EQ(s2, make_signature(4, {4, 1, 1}));
  for (auto [from, i] : std::vector<std::pair<StratumSignature, int>>{{s0, 2}, {s1, 3}, {make_signature(6, {2, 3, 3}), 2}}) {
    auto to = weight_transfer_signature(from, i);
    const auto psi = standard_sign_function(from.poles());
    auto src = enumerate_fiber(from, psi), dst = enumerate_fiber(to, psi);
    ASSERT_EQ(src.size(), dst.size());
    std::set<std::string> image;
    for (const auto& t : src.trees) {
      auto u = weight_transfer(t, i);
      EXPECT_TRUE(validate(u, to).ok);
      image.insert(canonical_key(u));
      EXPECT_EQ(canonical_key(weight_transfer_inverse(u, i)), canonical_key(t));
    }
    EXPECT_EQ(image, as_set(dst));
  }
  EXPECT_EQ(enumerate_fiber(make_signature(6, {6, 1, 1}), standard_sign_function(3)).size(), 6u);
  EXPECT_THROW(weight_transfer_signature(s2, 2), Error);
}
