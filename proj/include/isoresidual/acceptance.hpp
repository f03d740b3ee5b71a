#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "isoresidual/arrangement.hpp"
#include "isoresidual/decorated_tree.hpp"
#include "isoresidual/fiber_enumeration.hpp"
#include "isoresidual/monodromy.hpp"
#include "isoresidual/permgroup.hpp"
#include "isoresidual/stratum_core.hpp"

namespace isoresidual::acceptance {

enum class Suite { Quick, Full };

struct Options {
  Suite suite = Suite::Full;
  unsigned threads = 1;
  std::uint64_t seed = kDefaultGroupSeed;
};

// A failing part that reproduces a false claim of the source material rather than a defect
// here is marked `known`; the reason is kept in `detail`.
struct SubCheck {
  std::string name;
  bool pass = true;
  bool known = false;
  std::string detail;
};

struct Check {
  int id = 0;
  std::string title;
  std::vector<SubCheck> parts;
  double seconds = 0;

  bool pass() const {
    for (const auto& s : parts)
      if (!s.pass) return false;
    return true;
  }
  // Failing, but only through parts marked known.
  bool known_failure() const {
    bool any = false;
    for (const auto& s : parts) {
      if (s.pass) continue;
      if (!s.known) return false;
      any = true;
    }
    return any;
  }
};

struct Bounds {
  int a_max = 7;
  int p_max = 5;
};

inline Bounds bounds_for(Suite s) { return s == Suite::Full ? Bounds{7, 5} : Bounds{5, 4}; }

// Every signature with 1 <= a <= a_max and p_min <= p <= p_max, by (p, a, b).
inline std::vector<StratumSignature> signatures(int a_max, int p_min, int p_max) {
  std::vector<StratumSignature> out;
  for (int p = p_min; p <= p_max; ++p) {
    for (int a = 1; a <= a_max; ++a) {
      std::vector<int> b(static_cast<std::size_t>(p), 1);
      std::function<void(int, int)> fill = [&](int j, int left) {
        if (j == p - 1) {
          if (left >= 1) {
            b[static_cast<std::size_t>(j)] = left;
            out.push_back(make_signature(a, b));
          }
          return;
        }
        for (int x = 1; x <= left - (p - 1 - j); ++x) {
          b[static_cast<std::size_t>(j)] = x;
          fill(j + 1, left - x);
        }
      };
      if (a + 2 >= p) fill(0, a + 2);
    }
  }
  return out;
}

namespace detail {

class Examples {
 public:
  void add(const std::string& s) {
    ++count_;
    if (list_.size() < 3) list_.push_back(s);
  }
  std::size_t count() const { return count_; }
  std::string str() const {
    std::string out;
    for (const auto& s : list_) out += (out.empty() ? "" : "; ") + s;
    return out;
  }

 private:
  std::size_t count_ = 0;
  std::vector<std::string> list_;
};

inline SubCheck sub(std::string name, bool pass, std::string detail) {
  return SubCheck{std::move(name), pass, false, std::move(detail)};
}

inline std::string type_string(const std::vector<std::size_t>& t) {
  std::string s;
  for (auto x : t) s += (s.empty() ? "" : ",") + std::to_string(x);
  return "[" + s + "]";
}

// Everything that needs the fibers over all chambers of a stratum, computed in one pass.
struct Sweep {
  std::size_t strata = 0;
  std::size_t chambers = 0;
  Examples degree;
  std::size_t incidences = 0;
  Examples cycle_type;
  Examples triviality;
  std::size_t adjacencies = 0;
  Examples composition;
  std::size_t parity_strata = 0;
  Examples parity;
  std::size_t secant_pairs = 0;
  Examples secant;
  double seconds = 0;
};

inline void sweep_stratum(const StratumSignature& sig, unsigned threads, Sweep& out) {
  const int p = sig.poles();
  IsoresidualCover cover(sig, std::nullopt, CoverOptions{threads, false});
  const auto& G = cover.graph();
  const auto n = static_cast<std::size_t>(generic_degree(sig));
  ++out.strata;
  for (std::size_t c = 0; c < G.size(); ++c) {
    ++out.chambers;
    if (cover.fiber(c).size() != n) {
      out.degree.add(to_string(sig) + " over " + G.chamber(c).psi.key() + ": " + std::to_string(cover.fiber(c).size()));
    }
  }
  bool all_even = true;
  for (std::size_t c = 0; c < G.size(); ++c) {
    for (const auto& adj : G.adjacent(c)) {
      if (adj.neighbor < c) continue;
      const PoleSubset& I = adj.wall;
      const std::size_t plus = G.chamber(c).psi(I) == Sign::Positive ? c : adj.neighbor;
      const std::size_t minus = plus == c ? adj.neighbor : c;
      const Permutation g_plus = meridian_on_fiber(cover.fiber(plus), I);
      const Permutation g_minus = meridian_on_fiber(cover.fiber(minus), I);
      const auto expected = predicted_meridian_cycle_type(sig, I);
      const bool trivial = meridian_is_trivial(sig, I);
      for (const auto* g : {&g_plus, &g_minus}) {
        ++out.incidences;
        auto t = isoresidual::cycle_type(*g);
        if (t != expected) out.cycle_type.add(to_string(sig) + " " + to_string(I) + ": " + type_string(t) + " vs " + type_string(expected));
        if (g->is_identity() != trivial) out.triviality.add(to_string(sig) + " " + to_string(I));
        if (parity(*g) == Parity::Odd) all_even = false;
      }
      ++out.adjacencies;
      const Permutation up = crossing_map(cover.fiber(plus), cover.fiber(minus), I, Half::Upper);
      const Permutation down = crossing_map(cover.fiber(minus), cover.fiber(plus), I, Half::Lower);
      if (compose(down, up) != g_plus || compose(up, down) != g_minus) {
        out.composition.add(to_string(sig) + " " + to_string(I) + " between " + G.chamber(plus).psi.key() + " and " +
                            G.chamber(minus).psi.key());
      }
    }
  }
  ++out.parity_strata;
  if (all_even != monodromy_is_even(sig)) {
    out.parity.add(to_string(sig) + (all_even ? ": all even" : ": odd meridian found"));
  }
  if (p >= 4) {
    const auto subsets = canonical_subsets(p);
    for (std::size_t i = 0; i < subsets.size(); ++i) {
      for (std::size_t j = i + 1; j < subsets.size(); ++j) {
        if (!are_secant(subsets[i].mask(), subsets[j].mask(), p)) continue;
        ++out.secant_pairs;
        auto r = commutator_structure(cover, subsets[i], subsets[j]);
        if (r.kind != CommutatorKind::Commute) {
          out.secant.add(to_string(sig) + " " + to_string(subsets[i]) + "," + to_string(subsets[j]) + ": " + describe(r));
        }
      }
    }
  }
}

inline Sweep run_sweep(const Options& opt) {
  const auto b = bounds_for(opt.suite);
  Sweep s;
  auto t0 = std::chrono::steady_clock::now();
  for (const auto& sig : signatures(b.a_max, 2, b.p_max)) sweep_stratum(sig, opt.threads, s);
  s.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return s;
}

inline std::string bound_text(const Options& opt) {
  const auto b = bounds_for(opt.suite);
  return "a <= " + std::to_string(b.a_max) + ", 2 <= p <= " + std::to_string(b.p_max);
}

// Distinct realizable sign functions whose zero set is exactly {I}, taken from the facets
// of chambers in graph order.
inline std::vector<SignFunction> wall_faces(const ChamberGraph& G, const PoleSubset& I, std::size_t limit) {
  std::vector<SignFunction> out;
  std::set<std::string> seen;
  for (std::size_t c = 0; c < G.size() && out.size() < limit; ++c) {
    if (!G.neighbor(c, I)) continue;
    SignFunction face = G.chamber(c).psi.with(I, Sign::Zero).marked_realizable();
    if (seen.insert(face.key()).second) out.push_back(face);
  }
  return out;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Criteria

inline Check degree_formula(const Options& opt, const detail::Sweep& s) {
  Check c{1, "degree formula a!/(a+2-p)! on every chamber", {}, s.seconds};
  c.parts.push_back(detail::sub("fiber sizes", s.degree.count() == 0,
                                std::to_string(s.chambers) + " chamber fibers over " + std::to_string(s.strata) +
                                    " strata (" + detail::bound_text(opt) + "), " + std::to_string(s.degree.count()) +
                                    " mismatches " + s.degree.str()));
  return c;
}

// Criteria 2 and 3 share the fibers over single-wall sign functions.
inline std::pair<Check, Check> single_wall_counts(const Options& opt) {
  Check c{2, "counts over a single wall depend only on the zero set", {}, 0};
  Check single{3, "single-resonance closed form", {}, 0};
  auto t0 = std::chrono::steady_clock::now();
  const auto b = bounds_for(opt.suite);
  detail::Examples disagree, formula, thin;
  std::size_t zero_sets = 0, fibers = 0;
  for (const auto& sig : signatures(b.a_max, 2, b.p_max)) {
    const auto G = chamber_graph(sig.poles());
    for (const auto& I : canonical_subsets(sig.poles())) {
      auto faces = detail::wall_faces(*G, I, 4);
      ++zero_sets;
      if (faces.size() < 3 && sig.poles() >= 4) thin.add(to_string(sig) + " " + to_string(I));
      std::optional<std::size_t> first;
      const auto expected = static_cast<std::size_t>(single_resonance_count(sig, I));
      for (const auto& psi : faces) {
        ++fibers;
        auto n = enumerate_fiber(sig, psi).size();
        if (!first) first = n;
        if (n != *first) disagree.add(to_string(sig) + " " + to_string(I) + " at " + psi.key());
        if (n != expected) {
          formula.add(to_string(sig) + " " + to_string(I) + ": " + std::to_string(n) + " vs " + std::to_string(expected));
        }
      }
    }
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  c.seconds = secs;
  c.parts.push_back(detail::sub("equal counts", disagree.count() == 0,
                                std::to_string(zero_sets) + " zero sets, " + std::to_string(fibers) + " fibers, " +
                                    std::to_string(disagree.count()) + " disagreements " + disagree.str()));
  c.parts.push_back(detail::sub("three faces per zero set when p >= 4", thin.count() == 0,
                                std::to_string(thin.count()) + " zero sets with fewer than 3 faces " + thin.str() +
                                    "; for p <= 3 a wall has at most 2 faces and all of them are used"));
  single.parts.push_back(detail::sub("all walls", formula.count() == 0,
                                     std::to_string(formula.count()) + " mismatches " + formula.str()));
  auto ex = enumerate_fiber(make_signature(4, {2, 2, 2}), sign_function_of(parse_residues("1,0,-1")));
  single.parts.push_back(detail::sub("H(4,[2,2,2]) over residues (1,0,-1)", ex.size() == 1,
                                     "count " + std::to_string(ex.size()) + ", expected 1"));
  return {c, single};
}

inline Check recurrence_and_transfer(const Options& opt) {
  Check c{4, "adding a simple pole and weight transfer are bijections", {}, 0};
  auto t0 = std::chrono::steady_clock::now();
  const int a_max = opt.suite == Suite::Full ? 6 : 4;
  detail::Examples leaf, transfer;
  std::size_t leaf_strata = 0, transfer_pairs = 0;
  for (const auto& sig : signatures(a_max, 2, 5)) {
    ++leaf_strata;
    const int p = sig.poles();
    auto base = enumerate_fiber(sig, standard_sign_function(p));
    auto ext_b = sig.b;
    ext_b.push_back(1);
    auto ext_sig = make_signature(sig.a + 1, ext_b);
    auto ext = enumerate_fiber(ext_sig, standard_sign_function(p + 1));
    std::set<std::string> made;
    std::size_t produced = 0;
    bool ok = true;
    for (const auto& t : base.trees) {
      for (const auto& cr : corners(t)) {
        if (!cr.legal) continue;
        auto u = add_simple_pole(t, cr.at);
        ++produced;
        made.insert(canonical_key(u));
        auto [back, corner] = remove_simple_pole(u);
        if (canonical_key(back) != canonical_key(t)) ok = false;
      }
    }
    const std::set<std::string> target(ext.keys.begin(), ext.keys.end());
    if (!ok || made.size() != produced || made != target || produced != static_cast<std::size_t>(sig.a + 1) * base.size()) {
      leaf.add(to_string(sig) + ": " + std::to_string(made.size()) + " of " + std::to_string(ext.size()));
    }
  }
  const std::vector<std::pair<int, int>> families{{4, 3}, {5, 3}, {6, 3}, {5, 4}};
  for (auto [a, p] : families) {
    for (const auto& sig : signatures(a, p, p)) {
      if (sig.a != a) continue;
      for (int i = 2; i <= p; ++i) {
        if (sig.order(i) < 2) continue;
        ++transfer_pairs;
        auto target_sig = weight_transfer_signature(sig, i);
        auto from = enumerate_fiber(sig, standard_sign_function(p));
        auto to = enumerate_fiber(target_sig, standard_sign_function(p));
        std::set<std::string> image;
        bool ok = true;
        for (const auto& t : from.trees) {
          auto u = weight_transfer(t, i);
          if (!validate(u, target_sig)) ok = false;
          image.insert(canonical_key(u));
          if (canonical_key(weight_transfer_inverse(u, i)) != canonical_key(t)) ok = false;
        }
        if (!ok || image != std::set<std::string>(to.keys.begin(), to.keys.end())) {
          transfer.add(to_string(sig) + " i=" + std::to_string(i));
        }
      }
    }
  }
  c.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  c.parts.push_back(detail::sub("simple pole, factor a+1", leaf.count() == 0,
                                std::to_string(leaf_strata) + " strata with a <= " + std::to_string(a_max) + ", " +
                                    std::to_string(leaf.count()) + " failures " + leaf.str()));
  c.parts.push_back(detail::sub("weight transfer", transfer.count() == 0,
                                std::to_string(transfer_pairs) + " (stratum, vertex) pairs, " +
                                    std::to_string(transfer.count()) + " failures " + transfer.str()));
  return c;
}

inline Check deep_resonance(const Options& opt) {
  Check c{5, "deep resonance: empty origin fiber and chain count", {}, 0};
  auto t0 = std::chrono::steady_clock::now();
  const auto b = bounds_for(opt.suite);
  detail::Examples origin, chain;
  std::size_t strata = 0, chains = 0;
  for (const auto& sig : signatures(b.a_max, 2, b.p_max)) {
    ++strata;
    const int p = sig.poles();
    if (enumerate_fiber(sig, SignFunction::constant(p, Sign::Zero)).size() != 0) origin.add(to_string(sig));
    if (p >= 3) {
      ++chains;
      auto n = enumerate_fiber(sig, chain_sign_function(p)).size();
      if (static_cast<std::int64_t>(n) != deep_resonance_count(sig)) {
        chain.add(to_string(sig) + ": " + std::to_string(n) + " vs " + std::to_string(deep_resonance_count(sig)));
      }
    }
  }
  auto named = [](int a, std::vector<int> bs, std::int64_t want) {
    auto sig = make_signature(a, bs);
    auto n = static_cast<std::int64_t>(enumerate_fiber(sig, chain_sign_function(sig.poles())).size());
    return n == want && deep_resonance_count(sig) == want;
  };
  c.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  c.parts.push_back(detail::sub("origin fiber empty", origin.count() == 0,
                                std::to_string(strata) + " strata, " + std::to_string(origin.count()) + " nonempty " + origin.str()));
  c.parts.push_back(detail::sub("chain count", chain.count() == 0 && chains >= 5,
                                std::to_string(chains) + " strata, " + std::to_string(chain.count()) + " mismatches " + chain.str()));
  c.parts.push_back(detail::sub("H(4,[2,2,2]) -> 1 and H(5,[2,3,2]) -> 2", named(4, {2, 2, 2}, 1) && named(5, {2, 3, 2}, 2), "both match"));
  return c;
}

inline Check meridian_cycle_types(const Options& opt, const detail::Sweep& s) {
  Check c{6, "meridian cycle types and trivial meridians", {}, 0};
  c.parts.push_back(detail::sub("cycle types", s.cycle_type.count() == 0,
                                std::to_string(s.incidences) + " (chamber, wall) incidences (" + detail::bound_text(opt) +
                                    "), " + std::to_string(s.cycle_type.count()) + " mismatches " + s.cycle_type.str()));
  c.parts.push_back(detail::sub("trivial exactly on the listed cases", s.triviality.count() == 0,
                                std::to_string(s.triviality.count()) + " mismatches " + s.triviality.str()));
  return c;
}

// The six trees over the chamber with residues (-1,-1,2) of H(6,[2,3,3]) and over the
// chamber across the wall of pole 1, residues (1,-2,1), named by their shapes.
inline const std::vector<std::pair<char, std::string>>& table_trees_c() {
  static const std::vector<std::pair<char, std::string>> v{
      {'A', "1(<2(****)*>3(****)*)"}, {'B', "1(>3(<2(****)****)**)"}, {'C', "1(>3(**<2(****)**)**)"},
      {'D', "1(>3(****<2(****))**)"}, {'E', "1(>2(*>3(****)***)**)"}, {'F', "1(>2(***>3(****)*)**)"}};
  return v;
}

inline const std::vector<std::pair<char, std::string>>& table_trees_c_prime() {
  static const std::vector<std::pair<char, std::string>> v{
      {'A', "1(<2(****)*>3(****)*)"}, {'B', "1(<2(>3(****)****)**)"}, {'C', "1(<2(**>3(****)**)**)"},
      {'D', "1(<2(****>3(****))**)"}, {'E', "1(<3(*<2(****)***)**)"}, {'F', "1(<3(***<2(****)*)**)"}};
  return v;
}

// Letters of the image of A..F under the lower half crossing of pole 1, or "" on failure.
inline std::string crossing_table() {
  auto sig = make_signature(6, {2, 3, 3});
  auto from = enumerate_fiber(sig, sign_function_of(parse_residues("-1,-1,2")));
  auto to = enumerate_fiber(sig, sign_function_of(parse_residues("1,-2,1")));
  auto I = PoleSubset::of({1}, 3);
  auto w = wall_cross(from, to, I, Half::Lower);
  std::map<std::string, char> name_to;
  for (const auto& [l, k] : table_trees_c_prime()) name_to[k] = l;
  std::string out;
  for (const auto& [l, k] : table_trees_c()) {
    auto i = from.index_of(k);
    if (!i) return "";
    auto it = name_to.find(to.keys[w.map(*i)]);
    if (it == name_to.end()) return "";
    out += it->second;
  }
  return out;
}

inline Check wall_crossing(const Options& opt, const detail::Sweep& s) {
  Check c{7, "wall-crossing calibration and half-crossing composition", {}, 0};
  auto t0 = std::chrono::steady_clock::now();
  const std::string got = crossing_table();
  c.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  c.parts.push_back(detail::sub("H(6,[2,3,3]) crossing table", got == "ADEFBC", "A..F -> " + got + ", expected ADEFBC"));
  c.parts.push_back(detail::sub("lower o upper = meridian on both sides", s.composition.count() == 0,
                                std::to_string(s.adjacencies) + " walls of adjacent chamber pairs (" + detail::bound_text(opt) +
                                    "), " + std::to_string(s.composition.count()) + " failures " + s.composition.str()));
  return c;
}

inline Check group_identifications(const Options& opt) {
  Check c{8, "monodromy group identifications", {}, 0};
  auto t0 = std::chrono::steady_clock::now();
  CoverOptions co{opt.threads, false};
  detail::Examples cyc, st, three;
  for (int a = 2; a <= 6; ++a) {
    auto r = monodromy_group(make_signature(a, {a, 1, 1}), std::nullopt, co, opt.seed);
    if (r.group.kind != GroupKind::Cyclic || r.group.degree != static_cast<std::size_t>(a)) cyc.add("a=" + std::to_string(a) + ": " + r.group.name());
  }
  auto ex = monodromy_group(make_signature(6, {2, 3, 3}), std::nullopt, co, opt.seed);
  const bool exotic = ex.group.order == 120 && ex.group.transitive && ex.group.stabilizer_order == 20 &&
                      ex.group.kind == GroupKind::ExoticS5inS6;
  for (int s_ = 2; s_ <= 4; ++s_) {
    for (int t = 2; t <= 4; ++t) {
      auto sig = make_signature(s_ + t - 1, {s_, t, 1});
      auto r = monodromy_group(sig, std::nullopt, co, opt.seed);
      GroupKind want = (s_ % 2 == 1 && t % 2 == 1) ? GroupKind::Alternating : GroupKind::Symmetric;
      if (r.group.kind != want) st.add(to_string(sig) + ": " + r.group.name());
    }
  }
  const int a_max = opt.suite == Suite::Full ? 8 : 6;
  std::size_t count3 = 0;
  for (const auto& sig : signatures(a_max, 3, 3)) {
    if (sig.b[0] < 2 || sig.b[1] < 2 || sig.b[2] < 2) continue;
    auto sorted = sig.b;
    std::sort(sorted.begin(), sorted.end());
    if (sig.a == 6 && sorted == std::vector<int>{2, 3, 3}) {
      auto r = monodromy_group(sig, std::nullopt, co, opt.seed);
      if (r.group.kind != GroupKind::ExoticS5inS6) three.add(to_string(sig) + ": " + r.group.name());
      continue;
    }
    ++count3;
    auto r = monodromy_group(sig, std::nullopt, co, opt.seed);
    const bool same = sig.b[0] % 2 == sig.b[1] % 2 && sig.b[1] % 2 == sig.b[2] % 2;
    GroupKind want = same ? GroupKind::Alternating : GroupKind::Symmetric;
    if (r.group.kind != want || r.group.degree != static_cast<std::size_t>(sig.a)) three.add(to_string(sig) + ": " + r.group.name());
  }
  c.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  c.parts.push_back(detail::sub("H(a,[a,1,1]) cyclic, a = 2..6", cyc.count() == 0, "5 strata " + cyc.str()));
  c.parts.push_back(detail::sub("H(6,[2,3,3]) order 120, transitive, stabilizer 20", exotic,
                                ex.group.name() + " order " + ex.group.order.str() + " stabilizer " + ex.group.stabilizer_order.str()));
  c.parts.push_back(detail::sub("H(s+t-1,[s,t,1]), 2 <= s,t <= 4", st.count() == 0, "9 strata " + st.str()));
  c.parts.push_back(detail::sub("three poles of order >= 2, a <= " + std::to_string(a_max) + ", relabelings of (6,[2,3,3]) exotic", three.count() == 0,
                                std::to_string(count3) + " strata " + three.str()));
  return c;
}

// Local meridians at a few seeded chambers of six-pole strata; parity is invariant under
// conjugation, so these decide the parity of the generators they transport to.
inline bool six_pole_meridians_even(const StratumSignature& sig, std::uint64_t seed, std::size_t samples, std::string& detail) {
  const int p = sig.poles();
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick(-30, 30);
  std::size_t done = 0, meridians = 0;
  while (done < samples) {
    std::vector<Rational> lambda;
    Rational total = 0;
    for (int j = 0; j + 1 < p; ++j) {
      lambda.emplace_back(pick(rng));
      total += lambda.back();
    }
    lambda.push_back(-total);
    auto psi = sign_function_of(ResidueConfig{lambda});
    if (!psi.nowhere_zero()) continue;
    ++done;
    auto f = enumerate_fiber(sig, psi);
    for (const auto& I : chamber_walls(psi)) {
      ++meridians;
      if (parity(meridian_on_fiber(f, I)) == Parity::Odd) {
        detail = to_string(sig) + " " + to_string(I) + " at " + psi.key() + " is odd";
        return false;
      }
    }
  }
  detail += to_string(sig) + ": " + std::to_string(meridians) + " meridians; ";
  return true;
}

inline Check parity_criterion(const Options& opt, const detail::Sweep& s) {
  Check c{9, "parity of the generators", {}, 0};
  auto t0 = std::chrono::steady_clock::now();
  c.parts.push_back(detail::sub("all generators even iff the case analysis says so", s.parity.count() == 0,
                                std::to_string(s.parity_strata) + " strata (" + detail::bound_text(opt) + "), " +
                                    std::to_string(s.parity.count()) + " mismatches " + s.parity.str()));
  std::string info;
  bool ok = true;
  std::vector<StratumSignature> six{make_signature(4, {1, 1, 1, 1, 1, 1}), make_signature(6, {2, 2, 1, 1, 1, 1})};
  if (opt.suite == Suite::Full) six.push_back(make_signature(6, {3, 1, 1, 1, 1, 1}));
  for (const auto& sig : six) ok = six_pole_meridians_even(sig, opt.seed, 2, info) && ok;
  c.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  c.parts.push_back(detail::sub("p = 6, a even: sampled meridians even", ok, info));
  return c;
}

inline Check commutators(const Options&, const detail::Sweep& s) {
  Check c{10, "commutators of meridians", {}, 0};
  auto t0 = std::chrono::steady_clock::now();
  c.parts.push_back(detail::sub("secant pairs commute", s.secant.count() == 0 && s.secant_pairs > 0,
                                std::to_string(s.secant_pairs) + " secant pairs in p = 4,5 strata, " +
                                    std::to_string(s.secant.count()) + " non-commuting " + s.secant.str()));
  {
    auto sig = make_signature(4, {1, 2, 3});
    auto r = commutator_structure(sig, PoleSubset::of({2}, 3), PoleSubset::of({3}, 3));
    c.parts.push_back(detail::sub("H(4,[1,2,3]) meridians of 2 and 3", r.kind == CommutatorKind::ThreeCycles && r.count == 1,
                                  describe(r) + ", expected ThreeCycles(1)"));
  }
  {
    auto sig = make_signature(5, {2, 2, 2, 1});
    auto r = commutator_structure(sig, PoleSubset::of({1}, 4), PoleSubset::of({2}, 4));
    SubCheck sc = detail::sub("H(5,[2,2,2,1]) meridians of 1 and 2", r.kind == CommutatorKind::EvenTranspositions,
                              describe(r) + ", expected an even product of transpositions");
    std::vector<std::size_t> moved;
    for (auto len : r.cycle_type)
      if (len > 1) moved.push_back(len);
    if (!sc.pass && moved == std::vector<std::size_t>{4, 4}) {
      sc.known = true;
      sc.detail += "; known: the meridians of poles 1 and 2 are 4-cycles at every chamber adjacent to both walls and "
                   "their commutator is two 4-cycles for every pair of based meridians";
    }
    c.parts.push_back(sc);
  }
  c.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return c;
}

inline Check topological_classes(const Options& opt) {
  Check c{11, "topological classes", {}, 0};
  auto t0 = std::chrono::steady_clock::now();
  CoverOptions co{opt.threads, false};
  auto expect = [&](int a, std::vector<int> b, int k, std::size_t size) {
    auto sig = make_signature(a, std::move(b));
    try {
      auto t = topological_class_partition(sig, co);
      bool ok = t.k == k && t.classes.size() == static_cast<std::size_t>(k);
      for (const auto& cl : t.classes) ok = ok && cl.size() == size;
      ok = ok && cycle_type(t.shift) == std::vector<std::size_t>{static_cast<std::size_t>(k)};
      return detail::sub(to_string(sig), ok,
                         std::to_string(t.classes.size()) + " classes of " + std::to_string(t.classes.front().size()) +
                             ", quotient " + to_cycle_string(t.shift));
    } catch (const Error& e) {
      return detail::sub(to_string(sig), false, e.what());
    }
  };
  c.parts.push_back(expect(4, {2, 2, 1, 1}, 2, 6));
  c.parts.push_back(expect(6, {3, 3, 1, 1}, 3, 10));
  for (int a = 2; a <= 6; ++a) c.parts.push_back(expect(a, {a, 1, 1}, a, 1));
  c.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return c;
}

// (1 .. k) and (l .. n) in 0-based points.
inline Permutation cycle_on(std::size_t n, std::size_t from, std::size_t to) {
  std::vector<std::uint32_t> img(n);
  for (std::size_t x = 0; x < n; ++x) img[x] = static_cast<std::uint32_t>(x);
  for (std::size_t x = from; x < to; ++x) img[x] = static_cast<std::uint32_t>(x + 1);
  img[to] = static_cast<std::uint32_t>(from);
  return Permutation(std::move(img));
}

inline Check arrangement_facts(const Options& opt) {
  Check c{12, "arrangement facts and the cycle-pair lemma", {}, 0};
  auto t0 = std::chrono::steady_clock::now();
  {
    auto psi = parse_sign_function("1=+;2=+;3=-;1,2=+;1,3=+;1,4=+;1,2,3=+", 4);
    auto walls = chamber_walls(make_chamber(psi));
    std::string list;
    for (const auto& w : walls) list += to_string(w);
    SubCheck sc = detail::sub("p = 4 chamber z1,z2,z1+z2,z1+z3,z1+z4,-z3,-z4 > 0 has 4 walls", walls.size() == 4,
                              "walls " + list);
    if (walls.size() == 3) {
      sc.known = true;
      sc.detail += "; known: z3 = 0 forces z1+z4 = -z2 < 0, so {3} and {4} are not facets; every p = 4 chamber has 3 walls";
    }
    c.parts.push_back(sc);
    std::size_t non_simplicial = 0;
    const auto g5 = chamber_graph(5);
    for (const auto& ch : g5->chambers())
      if (!is_simplicial(ch)) ++non_simplicial;
    c.parts.push_back(detail::sub("p = 5 has non-simplicial chambers", non_simplicial > 0,
                                  std::to_string(non_simplicial) + " of " + std::to_string(g5->size())));
  }
  {
    bool ok = true;
    for (int p = 2; p <= 3; ++p)
      for (const auto& ch : chamber_graph(p)->chambers()) ok = ok && is_simplicial(ch);
    c.parts.push_back(detail::sub("p <= 3 chambers simplicial", ok, "8 chambers"));
  }
  {
    std::string sizes;
    bool ok = true;
    for (int p = 2; p <= 5; ++p) {
      auto g = chamber_graph(p);
      ok = ok && g->is_connected();
      sizes += (sizes.empty() ? "" : ", ") + std::to_string(g->size());
    }
    c.parts.push_back(detail::sub("chamber graphs connected for p <= 5", ok, "chambers " + sizes));
  }
  {
    const std::size_t n_max = opt.suite == Suite::Full ? 8 : 7;
    detail::Examples first, second;
    std::set<std::string> exceptions;
    for (std::size_t n = 3; n <= n_max; ++n) {
      const BigInt full = isoresidual::detail::big_factorial(n);
      for (std::size_t k = 2; k < n; ++k) {
        auto G = make_group(n, {cycle_on(n, 0, k - 1), cycle_on(n, 0, n - 1)});
        BigInt want = (k % 2 == 1 && n % 2 == 1) ? full / 2 : full;
        if (group_order(G, opt.seed) != want) first.add("k=" + std::to_string(k) + " n=" + std::to_string(n));
        for (std::size_t l = 2; l <= k; ++l) {
          auto H = make_group(n, {cycle_on(n, 0, k - 1), cycle_on(n, l - 1, n - 1)});
          BigInt w2 = all_even(H) ? full / 2 : full;
          if (group_order(H, opt.seed) != w2) {
            exceptions.insert("(1.." + std::to_string(k) + "),(" + std::to_string(l) + ".." + std::to_string(n) + ")");
          }
        }
      }
    }
    const std::set<std::string> listed{"(1..4),(3..6)", "(1..4),(2..6)", "(1..5),(3..6)"};
    std::string got;
    for (const auto& e : exceptions) got += (got.empty() ? "" : " ") + e;
    c.parts.push_back(detail::sub("first family, n <= " + std::to_string(n_max), first.count() == 0, first.str()));
    c.parts.push_back(detail::sub("second family exceptions", exceptions == listed, "exceptions " + got));
  }
  c.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return c;
}

inline std::vector<Check> run(const Options& opt) {
  std::vector<Check> out;
  auto sweep = detail::run_sweep(opt);
  out.push_back(degree_formula(opt, sweep));
  auto [independence, single] = single_wall_counts(opt);
  out.push_back(independence);
  out.push_back(single);
  out.push_back(recurrence_and_transfer(opt));
  out.push_back(deep_resonance(opt));
  out.push_back(meridian_cycle_types(opt, sweep));
  out.push_back(wall_crossing(opt, sweep));
  out.push_back(group_identifications(opt));
  out.push_back(parity_criterion(opt, sweep));
  out.push_back(commutators(opt, sweep));
  out.push_back(topological_classes(opt));
  out.push_back(arrangement_facts(opt));
  return out;
}

inline std::string format_line(const Check& c) {
  std::ostringstream os;
  os << (c.pass() ? "PASS" : "FAIL") << " [" << c.id << "] " << c.title;
  if (c.known_failure()) os << " (known deviation)";
  for (const auto& s : c.parts) {
    if (!s.pass || !s.detail.empty()) {
      os << " | " << (s.pass ? "" : "FAILED ") << s.name;
      if (!s.detail.empty()) os << ": " << s.detail;
    }
  }
  return os.str();
}

}  // namespace isoresidual::acceptance
