#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <optional>
#include <queue>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "isoresidual/arrangement.hpp"
#include "isoresidual/decorated_tree.hpp"
#include "isoresidual/fiber_enumeration.hpp"
#include "isoresidual/parallel.hpp"
#include "isoresidual/permgroup.hpp"
#include "isoresidual/stratum_core.hpp"

namespace isoresidual {

// Half of a meridian. Upper turns the marked edge forward (the direction of the meridian)
// when the canonical sign of the wall is positive on the starting side, backward otherwise;
// Lower is the opposite. Upper crossings in both directions are mutually inverse.
enum class Half { Upper, Lower };

inline const char* to_string(Half h) { return h == Half::Upper ? "upper" : "lower"; }

// Permutation of tree indices of one fiber.
struct FiberPermutation {
  std::shared_ptr<const FiberSet> fiber;
  Permutation perm;
};

struct WallCrossing {
  SignFunction from;
  SignFunction to;
  PoleSubset I;
  Half half = Half::Upper;
  Permutation map;  // index in the fiber over `from` -> index in the fiber over `to`
};

namespace detail {

// Cuts edge e, walks each attachment corner `steps` corners along the boundary of its own
// component, and glues the edge back, reversed when `flip` is set.
inline DecoratedTree move_edge(const DecoratedTree& t, const Edge& e, int steps, bool flip) {
  DecoratedTree out = t;
  CornerRef s = detach_end(out, e.source, e.target);
  CornerRef g = detach_end(out, e.target, e.source);
  s = step_corner(out, s, steps);
  g = step_corner(out, g, steps);
  attach_end(out, s, g.vertex, flip ? Direction::Incoming : Direction::Outgoing);
  attach_end(out, g, s.vertex, flip ? Direction::Outgoing : Direction::Incoming);
  return out;
}

inline DecoratedTree gamma_on_tree(const DecoratedTree& t, const PoleSubset& I) {
  auto e = find_edge_with_partition(t, I);
  if (!e) return t;
  return move_edge(t, *e, 2, false);
}

inline DecoratedTree half_cross_tree(const DecoratedTree& t, const PoleSubset& I, bool forward) {
  auto e = find_edge_with_partition(t, I);
  if (!e) return t;
  return move_edge(t, *e, forward ? 1 : -1, true);
}

inline bool is_forward(Half half, Sign from_sign) { return (half == Half::Upper) == (from_sign == Sign::Positive); }

inline void require_wall(const SignFunction& psi, const PoleSubset& I) {
  if (psi(I) == Sign::Zero || !try_sample_point(psi.with(I, Sign::Zero))) {
    throw Error(ErrorKind::NotAdjacent, "hyperplane " + to_string(I) + " is not a wall of chamber " + psi.key());
  }
}

inline std::uint32_t lookup(const FiberSet& f, const DecoratedTree& t) {
  auto k = f.index_of(canonical_key(t));
  if (!k) throw std::logic_error("surgery left the fiber: " + canonical_key(t) + " over " + f.psi.key());
  return static_cast<std::uint32_t>(*k);
}

}  // namespace detail

// Meridian of wall I on the fiber over a chamber; the wall is not re-checked.
inline Permutation meridian_on_fiber(const FiberSet& f, const PoleSubset& I) {
  std::vector<std::uint32_t> img(f.size());
  for (std::size_t k = 0; k < f.size(); ++k) img[k] = detail::lookup(f, detail::gamma_on_tree(f.trees[k], I));
  return Permutation(std::move(img));
}

inline Permutation local_gamma(const FiberSet& f, const PoleSubset& I) {
  detail::require_wall(f.psi, I);
  return meridian_on_fiber(f, I);
}

inline FiberPermutation local_gamma(const StratumSignature& sig, const Chamber& c, const PoleSubset& I) {
  detail::require_wall(c.psi, I);
  auto f = std::make_shared<const FiberSet>(enumerate_fiber(sig, c.psi));
  Permutation g = meridian_on_fiber(*f, I);
  return FiberPermutation{std::move(f), std::move(g)};
}

inline Permutation crossing_map(const FiberSet& from, const FiberSet& to, const PoleSubset& I, Half half) {
  const bool fwd = detail::is_forward(half, from.psi(I));
  std::vector<std::uint32_t> img(from.size());
  for (std::size_t k = 0; k < from.size(); ++k) img[k] = detail::lookup(to, detail::half_cross_tree(from.trees[k], I, fwd));
  return Permutation(std::move(img));
}

inline WallCrossing wall_cross(const FiberSet& from, const FiberSet& to, const PoleSubset& I, Half half) {
  detail::require_wall(from.psi, I);
  if (!(to.psi == from.psi.with(I, negate(from.psi(I))))) {
    throw Error(ErrorKind::NotAdjacent, "chambers " + from.psi.key() + " and " + to.psi.key() + " are not separated by " + to_string(I));
  }
  return WallCrossing{from.psi, to.psi, I, half, crossing_map(from, to, I, half)};
}

inline WallCrossing wall_cross(const StratumSignature& sig, const Chamber& c, const PoleSubset& I, Half half) {
  detail::require_wall(c.psi, I);
  SignFunction other = c.psi.with(I, negate(c.psi(I))).marked_realizable();
  return wall_cross(enumerate_fiber(sig, c.psi), enumerate_fiber(sig, other), I, half);
}

// ---------------------------------------------------------------------------
// Closed-form predictions

// Cycle lengths of the meridian of I on a generic fiber, decreasing, fixed points included.
inline std::vector<std::size_t> predicted_meridian_cycle_type(const StratumSignature& sig, const PoleSubset& I) {
  const int p = sig.poles();
  const auto n = static_cast<std::size_t>(generic_degree(sig));
  if (p == 2) return std::vector<std::size_t>(n, 1);
  const auto total = static_cast<std::size_t>(edge_marked_total(sig, I.mask()));
  std::size_t len = 0;
  if (I.size() == 1 || I.size() == p - 1) {
    Mask big = I.size() == 1 ? I.complement_mask() : I.mask();
    len = static_cast<std::size_t>(resonance_degree(sig, big).d);
  } else {
    const int d = resonance_degree(sig, I).d;
    len = std::lcm(static_cast<std::size_t>(d), static_cast<std::size_t>(sig.a - d));
  }
  std::vector<std::size_t> out(total / len, len);
  out.resize(out.size() + (n - total), 1);
  std::sort(out.rbegin(), out.rend());
  return out;
}

// The meridian of I is trivial exactly in these cases (up to relabeling the poles).
inline bool meridian_is_trivial(const StratumSignature& sig, const PoleSubset& I) {
  const int p = sig.poles();
  if (p == 2) return true;
  if (p == 4 && sig.a == 2 && I.size() == 2) return true;
  if (p == 3) {
    int single = I.size() == 1 ? I.members().front() : 0;
    if (single == 0) {
      for (int j = 1; j <= 3; ++j)
        if (!(I.mask() & label_bit(j))) single = j;
    }
    return sig.order(single) == sig.a;
  }
  return false;
}

// Whether every meridian is an even permutation of the generic fiber.
inline bool monodromy_is_even(const StratumSignature& sig) {
  const int p = sig.poles();
  if (p == 2) return true;
  if (p == 3) {
    return std::all_of(sig.b.begin(), sig.b.end(), [&](int b) { return b % 2 == sig.b.front() % 2; });
  }
  if (p == 4) return std::all_of(sig.b.begin(), sig.b.end(), [](int b) { return b % 2 == 0; });
  if (p <= 6) return sig.a % 2 == 0;
  return true;
}

// ---------------------------------------------------------------------------
// The cover over the whole arrangement

struct CoverOptions {
  unsigned threads = 1;
  bool reverse_gallery = false;  // explore chamber adjacencies in reverse order
};

struct BasedGenerator {
  PoleSubset wall;
  std::size_t chamber = 0;
  Permutation perm;  // on the base fiber
};

class IsoresidualCover {
 public:
  explicit IsoresidualCover(StratumSignature sig, std::optional<SignFunction> base = std::nullopt,
                            CoverOptions opt = {})
      : sig_(std::move(sig)), opt_(opt) {
    graph_ = chamber_graph(sig_.poles());
    base_ = graph_->index_of(base ? *base : standard_sign_function(sig_.poles()));
    fibers_.resize(graph_->size());
    parallel_for(graph_->size(), opt_.threads, [&](std::size_t c) {
      fibers_[c] = detail::fiber_from_keys(sig_, graph_->chamber(c).psi, detail::enumerate_keys(sig_, graph_->chamber(c).psi));
    });
    build_transports();
  }

  const StratumSignature& signature() const { return sig_; }
  const ChamberGraph& graph() const { return *graph_; }
  std::size_t base_index() const { return base_; }
  const Chamber& base() const { return graph_->chamber(base_); }
  std::size_t degree() const { return fibers_[base_].size(); }
  const FiberSet& fiber(std::size_t c) const { return fibers_.at(c); }
  const FiberSet& base_fiber() const { return fibers_[base_]; }

  Permutation meridian(std::size_t c, const PoleSubset& I) const {
    if (!graph_->neighbor(c, I)) {
      throw Error(ErrorKind::NotAdjacent, "hyperplane " + to_string(I) + " is not a wall of chamber " + fibers_[c].psi.key());
    }
    return meridian_on_fiber(fibers_[c], I);
  }

  WallCrossing crossing(std::size_t c, const PoleSubset& I, Half half) const {
    auto d = graph_->neighbor(c, I);
    if (!d) throw Error(ErrorKind::NotAdjacent, "hyperplane " + to_string(I) + " is not a wall of chamber " + fibers_[c].psi.key());
    return WallCrossing{fibers_[c].psi, fibers_[*d].psi, I, half, crossing_map(fibers_[c], fibers_[*d], I, half)};
  }

  // Base fiber index -> fiber index over chamber c, along a gallery of upper crossings.
  const Permutation& transport(std::size_t c) const { return transports_.at(c); }

  // Conjugates a permutation of the fiber over c back to the base fiber.
  Permutation to_base(std::size_t c, const Permutation& g) const {
    const Permutation& t = transports_[c];
    return compose(t.inverse(), compose(g, t));
  }

  // One meridian for every (wall, chamber) incidence, moved to the base fiber.
  const std::vector<BasedGenerator>& based_generators() const {
    std::call_once(generators_once_, [&] {
      std::vector<std::vector<BasedGenerator>> per(graph_->size());
      parallel_for(graph_->size(), opt_.threads, [&](std::size_t c) {
        for (const auto& adj : graph_->adjacent(c)) {
          per[c].push_back(BasedGenerator{adj.wall, c, to_base(c, meridian_on_fiber(fibers_[c], adj.wall))});
        }
      });
      for (auto& v : per)
        for (auto& g : v) generators_.push_back(std::move(g));
    });
    return generators_;
  }

  // Closed galleries of upper crossings whose transport is not the identity. Zero means
  // transport does not depend on the gallery.
  std::size_t gallery_defects() const {
    std::size_t bad = 0;
    for (std::size_t c = 0; c < graph_->size(); ++c) {
      for (const auto& adj : graph_->adjacent(c)) {
        if (adj.neighbor < c) continue;
        Permutation up = crossing_map(fibers_[c], fibers_[adj.neighbor], adj.wall, Half::Upper);
        if (compose(up, transports_[c]) != transports_[adj.neighbor]) ++bad;
      }
    }
    return bad;
  }

  PermGroup group() const {
    std::set<Permutation> distinct;
    for (const auto& g : based_generators())
      if (!g.perm.is_identity()) distinct.insert(g.perm);
    return make_group(degree(), std::vector<Permutation>(distinct.begin(), distinct.end()));
  }

 private:
  void build_transports() {
    const std::size_t n = graph_->size();
    transports_.assign(n, Permutation{});
    std::vector<char> seen(n, 0);
    std::queue<std::size_t> q;
    transports_[base_] = Permutation::identity(fibers_[base_].size());
    seen[base_] = 1;
    q.push(base_);
    while (!q.empty()) {
      std::size_t c = q.front();
      q.pop();
      auto adj = graph_->adjacent(c);
      if (opt_.reverse_gallery) std::reverse(adj.begin(), adj.end());
      for (const auto& a : adj) {
        if (seen[a.neighbor]) continue;
        seen[a.neighbor] = 1;
        Permutation up = crossing_map(fibers_[c], fibers_[a.neighbor], a.wall, Half::Upper);
        transports_[a.neighbor] = compose(up, transports_[c]);
        q.push(a.neighbor);
      }
    }
  }

  StratumSignature sig_;
  CoverOptions opt_;
  std::shared_ptr<const ChamberGraph> graph_;
  std::size_t base_ = 0;
  std::vector<FiberSet> fibers_;
  std::vector<Permutation> transports_;
  mutable std::once_flag generators_once_;
  mutable std::vector<BasedGenerator> generators_;
};

// ---------------------------------------------------------------------------
// Group report

struct MonodromyReport {
  StratumSignature sig;
  SignFunction base;
  std::size_t degree = 0;
  std::size_t meridians = 0;            // (wall, chamber) incidences
  std::size_t distinct_generators = 0;  // non-identity, deduplicated
  bool all_even = true;
  std::size_t gallery_defects = 0;
  GroupIdentification group;
};

inline MonodromyReport monodromy_group(const IsoresidualCover& cover, std::uint64_t seed = kDefaultGroupSeed) {
  MonodromyReport r{cover.signature(), cover.base().psi, cover.degree(), 0, 0, true, 0, {}};
  r.meridians = cover.based_generators().size();
  PermGroup G = cover.group();
  r.distinct_generators = G.generators.size();
  r.all_even = all_even(G);
  r.gallery_defects = cover.gallery_defects();
  r.group = identify_group(G, seed);
  return r;
}

inline MonodromyReport monodromy_group(const StratumSignature& sig, std::optional<SignFunction> base = std::nullopt,
                                       CoverOptions opt = {}, std::uint64_t seed = kDefaultGroupSeed) {
  return monodromy_group(IsoresidualCover(sig, std::move(base), opt), seed);
}

// ---------------------------------------------------------------------------
// Commutators of two meridians near a codimension-two face

enum class CommutatorKind { Commute, ThreeCycles, EvenTranspositions, Other };

struct CommutatorReport {
  bool secant = false;
  Mask first = 0;   // raw side of the first wall used in the computation
  Mask second = 0;  // raw side of the second wall
  Mask rest = 0;    // the third part when the walls are parallel
  std::size_t chamber = 0;
  CommutatorKind kind = CommutatorKind::Other;
  std::size_t count = 0;  // number of 3-cycles or of transpositions
  std::vector<std::size_t> cycle_type;
  // What the commutation lemmas claim; absent when none of their hypotheses hold.
  std::optional<CommutatorKind> predicted;
  std::optional<std::size_t> predicted_count;

  bool matches_prediction() const {
    return !predicted || (kind == *predicted && (!predicted_count || *predicted_count == count));
  }
};

inline std::string to_string(CommutatorKind k, std::size_t count, const std::vector<std::size_t>& type) {
  switch (k) {
    case CommutatorKind::Commute: return "Commute";
    case CommutatorKind::ThreeCycles: return "ThreeCycles(" + std::to_string(count) + ")";
    case CommutatorKind::EvenTranspositions: return "EvenTranspositions(" + std::to_string(count) + ")";
    case CommutatorKind::Other: break;
  }
  // Fixed points are left out.
  std::string s;
  for (auto len : type)
    if (len > 1) s += (s.empty() ? "" : ",") + std::to_string(len);
  return "Other(" + s + ")";
}

inline std::string describe(const CommutatorReport& r) { return to_string(r.kind, r.count, r.cycle_type); }

inline bool are_secant(Mask I, Mask J, int p) {
  const Mask full = full_mask(p);
  return (I & J) && (I & ~J & full) && (~I & J & full) && (~I & ~J & full);
}

namespace detail {

inline void classify_commutator(const Permutation& c, CommutatorReport& r) {
  r.cycle_type = cycle_type(c);
  std::size_t threes = 0, twos = 0, other = 0;
  for (auto len : r.cycle_type) {
    if (len == 3) ++threes;
    else if (len == 2) ++twos;
    else if (len != 1) ++other;
  }
  if (c.is_identity()) {
    r.kind = CommutatorKind::Commute;
  } else if (other == 0 && twos == 0) {
    r.kind = CommutatorKind::ThreeCycles;
    r.count = threes;
  } else if (other == 0 && threes == 0 && twos % 2 == 0) {
    r.kind = CommutatorKind::EvenTranspositions;
    r.count = twos;
  } else {
    r.kind = CommutatorKind::Other;
  }
}

inline void predict_commutator(const StratumSignature& sig, CommutatorReport& r) {
  if (r.secant) {
    r.predicted = CommutatorKind::Commute;
    return;
  }
  auto dI = resonance_degree(sig, r.first), dJ = resonance_degree(sig, r.second), dK = resonance_degree(sig, r.rest);
  auto three = [&](ResonanceDegree x, ResonanceDegree y) {
    r.predicted = CommutatorKind::ThreeCycles;
    r.predicted_count = static_cast<std::size_t>(falling(x.d, x.d + 1 - x.c) * falling(y.d, y.d + 1 - y.c));
  };
  if (dK.d == 0) {
    if ((dI.d >= 1 && dJ.d >= 1) || (dI.d == 0 && dJ.d >= 2 && dJ.c >= 2) || (dJ.d == 0 && dI.d >= 2 && dI.c >= 2)) {
      three(dI, dJ);
    }
  } else if (dI.d + dJ.d >= 1) {
    r.predicted = CommutatorKind::EvenTranspositions;
  }
}

}  // namespace detail

namespace detail {

// Commutator of the meridians of I and J taken in a chamber touching a face where both
// hyperplanes meet. For parallel walls the disjoint representatives I', J' get sign
// negative and their complement K positive. fiber_of(c) supplies the fiber over chamber c.
template <class FiberOf>
CommutatorReport commutator_in(const StratumSignature& sig, const ChamberGraph& G, FiberOf&& fiber_of,
                               const PoleSubset& I, const PoleSubset& J) {
  const int p = sig.poles();
  if (I == J) throw Error(ErrorKind::BadInput, "commutator needs two distinct hyperplanes");
  CommutatorReport r;
  r.secant = are_secant(I.mask(), J.mask(), p);
  std::vector<PoleSubset> zero{I, J};
  if (r.secant) {
    r.first = I.mask();
    r.second = J.mask();
  } else {
    const Mask full = full_mask(p);
    for (Mask x : {I.mask(), I.complement_mask()}) {
      for (Mask y : {J.mask(), J.complement_mask()}) {
        if ((x & y) == 0 && !r.first) {
          r.first = x;
          r.second = y;
        }
      }
    }
    r.rest = full & ~(r.first | r.second);
    zero.push_back(PoleSubset::from_mask(r.rest, p));
  }
  std::optional<std::size_t> chosen;
  for (std::size_t c = 0; c < G.size() && !chosen; ++c) {
    const SignFunction& psi = G.chamber(c).psi;
    if (!r.secant && (psi.at(r.first) != Sign::Negative || psi.at(r.second) != Sign::Negative)) continue;
    SignFunction face = psi;
    for (const auto& z : zero) face = face.with(z, Sign::Zero);
    if (try_sample_point(face)) chosen = c;
  }
  if (!chosen) throw std::logic_error("no chamber touches the face of " + to_string(I) + " and " + to_string(J));
  r.chamber = *chosen;
  const PoleSubset A = PoleSubset::from_mask(r.first, p), B = PoleSubset::from_mask(r.second, p);
  for (const auto& W : {A, B}) {
    if (!G.neighbor(r.chamber, W)) throw std::logic_error("face chamber is not adjacent to " + to_string(W));
  }
  const FiberSet& f = fiber_of(r.chamber);
  classify_commutator(commutator(meridian_on_fiber(f, A), meridian_on_fiber(f, B)), r);
  predict_commutator(sig, r);
  return r;
}

}  // namespace detail

inline CommutatorReport commutator_structure(const IsoresidualCover& cover, const PoleSubset& I, const PoleSubset& J) {
  return detail::commutator_in(cover.signature(), cover.graph(),
                               [&](std::size_t c) -> const FiberSet& { return cover.fiber(c); }, I, J);
}

// Same, enumerating only the fiber over the chosen chamber.
inline CommutatorReport commutator_structure(const StratumSignature& sig, const PoleSubset& I, const PoleSubset& J) {
  const auto G = chamber_graph(sig.poles());
  std::optional<FiberSet> f;
  return detail::commutator_in(sig, *G,
                               [&](std::size_t c) -> const FiberSet& {
                                 f = enumerate_fiber(sig, G->chamber(c).psi);
                                 return *f;
                               },
                               I, J);
}

// ---------------------------------------------------------------------------
// Topological classes

struct TopologicalClasses {
  int k = 0;
  std::vector<std::vector<std::uint32_t>> classes;  // base fiber indices, ordered by least member
  PoleSubset shift_wall;                             // meridian used as the witness
  std::size_t shift_chamber = 0;
  Permutation shift;  // induced action on class indices
};

// Common factor k >= 2 of b_1..b_{p-2} when the last two poles are simple, else 0.
inline int topological_modulus(const StratumSignature& sig) {
  const int p = sig.poles();
  if (p < 3 || sig.order(p) != 1 || sig.order(p - 1) != 1) return 0;
  int k = 0;
  for (int j = 1; j <= p - 2; ++j) k = std::gcd(k, sig.order(j));
  return k >= 2 ? k : 0;
}

// Base chamber with the residue of pole p-1 negative and that of pole p positive.
inline SignFunction topological_base(int p) {
  const auto g = chamber_graph(p);
  const PoleSubset lower = PoleSubset::from_mask(label_bit(p - 1), p);
  const PoleSubset last = PoleSubset::from_mask(label_bit(p), p);
  for (const auto& c : g->chambers()) {
    if (c.psi.at(lower.mask()) == Sign::Negative && c.psi.at(label_bit(p)) == Sign::Positive) return c.psi;
  }
  throw std::logic_error("no chamber separates the simple poles " + to_string(last));
}

inline TopologicalClasses topological_class_partition(const IsoresidualCover& cover) {
  const auto& sig = cover.signature();
  const int p = sig.poles();
  const int k = topological_modulus(sig);
  if (k == 0) throw Error(ErrorKind::NotApplicable, "stratum " + to_string(sig) + " has no topological class");
  const Mask simple_a = label_bit(p - 1);
  const Mask simple_b = canonical_mask(label_bit(p), p);
  std::vector<Permutation> preserving;
  const BasedGenerator* witness = nullptr;
  for (const auto& g : cover.based_generators()) {
    if (g.wall.mask() == simple_a || g.wall.mask() == simple_b) {
      if (!witness && g.wall.mask() == simple_a) witness = &g;
      continue;
    }
    preserving.push_back(g.perm);
  }
  TopologicalClasses out;
  out.k = k;
  out.classes = orbits(make_group(cover.degree(), std::move(preserving)));
  auto mismatch = [&](const std::string& why) {
    return Error(ErrorKind::PartitionMismatch, "stratum " + to_string(sig) + ": " + why);
  };
  if (static_cast<int>(out.classes.size()) != k) {
    throw mismatch(std::to_string(out.classes.size()) + " classes instead of " + std::to_string(k));
  }
  for (const auto& c : out.classes)
    if (c.size() != out.classes.front().size()) throw mismatch("classes of unequal size");
  if (!witness) throw mismatch("no meridian around a simple-pole hyperplane");
  std::vector<std::uint32_t> class_of(cover.degree());
  for (std::size_t i = 0; i < out.classes.size(); ++i)
    for (auto x : out.classes[i]) class_of[x] = static_cast<std::uint32_t>(i);
  std::vector<std::uint32_t> img(out.classes.size());
  for (std::size_t i = 0; i < out.classes.size(); ++i) {
    img[i] = class_of[witness->perm(out.classes[i].front())];
    for (auto x : out.classes[i])
      if (class_of[witness->perm(x)] != img[i]) throw mismatch("simple-pole meridian does not permute the classes");
  }
  out.shift = Permutation(std::move(img));
  out.shift_wall = witness->wall;
  out.shift_chamber = witness->chamber;
  if (cycle_type(out.shift) != std::vector<std::size_t>{static_cast<std::size_t>(k)}) {
    throw mismatch("simple-pole meridian does not act as a " + std::to_string(k) + "-cycle on classes");
  }
  return out;
}

inline TopologicalClasses topological_class_partition(const StratumSignature& sig, CoverOptions opt = {}) {
  if (topological_modulus(sig) == 0) throw Error(ErrorKind::NotApplicable, "stratum " + to_string(sig) + " has no topological class");
  return topological_class_partition(IsoresidualCover(sig, topological_base(sig.poles()), opt));
}

}  // namespace isoresidual
