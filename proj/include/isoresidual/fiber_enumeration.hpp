#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "isoresidual/arrangement.hpp"
#include "isoresidual/decorated_tree.hpp"
#include "isoresidual/stratum_core.hpp"

namespace isoresidual {

struct FiberSet {
  StratumSignature sig;
  SignFunction psi;
  std::vector<DecoratedTree> trees;  // parsed back from keys, so storage is normalized
  std::vector<std::string> keys;     // sorted, unique

  std::size_t size() const { return keys.size(); }

  std::optional<std::size_t> index_of(const std::string& key) const {
    auto it = std::lower_bound(keys.begin(), keys.end(), key);
    if (it == keys.end() || *it != key) return std::nullopt;
    return static_cast<std::size_t>(it - keys.begin());
  }
};

inline constexpr int kEnumerationMaxPoles = 9;

namespace detail {

struct LocalEnd {
  int neighbor;
  Direction direction;
};

inline void distribute_pairs(std::vector<EdgeEnd>& ends, std::size_t k, int pairs,
                             std::vector<std::vector<EdgeEnd>>& out) {
  if (k + 1 == ends.size()) {
    ends[k].gap_after += 2 * pairs;
    out.push_back(ends);
    ends[k].gap_after -= 2 * pairs;
    return;
  }
  for (int take = 0; take <= pairs; ++take) {
    ends[k].gap_after += 2 * take;
    distribute_pairs(ends, k + 1, pairs - take, out);
    ends[k].gap_after -= 2 * take;
  }
}

// Every cyclic arrangement of the ends around one vertex together with a gap vector
// obeying the parity rule. The first end stays first, which fixes the rotation.
inline std::vector<std::vector<EdgeEnd>> local_options(const std::vector<LocalEnd>& ends, int half_edges) {
  std::vector<std::vector<EdgeEnd>> out;
  const std::size_t d = ends.size();
  if (d == 0) return out;
  std::vector<std::size_t> order(d);
  std::iota(order.begin(), order.end(), 0);
  do {
    std::vector<EdgeEnd> seq;
    int forced = 0;
    for (std::size_t k = 0; k < d; ++k) {
      const auto& e = ends[order[k]];
      const auto& next = ends[order[(k + 1) % d]];
      int par = (d > 1 && e.direction != next.direction) ? 1 : 0;
      forced += par;
      seq.push_back(EdgeEnd{e.neighbor, e.direction, par});
    }
    int rest = half_edges - forced;
    if (rest < 0 || rest % 2 != 0) continue;
    distribute_pairs(seq, 0, rest / 2, out);
  } while (std::next_permutation(order.begin() + 1, order.end()));
  return out;
}

// Calls f(edge list) for every labeled tree on p vertices, via Pruefer sequences.
inline void for_each_labeled_tree(int p, const std::function<void(const std::vector<std::pair<int, int>>&)>& f) {
  if (p == 2) {
    f({{1, 2}});
    return;
  }
  const int len = p - 2;
  std::vector<int> seq(static_cast<std::size_t>(len), 1);
  std::vector<std::pair<int, int>> edges(static_cast<std::size_t>(p - 1));
  std::vector<int> degree(static_cast<std::size_t>(p + 1));
  while (true) {
    std::fill(degree.begin(), degree.end(), 1);
    for (int x : seq) ++degree[static_cast<std::size_t>(x)];
    for (int k = 0; k < len; ++k) {
      int leaf = 1;
      while (degree[static_cast<std::size_t>(leaf)] != 1) ++leaf;
      int x = seq[static_cast<std::size_t>(k)];
      edges[static_cast<std::size_t>(k)] = {leaf, x};
      --degree[static_cast<std::size_t>(leaf)];
      --degree[static_cast<std::size_t>(x)];
    }
    int u = 0, w = 0;
    for (int v = 1; v <= p; ++v) {
      if (degree[static_cast<std::size_t>(v)] == 1) (u == 0 ? u : w) = v;
    }
    edges[static_cast<std::size_t>(len)] = {u, w};
    f(edges);
    int k = len - 1;
    while (k >= 0 && seq[static_cast<std::size_t>(k)] == p) seq[static_cast<std::size_t>(k--)] = 1;
    if (k < 0) break;
    ++seq[static_cast<std::size_t>(k)];
  }
}

inline std::vector<std::string> enumerate_keys(const StratumSignature& sig, const SignFunction& psi) {
  const int p = sig.poles();
  if (p > kEnumerationMaxPoles) {
    throw Error(ErrorKind::ScaleLimit, "enumeration limited to p <= " + std::to_string(kEnumerationMaxPoles));
  }
  std::vector<std::string> keys;
  std::vector<std::vector<int>> adj(static_cast<std::size_t>(p + 1));
  std::vector<std::vector<LocalEnd>> local(static_cast<std::size_t>(p + 1));
  std::vector<int> parent(static_cast<std::size_t>(p + 1)), order;
  std::vector<Mask> below(static_cast<std::size_t>(p + 1));
  std::vector<std::vector<std::vector<EdgeEnd>>> options(static_cast<std::size_t>(p + 1));
  std::vector<Vertex> building(static_cast<std::size_t>(p));

  for_each_labeled_tree(p, [&](const std::vector<std::pair<int, int>>& edges) {
    for (auto& a : adj) a.clear();
    for (auto& l : local) l.clear();
    for (const auto& [u, w] : edges) {
      adj[static_cast<std::size_t>(u)].push_back(w);
      adj[static_cast<std::size_t>(w)].push_back(u);
    }
    order.clear();
    order.push_back(1);
    parent[1] = 0;
    for (std::size_t k = 0; k < order.size(); ++k) {
      int v = order[k];
      for (int w : adj[static_cast<std::size_t>(v)]) {
        if (w != parent[static_cast<std::size_t>(v)]) {
          parent[static_cast<std::size_t>(w)] = v;
          order.push_back(w);
        }
      }
    }
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      int v = *it;
      Mask m = label_bit(v);
      for (int w : adj[static_cast<std::size_t>(v)])
        if (w != parent[static_cast<std::size_t>(v)]) m |= below[static_cast<std::size_t>(w)];
      below[static_cast<std::size_t>(v)] = m;
    }
    for (std::size_t k = 1; k < order.size(); ++k) {
      int child = order[k];
      int par = parent[static_cast<std::size_t>(child)];
      Sign s = psi.at(below[static_cast<std::size_t>(child)]);
      if (s == Sign::Zero) return;
      // The side with negative sum is the source.
      Direction at_child = s == Sign::Negative ? Direction::Outgoing : Direction::Incoming;
      local[static_cast<std::size_t>(child)].push_back({par, at_child});
      local[static_cast<std::size_t>(par)].push_back({child, opposite(at_child)});
    }
    for (int v = 1; v <= p; ++v) {
      auto& ends = local[static_cast<std::size_t>(v)];
      std::sort(ends.begin(), ends.end(), [](const LocalEnd& x, const LocalEnd& y) { return x.neighbor < y.neighbor; });
      options[static_cast<std::size_t>(v)] = local_options(ends, 2 * sig.order(v) - 2);
      if (options[static_cast<std::size_t>(v)].empty()) return;
    }
    std::function<void(int)> product = [&](int v) {
      if (v > p) {
        keys.push_back(canonical_key(DecoratedTree(building)));
        return;
      }
      for (const auto& opt : options[static_cast<std::size_t>(v)]) {
        building[static_cast<std::size_t>(v - 1)] = Vertex{2 * sig.order(v) - 2, opt};
        product(v + 1);
      }
    };
    product(1);
  });
  std::sort(keys.begin(), keys.end());
  keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
  return keys;
}

inline FiberSet fiber_from_keys(const StratumSignature& sig, const SignFunction& psi, std::vector<std::string> keys) {
  FiberSet f{sig, psi, {}, std::move(keys)};
  f.trees.reserve(f.keys.size());
  for (const auto& k : f.keys) f.trees.push_back(parse_key(k));
  return f;
}

}  // namespace detail

// Valid, compatible, non-degenerate trees for (sig, psi), ordered by key.
inline FiberSet enumerate_fiber(const StratumSignature& sig, const SignFunction& psi) {
  if (psi.poles() != sig.poles()) throw Error(ErrorKind::BadInput, "sign function and signature disagree on p");
  if (!psi.realizable() && !try_sample_point(psi)) {
    throw Error(ErrorKind::UnrealizableSign, "sign function " + psi.key() + " has no rational witness");
  }
  return detail::fiber_from_keys(sig, psi, detail::enumerate_keys(sig, psi));
}

// ---------------------------------------------------------------------------
// Closed forms

namespace detail {

// n!/m! for 0 <= m <= n.
inline std::int64_t falling(int n, int m) {
  std::int64_t r = 1;
  for (int k = m + 1; k <= n; ++k) r *= k;
  return r;
}

inline std::int64_t factorial(int n) { return falling(n, 0); }

inline void check_scale(const StratumSignature& sig) {
  if (sig.a > 20) throw Error(ErrorKind::ScaleLimit, "closed forms limited to a <= 20");
}

}  // namespace detail

inline std::int64_t generic_degree(const StratumSignature& sig) {
  detail::check_scale(sig);
  return detail::falling(sig.a, sig.a + 2 - sig.poles());
}

// d!(a-d)!/((d+1-c)!(a+1-p+c-d)!), zero when a denominator argument is negative.
inline std::int64_t edge_marked_total(const StratumSignature& sig, Mask raw) {
  detail::check_scale(sig);
  auto [c, d] = resonance_degree(sig, raw);
  const int p = sig.poles();
  const int x = d + 1 - c;
  const int y = sig.a + 1 - p + c - d;
  if (x < 0 || y < 0) return 0;
  return detail::falling(d, x) * detail::falling(sig.a - d, y);
}

inline std::int64_t single_resonance_count(const StratumSignature& sig, const PoleSubset& I) {
  return generic_degree(sig) - edge_marked_total(sig, I.mask());
}

struct EdgeMarkedCount {
  std::int64_t total = 0;
  std::int64_t class_count = 0;
  std::int64_t class_size = 0;
};

inline EdgeMarkedCount edge_marked_count(const StratumSignature& sig, const SignFunction& psi, const PoleSubset& I) {
  if (!psi.nowhere_zero()) throw Error(ErrorKind::BadInput, "edge_marked_count needs a nowhere-zero sign function");
  const int p = sig.poles();
  EdgeMarkedCount r;
  r.total = edge_marked_total(sig, I.mask());
  if (p == 2) {
    r.class_count = r.total;
    r.class_size = 1;
    return r;
  }
  const bool small_in = I.size() == 1;
  const bool small_out = I.size() == p - 1;
  if (small_in || small_out) {
    // Classes are the orbits on the side that is not a single pole.
    Mask big = small_out ? I.mask() : I.complement_mask();
    int d = resonance_degree(sig, big).d;
    r.class_size = d;
    r.class_count = d + 2 - p < 0 ? 0 : detail::falling(d - 1, d + 2 - p);
    return r;
  }
  auto [c, d] = resonance_degree(sig, I);
  const int x = d + 1 - c;
  const int y = sig.a + 1 - p + c - d;
  r.class_size = static_cast<std::int64_t>(d) * (sig.a - d);
  r.class_count = (x < 0 || y < 0) ? 0 : detail::falling(d - 1, x) * detail::falling(sig.a - d - 1, y);
  return r;
}

inline std::int64_t deep_resonance_count(const StratumSignature& sig) {
  detail::check_scale(sig);
  const int p = sig.poles();
  std::int64_t r = detail::factorial(p - 2);
  for (int i = 2; i <= p - 1; ++i) r *= sig.order(i) - 1;
  return r;
}

// Residues (1, 0, ..., 0, -1): every singleton 2..p-1 sums to zero.
inline SignFunction chain_sign_function(int p) {
  std::vector<Rational> lambda(static_cast<std::size_t>(p), Rational(0));
  lambda.front() = 1;
  lambda.back() = -1;
  return sign_function_of(ResidueConfig{std::move(lambda)});
}

// ---------------------------------------------------------------------------
// Counting surgeries

inline DecoratedTree add_simple_pole(const DecoratedTree& t, const CornerRef& c) {
  if (c.vertex < 1 || c.vertex > t.vertex_count()) throw Error(ErrorKind::IllegalCorner, "corner vertex out of range");
  const auto& vx = t.vertex(c.vertex);
  if (vx.ends.empty() || c.end_index < 0 || c.end_index >= static_cast<int>(vx.ends.size()) || c.offset < 0 ||
      c.offset > vx.ends[static_cast<std::size_t>(c.end_index)].gap_after) {
    throw Error(ErrorKind::IllegalCorner, "corner does not exist");
  }
  if (!detail::corner_is_legal(t, c)) throw Error(ErrorKind::IllegalCorner, "parity forbids an incoming edge here");
  std::vector<Vertex> vs = t.vertices();
  const int leaf = t.vertex_count() + 1;
  vs.push_back(Vertex{0, {EdgeEnd{c.vertex, Direction::Outgoing, 0}}});
  DecoratedTree out(std::move(vs));
  detail::attach_end(out, c, leaf, Direction::Incoming);
  return out;
}

// Inverse of add_simple_pole: removes the highest label, which must be a simple-pole leaf.
inline std::pair<DecoratedTree, CornerRef> remove_simple_pole(const DecoratedTree& t) {
  const int leaf = t.vertex_count();
  const auto& lx = t.vertex(leaf);
  if (lx.half_edges != 0 || lx.ends.size() != 1 || lx.ends[0].direction != Direction::Outgoing) {
    throw Error(ErrorKind::NotApplicable, "last vertex is not a simple-pole leaf");
  }
  DecoratedTree work = t;
  int host = lx.ends[0].neighbor;
  CornerRef c = detail::detach_end(work, host, leaf);
  std::vector<Vertex> vs = work.vertices();
  vs.pop_back();
  return {DecoratedTree(std::move(vs)), c};
}

namespace detail {

inline void require_rooted_form(const DecoratedTree& t) {
  for (const auto& e : t.edges()) {
    if (!(t.side_mask(e.target, e.source) & label_bit(1))) {
      throw Error(ErrorKind::NotApplicable, "tree is not oriented towards vertex 1");
    }
  }
}

// Index at vertex 1 of the end whose branch contains i.
inline int root_end_towards(const DecoratedTree& t, int i) {
  const auto& ends = t.vertex(1).ends;
  for (std::size_t k = 0; k < ends.size(); ++k)
    if (t.side_mask(ends[k].neighbor, 1) & label_bit(i)) return static_cast<int>(k);
  throw Error(ErrorKind::NotApplicable, "vertex not reachable from the root");
}

inline void retarget(DecoratedTree& t, int v, int from, int to) {
  for (auto& e : t.vertex(v).ends)
    if (e.neighbor == from) e.neighbor = to;
}

}  // namespace detail

// Moves two half-edges from vertex i to vertex 1. The children of i sitting between those
// two half-edges travel with them and are re-hung at vertex 1 right after the branch of i,
// followed by the two half-edges.
inline DecoratedTree weight_transfer(const DecoratedTree& t, int i) {
  const int p = t.vertex_count();
  if (i < 2 || i > p) throw Error(ErrorKind::NotApplicable, "vertex must be a non-root label");
  if (t.vertex(i).half_edges < 2) throw Error(ErrorKind::NotApplicable, "vertex has pole order 1");
  detail::require_rooted_form(t);
  DecoratedTree out = t;
  Vertex& vi = out.vertex(i);
  const int n = static_cast<int>(vi.ends.size());
  int q = 0;
  while (vi.ends[static_cast<std::size_t>(q)].direction != Direction::Outgoing) ++q;
  std::vector<EdgeEnd> moved;
  std::vector<EdgeEnd> kept;
  int tail_gap = 0;
  auto at = [&](int k) -> EdgeEnd& { return vi.ends[static_cast<std::size_t>((q + k) % n)]; };
  if (at(0).gap_after >= 2) {
    tail_gap = at(0).gap_after - 2;
    for (int k = 1; k < n; ++k) kept.push_back(at(k));
  } else {
    // gap after the parent end is exactly one; collect the run of children glued after it.
    int k = 1;
    while (true) {
      moved.push_back(at(k));
      if (at(k).gap_after > 0) break;
      ++k;
    }
    tail_gap = moved.back().gap_after - 1;
    for (int r = k + 1; r < n; ++r) kept.push_back(at(r));
  }
  EdgeEnd parent = at(0);
  parent.gap_after = tail_gap;
  kept.insert(kept.begin(), parent);
  vi.ends = kept;
  vi.half_edges -= 2;

  Vertex& root = out.vertex(1);
  int e = detail::root_end_towards(t, i);
  int old_gap = root.ends[static_cast<std::size_t>(e)].gap_after;
  for (auto& m : moved) m.gap_after = 0;
  if (moved.empty()) {
    root.ends[static_cast<std::size_t>(e)].gap_after = old_gap + 2;
  } else {
    root.ends[static_cast<std::size_t>(e)].gap_after = 0;
    moved.back().gap_after = old_gap + 2;
    root.ends.insert(root.ends.begin() + e + 1, moved.begin(), moved.end());
  }
  root.half_edges += 2;
  for (const auto& m : moved) detail::retarget(out, m.neighbor, i, 1);
  return out;
}

inline DecoratedTree weight_transfer_inverse(const DecoratedTree& t, int i) {
  const int p = t.vertex_count();
  if (i < 2 || i > p) throw Error(ErrorKind::NotApplicable, "vertex must be a non-root label");
  if (t.vertex(1).half_edges < 2) throw Error(ErrorKind::NotApplicable, "root has pole order 1");
  detail::require_rooted_form(t);
  DecoratedTree out = t;
  Vertex& root = out.vertex(1);
  const int n = static_cast<int>(root.ends.size());
  const int e = detail::root_end_towards(t, i);
  auto at = [&](int k) -> EdgeEnd& { return root.ends[static_cast<std::size_t>((e + k) % n)]; };
  std::vector<EdgeEnd> moved;
  int k = 0;
  while (at(k).gap_after == 0) {
    ++k;
    moved.push_back(at(k));
  }
  // at(k) is followed by at least two half-edges, which return to vertex i.
  at(k).gap_after -= 2;
  if (!moved.empty()) {
    at(0).gap_after = at(k).gap_after;
    std::vector<int> drop;
    for (int r = 1; r <= k; ++r) drop.push_back((e + r) % n);
    std::sort(drop.rbegin(), drop.rend());
    for (int idx : drop) root.ends.erase(root.ends.begin() + idx);
  }
  root.half_edges -= 2;

  Vertex& vi = out.vertex(i);
  int q = 0;
  while (vi.ends[static_cast<std::size_t>(q)].direction != Direction::Outgoing) ++q;
  int parent_gap = vi.ends[static_cast<std::size_t>(q)].gap_after;
  if (moved.empty()) {
    vi.ends[static_cast<std::size_t>(q)].gap_after = parent_gap + 2;
  } else {
    vi.ends[static_cast<std::size_t>(q)].gap_after = 1;
    for (auto& m : moved) m.gap_after = 0;
    moved.back().gap_after = parent_gap + 1;
    vi.ends.insert(vi.ends.begin() + q + 1, moved.begin(), moved.end());
  }
  vi.half_edges += 2;
  for (const auto& m : moved) detail::retarget(out, m.neighbor, 1, i);
  return out;
}

inline StratumSignature weight_transfer_signature(const StratumSignature& sig, int i) {
  if (i < 2 || i > sig.poles() || sig.order(i) < 2) throw Error(ErrorKind::NotApplicable, "weight transfer needs b_i >= 2");
  StratumSignature out = sig;
  out.b[0] += 1;
  out.b[static_cast<std::size_t>(i - 1)] -= 1;
  return out;
}

}  // namespace isoresidual
