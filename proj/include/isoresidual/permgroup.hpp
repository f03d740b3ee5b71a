#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "isoresidual/stratum_core.hpp"

namespace isoresidual {

class Permutation {
 public:
  Permutation() = default;

  explicit Permutation(std::vector<std::uint32_t> images) : img_(std::move(images)) {
    std::vector<char> hit(img_.size(), 0);
    for (auto x : img_) {
      if (x >= img_.size() || hit[x]) throw Error(ErrorKind::BadInput, "images do not form a bijection");
      hit[x] = 1;
    }
  }

  static Permutation identity(std::size_t n) {
    Permutation p;
    p.img_.resize(n);
    std::iota(p.img_.begin(), p.img_.end(), 0u);
    return p;
  }

  std::size_t degree() const { return img_.size(); }
  std::uint32_t operator()(std::size_t i) const { return img_[i]; }
  const std::vector<std::uint32_t>& images() const { return img_; }

  bool is_identity() const {
    for (std::size_t i = 0; i < img_.size(); ++i)
      if (img_[i] != i) return false;
    return true;
  }

  Permutation inverse() const {
    Permutation p;
    p.img_.resize(img_.size());
    for (std::size_t i = 0; i < img_.size(); ++i) p.img_[img_[i]] = static_cast<std::uint32_t>(i);
    return p;
  }

  friend bool operator==(const Permutation&, const Permutation&) = default;
  friend auto operator<=>(const Permutation& x, const Permutation& y) { return x.img_ <=> y.img_; }

 private:
  friend Permutation compose(const Permutation& f, const Permutation& g);
  std::vector<std::uint32_t> img_;
};

// (f o g)(i) = f(g(i))
inline Permutation compose(const Permutation& f, const Permutation& g) {
  if (f.degree() != g.degree()) throw Error(ErrorKind::BadInput, "degree mismatch");
  Permutation out;
  out.img_.resize(g.degree());
  for (std::size_t i = 0; i < g.degree(); ++i) out.img_[i] = f.img_[g.img_[i]];
  return out;
}

// g^-1 h^-1 g h, with g applied first in the product.
inline Permutation commutator(const Permutation& g, const Permutation& h) {
  return compose(h, compose(g, compose(h.inverse(), g.inverse())));
}

inline std::vector<std::vector<std::uint32_t>> cycles(const Permutation& g) {
  std::vector<std::vector<std::uint32_t>> out;
  std::vector<char> seen(g.degree(), 0);
  for (std::uint32_t i = 0; i < g.degree(); ++i) {
    if (seen[i]) continue;
    std::vector<std::uint32_t> cyc;
    for (std::uint32_t x = i; !seen[x]; x = g(x)) {
      seen[x] = 1;
      cyc.push_back(x);
    }
    out.push_back(std::move(cyc));
  }
  return out;
}

// Cycle lengths in decreasing order, fixed points included.
inline std::vector<std::size_t> cycle_type(const Permutation& g) {
  std::vector<std::size_t> out;
  for (const auto& c : cycles(g)) out.push_back(c.size());
  std::sort(out.rbegin(), out.rend());
  return out;
}

enum class Parity { Even, Odd };

inline Parity parity(const Permutation& g) {
  std::size_t transpositions = 0;
  for (const auto& c : cycles(g)) transpositions += c.size() - 1;
  return transpositions % 2 == 0 ? Parity::Even : Parity::Odd;
}

inline std::uint64_t element_order(const Permutation& g) {
  std::uint64_t r = 1;
  for (const auto& c : cycles(g)) r = std::lcm(r, static_cast<std::uint64_t>(c.size()));
  return r;
}

inline std::string to_cycle_string(const Permutation& g) {
  std::string out;
  for (const auto& c : cycles(g)) {
    if (c.size() < 2) continue;
    out += '(';
    for (std::size_t k = 0; k < c.size(); ++k) {
      if (k) out += ' ';
      out += std::to_string(c[k]);
    }
    out += ')';
  }
  return out.empty() ? "()" : out;
}

inline Permutation parse_cycles(std::string_view text, std::size_t n) {
  std::vector<std::uint32_t> img(n);
  std::iota(img.begin(), img.end(), 0u);
  std::vector<char> used(n, 0);
  std::size_t pos = 0;
  auto skip = [&] {
    while (pos < text.size() && text[pos] == ' ') ++pos;
  };
  skip();
  while (pos < text.size()) {
    if (text[pos] != '(') throw Error(ErrorKind::BadInput, "cycle notation must start with '('");
    ++pos;
    std::vector<std::uint32_t> cyc;
    while (true) {
      skip();
      if (pos >= text.size()) throw Error(ErrorKind::BadInput, "unterminated cycle");
      if (text[pos] == ')') {
        ++pos;
        break;
      }
      std::size_t start = pos;
      while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') ++pos;
      if (start == pos) throw Error(ErrorKind::BadInput, "expected a point in cycle notation");
      auto x = static_cast<std::uint32_t>(std::stoul(std::string(text.substr(start, pos - start))));
      if (x >= n || used[x]) throw Error(ErrorKind::BadInput, "point out of range or repeated");
      used[x] = 1;
      cyc.push_back(x);
    }
    for (std::size_t k = 0; k < cyc.size(); ++k) img[cyc[k]] = cyc[(k + 1) % cyc.size()];
    skip();
  }
  return Permutation(std::move(img));
}

struct PermGroup {
  std::size_t degree = 0;
  std::vector<Permutation> generators;
};

inline PermGroup make_group(std::size_t degree, std::vector<Permutation> gens) {
  for (const auto& g : gens)
    if (g.degree() != degree) throw Error(ErrorKind::BadInput, "generator degree mismatch");
  return PermGroup{degree, std::move(gens)};
}

inline std::vector<std::vector<std::uint32_t>> orbits(const PermGroup& G) {
  std::vector<std::vector<std::uint32_t>> out;
  std::vector<char> seen(G.degree, 0);
  for (std::uint32_t s = 0; s < G.degree; ++s) {
    if (seen[s]) continue;
    std::vector<std::uint32_t> orb{s};
    seen[s] = 1;
    for (std::size_t k = 0; k < orb.size(); ++k) {
      for (const auto& g : G.generators) {
        auto y = g(orb[k]);
        if (!seen[y]) {
          seen[y] = 1;
          orb.push_back(y);
        }
      }
    }
    std::sort(orb.begin(), orb.end());
    out.push_back(std::move(orb));
  }
  return out;
}

inline bool is_transitive(const PermGroup& G) { return G.degree <= 1 || orbits(G).size() == 1; }

namespace detail {

// Stabilizer chain with explicit transversals and their inverses. Internally a permutation
// is its image vector and products read left to right: (g then h)[x] = h[g[x]].
class StabilizerChain {
 public:
  using Img = std::vector<std::uint32_t>;

  explicit StabilizerChain(std::size_t n) : n_(n), scratch_(n) {}

  // Randomized phase: sift product-replacement elements until `patience` consecutive
  // ones sift through. The result is a subgroup chain; complete() makes it exact.
  void randomized(const std::vector<Permutation>& gens, std::uint64_t seed, int patience) {
    std::vector<Img> nontrivial;
    for (const auto& g : gens)
      if (!g.is_identity()) nontrivial.push_back(g.images());
    if (nontrivial.empty()) return;
    std::mt19937_64 rng(seed);
    std::vector<Img> state;
    while (state.size() < 10) state.insert(state.end(), nontrivial.begin(), nontrivial.end());
    Img acc = identity();
    Img other(n_), tmp(n_);
    auto step = [&] {
      std::uniform_int_distribution<std::size_t> pick(0, state.size() - 1);
      std::size_t i = pick(rng), j = pick(rng);
      while (j == i) j = pick(rng);
      if (rng() & 1) {
        other = state[j];
      } else {
        for (std::size_t x = 0; x < n_; ++x) other[state[j][x]] = static_cast<std::uint32_t>(x);
      }
      if (rng() & 1) {
        then(state[i], other, tmp);
      } else {
        then(other, state[i], tmp);
      }
      state[i].swap(tmp);
      then(acc, state[i], tmp);
      acc.swap(tmp);
    };
    for (int k = 0; k < 60; ++k) step();
    for (const auto& g : nontrivial) sift_and_add(g);
    int quiet = 0;
    while (quiet < patience) {
      step();
      quiet = sift_and_add(acc) ? 0 : quiet + 1;
    }
  }

  // Deterministic Schreier-Sims: every Schreier generator of every level must sift.
  void complete(const std::vector<Permutation>& gens) {
    for (const auto& g : gens)
      if (!g.is_identity()) sift_and_add(g.images());
    int i = static_cast<int>(base_.size()) - 1;
    while (i >= 0) {
      auto level = find_bad_schreier_generator(static_cast<std::size_t>(i));
      if (!level) {
        --i;
        continue;
      }
      add_residue(scratch_, static_cast<std::size_t>(i) + 1);
      i = static_cast<int>(std::min(*level, base_.size() - 1));
    }
  }

  BigInt order() const {
    BigInt r = 1;
    for (const auto& lvl : levels_) r *= static_cast<unsigned long long>(lvl.orbit.size());
    return r;
  }

  const std::vector<std::uint32_t>& base() const { return base_; }

 private:
  struct Level {
    std::vector<Img> gens;
    std::vector<std::uint32_t> orbit;
    std::vector<int> rep_index;  // per point: index into orbit or -1
    std::vector<Img> reps;       // reps[k] maps the base point to orbit[k]
    std::vector<Img> inv_reps;
    std::vector<std::pair<int, int>> via;  // (orbit index, generator index) that discovered orbit[k]
  };

  Img identity() const {
    Img id(n_);
    std::iota(id.begin(), id.end(), 0u);
    return id;
  }

  void then(const Img& g, const Img& h, Img& out) const {
    for (std::size_t x = 0; x < n_; ++x) out[x] = h[g[x]];
  }

  static bool is_identity(const Img& h) {
    for (std::size_t x = 0; x < h.size(); ++x)
      if (h[x] != x) return false;
    return true;
  }

  // Sifts h in place from level `from`; returns the level where it stopped.
  std::size_t sift(Img& h, std::size_t from) const {
    for (std::size_t l = from; l < base_.size(); ++l) {
      int k = levels_[l].rep_index[h[base_[l]]];
      if (k < 0) return l;
      const Img& inv = levels_[l].inv_reps[static_cast<std::size_t>(k)];
      for (auto& x : h) x = inv[x];
    }
    return base_.size();
  }

  bool sift_and_add(const Img& g) {
    scratch_ = g;
    sift(scratch_, 0);
    if (is_identity(scratch_)) return false;
    add_residue(scratch_, 0);
    return true;
  }

  void rebuild_orbit(std::size_t l) {
    Level& lv = levels_[l];
    lv.orbit.assign(1, base_[l]);
    lv.rep_index.assign(n_, -1);
    lv.reps.assign(1, identity());
    lv.inv_reps.assign(1, identity());
    lv.via.assign(1, {-1, -1});
    lv.rep_index[base_[l]] = 0;
    for (std::size_t k = 0; k < lv.orbit.size(); ++k) {
      for (std::size_t s = 0; s < lv.gens.size(); ++s) {
        auto y = lv.gens[s][lv.orbit[k]];
        if (lv.rep_index[y] >= 0) continue;
        lv.rep_index[y] = static_cast<int>(lv.orbit.size());
        lv.orbit.push_back(y);
        Img rep(n_), inv(n_);
        then(lv.reps[k], lv.gens[s], rep);
        for (std::size_t x = 0; x < n_; ++x) inv[rep[x]] = static_cast<std::uint32_t>(x);
        lv.reps.push_back(std::move(rep));
        lv.inv_reps.push_back(std::move(inv));
        lv.via.emplace_back(static_cast<int>(k), static_cast<int>(s));
      }
    }
  }

  // h fixes the base points below `from`; add it to levels from..(first level it moves).
  void add_residue(const Img& h, std::size_t from) {
    std::size_t upto = from;
    while (upto < base_.size() && h[base_[upto]] == base_[upto]) ++upto;
    if (upto == base_.size()) {
      std::uint32_t moved = 0;
      while (h[moved] == moved) ++moved;
      base_.push_back(moved);
      levels_.emplace_back();
    }
    const Img copy = h;
    for (std::size_t l = from; l <= upto; ++l) {
      levels_[l].gens.push_back(copy);
      rebuild_orbit(l);
    }
  }

  // Leaves a non-sifting Schreier generator of level i in scratch_ and returns the level
  // where its sift stopped.
  std::optional<std::size_t> find_bad_schreier_generator(std::size_t i) {
    const Level& lv = levels_[i];
    for (std::size_t k = 0; k < lv.orbit.size(); ++k) {
      for (std::size_t s = 0; s < lv.gens.size(); ++s) {
        const Img& gen = lv.gens[s];
        const auto j = static_cast<std::size_t>(lv.rep_index[gen[lv.orbit[k]]]);
        if (lv.via[j] == std::make_pair(static_cast<int>(k), static_cast<int>(s))) continue;
        const Img& rep = lv.reps[k];
        const Img& inv = lv.inv_reps[j];
        for (std::size_t x = 0; x < n_; ++x) scratch_[x] = inv[gen[rep[x]]];
        std::size_t level = sift(scratch_, i + 1);
        if (!is_identity(scratch_)) return level;
      }
    }
    return std::nullopt;
  }

  std::size_t n_;
  Img scratch_;
  std::vector<std::uint32_t> base_;
  std::vector<Level> levels_;
};

inline BigInt big_factorial(std::size_t n) {
  BigInt r = 1;
  for (std::size_t k = 2; k <= n; ++k) r *= static_cast<unsigned long long>(k);
  return r;
}

}  // namespace detail

inline constexpr std::uint64_t kDefaultGroupSeed = 20240611;

inline bool all_even(const PermGroup& G) {
  return std::all_of(G.generators.begin(), G.generators.end(),
                     [](const Permutation& g) { return parity(g) == Parity::Even; });
}

// Exact order. A seeded randomized chain is accepted without verification only when it
// already reaches the largest possible order (n!, or n!/2 for even generators).
inline BigInt group_order(const PermGroup& G, std::uint64_t seed = kDefaultGroupSeed) {
  if (G.degree <= 1) return 1;
  detail::StabilizerChain chain(G.degree);
  chain.randomized(G.generators, seed, 24);
  BigInt ord = chain.order();
  BigInt full = detail::big_factorial(G.degree);
  if (ord == full) return ord;
  if (all_even(G) && ord * 2 == full) return ord;
  chain.complete(G.generators);
  return chain.order();
}

inline bool is_abelian(const PermGroup& G) {
  for (std::size_t i = 0; i < G.generators.size(); ++i)
    for (std::size_t j = i + 1; j < G.generators.size(); ++j)
      if (compose(G.generators[i], G.generators[j]) != compose(G.generators[j], G.generators[i])) return false;
  return true;
}

enum class GroupKind { Cyclic, Alternating, Symmetric, ExoticS5inS6, Other };

struct GroupIdentification {
  GroupKind kind = GroupKind::Other;
  std::size_t degree = 0;
  BigInt order = 1;
  bool transitive = false;
  bool even = true;             // every generator even
  BigInt stabilizer_order = 1;  // of point 0

  std::string name() const {
    switch (kind) {
      case GroupKind::Cyclic: return "Cyclic(" + std::to_string(degree) + ")";
      case GroupKind::Alternating: return "Alternating(" + std::to_string(degree) + ")";
      case GroupKind::Symmetric: return "Symmetric(" + std::to_string(degree) + ")";
      case GroupKind::ExoticS5inS6: return "ExoticS5inS6";
      case GroupKind::Other: break;
    }
    return "Other(order=" + order.str() + ",transitive=" + (transitive ? "true" : "false") + ")";
  }
};

inline GroupIdentification identify_group(const PermGroup& G, std::uint64_t seed = kDefaultGroupSeed) {
  GroupIdentification id;
  id.degree = G.degree;
  id.order = group_order(G, seed);
  id.transitive = is_transitive(G);
  id.even = all_even(G);
  std::size_t orbit0 = 1;
  if (G.degree > 0) {
    for (const auto& o : orbits(G))
      if (!o.empty() && o.front() == 0) orbit0 = o.size();
  }
  id.stabilizer_order = id.order / static_cast<unsigned long long>(orbit0);
  const BigInt full = detail::big_factorial(G.degree);
  bool cyclic = false;
  if (id.transitive && id.order == static_cast<unsigned long long>(G.degree) && is_abelian(G)) {
    std::uint64_t exponent = 1;
    for (const auto& g : G.generators) exponent = std::lcm(exponent, element_order(g));
    cyclic = exponent == G.degree;
  }
  if (cyclic) {
    id.kind = GroupKind::Cyclic;
  } else if (id.order == full) {
    id.kind = GroupKind::Symmetric;
  } else if (G.degree >= 2 && id.even && id.order * 2 == full) {
    id.kind = GroupKind::Alternating;
  } else if (G.degree == 6 && id.order == 120 && id.transitive) {
    id.kind = GroupKind::ExoticS5inS6;
  }
  return id;
}

}  // namespace isoresidual
