#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <queue>
#include <string>
#include <unordered_map>
#include <vector>

#include "isoresidual/exact_lp.hpp"
#include "isoresidual/stratum_core.hpp"

namespace isoresidual {

struct SignConstraint {
  Mask mask = 0;  // canonical
  Sign sign = Sign::Zero;
};

namespace detail {

// Variables are lambda_1..lambda_{p-1}; lambda_p closes the sum. Strict signs become
// ">= 1" after scaling, and the L1-smallest point is returned.
inline std::optional<ResidueConfig> solve_sign_constraints(int p, const std::vector<SignConstraint>& cons) {
  const int n = p - 1;
  std::size_t strict = 0;
  for (const auto& c : cons)
    if (c.sign != Sign::Zero) ++strict;
  lp::Problem pr;
  const std::size_t cols = static_cast<std::size_t>(2 * n) + strict;
  pr.c.assign(cols, 0);
  for (int j = 0; j < 2 * n; ++j) pr.c[static_cast<std::size_t>(j)] = 1;
  std::size_t slack = static_cast<std::size_t>(2 * n);
  for (const auto& c : cons) {
    std::vector<int> row(cols, 0);
    int s = c.sign == Sign::Negative ? -1 : 1;
    for (int j = 0; j < n; ++j) {
      if (c.mask & label_bit(j + 1)) {
        row[static_cast<std::size_t>(j)] = s;
        row[static_cast<std::size_t>(n + j)] = -s;
      }
    }
    if (c.sign == Sign::Zero) {
      pr.b.push_back(0);
    } else {
      row[slack++] = -1;
      pr.b.push_back(1);
    }
    pr.A.push_back(std::move(row));
  }
  std::vector<Rational> lambda(static_cast<std::size_t>(p), Rational(0));
  if (!cons.empty()) {
    auto x = lp::solve(pr);
    if (!x) return std::nullopt;
    for (int j = 0; j < n; ++j) {
      lambda[static_cast<std::size_t>(j)] = (*x)[static_cast<std::size_t>(j)] - (*x)[static_cast<std::size_t>(n + j)];
    }
  }
  Rational total = 0;
  for (int j = 0; j < n; ++j) total += lambda[static_cast<std::size_t>(j)];
  lambda[static_cast<std::size_t>(n)] = -total;
  return ResidueConfig{std::move(lambda)};
}

inline std::vector<SignConstraint> constraints_of(const SignFunction& psi) {
  std::vector<SignConstraint> cons;
  for (std::size_t k = 0; k < psi.signs().size(); ++k) cons.push_back({static_cast<Mask>(k + 1), psi.signs()[k]});
  return cons;
}

inline Sign partial_sign(const ResidueConfig& r, Mask m) {
  Rational s = 0;
  for (int j = 1; j <= r.poles(); ++j)
    if (m & label_bit(j)) s += r.lambda[static_cast<std::size_t>(j - 1)];
  return sign_of(s);
}

}  // namespace detail

inline std::optional<ResidueConfig> try_sample_point(const SignFunction& psi) {
  return detail::solve_sign_constraints(psi.poles(), detail::constraints_of(psi));
}

inline ResidueConfig sample_point(const SignFunction& psi) {
  auto r = try_sample_point(psi);
  if (!r) throw Error(ErrorKind::Infeasible, "sign function " + psi.key() + " has no real residue witness");
  return *r;
}

inline bool is_realizable(const SignFunction& psi) { return psi.realizable() || try_sample_point(psi).has_value(); }

struct Chamber {
  SignFunction psi;
  ResidueConfig witness;
};

inline Chamber make_chamber(const SignFunction& psi) {
  if (!psi.nowhere_zero()) throw Error(ErrorKind::BadInput, "a chamber needs a nowhere-zero sign function");
  ResidueConfig w = sample_point(psi);
  return Chamber{psi.marked_realizable(), std::move(w)};
}

inline Chamber chamber_of(const ResidueConfig& residues) {
  SignFunction psi = sign_function_of(residues);
  if (!psi.nowhere_zero()) throw Error(ErrorKind::BadInput, "residues lie on a resonance hyperplane");
  return Chamber{psi, residues};
}

// Facets: the subsets whose sign can be set to zero while every other sign stays strict.
inline std::vector<PoleSubset> chamber_walls(const SignFunction& psi) {
  std::vector<PoleSubset> out;
  for (const auto& I : canonical_subsets(psi.poles())) {
    if (try_sample_point(psi.with(I, Sign::Zero))) out.push_back(I);
  }
  return out;
}

inline std::vector<PoleSubset> chamber_walls(const Chamber& c) { return chamber_walls(c.psi); }

inline bool is_simplicial(const Chamber& c) {
  return static_cast<int>(chamber_walls(c).size()) == c.psi.poles() - 1;
}

struct ChamberAdjacency {
  PoleSubset wall;
  std::size_t neighbor = 0;
};

class ChamberGraph {
 public:
  ChamberGraph(int p, std::vector<Chamber> chambers) : p_(p), chambers_(std::move(chambers)) {
    for (std::size_t i = 0; i < chambers_.size(); ++i) index_.emplace(chambers_[i].psi.key(), i);
    adjacency_.resize(chambers_.size());
    const auto subsets = canonical_subsets(p);
    for (std::size_t i = 0; i < chambers_.size(); ++i) {
      for (const auto& I : subsets) {
        SignFunction flipped = chambers_[i].psi.with(I, negate(chambers_[i].psi(I)));
        if (auto j = find(flipped)) adjacency_[i].push_back({I, *j});
      }
    }
  }

  int poles() const { return p_; }
  std::size_t size() const { return chambers_.size(); }
  const Chamber& chamber(std::size_t i) const { return chambers_.at(i); }
  const std::vector<Chamber>& chambers() const { return chambers_; }
  const std::vector<ChamberAdjacency>& adjacent(std::size_t i) const { return adjacency_.at(i); }

  std::optional<std::size_t> find(const SignFunction& psi) const {
    auto it = index_.find(psi.key());
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  std::size_t index_of(const SignFunction& psi) const {
    auto i = find(psi);
    if (!i) throw Error(ErrorKind::Infeasible, "sign function " + psi.key() + " is not a chamber");
    return *i;
  }

  std::vector<PoleSubset> walls(std::size_t i) const {
    std::vector<PoleSubset> out;
    for (const auto& a : adjacency_.at(i)) out.push_back(a.wall);
    return out;
  }

  std::optional<std::size_t> neighbor(std::size_t i, const PoleSubset& I) const {
    for (const auto& a : adjacency_.at(i))
      if (a.wall == I) return a.neighbor;
    return std::nullopt;
  }

  std::size_t edge_count() const {
    std::size_t total = 0;
    for (const auto& adj : adjacency_) total += adj.size();
    return total / 2;
  }

  bool is_connected() const {
    if (chambers_.empty()) return true;
    std::vector<char> seen(chambers_.size(), 0);
    std::queue<std::size_t> q;
    q.push(0);
    seen[0] = 1;
    std::size_t count = 1;
    while (!q.empty()) {
      std::size_t c = q.front();
      q.pop();
      for (const auto& a : adjacency_[c]) {
        if (!seen[a.neighbor]) {
          seen[a.neighbor] = 1;
          ++count;
          q.push(a.neighbor);
        }
      }
    }
    return count == chambers_.size();
  }

 private:
  int p_;
  std::vector<Chamber> chambers_;
  std::vector<std::vector<ChamberAdjacency>> adjacency_;
  std::unordered_map<std::string, std::size_t> index_;
};

inline constexpr int kChamberGraphMaxPoles = 5;

namespace detail {

// Depth-first over canonical subsets, keeping only sign prefixes with a witness. A sign
// already realized by the parent witness needs no new solve.
inline void extend_chambers(int p, std::vector<SignConstraint>& prefix, const ResidueConfig& witness,
                            std::vector<SignFunction>& out) {
  const Mask next = static_cast<Mask>(prefix.size() + 1);
  if (next == (Mask{1} << (p - 1))) {
    std::vector<Sign> signs;
    for (const auto& c : prefix) signs.push_back(c.sign);
    out.emplace_back(p, std::move(signs), true);
    return;
  }
  Sign here = partial_sign(witness, next);
  for (Sign s : {Sign::Positive, Sign::Negative}) {
    prefix.push_back({next, s});
    if (s == here) {
      extend_chambers(p, prefix, witness, out);
    } else if (auto w = solve_sign_constraints(p, prefix)) {
      extend_chambers(p, prefix, *w, out);
    }
    prefix.pop_back();
  }
}

}  // namespace detail

inline std::vector<SignFunction> enumerate_chamber_signs(int p) {
  std::vector<SignConstraint> prefix;
  std::vector<SignFunction> out;
  ResidueConfig origin{std::vector<Rational>(static_cast<std::size_t>(p), Rational(0))};
  detail::extend_chambers(p, prefix, origin, out);
  std::sort(out.begin(), out.end(), [](const SignFunction& x, const SignFunction& y) { return x.key() < y.key(); });
  return out;
}

// Cached per p; chambers are sorted by sign key ('+' before '-').
inline std::shared_ptr<const ChamberGraph> chamber_graph(int p, int max_poles = kChamberGraphMaxPoles) {
  if (p < 2) throw Error(ErrorKind::BadInput, "need at least two poles");
  if (p > max_poles) {
    throw Error(ErrorKind::ScaleLimit,
                "chamber graph limited to p <= " + std::to_string(max_poles) + " (requested " + std::to_string(p) + ")");
  }
  static std::mutex mu;
  static std::map<int, std::shared_ptr<const ChamberGraph>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(p);
  if (it != cache.end()) return it->second;
  std::vector<Chamber> chambers;
  for (const auto& psi : enumerate_chamber_signs(p)) chambers.push_back(Chamber{psi, sample_point(psi)});
  auto g = std::make_shared<const ChamberGraph>(p, std::move(chambers));
  cache.emplace(p, g);
  return g;
}

}  // namespace isoresidual
