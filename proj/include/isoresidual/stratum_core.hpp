#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <initializer_list>
#include <numeric>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "isoresidual/error.hpp"

namespace isoresidual {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Bit j-1 of a mask stands for pole label j.
using Mask = std::uint32_t;

inline constexpr int kMaxPoles = 24;

inline Mask full_mask(int p) { return (Mask{1} << p) - 1; }
inline Mask label_bit(int label) { return Mask{1} << (label - 1); }

// Representative of {I, I^c} that does not contain label p.
inline Mask canonical_mask(Mask raw, int p) {
  return (raw & label_bit(p)) ? (full_mask(p) ^ raw) : raw;
}

struct StratumSignature {
  int a = 0;
  std::vector<int> b;

  int poles() const { return static_cast<int>(b.size()); }
  int order(int label) const { return b.at(static_cast<std::size_t>(label - 1)); }

  friend bool operator==(const StratumSignature&, const StratumSignature&) = default;
};

inline StratumSignature make_signature(int a, std::vector<int> b) {
  if (b.size() < 2) throw Error(ErrorKind::BadOrder, "a stratum needs at least two poles");
  if (static_cast<int>(b.size()) > kMaxPoles) throw Error(ErrorKind::ScaleLimit, "too many poles");
  for (int bj : b) {
    if (bj < 1) throw Error(ErrorKind::BadOrder, "pole orders must be positive");
  }
  if (a < 1) throw Error(ErrorKind::BadOrder, "the zero order must be positive");
  long long sum = std::accumulate(b.begin(), b.end(), 0LL);
  if (sum != a + 2LL) {
    throw Error(ErrorKind::SumMismatch,
                "sum of pole orders is " + std::to_string(sum) + ", expected " + std::to_string(a + 2));
  }
  return StratumSignature{a, std::move(b)};
}

inline std::string to_string(const StratumSignature& sig) {
  std::string out = "(" + std::to_string(sig.a) + ",[";
  for (std::size_t j = 0; j < sig.b.size(); ++j) {
    if (j) out += ',';
    out += std::to_string(sig.b[j]);
  }
  return out + "])";
}

class PoleSubset {
 public:
  PoleSubset() = default;

  // Accepts any nonempty proper subset and stores its canonical representative.
  static PoleSubset from_mask(Mask raw, int p) {
    if (p < 2 || p > kMaxPoles) throw Error(ErrorKind::BadInput, "pole count out of range");
    if (raw == 0 || (raw & ~full_mask(p)) != 0 || raw == full_mask(p)) {
      throw Error(ErrorKind::BadInput, "subset must be a nonempty proper subset of the poles");
    }
    PoleSubset s;
    s.mask_ = canonical_mask(raw, p);
    s.p_ = p;
    return s;
  }

  static PoleSubset of(std::initializer_list<int> labels, int p) {
    Mask m = 0;
    for (int l : labels) {
      if (l < 1 || l > p) throw Error(ErrorKind::BadInput, "pole label out of range");
      m |= label_bit(l);
    }
    return from_mask(m, p);
  }

  Mask mask() const { return mask_; }
  Mask complement_mask() const { return full_mask(p_) ^ mask_; }
  int poles() const { return p_; }
  int size() const { return std::popcount(mask_); }
  bool contains(int label) const { return (mask_ & label_bit(label)) != 0; }

  // Position in canonical_subsets(p).
  std::size_t index() const { return static_cast<std::size_t>(mask_) - 1; }

  std::vector<int> members() const {
    std::vector<int> out;
    for (int j = 1; j <= p_; ++j)
      if (contains(j)) out.push_back(j);
    return out;
  }

  friend bool operator==(const PoleSubset&, const PoleSubset&) = default;
  friend auto operator<=>(const PoleSubset& x, const PoleSubset& y) { return x.mask_ <=> y.mask_; }

 private:
  Mask mask_ = 0;
  int p_ = 0;
};

inline std::string mask_to_string(Mask m) {
  std::string out;
  for (int j = 1; m; ++j, m >>= 1) {
    if (m & 1) {
      if (!out.empty()) out += ',';
      out += std::to_string(j);
    }
  }
  return out;
}

inline std::string to_string(const PoleSubset& s) { return "{" + mask_to_string(s.mask()) + "}"; }

// Ordered by mask value: {1},{2},{1,2},{3},{1,3},...
inline std::vector<PoleSubset> canonical_subsets(int p) {
  if (p < 2 || p > kMaxPoles) throw Error(ErrorKind::BadInput, "pole count out of range");
  std::vector<PoleSubset> out;
  const Mask count = Mask{1} << (p - 1);
  out.reserve(count - 1);
  for (Mask m = 1; m < count; ++m) out.push_back(PoleSubset::from_mask(m, p));
  return out;
}

inline std::size_t canonical_subset_count(int p) { return (std::size_t{1} << (p - 1)) - 1; }

struct ResonanceDegree {
  int c = 0;
  int d = 0;
  friend bool operator==(const ResonanceDegree&, const ResonanceDegree&) = default;
};

// Works for any nonempty proper subset, canonical or not.
inline ResonanceDegree resonance_degree(const StratumSignature& sig, Mask raw) {
  ResonanceDegree r{0, -1};
  for (int j = 1; j <= sig.poles(); ++j) {
    if (raw & label_bit(j)) {
      ++r.c;
      r.d += sig.order(j);
    }
  }
  return r;
}

inline ResonanceDegree resonance_degree(const StratumSignature& sig, const PoleSubset& I) {
  return resonance_degree(sig, I.mask());
}

// ---------------------------------------------------------------------------
// Residues

struct ResidueConfig {
  std::vector<Rational> lambda;

  int poles() const { return static_cast<int>(lambda.size()); }
  friend bool operator==(const ResidueConfig&, const ResidueConfig&) = default;
};

inline ResidueConfig make_residues(std::vector<Rational> lambda) {
  if (lambda.size() < 2) throw Error(ErrorKind::BadInput, "need at least two residues");
  Rational sum = 0;
  for (const auto& x : lambda) sum += x;
  if (sum != 0) throw Error(ErrorKind::BadInput, "residues must sum to zero");
  return ResidueConfig{std::move(lambda)};
}

inline Rational parse_rational(std::string_view text) {
  auto trim = [](std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    return s;
  };
  text = trim(text);
  auto parse_int = [&](std::string_view s) {
    s = trim(s);
    std::size_t start = (!s.empty() && (s[0] == '-' || s[0] == '+')) ? 1 : 0;
    if (s.size() == start) throw Error(ErrorKind::BadInput, "malformed rational '" + std::string(text) + "'");
    for (std::size_t k = start; k < s.size(); ++k)
      if (s[k] < '0' || s[k] > '9') throw Error(ErrorKind::BadInput, "malformed rational '" + std::string(text) + "'");
    if (s[0] == '+') s.remove_prefix(1);
    return BigInt(std::string(s));
  };
  auto slash = text.find('/');
  if (slash == std::string_view::npos) return Rational(parse_int(text));
  BigInt den = parse_int(text.substr(slash + 1));
  if (den == 0) throw Error(ErrorKind::BadInput, "zero denominator in '" + std::string(text) + "'");
  return Rational(parse_int(text.substr(0, slash)), den);
}

inline std::vector<std::string> split(std::string_view text, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : text) {
    if (ch == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

inline ResidueConfig parse_residues(std::string_view text) {
  std::vector<Rational> values;
  for (const auto& piece : split(text, ',')) values.push_back(parse_rational(piece));
  return make_residues(std::move(values));
}

inline std::string to_string(const Rational& x) {
  std::ostringstream os;
  os << x;
  return os.str();
}

inline std::string to_string(const ResidueConfig& r) {
  std::string out;
  for (std::size_t j = 0; j < r.lambda.size(); ++j) {
    if (j) out += ',';
    out += to_string(r.lambda[j]);
  }
  return out;
}

inline std::vector<int> parse_int_list(std::string_view text) {
  std::vector<int> out;
  for (const auto& piece : split(text, ',')) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(piece, &used);
    } catch (const std::exception&) {
      throw Error(ErrorKind::BadInput, "malformed integer '" + piece + "'");
    }
    if (used != piece.size()) throw Error(ErrorKind::BadInput, "malformed integer '" + piece + "'");
    out.push_back(v);
  }
  return out;
}

inline Mask parse_mask(std::string_view text, int p) {
  Mask m = 0;
  for (int l : parse_int_list(text)) {
    if (l < 1 || l > p) throw Error(ErrorKind::BadInput, "pole label " + std::to_string(l) + " out of range");
    m |= label_bit(l);
  }
  return m;
}

inline PoleSubset parse_subset(std::string_view text, int p) { return PoleSubset::from_mask(parse_mask(text, p), p); }

// ---------------------------------------------------------------------------
// Sign functions

enum class Sign : std::int8_t { Negative = -1, Zero = 0, Positive = 1 };

inline Sign negate(Sign s) { return static_cast<Sign>(-static_cast<int>(s)); }

inline char to_char(Sign s) { return s == Sign::Positive ? '+' : (s == Sign::Negative ? '-' : '0'); }

inline Sign sign_from_char(char ch) {
  switch (ch) {
    case '+': return Sign::Positive;
    case '-': return Sign::Negative;
    case '0': return Sign::Zero;
    default: throw Error(ErrorKind::BadInput, std::string("bad sign character '") + ch + "'");
  }
}

inline Sign sign_of(const Rational& x) { return x > 0 ? Sign::Positive : (x < 0 ? Sign::Negative : Sign::Zero); }

class SignFunction {
 public:
  SignFunction() = default;

  SignFunction(int p, std::vector<Sign> signs, bool realizable = false)
      : p_(p), signs_(std::move(signs)), realizable_(realizable) {
    if (p < 2 || p > kMaxPoles) throw Error(ErrorKind::BadInput, "pole count out of range");
    if (signs_.size() != canonical_subset_count(p)) {
      throw Error(ErrorKind::BadInput, "sign function needs one sign per canonical subset");
    }
  }

  static SignFunction constant(int p, Sign s) { return SignFunction(p, std::vector<Sign>(canonical_subset_count(p), s)); }

  // One character per canonical subset, in canonical_subsets order.
  static SignFunction from_key(int p, std::string_view key) {
    if (key.size() != canonical_subset_count(p)) throw Error(ErrorKind::BadInput, "sign key has wrong length");
    std::vector<Sign> signs;
    for (char ch : key) signs.push_back(sign_from_char(ch));
    return SignFunction(p, std::move(signs));
  }

  int poles() const { return p_; }
  bool realizable() const { return realizable_; }
  const std::vector<Sign>& signs() const { return signs_; }

  Sign operator()(const PoleSubset& I) const { return signs_[I.index()]; }

  // Any nonempty proper subset; complements answer with the negated sign.
  Sign at(Mask raw) const {
    Mask c = canonical_mask(raw, p_);
    Sign s = signs_[c - 1];
    return c == raw ? s : negate(s);
  }

  SignFunction with(const PoleSubset& I, Sign s) const {
    SignFunction out = *this;
    out.signs_[I.index()] = s;
    out.realizable_ = false;
    return out;
  }

  SignFunction negated() const {
    SignFunction out = *this;
    for (auto& s : out.signs_) s = negate(s);
    return out;
  }

  SignFunction marked_realizable() const {
    SignFunction out = *this;
    out.realizable_ = true;
    return out;
  }

  bool nowhere_zero() const {
    return std::none_of(signs_.begin(), signs_.end(), [](Sign s) { return s == Sign::Zero; });
  }

  std::vector<PoleSubset> zero_set() const {
    std::vector<PoleSubset> out;
    for (std::size_t k = 0; k < signs_.size(); ++k)
      if (signs_[k] == Sign::Zero) out.push_back(PoleSubset::from_mask(static_cast<Mask>(k + 1), p_));
    return out;
  }

  std::string key() const {
    std::string out;
    out.reserve(signs_.size());
    for (Sign s : signs_) out += to_char(s);
    return out;
  }

  friend bool operator==(const SignFunction& x, const SignFunction& y) { return x.p_ == y.p_ && x.signs_ == y.signs_; }

 private:
  int p_ = 0;
  std::vector<Sign> signs_;
  bool realizable_ = false;
};

inline SignFunction sign_function_of(const ResidueConfig& res) {
  const int p = res.poles();
  if (p < 2 || p > kMaxPoles) throw Error(ErrorKind::BadInput, "pole count out of range");
  Rational total = 0;
  for (const auto& x : res.lambda) total += x;
  if (total != 0) throw Error(ErrorKind::BadInput, "residues must sum to zero");
  std::vector<Sign> signs;
  signs.reserve(canonical_subset_count(p));
  for (Mask m = 1; m < (Mask{1} << (p - 1)); ++m) {
    Rational s = 0;
    for (int j = 1; j < p; ++j)
      if (m & label_bit(j)) s += res.lambda[static_cast<std::size_t>(j - 1)];
    signs.push_back(sign_of(s));
  }
  return SignFunction(p, std::move(signs), true);
}

// The chamber where the sign of I is + exactly when 1 lies in I.
inline SignFunction standard_sign_function(int p) {
  std::vector<Sign> signs;
  for (Mask m = 1; m < (Mask{1} << (p - 1)); ++m) signs.push_back((m & 1) ? Sign::Positive : Sign::Negative);
  return SignFunction(p, std::move(signs), true);
}

inline std::string describe(const SignFunction& psi) {
  std::string out;
  for (const auto& I : canonical_subsets(psi.poles())) {
    if (!out.empty()) out += ' ';
    out += mask_to_string(I.mask()) + ":" + to_char(psi(I));
  }
  return out;
}

// Accepts either the compact key ("+-+") or "I=s" pairs separated by ';' ("1=+;2=-;1,2=+").
// Pairs may name any subset; unnamed canonical subsets are an error.
inline SignFunction parse_sign_function(std::string_view text, int p) {
  if (text.find('=') == std::string_view::npos) return SignFunction::from_key(p, text);
  std::vector<int> seen(canonical_subset_count(p), 0);
  std::vector<Sign> signs(canonical_subset_count(p), Sign::Zero);
  for (const auto& item : split(text, ';')) {
    if (item.empty()) continue;
    auto eq = item.find('=');
    if (eq == std::string::npos || eq + 2 != item.size()) throw Error(ErrorKind::BadInput, "malformed sign entry '" + item + "'");
    Mask raw = parse_mask(item.substr(0, eq), p);
    PoleSubset I = PoleSubset::from_mask(raw, p);
    Sign s = sign_from_char(item[eq + 1]);
    if (I.mask() != raw) s = negate(s);
    if (seen[I.index()] && signs[I.index()] != s) throw Error(ErrorKind::BadInput, "conflicting signs for " + to_string(I));
    seen[I.index()] = 1;
    signs[I.index()] = s;
  }
  for (std::size_t k = 0; k < seen.size(); ++k) {
    if (!seen[k]) {
      throw Error(ErrorKind::BadInput, "no sign given for {" + mask_to_string(static_cast<Mask>(k + 1)) + "}");
    }
  }
  return SignFunction(p, std::move(signs));
}

}  // namespace isoresidual
