#pragma once

// Dense two-phase simplex over an exact field, Bland's rule throughout.
// Solves  min c.x  s.t.  A x = b,  x >= 0  with b >= 0.

#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <type_traits>
#include <vector>

#include "isoresidual/stratum_core.hpp"

namespace isoresidual::lp {

// Rational with 64-bit parts. Every operation checks for overflow and throws, so results
// are either exact or absent; callers fall back to arbitrary precision.
class SmallRational {
 public:
  struct Overflow : std::overflow_error {
    Overflow() : std::overflow_error("SmallRational overflow") {}
  };

  SmallRational() = default;
  SmallRational(std::int64_t n) : num_(n), den_(1) {}  // NOLINT(google-explicit-constructor)

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }

  friend SmallRational operator+(const SmallRational& x, const SmallRational& y) {
    __int128 n = static_cast<__int128>(x.num_) * y.den_ + static_cast<__int128>(y.num_) * x.den_;
    __int128 d = static_cast<__int128>(x.den_) * y.den_;
    return make(n, d);
  }
  friend SmallRational operator-(const SmallRational& x, const SmallRational& y) {
    __int128 n = static_cast<__int128>(x.num_) * y.den_ - static_cast<__int128>(y.num_) * x.den_;
    __int128 d = static_cast<__int128>(x.den_) * y.den_;
    return make(n, d);
  }
  friend SmallRational operator*(const SmallRational& x, const SmallRational& y) {
    return make(static_cast<__int128>(x.num_) * y.num_, static_cast<__int128>(x.den_) * y.den_);
  }
  friend SmallRational operator/(const SmallRational& x, const SmallRational& y) {
    if (y.num_ == 0) throw std::domain_error("division by zero");
    return make(static_cast<__int128>(x.num_) * y.den_, static_cast<__int128>(x.den_) * y.num_);
  }
  friend bool operator==(const SmallRational& x, const SmallRational& y) { return x.num_ == y.num_ && x.den_ == y.den_; }
  friend bool operator<(const SmallRational& x, const SmallRational& y) {
    return static_cast<__int128>(x.num_) * y.den_ < static_cast<__int128>(y.num_) * x.den_;
  }
  friend bool operator>(const SmallRational& x, const SmallRational& y) { return y < x; }

  int sign() const { return num_ > 0 ? 1 : (num_ < 0 ? -1 : 0); }
  Rational to_rational() const { return Rational(BigInt(num_), BigInt(den_)); }

 private:
  static SmallRational make(__int128 n, __int128 d) {
    if (d < 0) {
      n = -n;
      d = -d;
    }
    __int128 g = gcd128(n < 0 ? -n : n, d);
    if (g > 1) {
      n /= g;
      d /= g;
    }
    constexpr __int128 lim = static_cast<__int128>(INT64_MAX);
    if (n > lim || n < -lim || d > lim) throw Overflow();
    SmallRational r;
    r.num_ = static_cast<std::int64_t>(n);
    r.den_ = static_cast<std::int64_t>(d);
    return r;
  }
  static __int128 gcd128(__int128 x, __int128 y) {
    while (y != 0) {
      __int128 t = x % y;
      x = y;
      y = t;
    }
    return x;
  }

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

template <class F>
int sign_of_value(const F& x) {
  if constexpr (std::is_same_v<F, SmallRational>) {
    return x.sign();
  } else {
    return x > 0 ? 1 : (x < 0 ? -1 : 0);
  }
}

struct Problem {
  std::vector<std::vector<int>> A;  // rows x cols, small integer coefficients
  std::vector<int> b;               // nonnegative
  std::vector<int> c;               // objective, minimized
};

template <class F>
class Simplex {
 public:
  explicit Simplex(const Problem& pr) : m_(pr.A.size()), n_(pr.c.size()) {
    // Columns: originals, then one artificial per row, then the right-hand side.
    width_ = n_ + m_ + 1;
    tab_.assign(m_ + 1, std::vector<F>(width_, F(0)));
    basis_.resize(m_);
    for (std::size_t r = 0; r < m_; ++r) {
      for (std::size_t j = 0; j < n_; ++j) tab_[r][j] = F(pr.A[r][j]);
      tab_[r][n_ + r] = F(1);
      tab_[r][width_ - 1] = F(pr.b[r]);
      basis_[r] = n_ + r;
    }
    cost_ = pr.c;
  }

  // Returns the optimal point, or nothing when infeasible.
  std::optional<std::vector<F>> solve() {
    // Phase I: minimize the sum of artificials.
    std::vector<F>& obj = tab_[m_];
    for (std::size_t j = 0; j < width_; ++j) obj[j] = F(0);
    for (std::size_t r = 0; r < m_; ++r)
      for (std::size_t j = 0; j < n_; ++j) obj[j] = obj[j] - tab_[r][j];
    for (std::size_t r = 0; r < m_; ++r) obj[width_ - 1] = obj[width_ - 1] - tab_[r][width_ - 1];
    run(n_ + m_);
    if (sign_of_value(tab_[m_][width_ - 1]) != 0) return std::nullopt;
    // Drive artificials out of the basis where possible; rows that stay are redundant.
    for (std::size_t r = 0; r < m_; ++r) {
      if (basis_[r] < n_) continue;
      for (std::size_t j = 0; j < n_; ++j) {
        if (sign_of_value(tab_[r][j]) != 0) {
          pivot(r, j);
          break;
        }
      }
    }
    // Phase II on the original columns only.
    for (std::size_t j = 0; j < width_; ++j) obj[j] = F(0);
    for (std::size_t j = 0; j < n_; ++j) obj[j] = F(cost_[j]);
    for (std::size_t r = 0; r < m_; ++r) {
      std::size_t bj = basis_[r];
      if (bj < n_ && sign_of_value(obj[bj]) != 0) {
        F f = obj[bj];
        for (std::size_t j = 0; j < width_; ++j) obj[j] = obj[j] - f * tab_[r][j];
      }
    }
    run(n_);
    std::vector<F> x(n_, F(0));
    for (std::size_t r = 0; r < m_; ++r)
      if (basis_[r] < n_) x[basis_[r]] = tab_[r][width_ - 1];
    return x;
  }

 private:
  void run(std::size_t allowed_cols) {
    while (true) {
      std::size_t enter = width_;
      for (std::size_t j = 0; j < allowed_cols; ++j) {
        if (sign_of_value(tab_[m_][j]) < 0) {
          enter = j;
          break;
        }
      }
      if (enter == width_) return;
      std::size_t leave = m_;
      F best(0);
      for (std::size_t r = 0; r < m_; ++r) {
        if (sign_of_value(tab_[r][enter]) <= 0) continue;
        F ratio = tab_[r][width_ - 1] / tab_[r][enter];
        if (leave == m_ || ratio < best || (ratio == best && basis_[r] < basis_[leave])) {
          leave = r;
          best = ratio;
        }
      }
      if (leave == m_) throw std::logic_error("unbounded linear program");
      pivot(leave, enter);
    }
  }

  void pivot(std::size_t r, std::size_t j) {
    F inv = F(1) / tab_[r][j];
    for (auto& x : tab_[r]) x = x * inv;
    for (std::size_t k = 0; k <= m_; ++k) {
      if (k == r || sign_of_value(tab_[k][j]) == 0) continue;
      F f = tab_[k][j];
      for (std::size_t c = 0; c < width_; ++c)
        if (sign_of_value(tab_[r][c]) != 0) tab_[k][c] = tab_[k][c] - f * tab_[r][c];
    }
    basis_[r] = j;
  }

  std::size_t m_, n_, width_ = 0;
  std::vector<std::vector<F>> tab_;
  std::vector<std::size_t> basis_;
  std::vector<int> cost_;
};

// Exact solve: 64-bit fast path, arbitrary precision on overflow.
inline std::optional<std::vector<Rational>> solve(const Problem& pr) {
  try {
    auto x = Simplex<SmallRational>(pr).solve();
    if (!x) return std::nullopt;
    std::vector<Rational> out;
    for (const auto& v : *x) out.push_back(v.to_rational());
    return out;
  } catch (const SmallRational::Overflow&) {
    return Simplex<Rational>(pr).solve();
  }
}

}  // namespace isoresidual::lp
