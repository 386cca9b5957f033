#pragma once

// Exact truncated q-expansions.  A QSeries stores a rational valuation v
// (denominator dividing 24, as produced by eta-quotients) and dense exact
// rational coefficients at the exponents v, v+1, v+2, ...  The number of
// stored coefficients is the precision: all of them are exact, everything
// beyond is unknown.

#include <vector>

#include "etaq/linalg.hpp"
#include "etaq/numth.hpp"

namespace etaq {

struct QSeries {
  Rat val = 0;          // exponent of the first stored coefficient
  std::vector<Rat> c;   // coefficients at val, val+1, ...

  std::size_t precision() const { return c.size(); }

  const Rat& lead() const {
    require(!c.empty(), "empty series has no leading coefficient");
    return c[0];
  }

  // Coefficient of q^e.  Exponents below the valuation are exact zeros;
  // exponents at or beyond the precision window are unknown and rejected.
  Rat coeff(const Rat& e) const {
    Rat off = e - val;
    if (off < 0) {
      Int n = rat_num(off), d = rat_den(off);
      (void)n; (void)d;
      return 0;
    }
    require(rat_den(off) == 1, "exponent not on this series' q-grid");
    Int idx = rat_num(off);
    require(idx < Int(c.size()), "exponent beyond stored precision");
    return c[std::size_t(idx)];
  }

  bool is_zero() const {
    for (const Rat& x : c)
      if (x != 0) return false;
    return true;
  }

  // Strip leading zero coefficients into the valuation.  Each stripped zero
  // costs one unit of precision (the window shrinks from the front).
  QSeries normalized() const {
    std::size_t k = 0;
    while (k < c.size() && c[k] == 0) ++k;
    QSeries out;
    out.val = val + Rat(k);
    out.c.assign(c.begin() + k, c.end());
    return out;
  }

  QSeries truncated(std::size_t p) const {
    QSeries out = *this;
    if (out.c.size() > p) out.c.resize(p);
    return out;
  }
};

inline QSeries qs_one(std::size_t p) {
  QSeries s;
  s.c.assign(p, Rat(0));
  if (p) s.c[0] = 1;
  return s;
}

inline QSeries qs_scale(const QSeries& a, const Rat& k) {
  QSeries out = a;
  for (Rat& x : out.c) x *= k;
  return out;
}

// Addition requires both series to live on the same q-grid (valuations
// differing by an integer); the result window is the intersection of the
// two trusted windows.
inline QSeries qs_add(const QSeries& a, const QSeries& b) {
  Rat diff = a.val - b.val;
  require(rat_den(diff) == 1,
          "cannot add series whose valuations differ by a non-integer");
  const QSeries& lo = (a.val <= b.val) ? a : b;
  const QSeries& hi = (a.val <= b.val) ? b : a;
  const Int shift_i = rat_num(hi.val - lo.val);
  require(shift_i >= 0, "valuation alignment failure");
  const std::size_t shift = std::size_t(shift_i);

  // trusted end = min(val + precision) over both inputs
  Rat end = std::min(lo.val + Rat(lo.c.size()), hi.val + Rat(hi.c.size()));
  Int len_i = rat_num(end - lo.val);
  std::size_t len = len_i < 0 ? 0 : std::size_t(len_i);
  QSeries out;
  out.val = lo.val;
  out.c.assign(len, Rat(0));
  for (std::size_t j = 0; j < len && j < lo.c.size(); ++j) out.c[j] = lo.c[j];
  for (std::size_t j = 0; j + shift < len && j < hi.c.size(); ++j)
    out.c[j + shift] += hi.c[j];
  return out;
}

inline QSeries qs_sub(const QSeries& a, const QSeries& b) {
  return qs_add(a, qs_scale(b, -1));
}

// Truncated Cauchy product; the result is trusted for min(precision) terms
// past the sum of the valuations.
inline QSeries qs_mul(const QSeries& a, const QSeries& b) {
  QSeries out;
  out.val = a.val + b.val;
  const std::size_t len = std::min(a.c.size(), b.c.size());
  out.c.assign(len, Rat(0));
  for (std::size_t i = 0; i < len && i < a.c.size(); ++i) {
    if (a.c[i] == 0) continue;
    const std::size_t jmax = std::min(b.c.size(), len - i);
    for (std::size_t j = 0; j < jmax; ++j) {
      if (b.c[j] == 0) continue;
      out.c[i + j] += a.c[i] * b.c[j];
    }
  }
  return out;
}

// Multiplicative inverse; requires a nonzero leading coefficient.
inline QSeries qs_inverse(const QSeries& a) {
  require(!a.c.empty() && a.c[0] != 0,
          "cannot invert a series with zero leading coefficient");
  QSeries out;
  out.val = -a.val;
  const std::size_t len = a.c.size();
  out.c.assign(len, Rat(0));
  Rat inv0 = Rat(1) / a.c[0];
  out.c[0] = inv0;
  for (std::size_t n = 1; n < len; ++n) {
    Rat s = 0;
    for (std::size_t k = 1; k <= n; ++k)
      if (a.c[k] != 0 && out.c[n - k] != 0) s += a.c[k] * out.c[n - k];
    out.c[n] = -s * inv0;
  }
  return out;
}

inline QSeries qs_pow(const QSeries& a, i64 e) {
  if (e < 0) return qs_pow(qs_inverse(a), -e);
  QSeries acc = qs_one(a.c.size());
  QSeries base = a;
  for (i64 k = e; k > 0; k >>= 1) {
    if (k & 1) acc = qs_mul(acc, base);
    if (k > 1) base = qs_mul(base, base);
  }
  acc.val = a.val * e;  // exact (the loop already accumulates this; re-pin)
  return acc;
}

// Euler product E(x) = prod_{n>=1} (1 - x^n) truncated to p coefficients,
// expanded by the pentagonal number theorem: sum_k (-1)^k x^{k(3k-1)/2}.
inline std::vector<Int> euler_product_coeffs(std::size_t p) {
  std::vector<Int> c(p, 0);
  if (p) c[0] = 1;
  for (i64 k = 1;; ++k) {
    const i64 g1 = k * (3 * k - 1) / 2;
    const i64 g2 = k * (3 * k + 1) / 2;
    if (g1 >= i64(p) && g2 >= i64(p)) break;
    const Int sign = (k % 2) ? -1 : 1;
    if (g1 < i64(p)) c[std::size_t(g1)] += sign;
    if (g2 < i64(p)) c[std::size_t(g2)] += sign;
  }
  return c;
}

// q-expansion of eta(delta*z)^r to p coefficients:
//   q^(delta*r/24) * E(q^delta)^r.
inline QSeries eta_power(i64 delta, i64 r, std::size_t p) {
  require(delta >= 1, "eta argument multiplier must be positive");
  QSeries dilated;  // E(q^delta) on the integer grid, valuation 0
  dilated.val = 0;
  dilated.c.assign(p, Rat(0));
  auto e = euler_product_coeffs(p / std::size_t(delta) + 1);
  for (std::size_t j = 0; j < e.size(); ++j) {
    const std::size_t idx = j * std::size_t(delta);
    if (idx < p) dilated.c[idx] = Rat(e[j]);
  }
  QSeries out = qs_pow(dilated, r);
  out.val = Rat(delta * r, 24);
  return out;
}

// Rank of the coefficient matrix of a family of series, all brought to a
// common grid and truncated to the common trusted window.
inline std::size_t linear_rank(const std::vector<QSeries>& fam) {
  if (fam.empty()) return 0;
  Rat vmin = fam[0].val, end = fam[0].val + Rat(fam[0].c.size());
  for (const auto& s : fam) {
    require(rat_den(s.val - fam[0].val) == 1,
            "series in a rank computation must share a q-grid");
    vmin = std::min(vmin, s.val);
    end = std::min(end, s.val + Rat(s.c.size()));
  }
  Int cols_i = rat_num(end - vmin);
  require(cols_i > 0, "rank window is empty");
  const std::size_t cols = std::size_t(cols_i);

  IntMatrix m(fam.size(), cols);
  for (std::size_t i = 0; i < fam.size(); ++i) {
    const std::size_t shift = std::size_t(rat_num(fam[i].val - vmin));
    Int den = 1;
    for (const Rat& x : fam[i].c) den = boost::multiprecision::lcm(den, rat_den(x));
    for (std::size_t j = 0; j + shift < cols && j < fam[i].c.size(); ++j)
      m.at(i, j + shift) = rat_num(fam[i].c[j]) * (den / rat_den(fam[i].c[j]));
  }
  return int_rank(m);
}

}  // namespace etaq
