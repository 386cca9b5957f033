#pragma once

// Truncated power series over a word-size prime field.
//
// These are the mod-p images of the integer-indexed parts of eta quotients:
// every series here has constant term 1 at index 0, and the fractional
// q-power prefactor is tracked by callers as an exact valuation.
//
// Powers of the Euler product E = prod (1 - x^n) are computed with the
// logarithmic-derivative recurrence  E f' = r E' f  for f = E^r, which costs
// O(len * sqrt(len)) because E is pentagonally sparse.  The same recurrence
// serves negative r, so no series division is needed to expand quotients.

#include <cstdlib>
#include <utility>
#include <vector>

#include "etaq/modring.hpp"

namespace etaq {

// coefficients of (prod_{n>=1} (1 - x^n))^r mod p, length len
inline std::vector<double> euler_power_mod(const PrimeField& fld, i64 r,
                                           std::size_t len) {
  std::vector<double> f(len, 0);
  if (len == 0) return f;
  f[0] = 1;
  if (len == 1 || r == 0) return f;

  // generalized pentagonal exponents k = j(3j∓1)/2 with sign (-1)^j
  std::vector<std::pair<std::size_t, int>> pent;
  for (i64 j = 1;; ++j) {
    const i64 k1 = j * (3 * j - 1) / 2;
    const i64 k2 = j * (3 * j + 1) / 2;
    if (k1 >= i64(len)) break;
    const int s = (j % 2) ? -1 : 1;
    pent.emplace_back(std::size_t(k1), s);
    if (k2 < i64(len)) pent.emplace_back(std::size_t(k2), s);
  }

  const std::vector<double> inv = batch_inverses(fld, len);
  for (std::size_t n = 1; n < len; ++n) {
    double acc = 0;
    for (const auto& [k, s] : pent) {
      if (k > n) break;
      // n f_n = sum_k e_k ((r+1)k - n) f_{n-k}
      const double coef = fld.from_i64((r + 1) * i64(k) - i64(n));
      const double term = fld.mul(coef, f[n - k]);
      acc = s > 0 ? fld.add(acc, term) : fld.sub(acc, term);
    }
    f[n] = fld.mul(acc, inv[n]);
  }
  return f;
}

// integer-indexed part of an eta quotient mod p: prod_δ E(x^δ)^{r_δ},
// truncated to len coefficients (the q^{Σδr/24} prefactor is the caller's)
inline std::vector<double> eta_quotient_mod(
    const PrimeField& fld, const std::vector<std::pair<i64, i64>>& exponents,
    std::size_t len) {
  std::vector<double> acc(len, 0);
  if (len == 0) return acc;
  acc[0] = 1;
  for (const auto& [delta, r] : exponents) {
    require(delta > 0, "eta argument scale must be positive");
    if (r == 0) continue;
    const std::size_t sub = (len + std::size_t(delta) - 1) / std::size_t(delta);
    const std::vector<double> g = euler_power_mod(fld, r, sub);
    std::vector<double> dilated(len, 0);
    for (std::size_t i = 0; i < sub && i * std::size_t(delta) < len; ++i)
      dilated[i * std::size_t(delta)] = g[i];
    acc = fld.convolve(acc, dilated, len);
  }
  return acc;
}

// multiplicative inverse of a unit series mod x^len (Newton doubling)
inline std::vector<double> series_inverse_mod(const PrimeField& fld,
                                              const std::vector<double>& h,
                                              std::size_t len) {
  require(!h.empty() && h[0] != 0, "series inverse requires a unit constant term");
  std::vector<double> v{fld.inv(h[0])};
  while (v.size() < len) {
    const std::size_t m = std::min(v.size() * 2, len);
    // v <- v (2 - h v) mod x^m
    std::vector<double> t = fld.convolve(h, v, m);
    t[0] = fld.sub(fld.from_i64(2), t[0]);
    for (std::size_t i = 1; i < m; ++i) t[i] = fld.neg(t[i]);
    v = fld.convolve(v, t, m);
  }
  v.resize(len);
  return v;
}

}  // namespace etaq
