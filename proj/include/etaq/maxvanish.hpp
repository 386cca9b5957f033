#pragma once

// The weight-12 eta-quotient with all its vanishing at the cusp infinity:
// the exponent vector r solving A_N r = Psi(N) e_{d=N}, so that the form has
// divisor Psi(N) * (infinity).  The solution is unique (A_N is invertible);
// it is integral exactly when prod_{p | N} (p - 1) divides 24, which sorts
// the admissible levels into three families by the number of prime factors:
//
//   one prime,    p in {2, 3, 5, 7, 13};
//   two primes,   (p-1)(q-1) | 24;
//   three primes, {2,3,5}, {2,3,7}, {2,3,13}, {2,5,7}.
//
// In those cases the solution factors over the prime powers p^a || N as the
// Kronecker product of vectors supported on p^{a-1}, p^a with values
// -24/(p-1), 24p/(p-1), rescaled by 24^{1-s} for s prime factors.

#include <vector>

#include "etaq/etaquot.hpp"

namespace etaq {

struct MaxVanishing {
  i64 level = 0;
  std::vector<Rat> exponents;  // aligned with divisors(level)
  bool integral = false;
};

inline MaxVanishing max_vanishing(i64 n) {
  const auto divs = divisors(n);
  const IntMatrix s = scaled_order_matrix(n);
  std::vector<std::vector<Rat>> a(divs.size(), std::vector<Rat>(divs.size()));
  for (std::size_t i = 0; i < divs.size(); ++i)
    for (std::size_t j = 0; j < divs.size(); ++j) a[i][j] = Rat(s.at(i, j), 24);
  std::vector<Rat> rhs(divs.size(), 0);
  rhs.back() = psi(n);

  MaxVanishing out;
  out.level = n;
  out.exponents = rat_solve(a, rhs);
  out.integral = true;
  for (const Rat& x : out.exponents)
    if (rat_den(x) != 1) out.integral = false;
  return out;
}

inline bool admits_integral_max_vanishing(i64 n) {
  require(n >= 1, "level must be positive");
  i64 prod = 1;
  for (const auto& pp : factorize(n)) prod *= pp.p - 1;
  return 24 % prod == 0;
}

enum class VanishingFamily { None, SinglePrime, TwoPrimes, ThreePrimes };

inline VanishingFamily vanishing_family(i64 n) {
  if (!admits_integral_max_vanishing(n) || n == 1) return VanishingFamily::None;
  switch (factorize(n).size()) {
    case 1: return VanishingFamily::SinglePrime;
    case 2: return VanishingFamily::TwoPrimes;
    case 3: return VanishingFamily::ThreePrimes;
    default: return VanishingFamily::None;
  }
}

// The Kronecker-product closed form; defined whenever the level admits an
// integral solution (including the trivial level 1, where it is just 24).
inline std::vector<Rat> max_vanishing_closed_form(i64 n) {
  require(admits_integral_max_vanishing(n),
          "level admits no integral maximal-vanishing exponents");
  const auto divs = divisors(n);
  const auto fac = factorize(n);
  std::vector<Rat> out;
  out.reserve(divs.size());
  for (i64 d : divs) {
    Rat prod = 24;  // accumulated as 24 * prod_p (x_p / 24)
    for (const auto& pp : fac) {
      i64 m = d, v = 0;
      while (m % pp.p == 0) { m /= pp.p; ++v; }
      Rat x = 0;
      if (v == pp.e)
        x = Rat(24 * pp.p, pp.p - 1);
      else if (v == pp.e - 1)
        x = Rat(-24, pp.p - 1);
      prod *= x / 24;
    }
    out.push_back(prod);
  }
  return out;
}

inline EtaQuotient max_vanishing_form(i64 n) {
  MaxVanishing mv = max_vanishing(n);
  require(mv.integral,
          "level admits no integral maximal-vanishing eta-quotient");
  const auto divs = divisors(n);
  std::vector<std::pair<i64, i64>> exps;
  for (std::size_t j = 0; j < divs.size(); ++j) {
    const Int num = rat_num(mv.exponents[j]);
    require(num >= std::numeric_limits<i64>::min() &&
                num <= std::numeric_limits<i64>::max(),
            "exponent overflows a machine integer");
    if (num != 0) exps.emplace_back(divs[j], num.convert_to<i64>());
  }
  return EtaQuotient(n, exps);
}

// Inverse of the scaled prime-power order matrix 24*A_{p^n}.  Its first and
// last rows have the closed forms
//   row 0: ( p, -p, 0, ..., 0) / (p^{n-1} (p^2 - 1)),
//   row n: ( 0, ..., 0, -p, p) / (p^{n-1} (p^2 - 1)),
// for n >= 2 (for n = 1 the inverse is [[p, -1], [-1, p]] / (p^2 - 1)).
inline std::vector<std::vector<Rat>> inverse_scaled_order_matrix_prime_power(
    i64 p, i64 n) {
  i64 q = 1;
  for (i64 k = 0; k < n; ++k) q *= p;
  const IntMatrix s = scaled_order_matrix(q);
  std::vector<std::vector<Rat>> a(s.rows, std::vector<Rat>(s.cols));
  for (std::size_t i = 0; i < s.rows; ++i)
    for (std::size_t j = 0; j < s.cols; ++j) a[i][j] = Rat(s.at(i, j));
  return rat_inverse(a);
}

}  // namespace etaq
