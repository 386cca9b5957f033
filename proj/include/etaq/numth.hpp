#pragma once

// Elementary number theory for congruence subgroups Gamma_0(N): divisor
// arithmetic, the index psi(N), cusp enumeration, and the genus of X_0(N).

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace etaq {

using i64 = std::int64_t;

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

// Internal consistency failures (things that are mathematically impossible
// unless the implementation is wrong) use a distinct type so callers can map
// them to a dedicated exit code.
struct InconsistencyError : std::runtime_error {
  explicit InconsistencyError(const std::string& msg) : std::runtime_error(msg) {}
};

inline i64 check_level(i64 n) {
  require(n >= 1, "level N must be a positive integer");
  return n;
}

struct PrimePower {
  i64 p = 0;
  int e = 0;
  i64 value = 1;  // p^e
};

// Trial division; levels here are small (spec: N <= 10^4).
inline std::vector<PrimePower> factorize(i64 n) {
  check_level(n);
  std::vector<PrimePower> out;
  for (i64 p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
    if (n % p) continue;
    PrimePower pp{p, 0, 1};
    while (n % p == 0) {
      n /= p;
      ++pp.e;
      pp.value *= p;
    }
    out.push_back(pp);
  }
  if (n > 1) out.push_back({n, 1, n});
  return out;
}

// Divisors in ascending order.
inline std::vector<i64> divisors(i64 n) {
  check_level(n);
  std::vector<i64> out{1};
  for (const auto& pp : factorize(n)) {
    const std::size_t base = out.size();
    i64 q = 1;
    for (int e = 1; e <= pp.e; ++e) {
      q *= pp.p;
      for (std::size_t i = 0; i < base; ++i) out.push_back(out[i] * q);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline i64 euler_phi(i64 n) {
  check_level(n);
  i64 r = n;
  for (const auto& pp : factorize(n)) r = r / pp.p * (pp.p - 1);
  return r;
}

// Index of Gamma_0(N) in SL_2(Z): psi(N) = N * prod_{p|N} (1 + 1/p).
inline i64 psi(i64 n) {
  check_level(n);
  i64 r = n;
  for (const auto& pp : factorize(n)) r = r / pp.p * (pp.p + 1);
  return r;
}

// Number of elliptic points of order 2 resp. 3 on X_0(N).
inline i64 nu2(i64 n) {
  check_level(n);
  if (n % 4 == 0) return 0;
  i64 r = 1;
  for (const auto& pp : factorize(n)) {
    if (pp.p == 2) continue;            // chi_{-1}(2) = 0
    if (pp.p % 4 == 1) r *= 2;          // chi_{-1}(p) = 1
    else return 0;                      // chi_{-1}(p) = -1
  }
  return r;
}

inline i64 nu3(i64 n) {
  check_level(n);
  if (n % 9 == 0) return 0;
  i64 r = 1;
  for (const auto& pp : factorize(n)) {
    if (pp.p == 3) continue;            // chi_{-3}(3) = 0
    if (pp.p % 3 == 1) r *= 2;          // chi_{-3}(p) = 1
    else return 0;                      // chi_{-3}(p) = -1
  }
  return r;
}

// Cusps of X_0(N).  One class per divisor d | N and residue a (mod gcd(d,N/d))
// coprime to gcd(d,N/d); the representative a/d uses the smallest nonnegative
// a in the class that is coprime to d.  The cusp infinity appears as 1/N.
struct Cusp {
  i64 a = 0;
  i64 d = 1;

  bool operator==(const Cusp&) const = default;
};

inline i64 cusp_count_for_denominator(i64 n, i64 d) {
  return euler_phi(std::gcd(d, n / d));
}

inline i64 nu_inf(i64 n) {
  check_level(n);
  i64 r = 0;
  for (i64 d : divisors(n)) r += cusp_count_for_denominator(n, d);
  return r;
}

inline std::vector<Cusp> cusps(i64 n) {
  check_level(n);
  std::vector<Cusp> out;
  for (i64 d : divisors(n)) {
    const i64 k = std::gcd(d, n / d);
    for (i64 a0 = 0; a0 < k; ++a0) {
      if (std::gcd(a0, k) != 1) continue;  // note gcd(0,1) = 1: k = 1 keeps a0 = 0
      i64 a = a0;
      while (std::gcd(a, d) != 1) a += k;
      out.push_back({a, d});
    }
  }
  return out;
}

// Width of any cusp with denominator d.
inline i64 cusp_width(i64 n, i64 d) {
  require(n % d == 0, "cusp denominator must divide the level");
  return n / std::gcd(n, d * d);
}

inline i64 genus(i64 n) {
  check_level(n);
  // 12g = 12 + psi - 3*nu2 - 4*nu3 - 6*nu_inf; the right side is divisible
  // by 12 for every N, which we assert rather than trust.
  const i64 twelve_g = 12 + psi(n) - 3 * nu2(n) - 4 * nu3(n) - 6 * nu_inf(n);
  if (twelve_g % 12 != 0 || twelve_g < 0)
    throw InconsistencyError("genus formula did not yield a nonnegative integer");
  return twelve_g / 12;
}

// dim M_12(Gamma_0(N)) = psi(N) + 1 - g for weight 12 (no elliptic/cusp
// corrections survive at this weight).
inline i64 dim_m12(i64 n) { return psi(n) + 1 - genus(n); }

struct Gamma0Profile {
  i64 level = 1;
  i64 index = 1;        // psi(N)
  i64 nu2 = 0;
  i64 nu3 = 0;
  i64 cusp_number = 1;  // nu_inf(N)
  i64 genus = 0;
  i64 dim_m12 = 2;
};

inline Gamma0Profile profile(i64 n) {
  check_level(n);
  return Gamma0Profile{n,      psi(n),   nu2(n),     nu3(n),
                       nu_inf(n), genus(n), dim_m12(n)};
}

}  // namespace etaq
