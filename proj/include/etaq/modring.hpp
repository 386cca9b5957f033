#pragma once

// Word-size prime fields for the multimodular relation search.
//
// Field elements are stored as doubles holding integers in [0, p) with
// p < 2^51.  Products a*b < 2^102 are handled with the error-free transform:
// the double product plus an FMA recovers the exact low part, and one more
// FMA subtracts a floating quotient times p, so every mulmod is exact in
// plain double arithmetic.  The payoff is that elimination inner loops are
// auto-vectorizable (FMA + round + blend), while each prime still carries
// ~51 bits of CRT payload.
//
// Primes are chosen with p ≡ 1 (mod 2^16) so power-of-two NTTs up to length
// 65536 exist in every field.

#include <algorithm>
#include <cmath>
#include <map>
#include <utility>
#include <vector>

#include "etaq/linalg.hpp"
#include "etaq/numth.hpp"

namespace etaq {

inline Int powmod(Int base, Int exp, const Int& mod) {
  require(mod > 1 && exp >= 0, "powmod expects mod > 1 and exp >= 0");
  Int r = 1;
  base %= mod;
  if (base < 0) base += mod;
  while (exp > 0) {
    if (boost::multiprecision::bit_test(exp, 0)) r = r * base % mod;
    base = base * base % mod;
    exp >>= 1;
  }
  return r;
}

inline bool is_prime_i64(i64 n) {
  if (n < 2) return false;
  for (i64 q : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    if (n % q == 0) return n == q;
  }
  // deterministic Miller-Rabin for n < 3.3e24 with the first twelve primes
  i64 d = n - 1;
  int s = 0;
  while (d % 2 == 0) { d /= 2; ++s; }
  for (i64 a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    Int x = powmod(Int(a), Int(d), Int(n));
    if (x == 1 || x == n - 1) continue;
    bool witness = true;
    for (int r = 1; r < s; ++r) {
      x = x * x % n;
      if (x == n - 1) { witness = false; break; }
    }
    if (witness) return false;
  }
  return true;
}

// Deterministic stream of primes p ≡ 1 (mod 2^16) descending from `below`.
class PrimeSource {
 public:
  explicit PrimeSource(i64 below = i64(1) << 51)
      : cand_((below - 2) / 65536 * 65536 + 1) {
    require(below > (i64(1) << 17), "prime bound too small");
  }
  i64 next() {
    while (cand_ > 65536 && !is_prime_i64(cand_)) cand_ -= 65536;
    require(cand_ > 65536, "prime supply exhausted");
    const i64 p = cand_;
    cand_ -= 65536;
    return p;
  }

 private:
  i64 cand_;
};

// The largest `count` primes p ≡ 1 (mod 2^16) below `below`, descending.
inline std::vector<i64> ntt_primes(std::size_t count, i64 below = i64(1) << 51) {
  PrimeSource src(below);
  std::vector<i64> out;
  out.reserve(count);
  while (out.size() < count) out.push_back(src.next());
  return out;
}

class PrimeField {
 public:
  explicit PrimeField(i64 p) : pi_(p), p_(double(p)), pinv_(1.0 / double(p)) {
    require(p > 2 && p < (i64(1) << 51), "prime out of range for double field");
    require(p % 65536 == 1, "prime must be 1 mod 2^16 for NTT support");
    require(is_prime_i64(p), "modulus must be prime");
  }

  i64 prime() const { return pi_; }

  double from_i64(i64 x) const {
    i64 r = x % pi_;
    if (r < 0) r += pi_;
    return double(r);
  }
  double from_int(const Int& x) const {
    Int r = x % pi_;
    if (r < 0) r += pi_;
    return double(r.convert_to<i64>());
  }
  i64 to_i64(double a) const { return i64(a); }

  double add(double a, double b) const {
    double s = a + b - p_;
    return s < 0 ? s + p_ : s;
  }
  double sub(double a, double b) const {
    double s = a - b;
    return s < 0 ? s + p_ : s;
  }
  double neg(double a) const { return a == 0 ? 0 : p_ - a; }

  // exact a*b mod p via error-free product + floating quotient
  double mul(double a, double b) const {
    double u = a * b;
    double err = std::fma(a, b, -u);
    double q = std::floor(u * pinv_);
    double r = std::fma(-q, p_, u) + err;
    if (r < 0) r += p_;
    if (r >= p_) r -= p_;
    return r;
  }

  // x - f*y mod p, the elimination kernel operation
  double mul_sub(double x, double f, double y) const {
    double u = f * y;
    double err = std::fma(f, y, -u);
    double q = std::floor(u * pinv_);
    double r = std::fma(-q, p_, u) + err;  // f*y mod p, up to one stray p
    double s = x - r;
    if (s < 0) s += p_;
    if (s < 0) s += p_;
    if (s >= p_) s -= p_;
    return s;
  }

  double pow(double a, i64 e) const {
    if (e < 0) return pow(inv(a), -e);
    double acc = 1, base = a;
    for (; e; e >>= 1) {
      if (e & 1) acc = mul(acc, base);
      base = mul(base, base);
    }
    return acc;
  }

  double inv(double a) const {
    require(a != 0, "division by zero in prime field");
    return pow(a, pi_ - 2);
  }

  // In-place power-of-two NTT (length ≤ 65536).  `inverse` applies the
  // inverse transform including the 1/n scaling.
  void ntt(std::vector<double>& a, bool inverse) const {
    const std::size_t n = a.size();
    require(n && (n & (n - 1)) == 0 && n <= 65536, "NTT length must be a power of two <= 65536");
    if (n == 1) return;
    for (std::size_t i = 1, j = 0; i < n; ++i) {
      std::size_t bit = n >> 1;
      for (; j & bit; bit >>= 1) j ^= bit;
      j ^= bit;
      if (i < j) std::swap(a[i], a[j]);
    }
    const std::vector<double>& tw = twiddles(n, inverse);
    for (std::size_t len = 2, toff = 0; len <= n; len <<= 1) {
      const std::size_t half = len >> 1;
      for (std::size_t i = 0; i < n; i += len)
        for (std::size_t j = 0; j < half; ++j) {
          double u = a[i + j];
          double v = mul(a[i + j + half], tw[toff + j]);
          a[i + j] = add(u, v);
          a[i + j + half] = sub(u, v);
        }
      toff += half;
    }
    if (inverse) {
      const double ninv = inv(double(n));
      for (double& x : a) x = mul(x, ninv);
    }
  }

  // Truncated product of two coefficient vectors, length `out_len`.
  std::vector<double> convolve(const std::vector<double>& a,
                               const std::vector<double>& b,
                               std::size_t out_len) const {
    if (a.empty() || b.empty() || out_len == 0) return std::vector<double>(out_len, 0);
    // terms at index >= out_len cannot reach the output window
    const std::size_t na = std::min(a.size(), out_len);
    const std::size_t nb = std::min(b.size(), out_len);
    if (std::min(na, nb) <= 16 || na + nb <= 128) {
      std::vector<double> c(out_len, 0);
      for (std::size_t i = 0; i < na; ++i) {
        if (a[i] == 0) continue;
        const std::size_t jmax = std::min(nb, out_len - i);
        for (std::size_t j = 0; j < jmax; ++j)
          c[i + j] = add(c[i + j], mul(a[i], b[j]));
      }
      return c;
    }
    std::size_t n = 1;
    while (n < na + nb - 1) n <<= 1;
    std::vector<double> fa(n, 0), fb(n, 0);
    std::copy(a.begin(), a.begin() + na, fa.begin());
    std::copy(b.begin(), b.begin() + nb, fb.begin());
    ntt(fa, false);
    ntt(fb, false);
    for (std::size_t i = 0; i < n; ++i) fa[i] = mul(fa[i], fb[i]);
    ntt(fa, true);
    fa.resize(out_len, 0);
    return fa;
  }

 private:
  const std::vector<double>& twiddles(std::size_t n, bool inverse) const {
    auto& slot = tw_[{n, inverse}];
    if (!slot.empty()) return slot;
    // root of order n: x^((p-1)/n) for x with x^((p-1)/2) = -1
    double g = 0;
    const i64 m = (pi_ - 1) / i64(n);
    for (i64 x = 2;; ++x) {
      double cand = pow(from_i64(x), m);
      double probe = cand;
      for (std::size_t k = n; k > 2; k >>= 1) probe = mul(probe, probe);
      if (probe == p_ - 1) { g = cand; break; }  // order exactly n
      require(x < 1000, "failed to find a primitive NTT root");
    }
    if (inverse) g = inv(g);
    slot.reserve(n - 1);
    for (std::size_t len = 2; len <= n; len <<= 1) {
      double wlen = g;
      for (std::size_t k = n; k > len; k >>= 1) wlen = mul(wlen, wlen);
      double w = 1;
      for (std::size_t j = 0; j < len / 2; ++j) {
        slot.push_back(w);
        w = mul(w, wlen);
      }
    }
    return slot;
  }

  i64 pi_;
  double p_, pinv_;
  mutable std::map<std::pair<std::size_t, bool>, std::vector<double>> tw_;
};

// inv[i] = i^{-1} in the field for 1 <= i < n; inv[0] is unused (zero).
inline std::vector<double> batch_inverses(const PrimeField& f, std::size_t n) {
  std::vector<double> inv(n, 0);
  if (n > 1) inv[1] = 1;
  const i64 p = f.prime();
  for (std::size_t i = 2; i < n; ++i)
    inv[i] = f.mul(f.from_i64(-(p / i64(i))), inv[std::size_t(p % i64(i))]);
  return inv;
}

// Incremental Chinese remaindering with symmetric (balanced) lift.
class CrtAccumulator {
 public:
  void add(i64 residue, i64 prime) {
    if (modulus_ == 1) {
      value_ = residue;
      modulus_ = prime;
      return;
    }
    // value' = value + modulus * ((residue - value) * modulus^{-1} mod p)
    Int minv = powmod(modulus_ % prime, Int(prime - 2), Int(prime));
    Int diff = (Int(residue) - value_) % prime;
    if (diff < 0) diff += prime;
    Int delta = diff * minv % prime;
    value_ += modulus_ * delta;
    modulus_ *= prime;
  }

  const Int& modulus() const { return modulus_; }

  Int symmetric() const {
    Int v = value_ % modulus_;
    if (v < 0) v += modulus_;
    if (v * 2 > modulus_) v -= modulus_;
    return v;
  }

 private:
  Int value_ = 0;
  Int modulus_ = 1;
};

// Balanced rational reconstruction: find n/d with |n|, d <= sqrt(M/2),
// gcd(n, d) = 1, d invertible mod M and n = v*d (mod M).
inline bool rational_reconstruct(const Int& v0, const Int& m, Rat& out) {
  require(m > 1, "modulus must exceed 1");
  Int v = v0 % m;
  if (v < 0) v += m;
  const Int half = m / 2;
  Int bound = boost::multiprecision::sqrt(half);
  if (bound < 1) return false;
  Int r0 = m, r1 = v, t0 = 0, t1 = 1;
  while (r1 > bound) {
    Int q = r0 / r1;
    Int r2 = r0 - q * r1;
    Int t2 = t0 - q * t1;
    r0 = r1; r1 = r2;
    t0 = t1; t1 = t2;
  }
  if (t1 == 0) return false;
  Int num = r1, den = t1;
  if (den < 0) { den = -den; num = -num; }
  if (den > bound) return false;
  if (boost::multiprecision::gcd(boost::multiprecision::abs(num), den) != 1)
    return false;
  if (boost::multiprecision::gcd(den, m) != 1) return false;
  if ((num - v * den) % m != 0) return false;
  out = Rat(num, den);
  return true;
}

}  // namespace etaq
