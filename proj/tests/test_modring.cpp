#include <catch2/catch_amalgamated.hpp>

#include <random>

#include <boost/multiprecision/miller_rabin.hpp>

#include "etaq/modring.hpp"

using etaq::CrtAccumulator;
using etaq::i64;
using etaq::Int;
using etaq::PrimeField;
using etaq::Rat;

namespace {

i64 mulmod_oracle(i64 a, i64 b, i64 p) {
  return ((Int(a) * b) % p).convert_to<i64>();
}

std::vector<i64> schoolbook(const std::vector<i64>& a, const std::vector<i64>& b,
                            std::size_t out_len, i64 p) {
  std::vector<Int> c(out_len, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size() && i + j < out_len; ++j)
      c[i + j] += Int(a[i]) * b[j];
  std::vector<i64> out(out_len);
  for (std::size_t k = 0; k < out_len; ++k) {
    Int r = c[k] % p;
    if (r < 0) r += p;
    out[k] = r.convert_to<i64>();
  }
  return out;
}

}  // namespace

TEST_CASE("64-bit primality test agrees with a multiprecision oracle") {
  SECTION("small range") {
    for (i64 n = 0; n <= 2000; ++n) {
      CAPTURE(n);
      REQUIRE(etaq::is_prime_i64(n) ==
              boost::multiprecision::miller_rabin_test(Int(n), 32));
    }
  }
  SECTION("adversarial composites") {
    // Carmichael numbers and strong pseudoprimes to small bases
    for (i64 n : {i64(561), i64(1105), i64(1729), i64(2465), i64(6601),
                  i64(3215031751), i64(3825123056546413051)}) {
      CAPTURE(n);
      REQUIRE_FALSE(etaq::is_prime_i64(n));
    }
  }
  SECTION("large primes and their neighbours") {
    for (i64 n : {i64(2251799813685119), i64(1) << 31, (i64(1) << 31) - 1,
                  i64(1000000000000000003), (i64(1) << 51) - 129}) {
      CAPTURE(n);
      REQUIRE(etaq::is_prime_i64(n) ==
              boost::multiprecision::miller_rabin_test(Int(n), 32));
    }
  }
}

TEST_CASE("NTT prime generator yields descending 51-bit primes = 1 mod 2^16") {
  auto ps = etaq::ntt_primes(64);
  REQUIRE(ps.size() == 64);
  for (std::size_t i = 0; i < ps.size(); ++i) {
    CAPTURE(ps[i]);
    REQUIRE(ps[i] < i64(1) << 51);
    REQUIRE(ps[i] % 65536 == 1);
    REQUIRE(boost::multiprecision::miller_rabin_test(Int(ps[i]), 32));
    if (i) REQUIRE(ps[i] < ps[i - 1]);
  }
  // independent recomputation of the largest one by brute force
  i64 expect = 0;
  for (i64 p = ((i64(1) << 51) - 2) / 65536 * 65536 + 1; p > 0; p -= 65536)
    if (etaq::is_prime_i64(p)) { expect = p; break; }
  REQUIRE(ps[0] == expect);
}

TEST_CASE("prime field arithmetic matches integer arithmetic") {
  auto ps = etaq::ntt_primes(4);
  std::mt19937_64 rng(0xe7a9001);
  for (i64 pv : ps) {
    PrimeField f(pv);
    CAPTURE(pv);
    std::uniform_int_distribution<i64> dist(0, pv - 1);

    SECTION("mulmod on random and extreme operands, p = " + std::to_string(pv)) {
      std::vector<i64> edges = {0, 1, 2, pv / 2, pv - 2, pv - 1};
      for (i64 a : edges)
        for (i64 b : edges)
          REQUIRE(f.to_i64(f.mul(double(a), double(b))) == mulmod_oracle(a, b, pv));
      for (int t = 0; t < 20000; ++t) {
        i64 a = dist(rng), b = dist(rng);
        CAPTURE(a, b);
        REQUIRE(f.to_i64(f.mul(double(a), double(b))) == mulmod_oracle(a, b, pv));
      }
    }

    SECTION("add, sub, neg, mul_sub, p = " + std::to_string(pv)) {
      for (int t = 0; t < 5000; ++t) {
        i64 a = dist(rng), b = dist(rng), x = dist(rng);
        REQUIRE(f.to_i64(f.add(double(a), double(b))) == (a + b) % pv);
        i64 d = (a - b) % pv;
        if (d < 0) d += pv;
        REQUIRE(f.to_i64(f.sub(double(a), double(b))) == d);
        i64 n = a == 0 ? 0 : pv - a;
        REQUIRE(f.to_i64(f.neg(double(a))) == n);
        Int ms = (Int(x) - Int(a) * b) % pv;
        if (ms < 0) ms += pv;
        REQUIRE(Int(f.to_i64(f.mul_sub(double(x), double(a), double(b)))) == ms);
      }
    }

    SECTION("pow and inv, p = " + std::to_string(pv)) {
      for (int t = 0; t < 200; ++t) {
        i64 a = dist(rng);
        i64 e = i64(rng() % 1000000);
        Int expect = etaq::powmod(Int(a), Int(e), Int(pv));
        REQUIRE(Int(f.to_i64(f.pow(double(a), e))) == expect);
        if (a != 0) {
          double ainv = f.inv(double(a));
          REQUIRE(f.to_i64(f.mul(double(a), ainv)) == 1);
          REQUIRE(f.to_i64(f.pow(double(a), -3)) ==
                  f.to_i64(f.pow(ainv, 3)));
        }
      }
      REQUIRE_THROWS_AS(f.inv(0), std::invalid_argument);
    }
  }

  SECTION("constructor rejects bad moduli") {
    REQUIRE_THROWS_AS(PrimeField(65537 * 3), std::invalid_argument);   // composite
    REQUIRE_THROWS_AS(PrimeField(1000003), std::invalid_argument);     // not 1 mod 2^16
    REQUIRE_THROWS_AS(PrimeField((i64(1) << 52) + 1), std::invalid_argument);
  }
}

TEST_CASE("NTT is invertible and convolution matches schoolbook") {
  auto ps = etaq::ntt_primes(2);
  std::mt19937_64 rng(0xe7a9002);
  for (i64 pv : ps) {
    PrimeField f(pv);
    std::uniform_int_distribution<i64> dist(0, pv - 1);

    SECTION("roundtrip, p = " + std::to_string(pv)) {
      for (std::size_t n : {std::size_t(1), std::size_t(2), std::size_t(8),
                            std::size_t(256), std::size_t(4096)}) {
        std::vector<double> a(n), orig;
        for (auto& x : a) x = double(dist(rng));
        orig = a;
        f.ntt(a, false);
        if (n > 1) REQUIRE(a != orig);
        f.ntt(a, true);
        REQUIRE(a == orig);
      }
      std::vector<double> bad(3, 1.0);
      REQUIRE_THROWS_AS(f.ntt(bad, false), std::invalid_argument);
    }

    SECTION("convolution, p = " + std::to_string(pv)) {
      auto sample = [&](std::size_t n) {
        std::vector<i64> v(n);
        for (auto& x : v) x = dist(rng);
        return v;
      };
      // (na, nb, out_len): small path, FFT path, truncation, overlong output
      std::vector<std::array<std::size_t, 3>> shapes = {
          {5, 9, 13}, {5, 9, 40}, {200, 311, 510}, {200, 311, 97},
          {1000, 1000, 1999}, {1, 700, 700}, {700, 1, 350}};
      for (auto [na, nb, out] : shapes) {
        CAPTURE(na, nb, out);
        auto a = sample(na), b = sample(nb);
        std::vector<double> da(a.begin(), a.end()), db(b.begin(), b.end());
        auto got = f.convolve(da, db, out);
        auto want = schoolbook(a, b, out, pv);
        REQUIRE(got.size() == out);
        for (std::size_t k = 0; k < out; ++k) {
          CAPTURE(k);
          REQUIRE(f.to_i64(got[k]) == want[k]);
        }
      }
    }
  }
}

TEST_CASE("incremental CRT reconstructs balanced integers") {
  auto ps = etaq::ntt_primes(8);
  std::mt19937_64 rng(0xe7a9003);
  Int m = 1;
  for (i64 p : ps) m *= p;

  for (int t = 0; t < 200; ++t) {
    // random X in (-m/2, m/2]
    Int x = 0;
    for (int k = 0; k < 6; ++k) x = (x << 64) | rng();
    x %= (m / 2);
    if (t % 2) x = -x;
    CrtAccumulator acc;
    for (i64 p : ps) {
      Int r = x % p;
      if (r < 0) r += p;
      acc.add(r.convert_to<i64>(), p);
    }
    REQUIRE(acc.modulus() == m);
    REQUIRE(acc.symmetric() == x);
  }

  SECTION("order independence") {
    Int x("-123456789012345678901234567890123456789");
    CrtAccumulator fwd, rev;
    for (std::size_t i = 0; i < ps.size(); ++i) {
      auto residue = [&](i64 p) {
        Int r = x % p;
        if (r < 0) r += p;
        return r.convert_to<i64>();
      };
      fwd.add(residue(ps[i]), ps[i]);
      rev.add(residue(ps[ps.size() - 1 - i]), ps[ps.size() - 1 - i]);
    }
    REQUIRE(fwd.symmetric() == x);
    REQUIRE(rev.symmetric() == x);
  }
}

TEST_CASE("balanced rational reconstruction") {
  auto ps = etaq::ntt_primes(8);
  std::mt19937_64 rng(0xe7a9004);

  SECTION("recovers fractions well inside the bound") {
    Int m = 1;
    for (i64 p : ps) m *= p;
    for (int t = 0; t < 300; ++t) {
      Int num = Int(i64(rng() % 2000001)) - 1000000;
      Int den = Int(i64(rng() % 1000000)) + 1;
      Int g = boost::multiprecision::gcd(boost::multiprecision::abs(num), den);
      if (g > 1) { num /= g; den /= g; }
      // assemble v = num * den^{-1} mod m through the per-prime residues
      CrtAccumulator acc;
      for (i64 p : ps) {
        Int r = num % p;
        if (r < 0) r += p;
        Int dp = den % p;
        Int v = r * etaq::powmod(dp, Int(p - 2), Int(p)) % p;
        acc.add(v.convert_to<i64>(), p);
      }
      Rat got;
      REQUIRE(etaq::rational_reconstruct(acc.symmetric(), m, got));
      REQUIRE(got == Rat(num, den));
    }
  }

  SECTION("plain integers come back as themselves") {
    Int m = Int(ps[0]) * ps[1];
    for (Int x : {Int(0), Int(1), Int(-1), Int(123456789), Int(-987654321)}) {
      Rat got;
      REQUIRE(etaq::rational_reconstruct(x, m, got));
      REQUIRE(got == Rat(x));
    }
  }

  SECTION("reports failure when the modulus is too small") {
    // 1234567/7654321 needs |n|, d <= sqrt(m/2); pick m far below that
    Int m = Int(1000003) * 1000033;
    Int den = 7654321, num = 1234567;
    auto inv_mod = [](Int a, const Int& mod) {
      Int r0 = mod, r1 = a % mod, t0 = 0, t1 = 1;
      while (r1 != 0) {
        Int q = r0 / r1;
        Int r2 = r0 - q * r1, t2 = t0 - q * t1;
        r0 = r1; r1 = r2; t0 = t1; t1 = t2;
      }
      if (t0 < 0) t0 += mod;
      return t0;
    };
    Int v = num * inv_mod(den, m) % m;
    Rat got;
    bool ok = etaq::rational_reconstruct(v, m, got);
    if (ok) {
      // anything returned must satisfy the congruence within the bound,
      // and it cannot be the oversized target fraction
      REQUIRE(got != Rat(num, den));
      Int half = m / 2;
      Int bound = boost::multiprecision::sqrt(half);
      REQUIRE(boost::multiprecision::abs(etaq::rat_num(got)) <= bound);
      REQUIRE(etaq::rat_den(got) <= bound);
    }
  }

  SECTION("every successful reconstruction satisfies the full contract") {
    // random residues reconstruct to *some* bounded fraction about 60% of
    // the time (the bound saturates the residue space); correctness means
    // the congruence, the bounds, and coprimality always hold
    Int m(ps[0]);
    Int half = m / 2;
    Int bound = boost::multiprecision::sqrt(half);
    int hits = 0;
    for (int t = 0; t < 500; ++t) {
      Int v = Int(i64(rng() % (unsigned long long)(ps[0])));
      Rat got;
      if (!etaq::rational_reconstruct(v, m, got)) continue;
      ++hits;
      Int n = etaq::rat_num(got), d = etaq::rat_den(got);
      REQUIRE(boost::multiprecision::abs(n) <= bound);
      REQUIRE(d <= bound);
      REQUIRE(boost::multiprecision::gcd(boost::multiprecision::abs(n), d) == 1);
      REQUIRE((n - v * d) % m == 0);
    }
    REQUIRE(hits > 100);
    REQUIRE(hits < 500);
  }
}
