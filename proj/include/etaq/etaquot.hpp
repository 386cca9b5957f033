#pragma once

// Eta-quotients on Gamma0(N): prod_{delta | N} eta(delta*z)^{r_delta}.
//
// The cusp-order matrix A_N has rows indexed by cusp denominators d | N and
// columns by divisors delta | N, with
//
//   A_N(d, delta) = (N/24) * gcd(delta, d)^2 / (gcd(N, d^2) * delta),
//
// so that the order of the quotient at every cusp of denominator d (in the
// local coordinate on the modular curve) is the d-row of A_N applied to the
// exponent vector.  24*A_N is an integer matrix and factors over the prime
// powers of N as an entrywise product of the matrices
//
//   24*A_{p^n}(i, j) = p^{ n - |i-j| - min(i, n-i) },   0 <= i, j <= n,
//
// evaluated at the p-adic valuations of d and delta.

#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "etaq/numth.hpp"
#include "etaq/qseries.hpp"

namespace etaq {

inline Int scaled_order_entry_prime_power(i64 p, i64 n, i64 i, i64 j) {
  require(p >= 2 && n >= 0, "invalid prime power");
  require(0 <= i && i <= n && 0 <= j && j <= n, "valuation out of range");
  const i64 e = n - std::abs(i - j) - std::min(i, n - i);
  require(e >= 0, "scaled order entry exponent must be nonnegative");
  Int v = 1;
  for (i64 k = 0; k < e; ++k) v *= p;
  return v;
}

// 24*A_N as an integer matrix over the divisors of n (ascending).
inline IntMatrix scaled_order_matrix(i64 n) {
  const auto divs = divisors(n);
  IntMatrix m(divs.size(), divs.size());
  for (std::size_t i = 0; i < divs.size(); ++i) {
    const i64 d = divs[i];
    const i64 w = n / std::gcd(n, d * d);  // cusp width
    for (std::size_t j = 0; j < divs.size(); ++j) {
      const i64 delta = divs[j];
      const i64 g = std::gcd(delta, d);
      // w * g^2 / delta is integral: delta / gcd(delta,d)^2 divides the width
      const Int num = Int(w) * g * g;
      require(num % delta == 0, "scaled order matrix entry not integral");
      m.at(i, j) = num / delta;
    }
  }
  return m;
}

inline std::vector<std::vector<Rat>> order_matrix(i64 n) {
  IntMatrix s = scaled_order_matrix(n);
  std::vector<std::vector<Rat>> m(s.rows, std::vector<Rat>(s.cols));
  for (std::size_t i = 0; i < s.rows; ++i)
    for (std::size_t j = 0; j < s.cols; ++j) m[i][j] = Rat(s.at(i, j), 24);
  return m;
}

struct ModularityCertificate {
  Rat weight = 0;
  bool sum_condition = false;       // sum delta * r_delta = 0 (mod 24)
  bool dual_sum_condition = false;  // sum (N/delta) * r_delta = 0 (mod 24)
  bool square_condition = false;    // prod (N/delta)^{r_delta} is a square in Q
  bool holomorphic = false;         // order >= 0 at every cusp

  bool transforms() const {
    return sum_condition && dual_sum_condition && square_condition;
  }
  bool is_holomorphic_form() const { return transforms() && holomorphic; }
};

class EtaQuotient {
 public:
  EtaQuotient(i64 level, const std::vector<std::pair<i64, i64>>& exponents)
      : level_(level), divs_(divisors(level)), r_(divs_.size(), 0) {
    for (auto [delta, r] : exponents) {
      std::size_t idx = divs_.size();
      for (std::size_t j = 0; j < divs_.size(); ++j)
        if (divs_[j] == delta) idx = j;
      require(idx < divs_.size(), "eta argument multiplier must divide the level");
      r_[idx] += r;
    }
  }

  i64 level() const { return level_; }
  const std::vector<i64>& level_divisors() const { return divs_; }
  const std::vector<i64>& exponents() const { return r_; }

  i64 exponent(i64 delta) const {
    for (std::size_t j = 0; j < divs_.size(); ++j)
      if (divs_[j] == delta) return r_[j];
    require(false, "eta argument multiplier must divide the level");
    return 0;
  }

  Rat weight() const {
    i64 s = 0;
    for (i64 r : r_) s += r;
    return Rat(s, 2);
  }

  // Order at the cusps of denominator d, in the local coordinate on the
  // modular curve (one value shared by all cusps with this denominator).
  Rat order_at_denominator(i64 d) const {
    require(d >= 1 && level_ % d == 0, "cusp denominator must divide the level");
    Rat s = 0;
    for (std::size_t j = 0; j < divs_.size(); ++j) {
      if (r_[j] == 0) continue;
      const i64 g = std::gcd(divs_[j], d);
      s += Rat(Int(level_) * g * g * r_[j],
               Int(24) * std::gcd(level_, d * d) * divs_[j]);
    }
    return s;
  }

  // Orders aligned with level_divisors().
  std::vector<Rat> orders() const {
    std::vector<Rat> out;
    out.reserve(divs_.size());
    for (i64 d : divs_) out.push_back(order_at_denominator(d));
    return out;
  }

  ModularityCertificate certify() const {
    ModularityCertificate c;
    c.weight = weight();

    Int sum = 0, dual = 0;
    for (std::size_t j = 0; j < divs_.size(); ++j) {
      sum += Int(divs_[j]) * r_[j];
      dual += Int(level_ / divs_[j]) * r_[j];
    }
    c.sum_condition = sum % 24 == 0;
    c.dual_sum_condition = dual % 24 == 0;

    // prod (N/delta)^{r_delta} is a rational square iff every prime divides
    // it to an even power; only primes dividing N can occur.
    c.square_condition = true;
    for (const auto& pp : factorize(level_)) {
      i64 parity = 0;
      for (std::size_t j = 0; j < divs_.size(); ++j) {
        i64 m = level_ / divs_[j], v = 0;
        while (m % pp.p == 0) { m /= pp.p; ++v; }
        parity += v * r_[j];
      }
      if (parity % 2 != 0) { c.square_condition = false; break; }
    }

    c.holomorphic = true;
    for (const Rat& o : orders())
      if (o < 0) { c.holomorphic = false; break; }
    return c;
  }

  // Multiplicities of the cusp divisor, aligned with level_divisors().
  // Requires the quotient to transform with trivial character (so that the
  // orders are genuine integer point multiplicities on the curve).
  std::vector<Int> divisor_multiplicities() const {
    require(certify().transforms(),
            "eta-quotient does not transform like a modular form of trivial "
            "character on Gamma0(level)");
    std::vector<Int> out;
    for (const Rat& o : orders()) {
      require(rat_den(o) == 1,
              "cusp orders are not integral: the quotient carries a "
              "nontrivial character");
      out.push_back(rat_num(o));
    }
    return out;
  }

  // q-expansion at infinity: q^{sum delta r / 24} * prod E(q^delta)^{r_delta},
  // with p exact coefficients from the valuation onward.
  QSeries q_expansion(std::size_t p) const {
    require(p > 0, "q-expansion needs at least one coefficient");
    QSeries acc = qs_one(p);
    for (std::size_t j = 0; j < divs_.size(); ++j)
      if (r_[j] != 0) acc = qs_mul(acc, eta_power(divs_[j], r_[j], p));
    return acc;
  }

  // Canonical text form, e.g. "eta(1)^24 * eta(2)^-24"; "1" if empty.
  std::string expression() const {
    std::ostringstream os;
    bool first = true;
    for (std::size_t j = 0; j < divs_.size(); ++j) {
      if (r_[j] == 0) continue;
      if (!first) os << " * ";
      os << "eta(" << divs_[j] << ")^" << r_[j];
      first = false;
    }
    if (first) os << "1";
    return os.str();
  }

  // Parses the expression() format: eta(<delta>)[^<exp>] terms joined by '*',
  // arbitrary whitespace, or the literal "1" for the empty quotient.
  static EtaQuotient parse(i64 level, const std::string& text) {
    std::vector<std::pair<i64, i64>> exps;
    std::size_t pos = 0;
    auto skip_ws = [&] { while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos; };
    auto read_int = [&]() -> i64 {
      skip_ws();
      std::size_t start = pos;
      if (pos < text.size() && (text[pos] == '-' || text[pos] == '+')) ++pos;
      while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
      require(pos > start && std::isdigit(static_cast<unsigned char>(text[pos - 1])),
              "expected an integer in eta-quotient expression");
      return std::stoll(text.substr(start, pos - start));
    };
    auto expect = [&](char ch) {
      skip_ws();
      require(pos < text.size() && text[pos] == ch,
              std::string("expected '") + ch + "' in eta-quotient expression");
      ++pos;
    };

    skip_ws();
    require(pos < text.size(), "empty eta-quotient expression");
    if (text[pos] == '1') {
      ++pos;
      skip_ws();
      require(pos == text.size(), "unexpected trailing text after '1'");
      return EtaQuotient(level, exps);
    }
    for (;;) {
      skip_ws();
      require(text.compare(pos, 3, "eta") == 0,
              "expected 'eta' in eta-quotient expression");
      pos += 3;
      expect('(');
      i64 delta = read_int();
      expect(')');
      i64 r = 1;
      skip_ws();
      if (pos < text.size() && text[pos] == '^') {
        ++pos;
        r = read_int();
      }
      exps.emplace_back(delta, r);
      skip_ws();
      if (pos == text.size()) break;
      expect('*');
    }
    return EtaQuotient(level, exps);
  }

 private:
  i64 level_;
  std::vector<i64> divs_;
  std::vector<i64> r_;
};

}  // namespace etaq
