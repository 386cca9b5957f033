#include <catch2/catch_amalgamated.hpp>

#include "etaq/maxvanish.hpp"

using namespace etaq;

namespace {

// Oracle: multiply the exponent vector back through the order matrix and
// compare with Psi * e_last.
void check_is_solution(i64 n, const std::vector<Rat>& r) {
  const IntMatrix s = scaled_order_matrix(n);
  for (std::size_t i = 0; i < s.rows; ++i) {
    Rat acc = 0;
    for (std::size_t j = 0; j < s.cols; ++j) acc += Rat(s.at(i, j), 24) * r[j];
    if (i + 1 == s.rows)
      REQUIRE(acc == psi(n));
    else
      REQUIRE(acc == 0);
  }
}

}  // namespace

TEST_CASE("maximal vanishing: frozen exponent vectors") {
  // divisors ascending; worked out by hand from the order systems
  REQUIRE(max_vanishing(2).exponents == std::vector<Rat>{-24, 48});
  REQUIRE(max_vanishing(4).exponents == std::vector<Rat>{0, -24, 48});
  REQUIRE(max_vanishing(8).exponents == std::vector<Rat>{0, 0, -24, 48});
  REQUIRE(max_vanishing(9).exponents == std::vector<Rat>{0, -12, 36});
  REQUIRE(max_vanishing(13).exponents == std::vector<Rat>{-2, 26});
  REQUIRE(max_vanishing(30).exponents ==
          std::vector<Rat>{-3, 6, 9, 15, -18, -30, -45, 90});
  REQUIRE(max_vanishing(1).exponents == std::vector<Rat>{24});

  // level 11 has no integral solution
  MaxVanishing m11 = max_vanishing(11);
  REQUIRE(m11.exponents == std::vector<Rat>{Rat(-12, 5), Rat(132, 5)});
  REQUIRE(!m11.integral);
}

TEST_CASE("maximal vanishing solves the order system at every level") {
  for (i64 n = 1; n <= 400; ++n) {
    MaxVanishing m = max_vanishing(n);
    check_is_solution(n, m.exponents);
  }
}

TEST_CASE("integrality matches the prime criterion") {
  for (i64 n = 1; n <= 400; ++n) {
    MaxVanishing m = max_vanishing(n);
    INFO("level " << n);
    REQUIRE(m.integral == admits_integral_max_vanishing(n));
  }
  // the criterion is decided by the prime divisors alone
  std::vector<i64> first;
  for (i64 n = 2; first.size() < 20; ++n)
    if (admits_integral_max_vanishing(n)) first.push_back(n);
  REQUIRE(first == std::vector<i64>{2, 3, 4, 5, 6, 7, 8, 9, 10, 12, 13, 14, 15,
                                    16, 18, 20, 21, 24, 25, 26});
  for (i64 n : {11, 17, 19, 22, 23, 29, 33, 34, 55, 66, 77, 105, 210})
    REQUIRE(!admits_integral_max_vanishing(n));
}

TEST_CASE("family classification") {
  REQUIRE(vanishing_family(1) == VanishingFamily::None);
  REQUIRE(vanishing_family(11) == VanishingFamily::None);
  REQUIRE(vanishing_family(105) == VanishingFamily::None);  // 3*5*7
  for (i64 n : {2, 3, 4, 5, 7, 8, 9, 13, 16, 25, 27, 32, 49, 64, 81, 125, 128,
                169, 243, 256, 343})
    REQUIRE(vanishing_family(n) == VanishingFamily::SinglePrime);
  for (i64 n : {6, 10, 14, 15, 21, 26, 35, 39, 54, 56, 75, 104, 147, 338, 392})
    REQUIRE(vanishing_family(n) == VanishingFamily::TwoPrimes);
  for (i64 n : {30, 42, 60, 70, 78, 90, 126, 150, 294, 350, 360})
    REQUIRE(vanishing_family(n) == VanishingFamily::ThreePrimes);

  // family membership and integrality agree for every level in range
  for (i64 n = 2; n <= 400; ++n)
    REQUIRE((vanishing_family(n) != VanishingFamily::None) ==
            admits_integral_max_vanishing(n));
}

TEST_CASE("closed form agrees with the solved system") {
  for (i64 n = 1; n <= 400; ++n) {
    if (!admits_integral_max_vanishing(n)) continue;
    REQUIRE(max_vanishing_closed_form(n) == max_vanishing(n).exponents);
  }
  REQUIRE_THROWS_AS(max_vanishing_closed_form(11), std::invalid_argument);
}

TEST_CASE("integral solutions give certified weight-12 forms") {
  for (i64 n = 2; n <= 200; ++n) {
    if (!admits_integral_max_vanishing(n)) continue;
    INFO("level " << n);
    EtaQuotient f = max_vanishing_form(n);
    auto cert = f.certify();
    REQUIRE(cert.weight == 12);
    REQUIRE(cert.is_holomorphic_form());

    const auto divs = divisors(n);
    auto mult = f.divisor_multiplicities();
    for (std::size_t i = 0; i + 1 < divs.size(); ++i) REQUIRE(mult[i] == 0);
    REQUIRE(mult.back() == psi(n));

    // the q-expansion really does start at q^Psi with a unit coefficient
    QSeries s = f.q_expansion(3);
    REQUIRE(s.val == psi(n));
    REQUIRE(s.c[0] == 1);
  }
  REQUIRE_THROWS_AS(max_vanishing_form(11), std::invalid_argument);
}

TEST_CASE("inverse scaled order matrix at prime powers") {
  for (auto [p, n] : std::vector<std::pair<i64, i64>>{
           {2, 2}, {2, 3}, {2, 4}, {3, 2}, {3, 3}, {5, 2}, {5, 3}, {7, 2}}) {
    i64 q = 1;
    for (i64 k = 0; k < n; ++k) q *= p;
    auto inv = inverse_scaled_order_matrix_prime_power(p, n);
    const IntMatrix s = scaled_order_matrix(q);
    const std::size_t m = s.rows;
    REQUIRE(inv.size() == m);

    // it really is the inverse
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j) {
        Rat acc = 0;
        for (std::size_t k = 0; k < m; ++k) acc += inv[i][k] * Rat(s.at(k, j));
        REQUIRE(acc == (i == j ? 1 : 0));
      }

    // closed-form first and last rows (n >= 2)
    i64 pn1 = 1;
    for (i64 k = 0; k + 1 < n; ++k) pn1 *= p;
    const Rat den = Rat(pn1) * (p * p - 1);
    REQUIRE(inv[0][0] == Rat(p) / den);
    REQUIRE(inv[0][1] == Rat(-p) / den);
    for (std::size_t j = 2; j < m; ++j) REQUIRE(inv[0][j] == 0);
    REQUIRE(inv[m - 1][m - 1] == Rat(p) / den);
    REQUIRE(inv[m - 1][m - 2] == Rat(-p) / den);
    for (std::size_t j = 0; j + 2 < m; ++j) REQUIRE(inv[m - 1][j] == 0);
  }

  // n = 1 for completeness: inverse of [[p,1],[1,p]] is [[p,-1],[-1,p]]/(p^2-1)
  auto inv = inverse_scaled_order_matrix_prime_power(5, 1);
  REQUIRE(inv[0][0] == Rat(5, 24));
  REQUIRE(inv[0][1] == Rat(-1, 24));
  REQUIRE(inv[1][0] == Rat(-1, 24));
  REQUIRE(inv[1][1] == Rat(5, 24));
}
