#pragma once

// Exact linear algebra over arbitrary-precision integers and rationals:
// fraction-free (Bareiss) row echelon for rank and null-space computation,
// plus plain rational Gaussian elimination for small solves and inverses.

#include <boost/multiprecision/cpp_int.hpp>

#include <utility>
#include <vector>

#include "etaq/numth.hpp"

namespace etaq {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline Int rat_num(const Rat& r) { return boost::multiprecision::numerator(r); }
inline Int rat_den(const Rat& r) { return boost::multiprecision::denominator(r); }

// Row-major dense integer matrix.
struct IntMatrix {
  std::size_t rows = 0, cols = 0;
  std::vector<Int> a;

  IntMatrix() = default;
  IntMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c) {}

  Int& at(std::size_t i, std::size_t j) { return a[i * cols + j]; }
  const Int& at(std::size_t i, std::size_t j) const { return a[i * cols + j]; }
};

struct Echelon {
  IntMatrix m;                     // fraction-free row echelon form
  std::vector<std::size_t> pivot_cols;
  std::size_t rank = 0;
};

// Fraction-free Gaussian elimination with row pivoting (Bareiss).  All
// divisions below are exact by the Sylvester determinant identity, so the
// echelon entries stay integral (they are minors of the input).
inline Echelon bareiss_echelon(IntMatrix m) {
  Echelon e;
  const std::size_t rows = m.rows, cols = m.cols;
  Int prev = 1;
  std::size_t r = 0;
  for (std::size_t col = 0; col < cols && r < rows; ++col) {
    std::size_t piv = r;
    while (piv < rows && m.at(piv, col) == 0) ++piv;
    if (piv == rows) continue;  // free column
    if (piv != r)
      for (std::size_t j = col; j < cols; ++j)
        std::swap(m.at(piv, j), m.at(r, j));
    for (std::size_t i = r + 1; i < rows; ++i) {
      for (std::size_t j = col + 1; j < cols; ++j) {
        Int t = m.at(r, col) * m.at(i, j) - m.at(i, col) * m.at(r, j);
        m.at(i, j) = t / prev;
      }
      m.at(i, col) = 0;
    }
    prev = m.at(r, col);
    e.pivot_cols.push_back(col);
    ++r;
  }
  e.rank = r;
  e.m = std::move(m);
  return e;
}

inline std::size_t int_rank(const IntMatrix& m) { return bareiss_echelon(m).rank; }

// Divide an integer vector by the gcd of its entries and normalize the sign
// of the first nonzero entry to +1.  Zero vectors are returned unchanged.
inline void make_primitive(std::vector<Int>& v) {
  Int g = 0;
  for (const Int& x : v) g = boost::multiprecision::gcd(g, x);
  if (g == 0) return;
  const Int* first = nullptr;
  for (const Int& x : v)
    if (x != 0) { first = &x; break; }
  if (*first < 0) g = -g;
  for (Int& x : v) x /= g;
}

// Basis of the right null space of an integer matrix; each basis vector is a
// primitive integer vector (one per free column, free entry set to 1 before
// clearing denominators).
inline std::vector<std::vector<Int>> int_nullspace(const IntMatrix& m) {
  Echelon e = bareiss_echelon(m);
  const std::size_t cols = m.cols;
  std::vector<bool> is_pivot(cols, false);
  for (auto c : e.pivot_cols) is_pivot[c] = true;

  std::vector<std::vector<Int>> basis;
  for (std::size_t fc = 0; fc < cols; ++fc) {
    if (is_pivot[fc]) continue;
    std::vector<Rat> x(cols, Rat(0));
    x[fc] = 1;
    for (std::size_t k = e.rank; k-- > 0;) {
      const std::size_t pc = e.pivot_cols[k];
      Rat s = 0;
      for (std::size_t j = pc + 1; j < cols; ++j)
        if (x[j] != 0) s += Rat(e.m.at(k, j)) * x[j];
      x[pc] = -s / Rat(e.m.at(k, pc));
    }
    Int den = 1;
    for (const Rat& xi : x) den = boost::multiprecision::lcm(den, rat_den(xi));
    std::vector<Int> v(cols);
    for (std::size_t j = 0; j < cols; ++j)
      v[j] = rat_num(x[j]) * (den / rat_den(x[j]));
    make_primitive(v);
    basis.push_back(std::move(v));
  }
  return basis;
}

// Plain rational Gaussian elimination: solve A x = b for square nonsingular A.
inline std::vector<Rat> rat_solve(std::vector<std::vector<Rat>> a,
                                  std::vector<Rat> b) {
  const std::size_t n = a.size();
  require(n > 0 && a[0].size() == n && b.size() == n,
          "rat_solve expects a square system");
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && a[piv][col] == 0) ++piv;
    if (piv == n) throw InconsistencyError("singular matrix in rat_solve");
    std::swap(a[piv], a[col]);
    std::swap(b[piv], b[col]);
    for (std::size_t i = col + 1; i < n; ++i) {
      if (a[i][col] == 0) continue;
      Rat f = a[i][col] / a[col][col];
      for (std::size_t j = col; j < n; ++j) a[i][j] -= f * a[col][j];
      b[i] -= f * b[col];
    }
  }
  std::vector<Rat> x(n);
  for (std::size_t i = n; i-- > 0;) {
    Rat s = b[i];
    for (std::size_t j = i + 1; j < n; ++j) s -= a[i][j] * x[j];
    x[i] = s / a[i][i];
  }
  return x;
}

// Inverse of a small square rational matrix (Gauss-Jordan).
inline std::vector<std::vector<Rat>> rat_inverse(std::vector<std::vector<Rat>> a) {
  const std::size_t n = a.size();
  require(n > 0 && a[0].size() == n, "rat_inverse expects a square matrix");
  std::vector<std::vector<Rat>> inv(n, std::vector<Rat>(n, Rat(0)));
  for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && a[piv][col] == 0) ++piv;
    if (piv == n) throw InconsistencyError("singular matrix in rat_inverse");
    std::swap(a[piv], a[col]);
    std::swap(inv[piv], inv[col]);
    Rat d = a[col][col];
    for (std::size_t j = 0; j < n; ++j) {
      a[col][j] /= d;
      inv[col][j] /= d;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i == col || a[i][col] == 0) continue;
      Rat f = a[i][col];
      for (std::size_t j = 0; j < n; ++j) {
        a[i][j] -= f * a[col][j];
        inv[i][j] -= f * inv[col][j];
      }
    }
  }
  return inv;
}

}  // namespace etaq
