#pragma once

// Search for an integer linear relation among the degree-D monomials
// f^a g^b h^c (a+b+c = D) of a triple of holomorphic eta quotients.
//
// The coefficient matrix has one row per q-expansion coefficient and one
// column per monomial.  A valence count caps how far a nonzero combination
// can vanish: a holomorphic combination of weight-12D forms on the group of
// level N has divisor degree D*psi(N), so a combination vanishing at every
// q-order 0..D*psi(N) is identically zero.  Orders below the smallest
// monomial valuation vmin vanish automatically, leaving
// P = D*psi(N) + 1 - vmin coefficient rows to check.
//
// Two engines produce the kernel:
//   * exact      - Bareiss elimination over the integers (small grids);
//   * multimodular - kernels over word-size prime fields, CRT-combined and
//     rationally reconstructed, then *proved* over the integers: every
//     coefficient of the combination is bounded through an exact l1-norm
//     majorant, and vanishing is checked modulo enough fresh primes that the
//     only integer below the bound congruent to zero is zero itself.
//
// Trimming rows: the modular passes use R = C + 64 rows.  A zero kernel
// modulo one prime on the trimmed matrix already proves a zero exact kernel
// (reduction cannot raise rank).  A one-dimensional trimmed kernel modulo a
// prime, together with one verified integer kernel vector, pins the exact
// kernel of the full matrix to exactly that line.  If the trimmed rows turn
// out not to determine the kernel (reconstruction stalls or verification
// fails), the engine escalates once to the full row count and restarts its
// accumulation, so trimming never affects the final answer.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "etaq/laurent.hpp"
#include "etaq/linalg.hpp"
#include "etaq/modring.hpp"
#include "etaq/numth.hpp"

namespace etaq {

// ---------------------------------------------------------------------------
// monomial grid

struct GridCell {
  i64 a = 0, b = 0;  // exponents of f and g; h gets degree - a - b
};

inline bool operator==(const GridCell& x, const GridCell& y) {
  return x.a == y.a && x.b == y.b;
}

struct MonomialGrid {
  i64 degree = 0;
  i64 cap_a = 0, cap_b = 0;
  std::vector<GridCell> cells;  // b ascending, then a ascending from 0
};

inline MonomialGrid relation_grid(i64 degree, i64 cap_a, i64 cap_b) {
  require(degree >= 1, "relation degree must be positive");
  require(cap_a >= 0 && cap_b >= 0, "monomial caps must be nonnegative");
  MonomialGrid g{degree, cap_a, cap_b, {}};
  for (i64 b = 0; b <= std::min(cap_b, degree); ++b)
    for (i64 a = 0; a <= std::min(cap_a, degree - b); ++a)
      g.cells.push_back({a, b});
  return g;
}

// ---------------------------------------------------------------------------
// problem statement

struct RelationProblem {
  i64 level = 0;                                // informational
  i64 psi = 0;                                  // divisor degree per weight-12 unit
  std::vector<std::pair<i64, i64>> ef, eg, eh;  // eta exponents of f, g, h
  i64 vf = 0, vg = 0, vh = 0;                   // integer q-valuations
  i64 cap_a = 0, cap_b = 0;                     // monomial degree caps
};

enum class RelationEngine { Auto, Exact, Multimodular };

struct RelationOptions {
  RelationEngine engine = RelationEngine::Auto;
  std::size_t exact_max_columns = 64;   // grid size cutoff for the exact path
  int max_reconstruction_primes = 96;
  i64 valence = 0;                      // optional floor raising the valence
                                        // bound (never lowers it); deepens
                                        // every coefficient window
  bool force_slow_verification = false; // per-cell reference evaluator
  bool verbose = false;
};

struct RelationOutcome {
  bool found = false;
  std::vector<Int> coeffs;  // per grid cell; primitive, lex-normalized sign
  MonomialGrid grid;
  std::string engine;       // "exact" or "multimodular"
  int reconstruction_primes = 0;
  int verification_primes = 0;
};

struct MonomialShifts {
  std::vector<i64> off;  // per cell: monomial valuation minus the minimum
  i64 vmin = 0;
  i64 off_max = 0;
};

inline MonomialShifts monomial_shifts(const RelationProblem& t, i64 degree,
                                      const MonomialGrid& grid) {
  MonomialShifts s;
  s.off.reserve(grid.cells.size());
  i64 vmin = 0;
  bool first = true;
  for (const GridCell& cell : grid.cells) {
    const i64 v = cell.a * t.vf + cell.b * t.vg + (degree - cell.a - cell.b) * t.vh;
    if (first || v < vmin) vmin = v;
    first = false;
    s.off.push_back(v);
  }
  s.vmin = vmin;
  for (i64& o : s.off) {
    o -= vmin;
    s.off_max = std::max(s.off_max, o);
  }
  return s;
}

// Coefficient rows needed to decide vanishing: absolute q-orders
// vmin .. degree*psi, i.e. degree*psi + 1 - vmin offsets past vmin.  A
// caller-supplied valence floor can deepen the window but never shrink it.
inline std::size_t row_window(const RelationProblem& t, i64 degree,
                              const MonomialShifts& sh, i64 valence_floor = 0) {
  const i64 p = degree * std::max(t.psi, valence_floor) + 1 - sh.vmin;
  require(p >= 1, "monomial valuations exceed the valence budget");
  return std::size_t(p);
}

// sign convention: the lexicographically largest monomial (by exponent of f,
// then of g) with a nonzero coefficient gets a positive sign
inline void normalize_relation(std::vector<Int>& coeffs, const MonomialGrid& grid) {
  make_primitive(coeffs);
  std::size_t lead = grid.cells.size();
  for (std::size_t m = 0; m < grid.cells.size(); ++m) {
    if (coeffs[m] == 0) continue;
    if (lead == grid.cells.size()) { lead = m; continue; }
    const GridCell &x = grid.cells[m], &y = grid.cells[lead];
    if (x.a > y.a || (x.a == y.a && x.b > y.b)) lead = m;
  }
  if (lead < grid.cells.size() && coeffs[lead] < 0)
    for (Int& c : coeffs) c = -c;
}

// ---------------------------------------------------------------------------
// exact integer series

// c[len] of a*b mod x^len over the integers
inline std::vector<Int> int_conv(const std::vector<Int>& a, const std::vector<Int>& b,
                                 std::size_t len) {
  std::vector<Int> c(len, 0);
  const std::size_t na = std::min(a.size(), len);
  for (std::size_t i = 0; i < na; ++i) {
    if (a[i] == 0) continue;
    const std::size_t jmax = std::min(b.size(), len - i);
    for (std::size_t j = 0; j < jmax; ++j)
      if (b[j] != 0) c[i + j] += a[i] * b[j];
  }
  return c;
}

inline std::vector<Int> int_series_pow(std::vector<Int> base, i64 e, std::size_t len) {
  require(e >= 0, "integer series power expects a nonnegative exponent");
  std::vector<Int> acc(len, 0);
  if (len) acc[0] = 1;
  while (e) {
    if (e & 1) acc = int_conv(acc, base, len);
    e >>= 1;
    if (e) base = int_conv(base, base, len);
  }
  return acc;
}

// inverse of a series with constant term 1
inline std::vector<Int> int_series_inverse(const std::vector<Int>& h, std::size_t len) {
  require(!h.empty() && h[0] == 1, "integer series inverse requires constant term 1");
  std::vector<Int> v(len, 0);
  if (len) v[0] = 1;
  for (std::size_t n = 1; n < len; ++n) {
    Int s = 0;
    const std::size_t kmax = std::min(n, h.size() - 1);
    for (std::size_t k = 1; k <= kmax; ++k)
      if (h[k] != 0) s += h[k] * v[n - k];
    v[n] = -s;
  }
  return v;
}

// rigorous bit bound for |coef_k| of any product prod E(x^δ)^{r_δ} with
// sum |r_δ| <= S: the majorant E(x)^{-S} has coefficients at most
// exp(2 sqrt(S zeta(2) k))  (evaluate the generating function at e^{-t} with
// t = sqrt(S zeta(2) / k); each log factor is below zeta(2)/t)
inline std::size_t eta_coeff_bit_bound(i64 s, std::size_t k) {
  if (s <= 0 || k == 0) return 2;
  const double zeta2_up = 1.6449340668482277;   // > pi^2 / 6
  const double inv_ln2_up = 1.4426950408889635; // > 1 / ln 2
  const double bits =
      2.0 * std::sqrt(double(s) * zeta2_up * double(k)) * inv_ln2_up;
  return std::size_t(bits * 1.0000001) + 4;
}

// exact integer coefficients of prod E(x^δ)^{r_δ} by CRT over enough primes
// to exceed twice the rigorous coefficient bound
inline std::vector<Int> exact_eta_series(
    const std::vector<std::pair<i64, i64>>& exponents, std::size_t len) {
  std::vector<Int> values(len, 0);
  if (len == 0) return values;
  i64 s = 0;
  for (const auto& [delta, r] : exponents) {
    require(delta > 0, "eta argument scale must be positive");
    s += r < 0 ? -r : r;
  }
  if (s == 0) {
    values[0] = 1;
    return values;
  }
  Int need = Int(1) << unsigned(eta_coeff_bit_bound(s, len - 1));
  need = 2 * need + 1;

  Int modulus = 1;
  PrimeSource primes;
  while (modulus < need) {
    const i64 p = primes.next();
    PrimeField f(p);
    const std::vector<double> res = eta_quotient_mod(f, exponents, len);
    if (modulus == 1) {
      for (std::size_t k = 0; k < len; ++k) values[k] = i64(res[k]);
      modulus = p;
      continue;
    }
    // incremental CRT: v' = v + M * ((r - v) M^{-1} mod p)
    const i64 minv = powmod(modulus % p, Int(p - 2), Int(p)).convert_to<i64>();
    for (std::size_t k = 0; k < len; ++k) {
      const i64 cur = (values[k] % p).convert_to<i64>();
      i64 diff = (i64(res[k]) - cur) % p;
      if (diff < 0) diff += p;
      const i64 delta = i64((unsigned __int128)(diff) * (unsigned __int128)(minv) %
                            (unsigned __int128)(p));
      if (delta) values[k] += modulus * delta;
    }
    modulus *= p;
  }
  for (Int& v : values) {
    if (2 * v > modulus) v -= modulus;
  }
  return values;
}

// ---------------------------------------------------------------------------
// modular kernel

struct ModKernel {
  std::size_t rank = 0;
  std::vector<std::size_t> pivot_cols, free_cols;
  std::vector<std::vector<double>> basis;  // entry 1 at the free column
};

// Gaussian elimination over the field; `a` is row-major rows x cols and is
// consumed.  Basis vectors are normalized with value 1 at their free column.
inline ModKernel mod_kernel(const PrimeField& f, std::vector<double>& a,
                            std::size_t rows, std::size_t cols) {
  require(a.size() == rows * cols, "matrix shape mismatch");
  ModKernel k;
  std::size_t rank = 0;
  for (std::size_t col = 0; col < cols && rank < rows; ++col) {
    std::size_t sel = rank;
    while (sel < rows && a[sel * cols + col] == 0) ++sel;
    if (sel == rows) {
      k.free_cols.push_back(col);
      continue;
    }
    if (sel != rank)
      std::swap_ranges(a.begin() + sel * cols, a.begin() + (sel + 1) * cols,
                       a.begin() + rank * cols);
    double* piv = &a[rank * cols];
    const double pinv = f.inv(piv[col]);
    for (std::size_t j = col; j < cols; ++j) piv[j] = f.mul(piv[j], pinv);
    for (std::size_t r = rank + 1; r < rows; ++r) {
      double* row = &a[r * cols];
      const double fac = row[col];
      if (fac == 0) continue;
      for (std::size_t j = col; j < cols; ++j)
        row[j] = f.mul_sub(row[j], fac, piv[j]);
    }
    k.pivot_cols.push_back(col);
    ++rank;
  }
  for (std::size_t col = rank ? k.pivot_cols.back() + 1 : 0; col < cols; ++col)
    if (rank == rows) k.free_cols.push_back(col);
  k.rank = rank;

  for (const std::size_t fc : k.free_cols) {
    std::vector<double> x(cols, 0);
    x[fc] = 1;
    for (std::size_t i = rank; i-- > 0;) {
      const std::size_t pc = k.pivot_cols[i];
      if (pc >= fc) continue;  // columns past fc are zero in this vector
      const double* row = &a[i * cols];
      double s = 0;
      for (std::size_t j = pc + 1; j <= fc; ++j)
        if (x[j] != 0) s = f.add(s, f.mul(row[j], x[j]));
      x[pc] = f.neg(s);
    }
    k.basis.push_back(std::move(x));
  }
  return k;
}

// ---------------------------------------------------------------------------
// per-prime series data

struct ModTripleSeries {
  std::vector<double> F, G, H;  // normalized expansions, length len
  std::vector<double> W, U;     // F/H and G/H
  std::vector<double> HD;       // H^degree
};

inline std::vector<double> pow_series_mod(const PrimeField& f,
                                          std::vector<double> base, i64 e,
                                          std::size_t len) {
  require(e >= 0, "series power expects a nonnegative exponent");
  std::vector<double> acc(len, 0);
  if (len) acc[0] = 1;
  while (e) {
    if (e & 1) acc = f.convolve(acc, base, len);
    e >>= 1;
    if (e) base = f.convolve(base, base, len);
  }
  return acc;
}

inline ModTripleSeries build_mod_series(const PrimeField& f,
                                        const RelationProblem& t, i64 degree,
                                        std::size_t len, bool with_hd = true) {
  ModTripleSeries s;
  s.F = eta_quotient_mod(f, t.ef, len);
  s.G = eta_quotient_mod(f, t.eg, len);
  s.H = eta_quotient_mod(f, t.eh, len);
  const std::vector<double> hinv = series_inverse_mod(f, s.H, len);
  s.W = f.convolve(s.F, hinv, len);
  s.U = f.convolve(s.G, hinv, len);
  if (with_hd) s.HD = pow_series_mod(f, s.H, degree, len);
  return s;
}

// repeated multiplication by a fixed series, reusing its transform
class SeriesMultiplier {
 public:
  SeriesMultiplier(const PrimeField& f, const std::vector<double>& w,
                   std::size_t len)
      : f_(&f), len_(len) {
    n_ = 1;
    while (n_ < 2 * len - 1) n_ <<= 1;
    require(n_ <= 65536, "series window exceeds transform capacity");
    what_.assign(n_, 0);
    std::copy(w.begin(), w.begin() + std::min(len, w.size()), what_.begin());
    f.ntt(what_, false);
  }

  void apply(std::vector<double>& x) const {  // x <- x * w mod q^len
    std::vector<double> buf(n_, 0);
    std::copy(x.begin(), x.begin() + std::min(len_, x.size()), buf.begin());
    f_->ntt(buf, false);
    for (std::size_t i = 0; i < n_; ++i) buf[i] = f_->mul(buf[i], what_[i]);
    f_->ntt(buf, true);
    buf.resize(len_);
    x = std::move(buf);
  }

 private:
  const PrimeField* f_;
  std::size_t len_, n_;
  std::vector<double> what_;
};

// Selected columns of the coefficient matrix modulo one prime, rows x
// cols.size() (row r = coefficient of q^{vmin + r}).  `cols` must be
// ascending cell indices, i.e. grid order: b ascending, then a ascending.
inline std::vector<double> build_mod_matrix_cols(
    const PrimeField& f, const RelationProblem& t, i64 degree,
    const MonomialGrid& grid, const MonomialShifts& sh, std::size_t rows,
    const std::vector<std::size_t>& cols) {
  const std::size_t K = cols.size();
  std::vector<double> m(rows * K, 0.0);
  const ModTripleSeries s = build_mod_series(f, t, degree, rows);
  SeriesMultiplier wmul(f, s.W, rows), umul(f, s.U, rows);

  std::vector<double> ub = s.HD;  // U^b * H^D for the current b
  std::vector<double> col;
  i64 cur_b = 0, cur_a = -1;  // col = W^cur_a * ub when cur_a >= 0
  for (std::size_t ci = 0; ci < K; ++ci) {
    const GridCell& gc = grid.cells[cols[ci]];
    while (cur_b < gc.b) {
      umul.apply(ub);
      ++cur_b;
      cur_a = -1;
    }
    if (cur_a < 0) {
      col = ub;
      cur_a = 0;
    }
    while (cur_a < gc.a) {
      wmul.apply(col);
      ++cur_a;
    }
    const std::size_t off = std::size_t(sh.off[cols[ci]]);
    for (std::size_t r = off; r < rows; ++r) m[r * K + ci] = col[r - off];
  }
  return m;
}

// rows x C coefficient matrix modulo one prime; columns follow the grid order
inline std::vector<double> build_mod_matrix(const PrimeField& f,
                                            const RelationProblem& t, i64 degree,
                                            const MonomialGrid& grid,
                                            const MonomialShifts& sh,
                                            std::size_t rows) {
  std::vector<std::size_t> all(grid.cells.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  return build_mod_matrix_cols(f, t, degree, grid, sh, rows, all);
}

// ---------------------------------------------------------------------------
// rigorous verification

// Check that sum_m c_m q^{off_m} W^a U^b H^D == 0 mod (p, q^P).  Fast path:
// multiplying the combination by the unit series H^{-degree} turns the cell
// monomial into q^{off} W^a U^b, which a Horner sweep over the exponent of W
// evaluates with max_a + max_b truncated multiplies:
//   sum_a W^a T_a,   T_a = sum_b c_{a,b} q^{off(a,b)} U^b.
inline bool relation_zero_mod(const PrimeField& f, const RelationProblem& t,
                              i64 degree, const MonomialGrid& grid,
                              const MonomialShifts& sh,
                              const std::vector<Int>& coeffs, std::size_t P,
                              bool force_slow) {
  const std::size_t C = grid.cells.size();
  std::size_t n = 1;
  while (n < 2 * P - 1) n <<= 1;
  const bool fast = !force_slow && n <= 65536;

  const ModTripleSeries s = build_mod_series(f, t, degree, P, !fast);

  if (!fast) {
    // reference path: build every column and accumulate
    std::vector<double> acc(P, 0);
    SeriesMultiplier wmul(f, s.W, P), umul(f, s.U, P);
    std::vector<double> ub = s.HD, col;
    i64 cur_b = 0;
    for (std::size_t cell = 0; cell < C; ++cell) {
      const GridCell& gc = grid.cells[cell];
      while (cur_b < gc.b) {
        umul.apply(ub);
        ++cur_b;
      }
      if (gc.a == 0)
        col = ub;
      else
        wmul.apply(col);
      const double cm = f.from_int(coeffs[cell]);
      if (cm == 0) continue;
      const std::size_t off = std::size_t(sh.off[cell]);
      for (std::size_t r = off; r < P; ++r)
        acc[r] = f.mul_sub(acc[r], f.neg(cm), col[r - off]);
    }
    for (std::size_t r = 0; r < P; ++r)
      if (acc[r] != 0) return false;
    return true;
  }

  i64 max_a = 0, max_b = 0;
  for (std::size_t cell = 0; cell < C; ++cell)
    if (coeffs[cell] != 0) {
      max_a = std::max(max_a, grid.cells[cell].a);
      max_b = std::max(max_b, grid.cells[cell].b);
    }

  // powers of U as plain series, up to the largest live exponent
  SeriesMultiplier umul(f, s.U, P);
  std::vector<std::vector<double>> ub(std::size_t(max_b) + 1);
  ub[0].assign(P, 0);
  ub[0][0] = 1;
  for (std::size_t b = 1; b < ub.size(); ++b) {
    ub[b] = ub[b - 1];
    umul.apply(ub[b]);
  }

  // inner sums T_a, assembled per live exponent of W
  std::vector<std::vector<std::size_t>> by_a(std::size_t(max_a) + 1);
  for (std::size_t cell = 0; cell < C; ++cell)
    if (coeffs[cell] != 0 && grid.cells[cell].a <= max_a)
      by_a[std::size_t(grid.cells[cell].a)].push_back(cell);

  SeriesMultiplier wmul(f, s.W, P);
  std::vector<double> acc(P, 0);
  for (i64 a = max_a; a >= 0; --a) {
    if (a < max_a) wmul.apply(acc);
    for (const std::size_t cell : by_a[std::size_t(a)]) {
      const double cm = f.from_int(coeffs[cell]);
      if (cm == 0) continue;
      const std::vector<double>& pw = ub[std::size_t(grid.cells[cell].b)];
      const std::size_t off = std::size_t(sh.off[cell]);
      for (std::size_t r = off; r < P; ++r)
        acc[r] = f.mul_sub(acc[r], f.neg(cm), pw[r - off]);
    }
  }
  for (std::size_t r = 0; r < P; ++r)
    if (acc[r] != 0) return false;
  return true;
}

struct VerifyStats {
  int primes_used = 0;
};

// Prove sum_m c_m f^a g^b h^c == 0 over the integers.  Every q-coefficient of
// the combination is bounded by sum_m |c_m| l1(F)^a l1(G)^b l1(H)^c with the
// l1 norms of the exact truncated base series; vanishing modulo primes whose
// product exceeds twice that bound forces exact vanishing.
inline bool verify_relation(const RelationProblem& t, i64 degree,
                            const MonomialGrid& grid,
                            const std::vector<Int>& coeffs,
                            const RelationOptions& opt = {},
                            VerifyStats* stats = nullptr) {
  require(coeffs.size() == grid.cells.size(), "coefficient count mismatch");
  const MonomialShifts sh = monomial_shifts(t, degree, grid);
  const std::size_t P = row_window(t, degree, sh, opt.valence);
  const auto t0 = std::chrono::steady_clock::now();

  const std::vector<Int> F = exact_eta_series(t.ef, P);
  const std::vector<Int> G = exact_eta_series(t.eg, P);
  const std::vector<Int> H = exact_eta_series(t.eh, P);
  auto l1 = [](const std::vector<Int>& v) {
    Int s = 0;
    for (const Int& x : v) s += boost::multiprecision::abs(x);
    return s;
  };
  const Int l1f = l1(F), l1g = l1(G), l1h = l1(H);
  std::vector<Int> fp(std::size_t(grid.cap_a) + 1),
      gp(std::size_t(std::min(grid.cap_b, degree)) + 1),
      hp(std::size_t(degree) + 1);
  fp[0] = gp[0] = hp[0] = 1;
  for (std::size_t i = 1; i < fp.size(); ++i) fp[i] = fp[i - 1] * l1f;
  for (std::size_t i = 1; i < gp.size(); ++i) gp[i] = gp[i - 1] * l1g;
  for (std::size_t i = 1; i < hp.size(); ++i) hp[i] = hp[i - 1] * l1h;

  Int bound = 0;
  for (std::size_t m = 0; m < grid.cells.size(); ++m) {
    if (coeffs[m] == 0) continue;
    const GridCell& gc = grid.cells[m];
    bound += boost::multiprecision::abs(coeffs[m]) * fp[std::size_t(gc.a)] *
             gp[std::size_t(gc.b)] * hp[std::size_t(degree - gc.a - gc.b)];
  }
  const Int need = 2 * bound + 1;
  auto since = [&t0]() {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
        .count();
  };
  if (opt.verbose)
    std::fprintf(stderr, "  verify: bound %zu bits, series prep %.2fs\n",
                 std::size_t(boost::multiprecision::msb(need)) + 1, since());

  Int prod = 1;
  int used = 0;
  PrimeSource primes;
  while (prod < need) {
    const i64 p = primes.next();
    PrimeField f(p);
    ++used;
    if (!relation_zero_mod(f, t, degree, grid, sh, coeffs, P,
                           opt.force_slow_verification)) {
      if (stats) stats->primes_used = used;
      return false;
    }
    prod *= p;
    if (opt.verbose && used % 16 == 0)
      std::fprintf(stderr, "  verify: prime %d, %zu/%zu bits, %.2fs\n", used,
                   std::size_t(boost::multiprecision::msb(prod)) + 1,
                   std::size_t(boost::multiprecision::msb(need)) + 1, since());
  }
  if (opt.verbose)
    std::fprintf(stderr, "  verify: done, %d primes, %.2fs\n", used, since());
  if (stats) stats->primes_used = used;
  return true;
}

// ---------------------------------------------------------------------------
// engines

inline void validate_problem(const RelationProblem& t) {
  require(t.psi >= 1, "valence budget must be positive");
  require(t.vf >= 0 && t.vg >= 0 && t.vh >= 0,
          "series valuations must be nonnegative");
  require(t.cap_a >= 0 && t.cap_b >= 0, "monomial caps must be nonnegative");
  auto val24 = [](const std::vector<std::pair<i64, i64>>& e) {
    i64 s = 0;
    for (const auto& [d, r] : e) s += d * r;
    return s;
  };
  require(val24(t.ef) == 24 * t.vf && val24(t.eg) == 24 * t.vg &&
              val24(t.eh) == 24 * t.vh,
          "declared valuations do not match the eta exponents");
}

inline RelationOutcome exact_relation_search(const RelationProblem& t, i64 degree,
                                             const MonomialGrid& grid,
                                             const MonomialShifts& sh,
                                             i64 valence_floor = 0) {
  const std::size_t C = grid.cells.size();
  const std::size_t P = row_window(t, degree, sh, valence_floor);

  const std::vector<Int> F = exact_eta_series(t.ef, P);
  const std::vector<Int> G = exact_eta_series(t.eg, P);
  const std::vector<Int> H = exact_eta_series(t.eh, P);
  const std::vector<Int> hinv = int_series_inverse(H, P);
  const std::vector<Int> W = int_conv(F, hinv, P);
  const std::vector<Int> U = int_conv(G, hinv, P);
  const std::vector<Int> HD = int_series_pow(H, degree, P);

  IntMatrix m(P, C);
  std::vector<Int> ub = HD, col;
  i64 cur_b = 0;
  for (std::size_t cell = 0; cell < C; ++cell) {
    const GridCell& gc = grid.cells[cell];
    while (cur_b < gc.b) {
      ub = int_conv(ub, U, P);
      ++cur_b;
    }
    if (gc.a == 0)
      col = ub;
    else
      col = int_conv(col, W, P);
    const std::size_t off = std::size_t(sh.off[cell]);
    for (std::size_t r = off; r < P; ++r) m.at(r, cell) = col[r - off];
  }

  RelationOutcome out;
  out.grid = grid;
  out.engine = "exact";
  std::vector<std::vector<Int>> basis = int_nullspace(m);
  if (basis.empty()) return out;
  if (basis.size() > 1)
    throw InconsistencyError("relation space has dimension exceeding 1");
  out.found = true;
  out.coeffs = std::move(basis[0]);
  normalize_relation(out.coeffs, grid);
  return out;
}

inline RelationOutcome multimodular_relation_search(const RelationProblem& t,
                                                    i64 degree,
                                                    const MonomialGrid& grid,
                                                    const MonomialShifts& sh,
                                                    const RelationOptions& opt) {
  const std::size_t C = grid.cells.size();
  const std::size_t P = row_window(t, degree, sh, opt.valence);
  std::size_t rows = std::min(P, C + 64);

  RelationOutcome out;
  out.grid = grid;
  out.engine = "multimodular";

  struct Sample {
    i64 prime;
    std::vector<double> vec;  // C entries, normalized: 1 at the anchor column
  };
  std::vector<Sample> samples;
  std::vector<Int> prev_int;   // stabilization memory, integer lift
  std::vector<Rat> prev_rat;   // stabilization memory, rational lift
  std::vector<std::size_t> support;  // candidate nonzero columns (grid order)
  std::size_t anchor = 0;            // normalization column (first of support)
  std::size_t support_slack = 64;    // extra rows beyond |support| when restricting
  int anomalies = 0;

  PrimeSource primes;
  for (int iter = 0; iter < opt.max_reconstruction_primes; ++iter) {
    const i64 p = primes.next();
    PrimeField f(p);
    ++out.reconstruction_primes;
    const auto tick = std::chrono::steady_clock::now();

    // once a nullity-1 solve has shown the kernel's support, later primes
    // only solve the columns in that support (a zero-extended kernel vector
    // of the column-restricted system is a kernel vector of the full one);
    // this stays valid after a row escalation: the true relation satisfies
    // every row subset, so a nullity-1 restricted kernel is its reduction
    ModKernel k;
    bool restricted = !support.empty();
    while (restricted) {
      const std::size_t r = std::min(P, support.size() + support_slack);
      std::vector<double> m =
          build_mod_matrix_cols(f, t, degree, grid, sh, r, support);
      k = mod_kernel(f, m, r, support.size());
      if (k.free_cols.size() == 1) break;
      if (k.free_cols.size() > 1 && r < P) {
        // the row slack fails to pin the restricted kernel; extra rows cut
        // the nullity by at most one each and often by none, so double the
        // window (while honoring the proven deficit of nullity-1 rows) and
        // retry cheaply instead of paying for a full-grid solve
        support_slack =
            std::max(support.size() + 2 * support_slack,
                     support_slack + (k.free_cols.size() - 1));
        continue;
      }
      // nullity 0: support is stale (an earlier prime divided some true
      // coefficient); excess nullity at the full row window: genuine
      // anomaly; either way redo this prime on the full grid
      support.clear();
      restricted = false;
    }
    while (!restricted) {
      // a nullity-1 kernel of any row subset is exactly the true line (the
      // true relation lies in every such kernel), so the window only needs
      // deepening while the nullity exceeds one, again by the sharp deficit
      std::vector<double> m = build_mod_matrix(f, t, degree, grid, sh, rows);
      k = mod_kernel(f, m, rows, C);
      if (k.free_cols.empty()) return out;  // exact kernel is zero: no relation
      if (k.free_cols.size() == 1 || rows == P) break;
      rows = std::min(
          P, std::max(2 * rows, rows + (k.free_cols.size() - 1) + 64));
      if (opt.verbose)
        std::fprintf(stderr, "  prime %d: deepening rows to %zu (nullity %zu)\n",
                     out.reconstruction_primes, rows, k.free_cols.size());
    }
    if (opt.verbose)
      std::fprintf(stderr, "  prime %d: %s solve, nullity %zu, %.2fs\n",
                   out.reconstruction_primes,
                   restricted ? "restricted" : "full",
                   k.free_cols.size(),
                   std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                                 tick)
                       .count());

    if (k.free_cols.size() != 1) {
      // excess nullity persisting at the full row window: this prime
      // dropped rank; a persistent excess across many primes is genuine
      if (++anomalies > 8)
        throw InconsistencyError("relation space has dimension exceeding 1");
      continue;
    }

    Sample smp;
    smp.prime = p;
    if (restricted) {
      smp.vec.assign(C, 0.0);
      for (std::size_t i = 0; i < support.size(); ++i)
        smp.vec[support[i]] = k.basis[0][i];
    } else {
      smp.vec = k.basis[0];
      support.clear();
      for (std::size_t j = 0; j < C; ++j)
        if (smp.vec[j] != 0) support.push_back(j);
      const std::size_t fresh = support.empty() ? 0 : support[0];
      if (fresh != anchor) {
        // earlier samples were normalized at a different column; restart
        // the lift rather than mix normalizations
        anchor = fresh;
        samples.clear();
        prev_int.clear();
        prev_rat.clear();
      }
    }
    // normalize at the anchor column so samples from different primes (and
    // different elimination pivots) agree entrywise; if the relation's anchor
    // coefficient is +-1 the normalized entries are plain integers and the
    // symmetric CRT lift stabilizes with half the primes the rational lift
    // needs
    if (smp.vec[anchor] == 0) {
      if (opt.verbose)
        std::fprintf(stderr, "  prime %d: anchor vanished, skipping\n",
                     out.reconstruction_primes);
      continue;
    }
    const double scale = f.inv(smp.vec[anchor]);
    for (double& x : smp.vec) x = f.mul(x, scale);
    samples.push_back(std::move(smp));
    if (samples.size() < 2) continue;

    // CRT over all consistent samples
    Int modulus = 1;
    std::vector<Int> residue(C, 0);
    for (const Sample& sm : samples) {
      if (modulus == 1) {
        for (std::size_t j = 0; j < C; ++j) residue[j] = i64(sm.vec[j]);
        modulus = sm.prime;
        continue;
      }
      const i64 q = sm.prime;
      const i64 minv = powmod(modulus % q, Int(q - 2), Int(q)).convert_to<i64>();
      for (std::size_t j = 0; j < C; ++j) {
        const i64 cur = (residue[j] % q).convert_to<i64>();
        i64 diff = (i64(sm.vec[j]) - cur) % q;
        if (diff < 0) diff += q;
        const i64 delta = i64((unsigned __int128)(diff) *
                              (unsigned __int128)(minv) % (unsigned __int128)(q));
        if (delta) residue[j] += modulus * delta;
      }
      modulus *= q;
    }

    // integer lift first: balanced representatives, no division needed
    std::vector<Int> icand(C);
    for (std::size_t j = 0; j < C; ++j) {
      Int v = residue[j] % modulus;
      if (v < 0) v += modulus;
      if (2 * v > modulus) v -= modulus;
      icand[j] = std::move(v);
    }
    const bool stable_int = icand == prev_int;

    // rational lift as fallback (anchor coefficient not a unit); deferred a
    // few primes because the euclidean pass over every column is not free
    std::vector<Rat> cand(C);
    bool ok = false, stable_rat = false;
    if (!stable_int && samples.size() >= 8) {
      ok = true;
      for (std::size_t j = 0; j < C && ok; ++j)
        ok = rational_reconstruct(residue[j], modulus, cand[j]);
      stable_rat = ok && cand == prev_rat;
    }

    if (opt.verbose)
      std::fprintf(stderr, "  modulus %zu bits over %zu primes: %s\n",
                   std::size_t(boost::multiprecision::msb(modulus)) + 1,
                   samples.size(),
                   stable_int ? "integer-stable, verifying"
                   : stable_rat ? "rational-stable, verifying"
                                : "candidate");

    std::vector<Int> vec;
    if (stable_int) {
      vec = std::move(icand);
    } else if (stable_rat) {
      Int den = 1;
      for (const Rat& x : cand)
        den = boost::multiprecision::lcm(den, rat_den(x));
      vec.resize(C);
      for (std::size_t j = 0; j < C; ++j)
        vec[j] = rat_num(cand[j]) * (den / rat_den(cand[j]));
    } else {
      prev_int = std::move(icand);
      if (ok) prev_rat = std::move(cand);
      continue;
    }
    normalize_relation(vec, grid);

    VerifyStats vs;
    if (verify_relation(t, degree, grid, vec, opt, &vs)) {
      out.found = true;
      out.coeffs = std::move(vec);
      out.verification_primes = vs.primes_used;
      return out;
    }
    // verified false: a partial row window can hold a spurious nullity-1
    // kernel when no relation exists at this degree (the nullity-1-is-true
    // argument needs a relation to exist), so widen to the full window,
    // where nullity 0 proves emptiness; at full rows the failure means
    // stabilization fired early or a restricted solve against stale support
    // slipped a spurious sample into the CRT, so restart collection
    rows = P;
    samples.clear();
    prev_int.clear();
    prev_rat.clear();
    support.clear();
  }
  throw InconsistencyError("relation reconstruction failed to stabilize");
}

// Search for an integer relation among the degree-`degree` monomials of the
// triple.  Outcomes: found (with the unique primitive relation), not found
// (proved empty kernel), or InconsistencyError when the kernel is not a line.
inline RelationOutcome search_relation(const RelationProblem& t, i64 degree,
                                       const RelationOptions& opt = {}) {
  validate_problem(t);
  require(degree >= 1, "relation degree must be positive");
  const MonomialGrid grid = relation_grid(degree, t.cap_a, t.cap_b);
  const MonomialShifts sh = monomial_shifts(t, degree, grid);
  const std::size_t P = row_window(t, degree, sh, opt.valence);
  require(P <= 32768, "truncation window exceeds transform capacity");
  for (const i64 off : sh.off)
    require(off >= 0 && std::size_t(off) < P,
            "monomial valuation outside the coefficient window");

  const bool exact =
      opt.engine == RelationEngine::Exact ||
      (opt.engine == RelationEngine::Auto &&
       grid.cells.size() <= opt.exact_max_columns);
  if (opt.verbose)
    std::fprintf(stderr,
                 "relation search: level %lld degree %lld grid %zu rows %zu (%s)\n",
                 (long long)t.level, (long long)degree, grid.cells.size(),
                 std::min(P, grid.cells.size() + 64),
                 exact ? "exact" : "multimodular");
  if (exact) return exact_relation_search(t, degree, grid, sh, opt.valence);
  return multimodular_relation_search(t, degree, grid, sh, opt);
}

}  // namespace etaq
