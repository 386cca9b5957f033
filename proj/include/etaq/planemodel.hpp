#pragma once

// Projective plane models of the modular curve X_0(N).
//
// A triple (f, g, h) of linearly independent holomorphic weight-12
// eta-quotients on Gamma_0(N) defines a map z -> (f(z) : g(z) : h(z)) from
// X_0(N) to the projective plane.  The image is an irreducible plane curve C
// cut out by a unique primitive integer polynomial, and the degrees obey
//
//   (degree of the map) * (degree of C) + min-divisor-sum = Psi(N),
//
// where the min-divisor-sum is the degree of the divisor of common vanishing
// sum_d eps_d * min(ord_d f, ord_d g, ord_d h) over cusp denominators d | N.
// The search for C therefore only has to visit divisors of
// T = Psi(N) - min-divisor-sum in ascending order: the first degree at which
// any algebraic relation exists is deg C, and the map degree is T / deg C.
//
// Monomial caps: a relation of degree D is sought among monomials
// f^a g^b h^(D-a-b) with a <= deg div_inf(g/h) and b <= deg div_inf(f/h),
// which bound the partial degrees of C in x0 and x1 because the function
// field extension [C(g/h, f/h) : C(g/h)] has degree at most
// deg div_inf(f/h), and symmetrically for the other coordinate.
//
// Two independent birationality certificates are produced:
//   * gcd certificate: the map degree divides the polar divisor degrees of
//     g/f and h/f, so gcd(pole degrees) = 1 forces map degree 1;
//   * closure certificate: map degree = T / deg C computed from the found
//     relation.
// The two must agree, and any mismatch raises InconsistencyError.

#include <algorithm>
#include <numeric>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "etaq/etaquot.hpp"
#include "etaq/maxvanish.hpp"
#include "etaq/modring.hpp"
#include "etaq/numth.hpp"
#include "etaq/qseries.hpp"
#include "etaq/relation.hpp"

namespace etaq {

// ---------------------------------------------------------------------------
// coordinate triples

// Three weight-12 holomorphic eta-quotients on a common level, linearly
// independent, with integer cusp orders.  Construction validates all of that
// and throws std::invalid_argument on violation.
class FormTriple {
 public:
  enum class Kind { Standard, Conic, Custom };

  // (maximal-vanishing form, eta(z)^24, eta(Nz)^24); exists whenever the
  // maximal-vanishing solution at level n is integral.
  static FormTriple standard(i64 n) {
    check_level(n);
    EtaQuotient f = max_vanishing_form(n);
    EtaQuotient g(n, {{1, 24}});
    EtaQuotient h(n, {{n, 24}});
    return FormTriple(Kind::Standard, std::move(f), std::move(g), std::move(h));
  }

  // (eta(z)^24, eta(z)^12 eta(pz)^12, eta(pz)^24) for an odd prime p; the
  // middle form squares to the product of the outer two, so the image is a
  // conic.
  static FormTriple conic(i64 p) {
    require(p >= 3 && p % 2 == 1 && is_prime_i64(p),
            "conic triple requires an odd prime level");
    EtaQuotient f(p, {{1, 24}});
    EtaQuotient g(p, {{1, 12}, {p, 12}});
    EtaQuotient h(p, {{p, 24}});
    return FormTriple(Kind::Conic, std::move(f), std::move(g), std::move(h));
  }

  static FormTriple custom(const EtaQuotient& f, const EtaQuotient& g,
                           const EtaQuotient& h) {
    return FormTriple(Kind::Custom, f, g, h);
  }

  Kind kind() const { return kind_; }
  i64 level() const { return f_.level(); }
  const EtaQuotient& f() const { return f_; }
  const EtaQuotient& g() const { return g_; }
  const EtaQuotient& h() const { return h_; }

 private:
  FormTriple(Kind kind, EtaQuotient f, EtaQuotient g, EtaQuotient h)
      : kind_(kind), f_(std::move(f)), g_(std::move(g)), h_(std::move(h)) {
    require(g_.level() == f_.level() && h_.level() == f_.level(),
            "plane model forms must live on one common level");
    for (const EtaQuotient* e : {&f_, &g_, &h_}) {
      require(e->weight() == Rat(12), "plane model forms must have weight 12");
      require(e->certify().is_holomorphic_form(),
              "plane model forms must be holomorphic with trivial character");
      e->divisor_multiplicities();  // rejects non-integral cusp orders
    }
    // Linear independence, decided exactly: a dependence visible on the
    // common window of psi(N)+1 coefficients would in fact vanish to order
    // beyond the valence bound psi(N), hence identically; conversely rank 3
    // on any window proves independence.
    const std::size_t window = std::size_t(psi(level())) + 1;
    const std::vector<QSeries> fam = {f_.q_expansion(window),
                                      g_.q_expansion(window),
                                      h_.q_expansion(window)};
    require(linear_rank(fam) == 3, "plane model forms are linearly dependent");
  }

  Kind kind_;
  EtaQuotient f_, g_, h_;
};

inline const char* form_triple_kind_name(FormTriple::Kind k) {
  switch (k) {
    case FormTriple::Kind::Standard: return "standard";
    case FormTriple::Kind::Conic: return "conic";
    case FormTriple::Kind::Custom: return "custom";
  }
  return "custom";
}

// ---------------------------------------------------------------------------
// divisor arithmetic

// Degree of the polar divisor of the modular function num/den:
//   sum over cusp denominators d of eps_d * max(0, ord_d(den) - ord_d(num)).
// Both forms must share level and weight so the quotient has weight zero.
inline i64 pole_degree(const EtaQuotient& num, const EtaQuotient& den) {
  require(num.level() == den.level(),
          "pole degree requires forms on one common level");
  require(num.weight() == den.weight(),
          "pole degree requires forms of equal weight");
  const std::vector<Int> on = num.divisor_multiplicities();
  const std::vector<Int> od = den.divisor_multiplicities();
  const std::vector<i64>& divs = num.level_divisors();
  Int s = 0;
  for (std::size_t i = 0; i < divs.size(); ++i) {
    const Int diff = od[i] - on[i];
    if (diff > 0) s += Int(cusp_count_for_denominator(num.level(), divs[i])) * diff;
  }
  return s.convert_to<i64>();
}

// Degree of the common-vanishing divisor of the triple:
//   sum over cusp denominators d of eps_d * min(ord_d f, ord_d g, ord_d h).
inline i64 min_divisor_sum(const FormTriple& t) {
  const std::vector<Int> a = t.f().divisor_multiplicities();
  const std::vector<Int> b = t.g().divisor_multiplicities();
  const std::vector<Int> c = t.h().divisor_multiplicities();
  const std::vector<i64>& divs = t.f().level_divisors();
  Int s = 0;
  for (std::size_t i = 0; i < divs.size(); ++i)
    s += Int(cusp_count_for_denominator(t.level(), divs[i])) *
         std::min({a[i], b[i], c[i]});
  return s.convert_to<i64>();
}

// Coprimality certificate for the degree of the plane map: the map degree
// divides the polar divisor degree of each coordinate function g/f and h/f,
// so a gcd of 1 certifies birationality onto the image.
struct GcdCertificate {
  i64 pole_g_over_f = 0;
  i64 pole_h_over_f = 0;
  i64 gcd = 0;
  bool birational = false;  // gcd == 1 (sufficient, not necessary)
};

inline GcdCertificate gcd_birationality_check(const FormTriple& t) {
  GcdCertificate c;
  c.pole_g_over_f = pole_degree(t.g(), t.f());
  c.pole_h_over_f = pole_degree(t.h(), t.f());
  c.gcd = std::gcd(c.pole_g_over_f, c.pole_h_over_f);
  c.birational = (c.gcd == 1);
  return c;
}

// ---------------------------------------------------------------------------
// plane polynomials

struct PlaneTerm {
  i64 a = 0, b = 0, c = 0;  // exponents of x0, x1, x2
  Int coeff;
};

// Primitive integer polynomial, homogeneous of the stated degree, terms
// sorted by exponent of x0 descending then exponent of x1 descending; the
// leading term in that order has positive sign.
struct PlanePolynomial {
  i64 degree = 0;
  std::vector<PlaneTerm> terms;

  std::string text() const {
    if (terms.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const PlaneTerm& t : terms) {
      const bool neg = t.coeff < 0;
      if (first) {
        if (neg) os << '-';
        first = false;
      } else {
        os << (neg ? " - " : " + ");
      }
      const Int mag = neg ? Int(-t.coeff) : t.coeff;
      std::string mono;
      append_factor(mono, "x0", t.a);
      append_factor(mono, "x1", t.b);
      append_factor(mono, "x2", t.c);
      if (mono.empty()) {
        os << mag.str();
      } else {
        if (mag != 1) os << mag.str() << '*';
        os << mono;
      }
    }
    return os.str();
  }

 private:
  static void append_factor(std::string& s, const char* var, i64 e) {
    if (e == 0) return;
    if (!s.empty()) s += '*';
    s += var;
    if (e != 1) {
      s += '^';
      s += std::to_string(e);
    }
  }
};

inline PlanePolynomial plane_polynomial(const RelationOutcome& out) {
  require(out.found, "cannot build a polynomial from an empty relation");
  PlanePolynomial p;
  p.degree = out.grid.degree;
  for (std::size_t m = 0; m < out.grid.cells.size(); ++m) {
    if (out.coeffs[m] == 0) continue;
    const GridCell& cell = out.grid.cells[m];
    p.terms.push_back(
        {cell.a, cell.b, out.grid.degree - cell.a - cell.b, out.coeffs[m]});
  }
  std::sort(p.terms.begin(), p.terms.end(),
            [](const PlaneTerm& x, const PlaneTerm& y) {
              if (x.a != y.a) return x.a > y.a;
              return x.b > y.b;
            });
  return p;
}

// ---------------------------------------------------------------------------
// model search

// Relation-search statement for the triple: exponent tables, q-valuations
// (cusp-infinity orders), and the partial-degree caps explained above.
inline RelationProblem relation_problem(const FormTriple& t) {
  RelationProblem rp;
  rp.level = t.level();
  rp.psi = psi(rp.level);
  const std::vector<i64>& divs = t.f().level_divisors();
  auto pack = [&](const EtaQuotient& e, std::vector<std::pair<i64, i64>>& out) {
    for (std::size_t j = 0; j < divs.size(); ++j)
      if (e.exponents()[j] != 0) out.emplace_back(divs[j], e.exponents()[j]);
  };
  pack(t.f(), rp.ef);
  pack(t.g(), rp.eg);
  pack(t.h(), rp.eh);
  auto infinity_order = [&](const EtaQuotient& e) {
    const Rat o = e.order_at_denominator(rp.level);
    require(rat_den(o) == 1, "infinity order must be integral");
    return rat_num(o).convert_to<i64>();
  };
  rp.vf = infinity_order(t.f());
  rp.vg = infinity_order(t.g());
  rp.vh = infinity_order(t.h());
  rp.cap_a = pole_degree(t.g(), t.h());
  rp.cap_b = pole_degree(t.f(), t.h());
  return rp;
}

struct ModelOptions {
  RelationOptions relation;
};

struct ModelReport {
  i64 level = 0;
  std::string kind;  // "standard", "conic", "custom"
  std::string f_expr, g_expr, h_expr;
  i64 psi = 0;
  i64 min_divisor_sum = 0;
  i64 t_degree = 0;  // psi - min_divisor_sum = map_degree * curve_degree
  GcdCertificate certificate;
  PlanePolynomial curve;
  i64 curve_degree = 0;
  i64 map_degree = 0;
  bool birational = false;
  std::string engine;
  int reconstruction_primes = 0;
  int verification_primes = 0;
};

inline ModelReport model_report(const FormTriple& t,
                                const ModelOptions& opt = {}) {
  ModelReport r;
  r.level = t.level();
  r.kind = form_triple_kind_name(t.kind());
  r.f_expr = t.f().expression();
  r.g_expr = t.g().expression();
  r.h_expr = t.h().expression();
  r.psi = psi(r.level);
  r.min_divisor_sum = min_divisor_sum(t);
  r.t_degree = r.psi - r.min_divisor_sum;
  require(r.t_degree >= 1,
          "triple has no room for a plane curve: common vanishing exhausts "
          "the divisor degree");
  r.certificate = gcd_birationality_check(t);

  const RelationProblem rp = relation_problem(t);
  RelationOutcome out;
  for (const i64 d : divisors(r.t_degree)) {
    out = search_relation(rp, d, opt.relation);
    if (out.found) break;
  }
  // The defining polynomial's degree divides t_degree, so the ascending scan
  // over divisors must terminate with a find; reaching this point without one
  // means the degree bookkeeping is broken somewhere upstream.
  if (!out.found)
    throw InconsistencyError(
        "no defining polynomial at any divisor of the target degree");

  r.curve = plane_polynomial(out);
  r.curve_degree = out.grid.degree;
  r.map_degree = r.t_degree / r.curve_degree;
  r.engine = out.engine;
  r.reconstruction_primes = out.reconstruction_primes;
  r.verification_primes = out.verification_primes;

  if (r.map_degree * r.curve_degree + r.min_divisor_sum != r.psi)
    throw InconsistencyError("plane model degree closure failed");
  if (r.certificate.pole_g_over_f % r.map_degree != 0 ||
      r.certificate.pole_h_over_f % r.map_degree != 0)
    throw InconsistencyError(
        "map degree does not divide the coordinate pole degrees");
  if (r.certificate.birational && r.map_degree != 1)
    throw InconsistencyError(
        "coprime pole degrees contradict a map degree above one");
  r.birational = (r.map_degree == 1);
  return r;
}

}  // namespace etaq
