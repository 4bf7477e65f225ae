#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "zetaforge/flags.hpp"
#include "zetaforge/presentation.hpp"
#include "zetaforge/ratfn.hpp"

namespace zetaforge {

// ---------------------------------------------------------------------------
// Local normal zeta functions assembled from the closed formulas. The
// variable t stands for p^{-s}; every "s-substitution" is a monomial in
// (p, t).
// ---------------------------------------------------------------------------

// Subgroup zeta function of Z_p^d: prod_{i=0}^{d-1} 1/(1 - p^i t).
inline RatFn zeta_lattice(int d) {
  if (d < 1) throw std::invalid_argument("zeta_lattice needs d >= 1");
  std::vector<MPoly> den;
  for (int i = 0; i < d; ++i)
    den.push_back(MPoly::one() -
                  MPoly::variable(var_p(), static_cast<unsigned>(i)) *
                      MPoly::variable(var_t()));
  return RatFn::of_factored(MPoly::one(), den);
}

// zeta_p(a s - b) = 1/(1 - p^b t^a).
inline RatFn zeta_p_shift(long a, long b) {
  if (a < 1) throw std::invalid_argument("zeta_p_shift needs a >= 1");
  MPoly den = MPoly::one() -
              MPoly::variable(var_p(), static_cast<unsigned>(b)) *
                  MPoly::variable(var_t(), static_cast<unsigned>(a));
  return RatFn::of_factored(MPoly::one(), {den});
}

// The numerical data attached to a presentation: X_i = p^{(d+i)(d'-i)}
// t^{d+d'-i} for i = 1..d'-1 and Y = p^{d+d'-2} t^{d-1}.
struct SubstitutionSet {
  int d, dprime;

  SubstitutionSet(int d_, int dprime_) : d(d_), dprime(dprime_) {}

  MPoly X(int i) const {
    long pe = static_cast<long>(d + i) * (dprime - i);
    long te = d + dprime - i;
    return MPoly::variable(var_p(), static_cast<unsigned>(pe)) *
           MPoly::variable(var_t(), static_cast<unsigned>(te));
  }

  MPoly Y() const {
    return MPoly::variable(var_p(), static_cast<unsigned>(d + dprime - 2)) *
           MPoly::variable(var_t(), static_cast<unsigned>(d - 1));
  }

  // assignment q -> 1/p, X_i -> monomial, for i = 1..upto
  std::map<VarId, RatFn> assignment(int upto) const {
    std::map<VarId, RatFn> sub;
    sub[var_q()] = RatFn::of(MPoly::one(), MPoly::variable(var_p()));
    for (int i = 1; i <= upto; ++i) sub[var_X(i)] = RatFn(X(i));
    return sub;
  }
};

// Number of lifts of a fixed rational point of the Pfaffian to points modulo
// p^a whose distinguished coordinate has valuation exactly b, as a polynomial
// in p.
inline MPoly lambda_count(int a, int b, int dprime) {
  if (b < 1 || a < b) throw std::invalid_argument("lambda_count needs a >= b >= 1");
  if (dprime < 2)
    throw std::invalid_argument("lambda_count needs dprime >= 2");
  unsigned base = static_cast<unsigned>((dprime - 2) * (a - 1));
  if (a == b) return MPoly::variable(var_p(), base);
  unsigned e = base + static_cast<unsigned>(a - b);
  return MPoly::variable(var_p(), e) - MPoly::variable(var_p(), e - 1);
}

// Closed form of the lift generating function:
//   p^{-(d'-1)} Y (p - X_{d'-1}) / ((1-Y)(1-X_{d'-1})).
inline RatFn b0_closed_form(int d, int dprime) {
  if (d < 2 || d % 2 != 0 || dprime < 2)
    throw std::invalid_argument("b0_closed_form needs even d >= 2, dprime >= 2");
  SubstitutionSet sub(d, dprime);
  MPoly num = sub.Y() * (MPoly::variable(var_p()) - sub.X(dprime - 1));
  std::vector<MPoly> den{
      MPoly::one() - sub.Y(), MPoly::one() - sub.X(dprime - 1),
      MPoly::variable(var_p(), static_cast<unsigned>(dprime - 1))};
  return RatFn::of_factored(num, den);
}

// How the hypersurface point count enters a closed form: identically zero, a
// free symbol n, or an explicit polynomial in p.
struct PointCount {
  enum class Mode { Zero, Symbolic, Polynomial } mode = Mode::Zero;
  MPoly poly;  // used in Polynomial mode; a polynomial in p

  static PointCount zero() { return {Mode::Zero, MPoly::zero()}; }
  static PointCount symbolic() { return {Mode::Symbolic, MPoly::zero()}; }
  static PointCount polynomial(const MPoly& f) {
    for (VarId v : f.vars())
      if (v != var_p())
        throw std::invalid_argument("point count must be a polynomial in p");
    return {Mode::Polynomial, f};
  }
  static PointCount constant(long long n) {
    return polynomial(MPoly::constant(Rat(n)));
  }

  bool is_zero() const {
    return mode == Mode::Zero ||
           (mode == Mode::Polynomial && poly.is_zero());
  }
};

// The two uniform components of the lattice sum A(p, t): the point-free part
// F_{d'}(p^-1, X) and the per-point correction.
struct AComponents {
  RatFn base;
  RatFn correction;  // zero when dprime == 1
};

inline AComponents smooth_A_components(int d, int dprime) {
  if (d < 2 || d % 2 != 0)
    throw std::invalid_argument("closed form needs even d >= 2");
  if (dprime < 1) throw std::invalid_argument("dprime must be >= 1");
  SubstitutionSet sub(d, dprime);
  AComponents out;
  out.base = flag_fn(dprime).substitute(sub.assignment(dprime - 1));
  if (dprime == 1) {
    out.correction = RatFn::zero();
    return out;
  }
  RatFn flags = flag_fn(dprime - 1).substitute(sub.assignment(dprime - 2));
  MPoly num = MPoly::variable(var_p()) * sub.Y() - sub.X(dprime - 1);
  std::vector<MPoly> den{
      MPoly::one() - sub.X(dprime - 1), MPoly::one() - sub.Y(),
      MPoly::variable(var_p(), static_cast<unsigned>(dprime - 1))};
  out.correction = flags * RatFn::of_factored(num, den);
  return out;
}

inline RatFn point_count_factor(const PointCount& n_points) {
  switch (n_points.mode) {
    case PointCount::Mode::Zero:
      return RatFn::zero();
    case PointCount::Mode::Symbolic:
      return RatFn::variable(var_n());
    case PointCount::Mode::Polynomial:
      return RatFn(n_points.poly);
  }
  return RatFn::zero();
}

// A(p, t) for a presentation with smooth line-free Pfaffian:
//   F_{d'}(p^-1, X) + n_P * F_{d'-1}(p^-1, X') p^{-(d'-1)}
//                     (p Y - X_{d'-1}) / ((1 - X_{d'-1})(1 - Y)).
inline RatFn smooth_A(int d, int dprime, const PointCount& n_points) {
  if (dprime == 1 && !n_points.is_zero())
    throw std::invalid_argument(
        "dprime = 1 has an empty hypersurface; point count must be zero");
  AComponents comps = smooth_A_components(d, dprime);
  if (n_points.is_zero()) return comps.base;
  return comps.base + point_count_factor(n_points) * comps.correction;
}

// A local normal zeta function in canonical (p, t) form.
struct LocalZeta {
  RatFn value;
  int d = 0;
  int dprime = 0;
  PointCount n_points;
  RatFn prefactor;           // zeta_lattice(d) * zeta_p_shift(d+d', d d')
  std::optional<RatFn> W0;   // point-free component
  std::optional<RatFn> W1;   // coefficient of the point count
};

// Assembly of the closed form: zeta_lattice(d) * zeta_p((d+d')s - dd') * A.
inline LocalZeta normal_zeta_smooth(const Presentation& pres,
                                    const PointCount& n_points) {
  GroupInvariants inv = group_invariants(pres);
  if (!inv.has_hypersurface)
    throw std::domain_error(
        "closed form needs even d and a nonzero Pfaffian; only the "
        "enumeration oracle applies to this presentation");
  LocalZeta z;
  z.d = pres.d;
  z.dprime = pres.dprime;
  z.n_points = n_points;
  z.prefactor = zeta_lattice(pres.d) *
                zeta_p_shift(pres.d + pres.dprime,
                             static_cast<long>(pres.d) * pres.dprime);
  AComponents comps = smooth_A_components(pres.d, pres.dprime);
  z.W0 = z.prefactor * comps.base;
  if (pres.dprime >= 2) z.W1 = z.prefactor * comps.correction;
  z.value = *z.W0;
  if (!n_points.is_zero() && z.W1)
    z.value = *z.W0 + point_count_factor(n_points) * *z.W1;
  return z;
}

// Closed form for the Grenham group G_n:
//   zeta_lattice(n) * zeta_p((2n-1)s - n(n-1)) * F_{n-1}(p^-1, X)
// with X_i = p^{(n+i)(n-i-1)} t^{2(n-i)-1}.
inline LocalZeta grenham_zeta(int n) {
  if (n < 2) throw std::invalid_argument("grenham_zeta needs n >= 2");
  LocalZeta z;
  z.d = n;
  z.dprime = n - 1;
  z.n_points = PointCount::zero();
  z.prefactor = zeta_lattice(n) *
                zeta_p_shift(2 * n - 1, static_cast<long>(n) * (n - 1));
  std::map<VarId, RatFn> sub;
  sub[var_q()] = RatFn::of(MPoly::one(), MPoly::variable(var_p()));
  for (int i = 1; i <= n - 2; ++i) {
    unsigned pe = static_cast<unsigned>((n + i) * (n - i - 1));
    unsigned te = static_cast<unsigned>(2 * (n - i) - 1);
    sub[var_X(i)] = RatFn(MPoly::variable(var_p(), pe) *
                          MPoly::variable(var_t(), te));
  }
  z.W0 = z.prefactor * flag_fn(n - 1).substitute(sub);
  z.value = *z.W0;
  return z;
}

// The direct-product shift: the zeta function of G x Z^r is the one of G
// times prod_{k=0}^{r-1} zeta_p(s - (h + k)) for h = d + d'.
inline RatFn direct_product_extension(const LocalZeta& z, int r) {
  if (r < 0) throw std::invalid_argument("extension rank must be >= 0");
  RatFn out = z.value;
  long h = z.d + z.dprime;
  for (int k = 0; k < r; ++k) out *= zeta_p_shift(1, h + k);
  return out;
}

// ---------------------------------------------------------------------------
// Functional equation checks.
// ---------------------------------------------------------------------------

struct FuneqReport {
  bool holds = false;
  bool conditional = false;  // symbolic point count: components only
  int sign = 0;
  long p_exponent = 0;
  long t_exponent = 0;
  std::optional<bool> w0_symmetry;
  std::optional<bool> w1_symmetry;
  std::optional<bool> a_symmetry;    // lattice-sum level
  std::optional<bool> weil_rule_ok;  // n(1/p) == p^{-(d'-2)} n(p)
};

namespace detail {

inline RatFn monomial_ratfn(int sign, long pe, long te) {
  RatFn out = RatFn(Rat(sign));
  out *= RatFn::variable(var_p()).pow(pe);
  out *= RatFn::variable(var_t()).pow(te);
  return out;
}

inline bool inversion_matches(const RatFn& f, int sign, long pe, long te) {
  if (f.is_zero()) return true;
  RatFn lhs = f.invert_vars({var_p(), var_t()});
  return lhs.equals(monomial_ratfn(sign, pe, te) * f);
}

}  // namespace detail

// Tests value(1/p, 1/t) == (-1)^{d+d'} p^{binom(d+d',2)} t^{2d+d'} value,
// plus the component and lattice-sum symmetries when components are present.
// A symbolic point count admits only the component checks; the result is
// then flagged conditional.
inline FuneqReport verify_funeq(const LocalZeta& z) {
  FuneqReport rep;
  int h = z.d + z.dprime;
  int expected_sign = (h % 2 == 0) ? 1 : -1;
  long B = static_cast<long>(h) * (h - 1) / 2;
  long E = 2l * z.d + z.dprime;
  int weil_weight = z.dprime - 2;  // dimension of the hypersurface

  if (z.W0)
    rep.w0_symmetry = detail::inversion_matches(*z.W0, expected_sign, B, E);
  if (z.W1)
    rep.w1_symmetry = detail::inversion_matches(*z.W1, expected_sign,
                                                B + weil_weight, E);
  if (z.n_points.mode == PointCount::Mode::Polynomial &&
      !z.n_points.poly.is_zero()) {
    RatFn n_of_p = RatFn(z.n_points.poly);
    RatFn lhs = n_of_p.invert_vars({var_p()});
    RatFn rhs = n_of_p * RatFn::variable(var_p()).pow(-weil_weight);
    rep.weil_rule_ok = lhs.equals(rhs);
  }

  if (z.n_points.mode == PointCount::Mode::Symbolic) {
    rep.conditional = true;
    rep.holds = rep.w0_symmetry.value_or(false) &&
                (!z.W1 || rep.w1_symmetry.value_or(false));
    rep.sign = expected_sign;
    rep.p_exponent = B;
    rep.t_exponent = E;
    return rep;
  }

  // lattice-sum level: A = value / prefactor inverts with
  // (-1)^{d'-1} p^{binom(d',2)}
  if (!z.prefactor.is_zero()) {
    RatFn a_part = z.value / z.prefactor;
    rep.a_symmetry = detail::inversion_matches(
        a_part, (z.dprime % 2 == 1) ? 1 : -1,
        static_cast<long>(z.dprime) * (z.dprime - 1) / 2, 0);
  }

  // The inverted function is c * p^a t^b times the original exactly when the
  // cross products agree up to that monomial; the candidate is read off the
  // leading terms, avoiding a costly quotient normalization.
  RatFn lhs = z.value.invert_vars({var_p(), var_t()});
  MPoly left = lhs.num() * z.value.den_expanded();
  MPoly right = z.value.num() * lhs.den_expanded();
  MPoly::align(left, right);
  if (!left.is_zero() && !right.is_zero()) {
    const auto& lt = *left.terms().begin();
    const auto& rt = *right.terms().begin();
    Rat c = lt.second / rt.second;
    if (c == 1 || c == -1) {
      MPoly shifted = right;
      bool valid = true;
      for (size_t i = 0; i < left.vars().size() && valid; ++i) {
        long diff = static_cast<long>(lt.first[i]) -
                    static_cast<long>(rt.first[i]);
        if (diff < 0)
          valid = false;
        else if (diff > 0)
          shifted *= MPoly::variable(left.vars()[i],
                                     static_cast<unsigned>(diff));
      }
      if (valid && left == shifted * c) {
        rep.sign = (c == 1) ? 1 : -1;
        auto expo = [&](VarId v) {
          int pos = left.var_pos(v);
          long le = pos >= 0 ? static_cast<long>(lt.first[static_cast<size_t>(
                                   pos)])
                             : 0;
          long re = pos >= 0 ? static_cast<long>(rt.first[static_cast<size_t>(
                                   pos)])
                             : 0;
          return le - re;
        };
        rep.p_exponent = expo(var_p());
        rep.t_exponent = expo(var_t());
      }
    }
  }
  rep.holds = rep.sign == expected_sign && rep.p_exponent == B &&
              rep.t_exponent == E;
  return rep;
}

}  // namespace zetaforge
