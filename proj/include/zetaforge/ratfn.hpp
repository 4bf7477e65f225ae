#pragma once

#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "zetaforge/mpoly.hpp"

namespace zetaforge {

// ---------------------------------------------------------------------------
// RatFn: quotient of multivariate polynomials with a factored denominator.
//
// The denominator is kept as a multiset of normalized factors. Factors
// produced structurally (geometric series) have the shape 1 - c*monomial and
// are preserved as such; gcd reduction only ever shrinks individual factors.
// All rational constants are folded into the numerator; each factor has
// coprime integer coefficients and positive constant term (positive leading
// coefficient when the constant term vanishes).
// ---------------------------------------------------------------------------

namespace detail {

inline int mpoly_compare(const MPoly& a, const MPoly& b) {
  if (a.total_degree() != b.total_degree())
    return a.total_degree() < b.total_degree() ? -1 : 1;
  if (a.terms().size() != b.terms().size())
    return a.terms().size() < b.terms().size() ? -1 : 1;
  std::string sa = a.to_string(), sb = b.to_string();
  if (sa != sb) return sa < sb ? -1 : 1;
  return 0;
}

inline bool mpoly_less(const MPoly& a, const MPoly& b) {
  return mpoly_compare(a, b) < 0;
}

// Scale f so coefficients are coprime integers and the constant term (or the
// leading coefficient, if the constant term is zero) is positive. Returns the
// extracted scale s with f == s * normalized.
inline std::pair<Rat, MPoly> normalize_factor(const MPoly& f) {
  auto [content, prim] = f.split_content();
  // split_content makes the grlex-leading coefficient positive; flip when the
  // constant term is negative so factors read "1 - c*monomial".
  if (prim.constant_term() < 0) {
    content = -content;
    prim = prim.negated();
  }
  return {content, prim};
}

}  // namespace detail

class RatFn {
 public:
  RatFn() : num_(MPoly::zero()) {}
  RatFn(const MPoly& numerator) : num_(numerator) {}
  RatFn(const Rat& c) : num_(MPoly::constant(c)) {}
  RatFn(long c) : num_(MPoly::constant(Rat(c))) {}

  static RatFn zero() { return RatFn(); }
  static RatFn one() { return RatFn(MPoly::one()); }
  static RatFn variable(VarId v, unsigned e = 1) {
    return RatFn(MPoly::variable(v, e));
  }

  // canonicalize(num, den): the reduced, sign-normalized quotient.
  static RatFn of(const MPoly& num, const MPoly& den) {
    return of_factored(num, {den});
  }

  static RatFn of_factored(const MPoly& num, std::vector<MPoly> den_factors) {
    RatFn f;
    f.num_ = num;
    Rat scale = 1;
    for (MPoly& d : den_factors) {
      if (d.is_zero()) throw std::domain_error("division by zero polynomial");
      if (d.is_constant()) {
        scale *= d.constant_value();
        continue;
      }
      auto [s, prim] = detail::normalize_factor(d);
      scale *= s;
      f.den_.push_back(std::move(prim));
    }
    f.num_ *= Rat(1) / scale;
    f.reduce();
    return f;
  }

  const MPoly& num() const { return num_; }
  const std::vector<MPoly>& den_factors() const { return den_; }

  bool is_zero() const { return num_.is_zero(); }
  bool is_polynomial() const { return den_.empty(); }
  bool is_constant() const { return den_.empty() && num_.is_constant(); }

  Rat constant_value() const {
    if (!is_constant()) throw std::domain_error("RatFn is not constant");
    return num_.constant_value();
  }

  MPoly den_expanded() const {
    MPoly d = MPoly::one();
    for (const MPoly& f : den_) d *= f;
    return d;
  }

  // Mathematical equality by cross-multiplication of canonical forms.
  bool equals(const RatFn& o) const {
    return (num_ * o.den_expanded()) == (o.num_ * den_expanded());
  }
  bool operator==(const RatFn& o) const { return equals(o); }
  bool operator!=(const RatFn& o) const { return !equals(o); }

  RatFn operator-() const {
    RatFn f = *this;
    f.num_ = f.num_.negated();
    return f;
  }

  RatFn& operator*=(const RatFn& o) {
    std::vector<MPoly> extra = o.den_;  // copy first: o may alias *this
    num_ *= o.num_;
    den_.insert(den_.end(), extra.begin(), extra.end());
    reduce();
    return *this;
  }

  RatFn& operator+=(const RatFn& o) {
    // common denominator: per-factor multiset maximum
    std::vector<MPoly> common = merge_lcm(den_, o.den_);
    MPoly a = num_ * product_of(difference(common, den_));
    MPoly b = o.num_ * product_of(difference(common, o.den_));
    num_ = a + b;
    den_ = std::move(common);
    reduce();
    return *this;
  }

  RatFn& operator-=(const RatFn& o) { return *this += -o; }

  RatFn reciprocal() const {
    if (num_.is_zero())
      throw std::domain_error("division by zero polynomial");
    RatFn f;
    f.num_ = den_.empty() ? MPoly::one() : product_of(den_);
    auto [s, prim] = detail::normalize_factor(num_);
    f.num_ *= Rat(1) / s;
    if (!prim.is_constant()) f.den_.push_back(prim);
    f.reduce();
    return f;
  }

  RatFn& operator/=(const RatFn& o) { return *this *= o.reciprocal(); }

  friend RatFn operator*(RatFn a, const RatFn& b) { return a *= b; }
  friend RatFn operator+(RatFn a, const RatFn& b) { return a += b; }
  friend RatFn operator-(RatFn a, const RatFn& b) { return a -= b; }
  friend RatFn operator/(RatFn a, const RatFn& b) { return a /= b; }

  RatFn pow(long e) const {
    if (e < 0) return reciprocal().pow(-e);
    RatFn r = one(), base = *this;
    unsigned long k = static_cast<unsigned long>(e);
    while (k > 0) {
      if (k & 1ul) r *= base;
      k >>= 1;
      if (k) base *= base;
    }
    return r;
  }

  // Exact composition: replace each assigned variable by a rational function
  // (unassigned variables pass through).
  RatFn substitute(const std::map<VarId, RatFn>& assignment) const {
    RatFn out = substitute_poly(num_, assignment);
    for (const MPoly& f : den_) {
      RatFn fs = substitute_poly(f, assignment);
      if (fs.is_zero())
        throw std::domain_error("substitution creates a zero denominator");
      out /= fs;
    }
    return out;
  }

  // Replace v by 1/v for each v in the set, re-canonicalized to a RatFn.
  RatFn invert_vars(const std::set<VarId>& vars) const {
    if (num_.is_zero()) return zero();
    std::map<VarId, long> shift;  // net power of v to balance
    MPoly num = reciprocal_in(num_, vars, shift, /*numerator=*/true);
    std::vector<MPoly> den;
    den.reserve(den_.size());
    for (const MPoly& f : den_)
      den.push_back(reciprocal_in(f, vars, shift, /*numerator=*/false));
    MPoly num_shift = MPoly::one();
    for (const auto& [v, e] : shift) {
      if (e > 0)
        num = num * MPoly::variable(v, static_cast<unsigned>(e));
      else if (e < 0)
        den.push_back(MPoly::variable(v, static_cast<unsigned>(-e)));
    }
    return of_factored(num, std::move(den));
  }

  // Taylor coefficients [a_0..a_order] in t of f(p_value, t) at t = 0.
  std::vector<Rat> series_coefficients(long p_value, int order) const {
    if (p_value < 2)
      throw std::invalid_argument("series evaluation needs p >= 2");
    if (order < 0) throw std::invalid_argument("series order must be >= 0");
    VarId p = var_p(), t = var_t();
    auto check_vars = [&](const MPoly& f) {
      for (VarId v : f.vars())
        if (v != p && v != t)
          throw std::domain_error(
              "series expansion requires a rational function in p and t");
    };
    check_vars(num_);
    for (const MPoly& f : den_) check_vars(f);

    std::map<VarId, Rat> at;
    at[p] = Rat(p_value);
    auto to_series = [&](const MPoly& f) {
      std::vector<Rat> s(static_cast<size_t>(order) + 1, Rat(0));
      MPoly g = f.eval_partial(at);
      int pos = g.var_pos(t);
      for (const auto& [e, c] : g.terms()) {
        unsigned k = pos < 0 ? 0u : e[static_cast<size_t>(pos)];
        if (k <= static_cast<unsigned>(order)) s[k] += c;
      }
      return s;
    };
    auto full_constant = [&](const MPoly& f) {
      // constant term in t of the evaluated factor (exact, no truncation)
      MPoly g = f.eval_partial(at);
      int pos = g.var_pos(t);
      Rat c0 = 0;
      for (const auto& [e, c] : g.terms())
        if (pos < 0 || e[static_cast<size_t>(pos)] == 0) c0 += c;
      return c0;
    };

    std::vector<Rat> den(static_cast<size_t>(order) + 1, Rat(0));
    den[0] = 1;
    Rat c0 = 1;
    for (const MPoly& f : den_) {
      c0 *= full_constant(f);
      den = truncated_product(den, to_series(f), order);
    }
    if (c0 == 0)
      throw std::domain_error("not expandable at t = 0");
    std::vector<Rat> num = to_series(num_);

    std::vector<Rat> out(static_cast<size_t>(order) + 1, Rat(0));
    for (int k = 0; k <= order; ++k) {
      Rat acc = num[static_cast<size_t>(k)];
      for (int j = 1; j <= k; ++j)
        acc -= den[static_cast<size_t>(j)] * out[static_cast<size_t>(k - j)];
      out[static_cast<size_t>(k)] = acc / den[0];
    }
    return out;
  }

  // If the function reduces to c * monomial, return (c, exponents by var).
  std::optional<std::pair<Rat, std::map<VarId, long>>> as_monomial() const {
    RatFn f = *this;
    std::map<VarId, long> exps;
    if (f.num_.terms().size() != 1) return std::nullopt;
    for (const MPoly& d : f.den_) {
      if (d.terms().size() != 1) return std::nullopt;
      int i = 0;
      for (VarId v : d.vars()) {
        exps[v] -= static_cast<long>(d.terms().begin()->first[i]);
        ++i;
      }
    }
    int i = 0;
    for (VarId v : f.num_.vars()) {
      exps[v] += static_cast<long>(f.num_.terms().begin()->first[i]);
      ++i;
    }
    Rat c = f.num_.terms().begin()->second;
    for (const MPoly& d : f.den_) c /= d.terms().begin()->second;
    return std::make_pair(c, exps);
  }

  std::string to_string() const {
    std::string n = num_.to_string();
    if (den_.empty()) return n;
    if (num_.terms().size() > 1) n = "(" + n + ")";
    std::string d;
    for (size_t i = 0; i < den_.size();) {
      size_t j = i;
      while (j < den_.size() && den_[j] == den_[i]) ++j;
      if (!d.empty()) d += "*";
      d += "(" + den_[i].to_string_ascending() + ")";
      if (j - i > 1) d += "^" + std::to_string(j - i);
      i = j;
    }
    return n + " / " + d;
  }

 private:
  MPoly num_;
  std::vector<MPoly> den_;

  static MPoly product_of(const std::vector<MPoly>& fs) {
    MPoly p = MPoly::one();
    for (const MPoly& f : fs) p *= f;
    return p;
  }

  static std::vector<MPoly> merge_lcm(const std::vector<MPoly>& a,
                                      const std::vector<MPoly>& b) {
    std::vector<MPoly> out = a;
    std::vector<bool> used(a.size(), false);
    for (const MPoly& f : b) {
      bool matched = false;
      for (size_t i = 0; i < a.size(); ++i) {
        if (!used[i] && a[i] == f) {
          used[i] = true;
          matched = true;
          break;
        }
      }
      if (!matched) out.push_back(f);
    }
    std::sort(out.begin(), out.end(), detail::mpoly_less);
    return out;
  }

  // multiset difference whole \ part (part must be contained in whole)
  static std::vector<MPoly> difference(const std::vector<MPoly>& whole,
                                       const std::vector<MPoly>& part) {
    std::vector<MPoly> out = whole;
    for (const MPoly& f : part) {
      auto it = std::find(out.begin(), out.end(), f);
      if (it == out.end())
        throw std::logic_error("denominator multiset difference failed");
      out.erase(it);
    }
    return out;
  }

  static RatFn substitute_poly(const MPoly& f,
                               const std::map<VarId, RatFn>& assignment) {
    RatFn out = zero();
    for (const auto& [e, c] : f.terms()) {
      RatFn term = RatFn(MPoly::constant(c));
      for (size_t i = 0; i < f.vars().size(); ++i) {
        if (e[i] == 0) continue;
        auto it = assignment.find(f.vars()[i]);
        if (it == assignment.end())
          term *= RatFn(MPoly::variable(f.vars()[i], e[i]));
        else
          term *= it->second.pow(static_cast<long>(e[i]));
      }
      out += term;
    }
    return out;
  }

  // Reverse the exponents of the given variables inside f (f~(v) =
  // v^deg * f(1/v)) and record the net monomial shift this induces on the
  // whole quotient: numerator degrees count negatively, denominator degrees
  // positively.
  static MPoly reciprocal_in(const MPoly& f, const std::set<VarId>& vars,
                             std::map<VarId, long>& shift, bool numerator) {
    std::vector<int> maxdeg(f.vars().size(), 0);
    for (size_t i = 0; i < f.vars().size(); ++i)
      if (vars.count(f.vars()[i])) maxdeg[i] = f.degree_in(f.vars()[i]);
    MPoly out;
    MPoly::TermMap terms;
    for (const auto& [e, c] : f.terms()) {
      MPoly::Exp ne = e;
      for (size_t i = 0; i < ne.size(); ++i)
        if (vars.count(f.vars()[i]))
          ne[i] = static_cast<unsigned>(maxdeg[i]) - ne[i];
      terms.emplace(std::move(ne), c);
    }
    out = MPoly::zero();
    for (const auto& [e, c] : terms)
      out += MPoly::monomial(c, f.vars(), e);
    for (size_t i = 0; i < f.vars().size(); ++i) {
      if (maxdeg[i] == 0) continue;
      shift[f.vars()[i]] += numerator ? -maxdeg[i] : maxdeg[i];
    }
    return out;
  }

  static std::vector<Rat> truncated_product(const std::vector<Rat>& a,
                                            const std::vector<Rat>& b,
                                            int order) {
    std::vector<Rat> out(static_cast<size_t>(order) + 1, Rat(0));
    for (int i = 0; i <= order; ++i) {
      if (a[static_cast<size_t>(i)] == 0) continue;
      for (int j = 0; i + j <= order; ++j) {
        if (b[static_cast<size_t>(j)] == 0) continue;
        out[static_cast<size_t>(i + j)] +=
            a[static_cast<size_t>(i)] * b[static_cast<size_t>(j)];
      }
    }
    return out;
  }

  // Cancel common content between numerator and denominator factors. Full
  // gcd reduction is attempted only below a size cutoff; above it the form
  // stays partially reduced and equality falls back to cross-multiplication.
  static constexpr size_t kGcdReductionCutoff = 400;

  void reduce() {
    if (num_.is_zero()) {
      den_.clear();
      return;
    }
    for (size_t i = 0; i < den_.size();) {
      MPoly& f = den_[i];
      // fast path: the factor divides the numerator outright
      if (auto q = num_.divide_exact(f)) {
        num_ = std::move(*q);
        den_.erase(den_.begin() + static_cast<long>(i));
        continue;
      }
      if (num_.terms().size() > kGcdReductionCutoff) {
        ++i;
        continue;
      }
      MPoly g = MPoly::gcd(num_, f);
      if (!g.is_constant()) {
        num_ = *num_.divide_exact(g);
        MPoly rest = *f.divide_exact(g);
        auto [s, prim] = detail::normalize_factor(rest);
        num_ *= Rat(1) / s;
        if (prim.is_constant()) {
          den_.erase(den_.begin() + static_cast<long>(i));
        } else {
          f = prim;
          ++i;
        }
        continue;
      }
      ++i;
    }
    std::sort(den_.begin(), den_.end(), detail::mpoly_less);
  }
};

// Free-function spellings used throughout the suites.
inline RatFn canonicalize(const MPoly& num, const MPoly& den) {
  return RatFn::of(num, den);
}

inline RatFn invert_variables(const RatFn& f, const std::set<VarId>& vars) {
  return f.invert_vars(vars);
}

inline std::ostream& operator<<(std::ostream& os, const RatFn& f) {
  return os << f.to_string();
}

}  // namespace zetaforge
