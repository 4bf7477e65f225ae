#pragma once

#include <algorithm>
#include <cctype>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace zetaforge {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;
using VarId = int;

// ---------------------------------------------------------------------------
// Variable registry.
//
// Variables are interned strings with a fixed global precedence
//   p < t < q < X_1 < X_2 < ... < Y < y_1 < y_2 < ...
// and any other name after those, ordered lexicographically. Canonical forms
// (term order, printing) are defined relative to this precedence, so output
// is stable across runs.
// ---------------------------------------------------------------------------

namespace detail {

struct VarKey {
  int group = 0;
  long index = 0;
  std::string name;

  bool operator<(const VarKey& o) const {
    if (group != o.group) return group < o.group;
    if (index != o.index) return index < o.index;
    return name < o.name;
  }
};

inline VarKey make_var_key(const std::string& name) {
  auto subscript = [](const std::string& s) -> long {
    std::string digits = s;
    if (!digits.empty() && digits[0] == '_') digits = digits.substr(1);
    if (digits.empty()) return -1;
    for (char c : digits)
      if (!std::isdigit(static_cast<unsigned char>(c))) return -1;
    return std::stol(digits);
  };
  if (name == "p") return {0, 0, name};
  if (name == "t") return {1, 0, name};
  if (name == "q") return {2, 0, name};
  if (name.size() > 1 && name[0] == 'X') {
    long k = subscript(name.substr(1));
    if (k >= 0) return {3, k, name};
  }
  if (name == "Y") return {4, 0, name};
  if (name.size() > 1 && name[0] == 'y') {
    long k = subscript(name.substr(1));
    if (k >= 0) return {5, k, name};
  }
  return {6, 0, name};
}

class VarTable {
 public:
  static VarTable& instance() {
    static VarTable table;
    return table;
  }

  VarId intern(const std::string& name) {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = ids_.find(name);
    if (it != ids_.end()) return it->second;
    VarId id = static_cast<VarId>(keys_.size());
    keys_.push_back(make_var_key(name));
    ids_.emplace(name, id);
    return id;
  }

  const VarKey& key(VarId v) {
    std::lock_guard<std::mutex> lock(mu_);
    return keys_.at(static_cast<size_t>(v));
  }

 private:
  std::mutex mu_;
  std::vector<VarKey> keys_;
  std::map<std::string, VarId> ids_;
};

}  // namespace detail

inline VarId intern_var(const std::string& name) {
  return detail::VarTable::instance().intern(name);
}

inline std::string var_name(VarId v) {
  return detail::VarTable::instance().key(v).name;
}

inline bool var_less(VarId a, VarId b) {
  if (a == b) return false;
  return detail::VarTable::instance().key(a) <
         detail::VarTable::instance().key(b);
}

// Shorthands for the variables every module talks about.
inline VarId var_p() { return intern_var("p"); }
inline VarId var_t() { return intern_var("t"); }
inline VarId var_q() { return intern_var("q"); }
inline VarId var_X(int i) { return intern_var("X_" + std::to_string(i)); }
inline VarId var_Y() { return intern_var("Y"); }
inline VarId var_y(int i) { return intern_var("y_" + std::to_string(i)); }
inline VarId var_n() { return intern_var("n"); }

// ---------------------------------------------------------------------------
// MPoly: sparse multivariate polynomial with exact rational coefficients.
//
// Canonical form: the variable list is sorted by the global precedence and
// contains only variables that actually occur; the term map holds no zero
// coefficients. Terms are kept in graded-lex descending order.
// ---------------------------------------------------------------------------

class MPoly {
 public:
  using Exp = std::vector<unsigned>;

  struct GrlexDesc {
    bool operator()(const Exp& a, const Exp& b) const {
      unsigned da = 0, db = 0;
      for (unsigned e : a) da += e;
      for (unsigned e : b) db += e;
      if (da != db) return da > db;
      return std::lexicographical_compare(b.begin(), b.end(), a.begin(),
                                          a.end());
    }
  };

  using TermMap = std::map<Exp, Rat, GrlexDesc>;

  MPoly() = default;

  static MPoly zero() { return MPoly(); }

  static MPoly constant(const Rat& c) {
    MPoly f;
    if (c != 0) f.terms_[{}] = c;
    return f;
  }

  static MPoly one() { return constant(1); }

  static MPoly variable(VarId v, unsigned e = 1) {
    MPoly f;
    if (e == 0) return one();
    f.vars_ = {v};
    f.terms_[{e}] = 1;
    return f;
  }

  static MPoly variable(const std::string& name, unsigned e = 1) {
    return variable(intern_var(name), e);
  }

  static MPoly monomial(const Rat& c, const std::vector<VarId>& vars,
                        const Exp& exps) {
    if (vars.size() != exps.size())
      throw std::invalid_argument("monomial: variable/exponent mismatch");
    MPoly f = constant(c);
    for (size_t i = 0; i < vars.size(); ++i)
      if (exps[i] > 0) f *= variable(vars[i], exps[i]);
    return f;
  }

  const std::vector<VarId>& vars() const { return vars_; }
  const TermMap& terms() const { return terms_; }

  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && total_degree() == 0);
  }
  bool is_one() const { return is_constant() && constant_value() == 1; }
  bool is_monomial() const { return terms_.size() == 1; }

  Rat constant_value() const {
    if (terms_.empty()) return Rat(0);
    if (!is_constant())
      throw std::domain_error("constant_value on non-constant polynomial");
    return terms_.begin()->second;
  }

  // Coefficient of the constant term (zero exponent vector).
  Rat constant_term() const {
    Exp z(vars_.size(), 0u);
    auto it = terms_.find(z);
    return it == terms_.end() ? Rat(0) : it->second;
  }

  int total_degree() const {
    if (terms_.empty()) return -1;
    unsigned d = 0;
    for (unsigned e : terms_.begin()->first) d += e;
    return static_cast<int>(d);
  }

  int degree_in(VarId v) const {
    int pos = var_pos(v);
    if (pos < 0) return 0;
    unsigned d = 0;
    for (const auto& [e, c] : terms_) d = std::max(d, e[pos]);
    return static_cast<int>(d);
  }

  bool depends_on(VarId v) const { return degree_in(v) > 0; }

  bool operator==(const MPoly& o) const {
    return vars_ == o.vars_ && terms_ == o.terms_;
  }
  bool operator!=(const MPoly& o) const { return !(*this == o); }

  MPoly& operator+=(const MPoly& o) {
    MPoly a = *this, b = o;
    align(a, b);
    for (const auto& [e, c] : b.terms_) {
      auto [it, fresh] = a.terms_.emplace(e, c);
      if (!fresh) {
        it->second += c;
        if (it->second == 0) a.terms_.erase(it);
      }
    }
    a.trim();
    *this = std::move(a);
    return *this;
  }

  MPoly& operator-=(const MPoly& o) {
    *this += o.negated();
    return *this;
  }

  MPoly negated() const {
    MPoly f = *this;
    for (auto& [e, c] : f.terms_) c = -c;
    return f;
  }

  MPoly operator-() const { return negated(); }

  MPoly& operator*=(const MPoly& o) {
    MPoly a = *this, b = o;
    align(a, b);
    TermMap prod;
    for (const auto& [ea, ca] : a.terms_) {
      for (const auto& [eb, cb] : b.terms_) {
        Exp e(ea.size());
        for (size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
        Rat c = ca * cb;
        auto [it, fresh] = prod.emplace(std::move(e), c);
        if (!fresh) it->second += c;
      }
    }
    a.terms_.clear();
    for (auto& [e, c] : prod)
      if (c != 0) a.terms_.emplace(e, std::move(c));
    a.trim();
    *this = std::move(a);
    return *this;
  }

  MPoly& operator*=(const Rat& c) {
    if (c == 0) {
      *this = zero();
      return *this;
    }
    for (auto& [e, coef] : terms_) coef *= c;
    return *this;
  }

  friend MPoly operator+(MPoly a, const MPoly& b) { return a += b; }
  friend MPoly operator-(MPoly a, const MPoly& b) { return a -= b; }
  friend MPoly operator*(MPoly a, const MPoly& b) { return a *= b; }
  friend MPoly operator*(MPoly a, const Rat& c) { return a *= c; }
  friend MPoly operator*(const Rat& c, MPoly a) { return a *= c; }

  MPoly pow(unsigned e) const {
    MPoly r = one(), base = *this;
    while (e > 0) {
      if (e & 1u) r *= base;
      base = (e >>= 1) ? base * base : base;
    }
    return r;
  }

  MPoly derivative(VarId v) const {
    int pos = var_pos(v);
    if (pos < 0) return zero();
    MPoly d;
    d.vars_ = vars_;
    for (const auto& [e, c] : terms_) {
      if (e[pos] == 0) continue;
      Exp f = e;
      f[pos] -= 1;
      d.terms_[f] = c * Rat(e[pos]);
    }
    d.trim();
    return d;
  }

  // Substitute exact rational values for a subset of the variables.
  MPoly eval_partial(const std::map<VarId, Rat>& values) const {
    MPoly out;
    for (const auto& [e, c] : terms_) {
      Rat coef = c;
      MPoly mono = one();
      for (size_t i = 0; i < vars_.size(); ++i) {
        if (e[i] == 0) continue;
        auto it = values.find(vars_[i]);
        if (it != values.end()) {
          Rat v = it->second;
          for (unsigned k = 0; k < e[i]; ++k) coef *= v;
        } else {
          mono *= variable(vars_[i], e[i]);
        }
      }
      out += mono * coef;
    }
    return out;
  }

  Rat eval(const std::map<VarId, Rat>& values) const {
    MPoly r = eval_partial(values);
    if (!r.is_constant())
      throw std::domain_error("eval: unassigned variables remain");
    return r.constant_value();
  }

  // Exact division. Returns the quotient when g divides *this, else nullopt.
  std::optional<MPoly> divide_exact(const MPoly& g) const {
    if (g.is_zero()) throw std::domain_error("division by zero polynomial");
    if (is_zero()) return zero();
    if (g.is_constant()) {
      MPoly q = *this;
      Rat inv = Rat(1) / g.constant_value();
      q *= inv;
      return q;
    }
    MPoly r = *this, d = g;
    align(r, d);
    TermMap rem = r.terms_;
    const TermMap& den = d.terms_;
    const Exp& lde = den.begin()->first;
    const Rat& ldc = den.begin()->second;
    TermMap quot;
    while (!rem.empty()) {
      const Exp lre = rem.begin()->first;
      const Rat lrc = rem.begin()->second;
      Exp qe(lre.size());
      for (size_t i = 0; i < lre.size(); ++i) {
        if (lre[i] < lde[i]) return std::nullopt;
        qe[i] = lre[i] - lde[i];
      }
      Rat qc = lrc / ldc;
      quot[qe] = qc;
      for (const auto& [e, c] : den) {
        Exp f(e.size());
        for (size_t i = 0; i < e.size(); ++i) f[i] = e[i] + qe[i];
        auto it = rem.find(f);
        if (it == rem.end()) {
          rem.emplace(std::move(f), -(qc * c));
        } else {
          it->second -= qc * c;
          if (it->second == 0) rem.erase(it);
        }
      }
    }
    MPoly q;
    q.vars_ = r.vars_;
    q.terms_ = std::move(quot);
    q.trim();
    return q;
  }

  // Integer content/primitive split: *this == c * primitive where primitive
  // has coprime integer coefficients and positive leading coefficient.
  std::pair<Rat, MPoly> split_content() const {
    if (is_zero()) return {Rat(0), zero()};
    Int num_gcd = 0, den_lcm = 1;
    for (const auto& [e, c] : terms_) {
      num_gcd = boost::multiprecision::gcd(num_gcd, numerator(c));
      den_lcm = boost::multiprecision::lcm(den_lcm, denominator(c));
    }
    Rat content(num_gcd, den_lcm);
    if (terms_.begin()->second < 0) content = -content;
    MPoly prim = *this;
    prim *= Rat(1) / content;
    return {content, prim};
  }

  // Exponent-wise minimum over all terms: the largest monomial dividing f.
  Exp monomial_content() const {
    Exp m(vars_.size(), 0u);
    bool first = true;
    for (const auto& [e, c] : terms_) {
      if (first) {
        m = e;
        first = false;
      } else {
        for (size_t i = 0; i < m.size(); ++i) m[i] = std::min(m[i], e[i]);
      }
    }
    return m;
  }

  static MPoly gcd(const MPoly& a, const MPoly& b);

  // Restore the canonical form after exponent surgery (drops variables whose
  // exponent column is all zero).
  void compact() { trim(); }

  std::string to_string() const { return format_terms(/*ascending=*/false); }
  std::string to_string_ascending() const {
    return format_terms(/*ascending=*/true);
  }

  static MPoly parse(const std::string& text);

  int var_pos(VarId v) const {
    auto it = std::find(vars_.begin(), vars_.end(), v);
    return it == vars_.end() ? -1 : static_cast<int>(it - vars_.begin());
  }

  // Re-express over a variable list that must contain vars_ as a subset.
  MPoly remapped(const std::vector<VarId>& newvars) const {
    MPoly out;
    out.vars_ = newvars;
    std::vector<int> where(vars_.size(), -1);
    for (size_t i = 0; i < vars_.size(); ++i) {
      auto it = std::find(newvars.begin(), newvars.end(), vars_[i]);
      if (it == newvars.end())
        throw std::logic_error("remapped: missing variable");
      where[i] = static_cast<int>(it - newvars.begin());
    }
    for (const auto& [e, c] : terms_) {
      Exp f(newvars.size(), 0u);
      for (size_t i = 0; i < vars_.size(); ++i) f[where[i]] = e[i];
      out.terms_.emplace(std::move(f), c);
    }
    return out;
  }

  static void align(MPoly& a, MPoly& b) {
    if (a.vars_ == b.vars_) return;
    std::vector<VarId> merged = a.vars_;
    for (VarId v : b.vars_)
      if (std::find(merged.begin(), merged.end(), v) == merged.end())
        merged.push_back(v);
    std::sort(merged.begin(), merged.end(), var_less);
    a = a.remapped(merged);
    b = b.remapped(merged);
  }

 private:
  std::vector<VarId> vars_;
  TermMap terms_;

  // Drop variables with an all-zero exponent column.
  void trim() {
    if (vars_.empty()) return;
    std::vector<bool> used(vars_.size(), false);
    for (const auto& [e, c] : terms_)
      for (size_t i = 0; i < e.size(); ++i)
        if (e[i] > 0) used[i] = true;
    if (std::all_of(used.begin(), used.end(), [](bool u) { return u; }))
      return;
    std::vector<VarId> nv;
    for (size_t i = 0; i < vars_.size(); ++i)
      if (used[i]) nv.push_back(vars_[i]);
    TermMap nt;
    for (const auto& [e, c] : terms_) {
      Exp f;
      f.reserve(nv.size());
      for (size_t i = 0; i < e.size(); ++i)
        if (used[i]) f.push_back(e[i]);
      nt.emplace(std::move(f), c);
    }
    vars_ = std::move(nv);
    terms_ = std::move(nt);
  }

  static std::string format_rat(const Rat& r) {
    std::ostringstream os;
    os << r;
    return os.str();
  }

  std::string format_terms(bool ascending) const {
    if (terms_.empty()) return "0";
    std::vector<const TermMap::value_type*> order;
    order.reserve(terms_.size());
    for (const auto& t : terms_) order.push_back(&t);
    if (ascending) std::reverse(order.begin(), order.end());
    std::ostringstream os;
    bool first = true;
    for (const auto* t : order) {
      Rat c = t->second;
      if (first) {
        if (c < 0) {
          os << "-";
          c = -c;
        }
        first = false;
      } else {
        if (c < 0) {
          os << " - ";
          c = -c;
        } else {
          os << " + ";
        }
      }
      std::string varpart;
      for (size_t i = 0; i < vars_.size(); ++i) {
        unsigned e = t->first[i];
        if (e == 0) continue;
        if (!varpart.empty()) varpart += "*";
        varpart += var_name(vars_[i]);
        if (e > 1) varpart += "^" + std::to_string(e);
      }
      if (varpart.empty()) {
        os << format_rat(c);
      } else if (c == 1) {
        os << varpart;
      } else {
        os << format_rat(c) << "*" << varpart;
      }
    }
    return os.str();
  }

  friend class MPolyParser;
};

// ---------------------------------------------------------------------------
// Multivariate gcd: content/primitive-part recursion with a primitive
// pseudo-remainder sequence in the least significant variable.
// ---------------------------------------------------------------------------

namespace detail {

// f as a univariate polynomial in v with MPoly coefficients.
inline std::vector<MPoly> univariate_in(const MPoly& f, VarId v) {
  int pos = f.var_pos(v);
  int deg = f.degree_in(v);
  std::vector<MPoly> coeffs(static_cast<size_t>(deg) + 1, MPoly::zero());
  if (pos < 0) {
    coeffs[0] = f;
    return coeffs;
  }
  for (const auto& [e, c] : f.terms()) {
    MPoly::Exp rest = e;
    unsigned k = rest[static_cast<size_t>(pos)];
    rest[static_cast<size_t>(pos)] = 0;
    coeffs[k] += MPoly::monomial(c, f.vars(), rest);
  }
  return coeffs;
}

inline MPoly from_univariate(const std::vector<MPoly>& coeffs, VarId v) {
  MPoly out = MPoly::zero();
  for (size_t k = 0; k < coeffs.size(); ++k)
    out += coeffs[k] * MPoly::variable(v, static_cast<unsigned>(k));
  return out;
}

}  // namespace detail

inline MPoly MPoly::gcd(const MPoly& a, const MPoly& b) {
  if (a.is_zero()) return b.is_zero() ? zero() : b.split_content().second;
  if (b.is_zero()) return a.split_content().second;
  MPoly f = a.split_content().second;
  MPoly g = b.split_content().second;
  f.compact();
  g.compact();
  if (f.is_constant() || g.is_constant()) return one();

  // Main variable: the least significant variable occurring in either.
  MPoly fa = f, ga = g;
  align(fa, ga);
  VarId v = fa.vars().back();
  if (!fa.depends_on(v) || !ga.depends_on(v)) {
    // One of them is free of v: gcd divides the v-free one, so recurse on
    // the v-coefficients of the other.
    MPoly free_poly = fa.depends_on(v) ? ga : fa;
    MPoly dep_poly = fa.depends_on(v) ? fa : ga;
    free_poly.compact();
    dep_poly.compact();
    MPoly acc = free_poly;
    for (const MPoly& c : detail::univariate_in(dep_poly, v)) {
      if (c.is_zero()) continue;
      acc = gcd(acc, c);
      if (acc.is_constant()) return one();
    }
    return acc;
  }

  auto fu = detail::univariate_in(fa, v);
  auto gu = detail::univariate_in(ga, v);

  auto content_of = [](const std::vector<MPoly>& cs) {
    MPoly c = zero();
    for (const MPoly& x : cs) {
      if (x.is_zero()) continue;
      c = c.is_zero() ? x.split_content().second : gcd(c, x);
      if (c.is_constant()) return one();
    }
    return c;
  };

  MPoly cf = content_of(fu);
  MPoly cg = content_of(gu);
  MPoly cont = gcd(cf, cg);

  MPoly pf = fa.divide_exact(cf)->split_content().second;
  MPoly pg = ga.divide_exact(cg)->split_content().second;

  // Primitive PRS on pf, pg in the variable v.
  auto deg = [&](const MPoly& x) { return x.degree_in(v); };
  MPoly u = pf, w = pg;
  if (deg(u) < deg(w)) std::swap(u, w);
  while (true) {
    // pseudo-remainder of u by w in v
    auto uu = detail::univariate_in(u, v);
    auto ww = detail::univariate_in(w, v);
    int du = static_cast<int>(uu.size()) - 1;
    int dw = static_cast<int>(ww.size()) - 1;
    const MPoly lcw = ww[static_cast<size_t>(dw)];
    while (du >= dw) {
      MPoly lcu = uu[static_cast<size_t>(du)];
      for (auto& c : uu) c *= lcw;
      for (int i = 0; i <= dw; ++i)
        uu[static_cast<size_t>(du - dw + i)] -=
            lcu * ww[static_cast<size_t>(i)];
      while (!uu.empty() && uu.back().is_zero()) uu.pop_back();
      du = static_cast<int>(uu.size()) - 1;
    }
    MPoly r = detail::from_univariate(uu, v);
    if (r.is_zero()) {
      MPoly pp = w;
      // primitive part of w in v
      MPoly cw = content_of(detail::univariate_in(w, v));
      pp = *w.divide_exact(cw);
      MPoly result = cont * pp;
      return result.split_content().second;
    }
    if (r.degree_in(v) == 0) return cont.split_content().second;
    u = w;
    MPoly cr = content_of(detail::univariate_in(r, v));
    w = r.divide_exact(cr)->split_content().second;
  }
}

// ---------------------------------------------------------------------------
// Parser for the canonical textual form: '+'/'-' separated monomials, each a
// '*'-separated product of an optional rational coefficient and var^exp
// factors. Example: "q^2*X_1 + 1/2*t - 3".
// ---------------------------------------------------------------------------

class MPolyParser {
 public:
  explicit MPolyParser(const std::string& text) : s_(text) {}

  MPoly parse() {
    MPoly out = MPoly::zero();
    skip_ws();
    bool neg = false;
    if (peek() == '+' || peek() == '-') neg = (get() == '-');
    while (true) {
      MPoly term = parse_term();
      out += neg ? term.negated() : term;
      skip_ws();
      if (pos_ >= s_.size()) break;
      char c = get();
      if (c == '+')
        neg = false;
      else if (c == '-')
        neg = true;
      else
        throw std::invalid_argument("polynomial parse error near '" +
                                    std::string(1, c) + "'");
    }
    return out;
  }

 private:
  const std::string& s_;
  size_t pos_ = 0;

  void skip_ws() {
    while (pos_ < s_.size() &&
           std::isspace(static_cast<unsigned char>(s_[pos_])))
      ++pos_;
  }
  char peek() {
    skip_ws();
    return pos_ < s_.size() ? s_[pos_] : '\0';
  }
  char get() {
    skip_ws();
    if (pos_ >= s_.size())
      throw std::invalid_argument("unexpected end of polynomial");
    return s_[pos_++];
  }

  MPoly parse_term() {
    MPoly term = MPoly::one();
    bool any = false;
    while (true) {
      skip_ws();
      char c = peek();
      if (std::isdigit(static_cast<unsigned char>(c))) {
        term *= MPoly::constant(parse_rational());
        any = true;
      } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        std::string name = parse_ident();
        unsigned e = 1;
        if (peek() == '^') {
          get();
          e = static_cast<unsigned>(parse_uint());
        }
        term *= MPoly::variable(name, e);
        any = true;
      } else {
        throw std::invalid_argument("polynomial parse error");
      }
      if (peek() == '*') {
        get();
        continue;
      }
      break;
    }
    if (!any) throw std::invalid_argument("empty term");
    return term;
  }

  Rat parse_rational() {
    Int num = parse_uint();
    if (peek() == '/') {
      get();
      Int den = parse_uint();
      if (den == 0) throw std::invalid_argument("zero denominator literal");
      return Rat(num, den);
    }
    return Rat(num);
  }

  Int parse_uint() {
    skip_ws();
    std::string digits;
    while (pos_ < s_.size() &&
           std::isdigit(static_cast<unsigned char>(s_[pos_])))
      digits += s_[pos_++];
    if (digits.empty()) throw std::invalid_argument("expected number");
    return Int(digits);
  }

  std::string parse_ident() {
    skip_ws();
    std::string name;
    while (pos_ < s_.size() &&
           (std::isalnum(static_cast<unsigned char>(s_[pos_])) ||
            s_[pos_] == '_'))
      name += s_[pos_++];
    if (name.empty()) throw std::invalid_argument("expected identifier");
    return name;
  }
};

inline MPoly MPoly::parse(const std::string& text) {
  return MPolyParser(text).parse();
}

inline std::ostream& operator<<(std::ostream& os, const MPoly& f) {
  return os << f.to_string();
}

}  // namespace zetaforge
