#pragma once

#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "zetaforge/budget.hpp"
#include "zetaforge/fpgeom.hpp"
#include "zetaforge/mpoly.hpp"

namespace zetaforge {

// ---------------------------------------------------------------------------
// Class-2 group presentations: an antisymmetric d x d matrix of integer
// linear forms in the central generators y_1..y_d', with the associated
// Pfaffian polynomial and hypothesis checks.
// ---------------------------------------------------------------------------

using LinearForm = std::vector<long long>;  // coefficient of y_k at slot k-1

struct Presentation {
  int d = 0;
  int dprime = 0;
  // M[i][j] is the form [x_{i+1}, x_{j+1}]; antisymmetric with zero diagonal.
  std::vector<std::vector<LinearForm>> M;
  std::vector<std::string> warnings;

  int hirsch_length() const { return d + dprime; }

  // entry as an exact polynomial in y_1..y_d'
  MPoly entry_poly(int i, int j) const {
    MPoly f = MPoly::zero();
    for (int k = 0; k < dprime; ++k) {
      long long c = M[static_cast<size_t>(i)][static_cast<size_t>(j)]
                     [static_cast<size_t>(k)];
      if (c != 0)
        f += MPoly::constant(Rat(c)) * MPoly::variable(var_y(k + 1));
    }
    return f;
  }

  // d x d integer matrix M(a) for a vector a of length d'
  std::vector<std::vector<long long>> matrix_at(
      const std::vector<long long>& a) const {
    std::vector<std::vector<long long>> out(
        static_cast<size_t>(d), std::vector<long long>(static_cast<size_t>(d), 0));
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        long long acc = 0;
        for (int k = 0; k < dprime; ++k)
          acc += M[static_cast<size_t>(i)][static_cast<size_t>(j)]
                  [static_cast<size_t>(k)] *
                 a[static_cast<size_t>(k)];
        out[static_cast<size_t>(i)][static_cast<size_t>(j)] = acc;
      }
    return out;
  }

  std::vector<VarId> y_vars() const {
    std::vector<VarId> out;
    for (int k = 1; k <= dprime; ++k) out.push_back(var_y(k));
    return out;
  }
};

// Parse the presentation document
//   { "d": int, "dprime": int,
//     "entries": [ { "i": int, "j": int, "form": [int x dprime] }, ... ] }
// with 1-based i < j; omitted pairs are zero; antisymmetry is auto-completed.
inline Presentation parse_presentation(const nlohmann::json& doc) {
  if (!doc.is_object() || !doc.contains("d") || !doc.contains("dprime"))
    throw std::invalid_argument("presentation document needs d and dprime");
  Presentation pres;
  pres.d = doc.at("d").get<int>();
  pres.dprime = doc.at("dprime").get<int>();
  if (pres.d < 2) throw std::invalid_argument("presentation needs d >= 2");
  if (pres.dprime < 1)
    throw std::invalid_argument("presentation needs dprime >= 1");
  pres.M.assign(static_cast<size_t>(pres.d),
                std::vector<LinearForm>(
                    static_cast<size_t>(pres.d),
                    LinearForm(static_cast<size_t>(pres.dprime), 0)));
  std::vector<std::vector<bool>> given(
      static_cast<size_t>(pres.d),
      std::vector<bool>(static_cast<size_t>(pres.d), false));
  if (doc.contains("entries")) {
    for (const auto& entry : doc.at("entries")) {
      int i = entry.at("i").get<int>();
      int j = entry.at("j").get<int>();
      if (i < 1 || j < 1 || i > pres.d || j > pres.d)
        throw std::invalid_argument("entry index out of range");
      LinearForm form = entry.at("form").get<LinearForm>();
      if (static_cast<int>(form.size()) != pres.dprime)
        throw std::invalid_argument("entry form has wrong length");
      bool nonzero = false;
      for (long long c : form) nonzero = nonzero || c != 0;
      if (i == j) {
        if (nonzero)
          throw std::invalid_argument(
              "diagonal commutator entry must be zero");
        continue;
      }
      LinearForm neg(form.size());
      for (size_t k = 0; k < form.size(); ++k) neg[k] = -form[k];
      auto& slot = pres.M[static_cast<size_t>(i - 1)][static_cast<size_t>(j - 1)];
      auto& oslot =
          pres.M[static_cast<size_t>(j - 1)][static_cast<size_t>(i - 1)];
      if (given[static_cast<size_t>(i - 1)][static_cast<size_t>(j - 1)]) {
        if (slot != form)
          throw std::invalid_argument(
              "inconsistent antisymmetry: entries for (i,j) and (j,i) clash");
      } else {
        slot = form;
        oslot = neg;
        given[static_cast<size_t>(i - 1)][static_cast<size_t>(j - 1)] = true;
        given[static_cast<size_t>(j - 1)][static_cast<size_t>(i - 1)] = true;
      }
    }
  }
  // a y_k no form mentions usually means dprime is overstated
  for (int k = 0; k < pres.dprime; ++k) {
    bool used = false;
    for (int i = 0; i < pres.d && !used; ++i)
      for (int j = 0; j < pres.d && !used; ++j)
        used = pres.M[static_cast<size_t>(i)][static_cast<size_t>(j)]
                     [static_cast<size_t>(k)] != 0;
    if (!used)
      pres.warnings.push_back("generator y_" + std::to_string(k + 1) +
                              " does not occur in any commutator");
  }
  return pres;
}

inline Presentation parse_presentation(const std::string& text) {
  return parse_presentation(nlohmann::json::parse(text));
}

inline Presentation load_presentation(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open " + path);
  nlohmann::json doc;
  in >> doc;
  return parse_presentation(doc);
}

// Serializer: entries sorted by (i, j), upper triangle only, zero forms
// omitted.
inline nlohmann::json serialize_presentation(const Presentation& pres) {
  nlohmann::json doc;
  doc["d"] = pres.d;
  doc["dprime"] = pres.dprime;
  nlohmann::json entries = nlohmann::json::array();
  for (int i = 1; i <= pres.d; ++i)
    for (int j = i + 1; j <= pres.d; ++j) {
      const LinearForm& form =
          pres.M[static_cast<size_t>(i - 1)][static_cast<size_t>(j - 1)];
      bool nonzero = false;
      for (long long c : form) nonzero = nonzero || c != 0;
      if (!nonzero) continue;
      entries.push_back({{"i", i}, {"j", j}, {"form", form}});
    }
  doc["entries"] = entries;
  return doc;
}

namespace detail {

// determinant of a matrix of polynomials by column-subset dynamic programming
inline MPoly poly_determinant(const std::vector<std::vector<MPoly>>& m) {
  size_t n = m.size();
  if (n == 0) return MPoly::one();
  std::vector<MPoly> dp(size_t(1) << n, MPoly::zero());
  dp[0] = MPoly::one();
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    if (dp[mask].is_zero()) continue;
    size_t row = static_cast<size_t>(__builtin_popcount(mask));
    if (row == n) continue;
    int parity = 0;
    for (size_t col = 0; col < n; ++col) {
      if (mask & (1u << col)) continue;
      const MPoly& e = m[row][col];
      if (!e.is_zero()) {
        MPoly term = dp[mask] * e;
        dp[mask | (1u << col)] +=
            (parity % 2 == 0) ? term : term.negated();
      }
      ++parity;
    }
  }
  return dp[(size_t(1) << n) - 1];
}

// combinatorial Pfaffian: expansion along the first active index; the
// matching (12)(34)... carries coefficient +1
inline MPoly poly_pfaffian(const std::vector<std::vector<MPoly>>& m,
                           std::vector<int> active) {
  if (active.empty()) return MPoly::one();
  MPoly acc = MPoly::zero();
  int a = active[0];
  for (size_t j = 1; j < active.size(); ++j) {
    int b = active[static_cast<size_t>(j)];
    const MPoly& e = m[static_cast<size_t>(a)][static_cast<size_t>(b)];
    if (e.is_zero()) continue;
    std::vector<int> rest;
    for (size_t k = 1; k < active.size(); ++k)
      if (k != j) rest.push_back(active[k]);
    MPoly term = e * poly_pfaffian(m, rest);
    acc += (j % 2 == 1) ? term : term.negated();
  }
  return acc;
}

}  // namespace detail

// Pf(M(y)) as a polynomial in y_1..y_d'. Zero when d is odd. The square
// identity Pf^2 = det(M) is checked on every call.
inline MPoly pfaffian(const Presentation& pres) {
  if (pres.d % 2 != 0) return MPoly::zero();
  std::vector<std::vector<MPoly>> m(
      static_cast<size_t>(pres.d),
      std::vector<MPoly>(static_cast<size_t>(pres.d)));
  for (int i = 0; i < pres.d; ++i)
    for (int j = 0; j < pres.d; ++j)
      m[static_cast<size_t>(i)][static_cast<size_t>(j)] =
          pres.entry_poly(i, j);
  std::vector<int> active(static_cast<size_t>(pres.d));
  for (int i = 0; i < pres.d; ++i) active[static_cast<size_t>(i)] = i;
  MPoly pf = detail::poly_pfaffian(m, active);
  MPoly det = detail::poly_determinant(m);
  if (pf * pf != det)
    throw std::logic_error("pfaffian square check failed");
  return pf;
}

struct GroupInvariants {
  int d = 0;
  int dprime = 0;
  MPoly pf;
  bool has_hypersurface = false;  // d even and Pf not identically zero
  int pfaffian_degree = 0;        // r = d/2 when defined
};

inline GroupInvariants group_invariants(const Presentation& pres) {
  GroupInvariants inv;
  inv.d = pres.d;
  inv.dprime = pres.dprime;
  inv.pf = pfaffian(pres);
  inv.has_hypersurface = !inv.pf.is_zero();
  inv.pfaffian_degree = inv.has_hypersurface ? pres.d / 2 : 0;
  return inv;
}

// ---------------------------------------------------------------------------
// Hypothesis report: everything checkable at a given prime. Irreducibility
// over Q is never decided here; it is recorded as a user assertion.
// ---------------------------------------------------------------------------

struct HypothesisReport {
  long long prime = 0;
  bool pf_nonzero = false;
  std::string irreducible_over_Q = "unchecked";  // or "asserted"
  std::optional<bool> smooth_mod_p;              // nullopt: not checked
  bool smooth_vacuous = false;
  std::optional<bool> line_free_mod_p;
  bool lines_vacuous = false;
  std::optional<long long> n_points;
  bool degree_preserved_mod_p = false;
  std::optional<bool> good_reduction;  // smooth and degree preserved
  std::vector<std::string> notes;
};

namespace detail {

// squarefree test for a binary form mod p (distinct projective roots over the
// algebraic closure, including the point at infinity)
inline bool binary_form_squarefree(const FpPoly& f) {
  long long p = f.p;
  if (f.is_zero()) return false;
  int deg = f.degree;
  std::vector<long long> F(static_cast<size_t>(deg) + 1, 0);  // f(u, 1)
  for (const auto& [e, c] : f.terms) F[e[0]] = c;
  while (!F.empty() && F.back() == 0) F.pop_back();
  int degF = static_cast<int>(F.size()) - 1;
  int inf_multiplicity = deg - degF;
  if (inf_multiplicity > 1) return false;
  if (degF <= 0) return true;
  std::vector<long long> dF;
  for (int k = 1; k <= degF; ++k)
    dF.push_back(F[static_cast<size_t>(k)] * (k % p) % p);
  while (!dF.empty() && dF.back() == 0) dF.pop_back();
  // gcd(F, F') must be constant
  auto polymod = [&](std::vector<long long> a,
                     const std::vector<long long>& b) {
    long long lead_inv = fp::inv_mod(b.back(), p);
    while (a.size() >= b.size()) {
      long long c = a.back() * lead_inv % p;
      size_t shift = a.size() - b.size();
      for (size_t i = 0; i < b.size(); ++i)
        a[shift + i] = fp::mod_pos(a[shift + i] - c * b[i], p);
      while (!a.empty() && a.back() == 0) a.pop_back();
    }
    return a;
  };
  std::vector<long long> a = F, b = dF;
  while (!b.empty()) {
    auto r = polymod(a, b);
    a = b;
    b = r;
  }
  return a.size() <= 1;
}

}  // namespace detail

inline HypothesisReport hypothesis_report(
    const Presentation& pres, long long prime, bool assert_irreducible = false,
    std::optional<long long> budget = {}) {
  require_prime(prime);
  HypothesisReport rep;
  rep.prime = prime;
  MPoly pf = pfaffian(pres);
  rep.pf_nonzero = !pf.is_zero();
  rep.irreducible_over_Q = assert_irreducible ? "asserted" : "unchecked";
  if (!rep.pf_nonzero) {
    rep.notes.push_back(pres.d % 2 != 0
                            ? "d odd: no Pfaffian hypersurface"
                            : "Pfaffian vanishes identically");
    return rep;
  }
  std::vector<VarId> amb = pres.y_vars();
  int m = pres.dprime;
  FpPoly reduced = reduce_mod_p(pf, amb, prime);
  rep.degree_preserved_mod_p = reduced.degree == pf.total_degree();
  if (!rep.degree_preserved_mod_p)
    rep.notes.push_back("Pfaffian degree drops mod p");

  try {
    rep.n_points = count_points(pf, prime, budget, amb);
  } catch (const budget_error&) {
    rep.notes.push_back("n_points unchecked: budget exceeded");
  }

  if (m == 1) {
    rep.smooth_vacuous = true;
    rep.smooth_mod_p = true;
    rep.lines_vacuous = true;
    rep.line_free_mod_p = true;
    rep.notes.push_back("dprime = 1: empty zero locus in P^0 is vacuous");
  } else if (m == 2) {
    // finite subscheme of P^1: smooth means distinct roots over the closure
    rep.smooth_mod_p = detail::binary_form_squarefree(reduced);
    rep.lines_vacuous = true;
    rep.line_free_mod_p = true;
    rep.notes.push_back(
        "dprime = 2: smoothness checked as squarefreeness of the binary "
        "form; line-freeness vacuous in P^1");
  } else {
    try {
      rep.smooth_mod_p = is_smooth_mod_p(pf, prime, budget, amb);
    } catch (const budget_error&) {
      rep.notes.push_back("smoothness unchecked: budget exceeded");
    }
    try {
      rep.line_free_mod_p = !find_line(pf, prime, budget, amb).has_value();
    } catch (const budget_error&) {
      rep.notes.push_back("line search unchecked: budget exceeded");
    }
  }
  if (rep.smooth_mod_p.has_value())
    rep.good_reduction = *rep.smooth_mod_p && rep.degree_preserved_mod_p;
  return rep;
}

}  // namespace zetaforge
