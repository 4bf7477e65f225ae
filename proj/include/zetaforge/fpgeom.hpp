#pragma once

#include <optional>
#include <vector>

#include "zetaforge/budget.hpp"
#include "zetaforge/mpoly.hpp"

namespace zetaforge {

// ---------------------------------------------------------------------------
// Brute-force projective geometry over prime fields: point counts, Jacobian
// smoothness, line search, Fano counts of linear subspaces on hypersurfaces,
// and pencils of skew-symmetric forms.
//
// Prime fields only; subspaces are enumerated exactly once via reduced
// row-echelon representatives.
// ---------------------------------------------------------------------------

namespace fp {

inline long long mod_pos(long long a, long long p) {
  long long r = a % p;
  return r < 0 ? r + p : r;
}

inline long long pow_mod(long long b, long long e, long long p) {
  long long r = 1 % p;
  b = mod_pos(b, p);
  while (e > 0) {
    if (e & 1) r = r * b % p;
    b = b * b % p;
    e >>= 1;
  }
  return r;
}

inline long long inv_mod(long long a, long long p) {
  a = mod_pos(a, p);
  if (a == 0) throw std::domain_error("inverse of zero mod p");
  return pow_mod(a, p - 2, p);
}

}  // namespace fp

// A multivariate polynomial reduced modulo p over a fixed ambient variable
// list (coordinates of P^{m-1}).
struct FpPoly {
  long long p = 0;
  int m = 0;
  std::vector<std::pair<std::vector<unsigned>, long long>> terms;
  int degree = -1;

  bool is_zero() const { return terms.empty(); }

  long long eval(const std::vector<long long>& x) const {
    long long acc = 0;
    for (const auto& [e, c] : terms) {
      long long t = c;
      for (int i = 0; i < m; ++i)
        if (e[static_cast<size_t>(i)])
          t = t * fp::pow_mod(x[static_cast<size_t>(i)],
                              e[static_cast<size_t>(i)], p) %
              p;
      acc = (acc + t) % p;
    }
    return acc;
  }

  FpPoly derivative(int var) const {
    FpPoly d{p, m, {}, -1};
    for (const auto& [e, c] : terms) {
      unsigned k = e[static_cast<size_t>(var)];
      if (k == 0) continue;
      long long nc = c * (k % static_cast<unsigned long long>(p)) % p;
      if (nc == 0) continue;
      auto ne = e;
      ne[static_cast<size_t>(var)] -= 1;
      d.terms.emplace_back(std::move(ne), nc);
    }
    for (const auto& [e, c] : d.terms) {
      int deg = 0;
      for (unsigned x : e) deg += static_cast<int>(x);
      d.degree = std::max(d.degree, deg);
    }
    return d;
  }
};

// Reduce an exact polynomial modulo p over the given ambient variables.
// Variables of f outside the ambient list are an error; rational coefficients
// whose denominator vanishes mod p are an error.
inline FpPoly reduce_mod_p(const MPoly& f, const std::vector<VarId>& ambient,
                           long long p) {
  FpPoly out{p, static_cast<int>(ambient.size()), {}, -1};
  std::vector<int> pos(f.vars().size(), -1);
  for (size_t i = 0; i < f.vars().size(); ++i) {
    auto it = std::find(ambient.begin(), ambient.end(), f.vars()[i]);
    if (it == ambient.end())
      throw std::invalid_argument("polynomial variable " +
                                  var_name(f.vars()[i]) +
                                  " is outside the ambient space");
    pos[i] = static_cast<int>(it - ambient.begin());
  }
  for (const auto& [e, c] : f.terms()) {
    Int num = numerator(c) % p, den = denominator(c) % p;
    if (den == 0)
      throw std::domain_error("coefficient denominator vanishes mod p");
    long long cn = fp::mod_pos(static_cast<long long>(num), p);
    long long cd = fp::mod_pos(static_cast<long long>(den), p);
    long long cm = cn * fp::inv_mod(cd, p) % p;
    if (cm == 0) continue;
    std::vector<unsigned> exp(ambient.size(), 0u);
    int deg = 0;
    for (size_t i = 0; i < e.size(); ++i) {
      exp[static_cast<size_t>(pos[i])] = e[i];
      deg += static_cast<int>(e[i]);
    }
    out.terms.emplace_back(std::move(exp), cm);
    out.degree = std::max(out.degree, deg);
  }
  return out;
}

// Infer the ambient coordinate list of a polynomial: variables named y_k span
// y_1..y_max; any other naming scheme uses the variables actually present.
inline std::vector<VarId> ambient_vars(const MPoly& f) {
  int max_y = 0;
  bool all_y = !f.vars().empty();
  for (VarId v : f.vars()) {
    std::string name = var_name(v);
    if (name.size() > 2 && name.rfind("y_", 0) == 0) {
      max_y = std::max(max_y, std::stoi(name.substr(2)));
    } else {
      all_y = false;
    }
  }
  if (all_y && max_y > 0) {
    std::vector<VarId> out;
    for (int k = 1; k <= max_y; ++k) out.push_back(var_y(k));
    return out;
  }
  return f.vars();
}

inline void require_homogeneous(const MPoly& f) {
  int deg = -1;
  for (const auto& [e, c] : f.terms()) {
    int d = 0;
    for (unsigned x : e) d += static_cast<int>(x);
    if (deg < 0) deg = d;
    if (d != deg)
      throw std::invalid_argument("polynomial is not homogeneous");
  }
}

inline Int proj_point_count(long long p, int m) {
  Int total = 0, pw = 1;
  for (int i = 0; i < m; ++i) {
    total += pw;
    pw *= p;
  }
  return total;
}

// Visit every point of P^{m-1}(F_p) once, normalized so the first nonzero
// coordinate is 1. Visitor returns false to stop early.
template <typename Visitor>
void for_each_proj_point(long long p, int m, Visitor&& visit) {
  std::vector<long long> x(static_cast<size_t>(m), 0);
  for (int lead = 0; lead < m; ++lead) {
    std::fill(x.begin(), x.end(), 0);
    x[static_cast<size_t>(lead)] = 1;
    while (true) {
      if (!visit(const_cast<const std::vector<long long>&>(x))) return;
      int i = m - 1;
      for (; i > lead; --i) {
        if (++x[static_cast<size_t>(i)] < p) break;
        x[static_cast<size_t>(i)] = 0;
      }
      if (i == lead) break;
    }
  }
}

// Visit each k-dimensional subspace of F_p^m exactly once through its reduced
// row-echelon basis (rows of the matrix passed to the visitor).
template <typename Visitor>
void for_each_subspace(long long p, int m, int k, Visitor&& visit) {
  std::vector<int> pivots(static_cast<size_t>(k));
  for (int i = 0; i < k; ++i) pivots[static_cast<size_t>(i)] = i;
  auto advance_pivots = [&]() {
    int i = k - 1;
    while (i >= 0 &&
           pivots[static_cast<size_t>(i)] == m - k + i)
      --i;
    if (i < 0) return false;
    ++pivots[static_cast<size_t>(i)];
    for (int j = i + 1; j < k; ++j)
      pivots[static_cast<size_t>(j)] = pivots[static_cast<size_t>(j - 1)] + 1;
    return true;
  };
  do {
    // free positions: (row r, col c) with c > pivot[r] and c not a pivot
    std::vector<std::pair<int, int>> free_pos;
    std::vector<bool> is_pivot(static_cast<size_t>(m), false);
    for (int r = 0; r < k; ++r)
      is_pivot[static_cast<size_t>(pivots[static_cast<size_t>(r)])] = true;
    for (int r = 0; r < k; ++r)
      for (int c = pivots[static_cast<size_t>(r)] + 1; c < m; ++c)
        if (!is_pivot[static_cast<size_t>(c)]) free_pos.emplace_back(r, c);
    std::vector<long long> fill(free_pos.size(), 0);
    while (true) {
      std::vector<std::vector<long long>> basis(
          static_cast<size_t>(k),
          std::vector<long long>(static_cast<size_t>(m), 0));
      for (int r = 0; r < k; ++r)
        basis[static_cast<size_t>(r)]
             [static_cast<size_t>(pivots[static_cast<size_t>(r)])] = 1;
      for (size_t i = 0; i < free_pos.size(); ++i)
        basis[static_cast<size_t>(free_pos[i].first)]
             [static_cast<size_t>(free_pos[i].second)] = fill[i];
      if (!visit(const_cast<const std::vector<std::vector<long long>>&>(
              basis)))
        return;
      size_t i = fill.size();
      while (i > 0) {
        --i;
        if (++fill[i] < p) break;
        fill[i] = 0;
        if (i == 0) {
          i = fill.size() + 1;
          break;
        }
      }
      if (fill.empty() || i == fill.size() + 1) break;
    }
  } while (advance_pivots());
}

inline Int subspace_count(long long p, int m, int k) {
  // Gaussian binomial [m choose k] evaluated at p
  Int num = 1, den = 1, pw = 1;
  std::vector<Int> ppows(static_cast<size_t>(m) + 1);
  for (int i = 0; i <= m; ++i) {
    ppows[static_cast<size_t>(i)] = pw;
    pw *= p;
  }
  for (int i = 0; i < k; ++i) {
    num *= ppows[static_cast<size_t>(m - i)] - 1;
    den *= ppows[static_cast<size_t>(i + 1)] - 1;
  }
  return num / den;
}

// Number of projective zeros of a homogeneous polynomial in P^{m-1}(F_p).
inline long long count_points(const MPoly& f, long long p,
                              std::optional<long long> budget = {},
                              std::optional<std::vector<VarId>> ambient = {}) {
  require_prime(p);
  require_homogeneous(f);
  std::vector<VarId> amb = ambient ? *ambient : ambient_vars(f);
  int m = static_cast<int>(amb.size());
  if (m == 0) throw std::invalid_argument("empty ambient space");
  Int npoints = proj_point_count(p, m);
  check_budget(npoints > Int(1) << 62 ? (1ll << 62)
                                      : static_cast<long long>(npoints),
               budget, "count_points");
  FpPoly fp_poly = reduce_mod_p(f, amb, p);
  long long count = 0;
  for_each_proj_point(p, m, [&](const std::vector<long long>& x) {
    if (fp_poly.eval(x) == 0) ++count;
    return true;
  });
  return count;
}

// Jacobian smoothness over the rational points: no point of P^{m-1}(F_p)
// annihilates f together with all partial derivatives.
inline bool is_smooth_mod_p(const MPoly& f, long long p,
                            std::optional<long long> budget = {},
                            std::optional<std::vector<VarId>> ambient = {}) {
  require_prime(p);
  require_homogeneous(f);
  std::vector<VarId> amb = ambient ? *ambient : ambient_vars(f);
  int m = static_cast<int>(amb.size());
  if (m == 0) throw std::invalid_argument("empty ambient space");
  Int npoints = proj_point_count(p, m);
  check_budget(npoints > Int(1) << 62 ? (1ll << 62)
                                      : static_cast<long long>(npoints),
               budget, "is_smooth_mod_p");
  FpPoly fp_poly = reduce_mod_p(f, amb, p);
  std::vector<FpPoly> partials;
  for (int i = 0; i < m; ++i) partials.push_back(fp_poly.derivative(i));
  bool smooth = true;
  for_each_proj_point(p, m, [&](const std::vector<long long>& x) {
    if (fp_poly.eval(x) != 0) return true;
    for (const FpPoly& d : partials)
      if (d.eval(x) != 0) return true;
    smooth = false;
    return false;
  });
  return smooth;
}

struct ProjLine {
  std::vector<long long> a, b;  // spanning points, rows of an RREF basis
};

// A projective line contained in the hypersurface f = 0, if one exists.
// In P^1 and P^0 there are no lines; returns nullopt (vacuously line-free).
inline std::optional<ProjLine> find_line(
    const MPoly& f, long long p, std::optional<long long> budget = {},
    std::optional<std::vector<VarId>> ambient = {}) {
  require_prime(p);
  require_homogeneous(f);
  std::vector<VarId> amb = ambient ? *ambient : ambient_vars(f);
  int m = static_cast<int>(amb.size());
  if (m < 3) return std::nullopt;
  Int nsub = subspace_count(p, m, 2);
  check_budget(nsub > Int(1) << 62 ? (1ll << 62)
                                   : static_cast<long long>(nsub),
               budget, "find_line");
  FpPoly fp_poly = reduce_mod_p(f, amb, p);
  std::optional<ProjLine> found;
  for_each_subspace(p, m, 2, [&](const std::vector<std::vector<long long>>&
                                     basis) {
    std::vector<long long> x(static_cast<size_t>(m));
    // points (1 : b) and (0 : 1) on the line
    for (long long b = 0; b <= p; ++b) {
      for (int i = 0; i < m; ++i) {
        long long v;
        if (b == p)
          v = basis[1][static_cast<size_t>(i)];
        else
          v = (basis[0][static_cast<size_t>(i)] +
               b * basis[1][static_cast<size_t>(i)]) %
              p;
        x[static_cast<size_t>(i)] = v;
      }
      if (fp_poly.eval(x) != 0) return true;
    }
    found = ProjLine{basis[0], basis[1]};
    return false;
  });
  return found;
}

// Number of projective k-planes contained in f = 0, via (k+1)-dimensional
// subspaces in row-echelon form.
inline long long fano_count(const MPoly& f, long long p, int k,
                            std::optional<long long> budget = {},
                            std::optional<std::vector<VarId>> ambient = {}) {
  require_prime(p);
  require_homogeneous(f);
  std::vector<VarId> amb = ambient ? *ambient : ambient_vars(f);
  int m = static_cast<int>(amb.size());
  if (k < 0 || k + 1 > m - 1)
    throw std::invalid_argument("fano_count needs 1 <= k+1 <= m-1");
  Int nsub = subspace_count(p, m, k + 1);
  check_budget(nsub > Int(1) << 62 ? (1ll << 62)
                                   : static_cast<long long>(nsub),
               budget, "fano_count");
  FpPoly fp_poly = reduce_mod_p(f, amb, p);
  long long count = 0;
  int dim = k + 1;
  std::vector<long long> x(static_cast<size_t>(m));
  for_each_subspace(p, m, dim, [&](const std::vector<std::vector<long long>>&
                                       basis) {
    bool inside = true;
    for_each_proj_point(p, dim, [&](const std::vector<long long>& coef) {
      for (int i = 0; i < m; ++i) {
        long long v = 0;
        for (int r = 0; r < dim; ++r)
          v += coef[static_cast<size_t>(r)] * basis[static_cast<size_t>(r)]
                                                   [static_cast<size_t>(i)];
        x[static_cast<size_t>(i)] = v % p;
      }
      if (fp_poly.eval(x) != 0) {
        inside = false;
        return false;
      }
      return true;
    });
    if (inside) ++count;
    return true;
  });
  return count;
}

// ---------------------------------------------------------------------------
// Pencils of skew-symmetric forms (for the isotropic-subspace properties).
// ---------------------------------------------------------------------------

struct SkewForm {
  long long p;
  int n;
  std::vector<std::vector<long long>> mat;

  SkewForm(long long p_, std::vector<std::vector<long long>> m_)
      : p(p_), n(static_cast<int>(m_.size())), mat(std::move(m_)) {
    require_prime(p);
    for (int i = 0; i < n; ++i) {
      if (static_cast<int>(mat[static_cast<size_t>(i)].size()) != n)
        throw std::invalid_argument("skew form matrix is not square");
      for (int j = 0; j < n; ++j)
        mat[static_cast<size_t>(i)][static_cast<size_t>(j)] =
            fp::mod_pos(mat[static_cast<size_t>(i)][static_cast<size_t>(j)],
                        p);
    }
    for (int i = 0; i < n; ++i) {
      if (mat[static_cast<size_t>(i)][static_cast<size_t>(i)] != 0)
        throw std::invalid_argument("skew form has nonzero diagonal");
      for (int j = 0; j < n; ++j)
        if ((mat[static_cast<size_t>(i)][static_cast<size_t>(j)] +
             mat[static_cast<size_t>(j)][static_cast<size_t>(i)]) %
                p !=
            0)
          throw std::invalid_argument("matrix is not antisymmetric mod p");
    }
  }

  long long apply(const std::vector<long long>& u,
                  const std::vector<long long>& v) const {
    long long acc = 0;
    for (int i = 0; i < n; ++i) {
      if (u[static_cast<size_t>(i)] == 0) continue;
      long long row = 0;
      for (int j = 0; j < n; ++j)
        row = (row + mat[static_cast<size_t>(i)][static_cast<size_t>(j)] *
                         v[static_cast<size_t>(j)]) %
              p;
      acc = (acc + u[static_cast<size_t>(i)] * row) % p;
    }
    return acc;
  }
};

namespace detail_fp {

// Pfaffian of phi + t*psi as a polynomial in t over F_p (coefficients indexed
// by t-degree), by expansion along the first active row.
inline std::vector<long long> pencil_pfaffian(const SkewForm& phi,
                                              const SkewForm& psi,
                                              std::vector<int> active) {
  long long p = phi.p;
  if (active.empty()) return {1 % p};
  auto polymul = [&](const std::vector<long long>& a,
                     const std::vector<long long>& b) {
    std::vector<long long> c(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i)
      for (size_t j = 0; j < b.size(); ++j)
        c[i + j] = (c[i + j] + a[i] * b[j]) % p;
    return c;
  };
  std::vector<long long> acc{0};
  int a = active[0];
  for (size_t j = 1; j < active.size(); ++j) {
    int b = active[j];
    std::vector<long long> entry{
        phi.mat[static_cast<size_t>(a)][static_cast<size_t>(b)],
        psi.mat[static_cast<size_t>(a)][static_cast<size_t>(b)]};
    if (entry[0] == 0 && entry[1] == 0) continue;
    std::vector<int> rest;
    for (size_t k = 1; k < active.size(); ++k)
      if (k != j) rest.push_back(active[k]);
    std::vector<long long> sub = pencil_pfaffian(phi, psi, rest);
    std::vector<long long> term = polymul(entry, sub);
    long long sign = (j % 2 == 1) ? 1 : p - 1;  // (-1)^(j-1)
    if (acc.size() < term.size()) acc.resize(term.size(), 0);
    for (size_t k = 0; k < term.size(); ++k)
      acc[k] = (acc[k] + sign * term[k]) % p;
  }
  return acc;
}

}  // namespace detail_fp

// True iff Pf(phi + t*psi) vanishes identically as a polynomial in t, i.e.
// every form of the pencil (including psi at infinity) is degenerate.
inline bool pencil_all_degenerate(const SkewForm& phi, const SkewForm& psi) {
  if (phi.n != psi.n || phi.p != psi.p)
    throw std::invalid_argument("pencil forms have mismatched dimensions");
  if (phi.n % 2 != 0) return true;  // odd-dimensional skew forms are singular
  std::vector<int> active(static_cast<size_t>(phi.n));
  for (int i = 0; i < phi.n; ++i) active[static_cast<size_t>(i)] = i;
  auto pf = detail_fp::pencil_pfaffian(phi, psi, active);
  for (long long c : pf)
    if (c % phi.p != 0) return false;
  return true;
}

// A target_dim-dimensional subspace isotropic for both forms, if one exists.
inline std::optional<std::vector<std::vector<long long>>>
common_isotropic_subspace(const SkewForm& phi, const SkewForm& psi,
                          int target_dim,
                          std::optional<long long> budget = {}) {
  if (phi.n != psi.n || phi.p != psi.p)
    throw std::invalid_argument("pencil forms have mismatched dimensions");
  if (target_dim < 0 || target_dim > phi.n)
    throw std::invalid_argument("bad isotropic target dimension");
  if (target_dim == 0) return std::vector<std::vector<long long>>{};
  Int nsub = subspace_count(phi.p, phi.n, target_dim);
  check_budget(nsub > Int(1) << 62 ? (1ll << 62)
                                   : static_cast<long long>(nsub),
               budget, "common_isotropic_subspace");
  std::optional<std::vector<std::vector<long long>>> found;
  for_each_subspace(
      phi.p, phi.n, target_dim,
      [&](const std::vector<std::vector<long long>>& basis) {
        for (size_t i = 0; i < basis.size(); ++i)
          for (size_t j = i + 1; j < basis.size(); ++j)
            if (phi.apply(basis[i], basis[j]) != 0 ||
                psi.apply(basis[i], basis[j]) != 0)
              return true;
        found = basis;
        return false;
      });
  return found;
}

}  // namespace zetaforge
