#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "zetaforge/budget.hpp"
#include "zetaforge/flags.hpp"
#include "zetaforge/presentation.hpp"

namespace zetaforge {

// ---------------------------------------------------------------------------
// Brute-force lattice enumeration: Hermite normal forms for sublattices of
// Z^h, Smith normal forms for elementary divisors, lattice types, the
// congruence-kernel weight, and ideal counting in the associated Lie ring.
//
// Convention: a sublattice is the row span of an upper-triangular integer
// matrix with positive diagonal; entries above a pivot are reduced modulo
// that column's pivot. This representative is unique per sublattice and its
// determinant is the index.
// ---------------------------------------------------------------------------

using IntMatrix = std::vector<std::vector<long long>>;

inline long long pow_ll(long long b, int e) {
  long long r = 1;
  for (int i = 0; i < e; ++i) r *= b;
  return r;
}

// Number of sublattices of Z^h of index exactly p^N (the matrices
// for_each_hnf visits), by summing the above-diagonal choices over diagonal
// exponent compositions.
inline Int hnf_count(int h, long long p, int N) {
  // f[i][n]: choices filling columns i.. with total exponent n
  std::vector<std::vector<Int>> f(static_cast<size_t>(h) + 1,
                                  std::vector<Int>(static_cast<size_t>(N) + 1,
                                                   Int(0)));
  for (int n = 0; n <= N; ++n)
    f[static_cast<size_t>(h)][static_cast<size_t>(n)] = (n == 0) ? 1 : 0;
  for (int i = h - 1; i >= 0; --i) {
    for (int n = 0; n <= N; ++n) {
      Int acc = 0;
      Int column_choices = 1;  // p^{e*i}: i entries above the pivot
      Int step = 1;
      for (int j = 0; j < i; ++j) step *= p;
      for (int e = 0; e <= n; ++e) {
        acc += column_choices * f[static_cast<size_t>(i + 1)]
                                 [static_cast<size_t>(n - e)];
        column_choices *= step;
      }
      f[static_cast<size_t>(i)][static_cast<size_t>(n)] = acc;
    }
  }
  return f[0][static_cast<size_t>(N)];
}

// Visit every sublattice of Z^h of index exactly p^N once, as HNF row-span
// matrices. The visitor may not retain the reference.
template <typename Visitor>
void for_each_hnf(int h, long long p, int N, Visitor&& visit) {
  std::vector<int> exps(static_cast<size_t>(h), 0);
  IntMatrix m(static_cast<size_t>(h),
              std::vector<long long>(static_cast<size_t>(h), 0));

  std::function<void(int, int)> rec = [&](int col, int remaining) {
    if (col == h) {
      if (remaining != 0) return;
      for (int i = 0; i < h; ++i)
        for (int j = 0; j < h; ++j)
          m[static_cast<size_t>(i)][static_cast<size_t>(j)] =
              (i == j) ? pow_ll(p, exps[static_cast<size_t>(i)]) : 0;
      // odometer over entries above pivots with nontrivial modulus
      std::vector<std::pair<int, int>> cells;
      for (int c = 0; c < h; ++c)
        if (exps[static_cast<size_t>(c)] > 0)
          for (int r = 0; r < c; ++r) cells.emplace_back(r, c);
      while (true) {
        visit(const_cast<const IntMatrix&>(m));
        size_t i = 0;
        for (; i < cells.size(); ++i) {
          auto [r, c] = cells[i];
          long long cap = m[static_cast<size_t>(c)][static_cast<size_t>(c)];
          if (++m[static_cast<size_t>(r)][static_cast<size_t>(c)] < cap)
            break;
          m[static_cast<size_t>(r)][static_cast<size_t>(c)] = 0;
        }
        if (i == cells.size()) break;
      }
      return;
    }
    for (int e = 0; e <= remaining; ++e) {
      exps[static_cast<size_t>(col)] = e;
      rec(col + 1, remaining - e);
    }
    exps[static_cast<size_t>(col)] = 0;
  };
  rec(0, N);
}

// Convenience wrapper with a budget guard, visiting indices p^0..p^N.
template <typename Visitor>
void enumerate_sublattices(int h, long long p, int N, Visitor&& visit,
                           std::optional<long long> budget = {}) {
  require_prime(p);
  Int total = 0;
  for (int k = 0; k <= N; ++k) total += hnf_count(h, p, k);
  check_budget(total > Int(1) << 62 ? (1ll << 62)
                                    : static_cast<long long>(total),
               budget, "enumerate_sublattices");
  for (int k = 0; k <= N; ++k) for_each_hnf(h, p, k, visit);
}

inline long long hnf_determinant(const IntMatrix& m) {
  long long det = 1;
  for (size_t i = 0; i < m.size(); ++i) det *= m[i][i];
  return det;
}

inline bool is_maximal_lattice(const IntMatrix& m, long long p) {
  for (const auto& row : m)
    for (long long x : row)
      if (x % p != 0) return true;
  return false;
}

// ---------------------------------------------------------------------------
// Smith normal form for small integer matrices.
// ---------------------------------------------------------------------------

struct SmithResult {
  std::vector<long long> divisors;  // non-negative, each divides the next
  IntMatrix left;                   // U with U * A * V = diag(divisors)
};

inline SmithResult smith_with_left(IntMatrix a) {
  int n = static_cast<int>(a.size());
  int m = n == 0 ? 0 : static_cast<int>(a[0].size());
  IntMatrix u(static_cast<size_t>(n),
              std::vector<long long>(static_cast<size_t>(n), 0));
  for (int i = 0; i < n; ++i) u[static_cast<size_t>(i)][static_cast<size_t>(i)] = 1;

  auto row_op = [&](int dst, int src, long long q) {  // row_dst -= q*row_src
    for (int j = 0; j < m; ++j)
      a[static_cast<size_t>(dst)][static_cast<size_t>(j)] -=
          q * a[static_cast<size_t>(src)][static_cast<size_t>(j)];
    for (int j = 0; j < n; ++j)
      u[static_cast<size_t>(dst)][static_cast<size_t>(j)] -=
          q * u[static_cast<size_t>(src)][static_cast<size_t>(j)];
  };
  auto col_op = [&](int dst, int src, long long q) {  // col_dst -= q*col_src
    for (int i = 0; i < n; ++i)
      a[static_cast<size_t>(i)][static_cast<size_t>(dst)] -=
          q * a[static_cast<size_t>(i)][static_cast<size_t>(src)];
  };
  auto swap_rows = [&](int i, int j) {
    std::swap(a[static_cast<size_t>(i)], a[static_cast<size_t>(j)]);
    std::swap(u[static_cast<size_t>(i)], u[static_cast<size_t>(j)]);
  };
  auto swap_cols = [&](int i, int j) {
    for (int r = 0; r < n; ++r)
      std::swap(a[static_cast<size_t>(r)][static_cast<size_t>(i)],
                a[static_cast<size_t>(r)][static_cast<size_t>(j)]);
  };

  int rank = std::min(n, m);
  for (int k = 0; k < rank; ++k) {
    while (true) {
      // locate entry of minimal absolute value in the trailing submatrix
      int pi = -1, pj = -1;
      long long best = 0;
      for (int i = k; i < n; ++i)
        for (int j = k; j < m; ++j) {
          long long v = a[static_cast<size_t>(i)][static_cast<size_t>(j)];
          if (v != 0 && (pi < 0 || std::abs(v) < best)) {
            best = std::abs(v);
            pi = i;
            pj = j;
          }
        }
      if (pi < 0) break;  // trailing block is zero
      if (pi != k) swap_rows(k, pi);
      if (pj != k) swap_cols(k, pj);
      long long piv = a[static_cast<size_t>(k)][static_cast<size_t>(k)];
      bool clean = true;
      for (int i = k + 1; i < n; ++i) {
        long long v = a[static_cast<size_t>(i)][static_cast<size_t>(k)];
        if (v == 0) continue;
        long long q = v / piv;
        if (q != 0) row_op(i, k, q);
        if (a[static_cast<size_t>(i)][static_cast<size_t>(k)] != 0)
          clean = false;
      }
      for (int j = k + 1; j < m; ++j) {
        long long v = a[static_cast<size_t>(k)][static_cast<size_t>(j)];
        if (v == 0) continue;
        long long q = v / piv;
        if (q != 0) col_op(j, k, q);
        if (a[static_cast<size_t>(k)][static_cast<size_t>(j)] != 0)
          clean = false;
      }
      if (!clean) continue;
      // enforce that the pivot divides the rest of the submatrix
      bool divides = true;
      for (int i = k + 1; i < n && divides; ++i)
        for (int j = k + 1; j < m && divides; ++j)
          if (a[static_cast<size_t>(i)][static_cast<size_t>(j)] % piv != 0) {
            row_op(k, i, -1);  // add row i to row k and restart
            divides = false;
          }
      if (divides) break;
    }
    if (a[static_cast<size_t>(k)][static_cast<size_t>(k)] < 0) {
      for (int j = 0; j < m; ++j)
        a[static_cast<size_t>(k)][static_cast<size_t>(j)] =
            -a[static_cast<size_t>(k)][static_cast<size_t>(j)];
      for (int j = 0; j < n; ++j)
        u[static_cast<size_t>(k)][static_cast<size_t>(j)] =
            -u[static_cast<size_t>(k)][static_cast<size_t>(j)];
    }
  }
  SmithResult out;
  for (int k = 0; k < rank; ++k)
    out.divisors.push_back(a[static_cast<size_t>(k)][static_cast<size_t>(k)]);
  out.left = std::move(u);
  return out;
}

inline std::vector<long long> smith_divisors(const IntMatrix& a) {
  return smith_with_left(a).divisors;
}

// ---------------------------------------------------------------------------
// Lattice types.
// ---------------------------------------------------------------------------

struct LatticeType {
  std::vector<int> I;  // jump positions, subset of [d'-1]
  std::vector<int> r;  // jump sizes, parallel to I
  long long w = 0;     // index exponent of the maximal representative
  int scale = 0;       // p-power divided out to reach the maximal class

  bool operator==(const LatticeType& o) const { return I == o.I && r == o.r; }
};

// Read the type (I, r_I) off the elementary divisor sequence of the given
// d'-block lattice, after normalizing to the maximal representative of its
// homothety class. Also reports w = sum r_i (d'-i).
inline LatticeType lattice_type(const IntMatrix& block, long long p) {
  require_prime(p);
  SmithResult snf = smith_with_left(block);
  int dp = static_cast<int>(block.size());
  std::vector<int> nu;
  for (long long d : snf.divisors) {
    if (d <= 0)
      throw std::domain_error("lattice block is singular");
    int v = 0;
    while (d % p == 0) {
      d /= p;
      ++v;
    }
    if (d != 1)
      throw std::domain_error("elementary divisor is not a power of p");
    nu.push_back(v);
  }
  LatticeType t;
  t.scale = nu.empty() ? 0 : nu.front();
  for (int& v : nu) v -= t.scale;
  for (int i = 1; i <= dp - 1; ++i) {
    int jump = nu[static_cast<size_t>(i)] - nu[static_cast<size_t>(i - 1)];
    if (jump > 0) {
      t.I.push_back(i);
      t.r.push_back(jump);
      t.w += static_cast<long long>(jump) * (dp - i);
    }
  }
  return t;
}

// Lattice-type count: the closed formula b_I(p) p^{sum r_i (d'-i) i - dim F_I}
// evaluated exactly, cross-checked against exhaustive enumeration of maximal
// lattices of that type.
struct TypeCount {
  Int formula;
  Int enumerated;
};

inline Int type_count_formula(int dprime, const std::vector<int>& I,
                              const std::vector<int>& r, long long p) {
  FlagType ft(dprime, I);
  MPoly b = flag_count(ft);
  Int value = static_cast<Int>(numerator(b.eval({{var_q(), Rat(p)}})));
  long long expo = -flag_dimension(ft);
  for (size_t k = 0; k < I.size(); ++k)
    expo += static_cast<long long>(r[k]) * (dprime - I[k]) * I[k];
  if (expo < 0) throw std::logic_error("negative exponent in type count");
  for (long long i = 0; i < expo; ++i) value *= p;
  return value;
}

inline TypeCount count_lattices_of_type(int dprime, const std::vector<int>& I,
                                        const std::vector<int>& r, long long p,
                                        std::optional<long long> budget = {}) {
  if (I.size() != r.size())
    throw std::invalid_argument("type subset and multiplicities differ in length");
  for (int x : r)
    if (x < 1) throw std::invalid_argument("type multiplicities must be >= 1");
  require_prime(p);
  TypeCount out{type_count_formula(dprime, I, r, p), 0};
  long long w = 0;
  for (size_t k = 0; k < I.size(); ++k)
    w += static_cast<long long>(r[k]) * (dprime - I[k]);
  Int total = hnf_count(dprime, p, static_cast<int>(w));
  check_budget(total > Int(1) << 62 ? (1ll << 62)
                                    : static_cast<long long>(total),
               budget, "count_lattices_of_type");
  LatticeType want;
  want.I = I;
  want.r = r;
  for_each_hnf(dprime, p, static_cast<int>(w), [&](const IntMatrix& m) {
    if (!is_maximal_lattice(m, p)) return;
    if (lattice_type(m, p) == want) ++out.enumerated;
  });
  if (out.formula != out.enumerated)
    throw std::logic_error("lattice type count mismatch: formula " +
                           out.formula.str() + " vs enumeration " +
                           out.enumerated.str());
  return out;
}

// ---------------------------------------------------------------------------
// The congruence-kernel weight.
// ---------------------------------------------------------------------------

namespace detail_lat {

inline long long mulmod(long long a, long long b, long long m) {
  return static_cast<long long>(static_cast<__int128>(a) * b % m);
}

inline long long inv_unit_mod(long long a, long long m) {
  // extended Euclid; a must be a unit mod m
  long long r0 = m, r1 = ((a % m) + m) % m, s0 = 0, s1 = 1;
  while (r1 != 0) {
    long long q = r0 / r1;
    std::swap(r0 -= q * r1, r1);
    std::swap(s0 -= q * s1, s1);
  }
  if (r0 != 1) throw std::logic_error("non-unit in inv_unit_mod");
  return ((s0 % m) + m) % m;
}

// Valuations (capped at K) of the Smith divisors of a matrix over Z/p^K.
inline std::vector<int> padic_divisor_valuations(IntMatrix a, long long p,
                                                 int K, long long pK) {
  int n = static_cast<int>(a.size());
  int m = n == 0 ? 0 : static_cast<int>(a[0].size());
  for (auto& row : a)
    for (auto& x : row) x = ((x % pK) + pK) % pK;
  auto val = [&](long long x) {
    if (x == 0) return K;
    int v = 0;
    while (x % p == 0) {
      x /= p;
      ++v;
    }
    return std::min(v, K);
  };
  std::vector<int> out;
  int rank = std::min(n, m);
  for (int k = 0; k < rank; ++k) {
    int pi = -1, pj = -1, best = K;
    for (int i = k; i < n; ++i)
      for (int j = k; j < m; ++j) {
        int v = val(a[static_cast<size_t>(i)][static_cast<size_t>(j)]);
        if (v < best) {
          best = v;
          pi = i;
          pj = j;
        }
      }
    if (pi < 0) break;  // all remaining entries vanish mod p^K
    std::swap(a[static_cast<size_t>(k)], a[static_cast<size_t>(pi)]);
    for (int r = 0; r < n; ++r)
      std::swap(a[static_cast<size_t>(r)][static_cast<size_t>(k)],
                a[static_cast<size_t>(r)][static_cast<size_t>(pj)]);
    long long piv = a[static_cast<size_t>(k)][static_cast<size_t>(k)];
    long long pv = 1;
    for (int i = 0; i < best; ++i) pv *= p;
    long long unit_inv = inv_unit_mod(piv / pv, pK);
    for (int j = k; j < m; ++j)
      a[static_cast<size_t>(k)][static_cast<size_t>(j)] = mulmod(
          a[static_cast<size_t>(k)][static_cast<size_t>(j)], unit_inv, pK);
    for (int i = k + 1; i < n; ++i) {
      long long f = a[static_cast<size_t>(i)][static_cast<size_t>(k)] / pv;
      if (f == 0) continue;
      for (int j = k; j < m; ++j)
        a[static_cast<size_t>(i)][static_cast<size_t>(j)] =
            ((a[static_cast<size_t>(i)][static_cast<size_t>(j)] -
              mulmod(f, a[static_cast<size_t>(k)][static_cast<size_t>(j)],
                     pK)) %
                 pK +
             pK) %
            pK;
    }
    for (int j = k + 1; j < m; ++j) {
      long long f = a[static_cast<size_t>(k)][static_cast<size_t>(j)] / pv;
      if (f == 0) continue;
      for (int i = k; i < n; ++i)
        a[static_cast<size_t>(i)][static_cast<size_t>(j)] =
            ((a[static_cast<size_t>(i)][static_cast<size_t>(j)] -
              mulmod(f, a[static_cast<size_t>(i)][static_cast<size_t>(k)],
                     pK)) %
                 pK +
             pK) %
            pK;
    }
    out.push_back(best);
  }
  while (static_cast<int>(out.size()) < n) out.push_back(K);
  return out;
}

}  // namespace detail_lat

// log_p of the index in Z_p^d of the kernel of the congruence system
//   g * M(beta_i) == 0 mod p^{nu_i}   for i = 1..d',
// computed by a Smith reduction of the stacked d x (d*d') system over Z/p^K.
// Precision starts one digit above the largest modulus; saturation would
// trigger a retry with doubled precision.
inline long long congruence_kernel_log(const Presentation& pres,
                                       const IntMatrix& beta,
                                       const std::vector<int>& nu,
                                       long long p) {
  int d = pres.d, dp = pres.dprime;
  int nu_max = 0;
  for (int v : nu) nu_max = std::max(nu_max, v);
  if (nu_max == 0) return 0;
  int K = nu_max + 1;
  while (true) {
    long long pK = 1;
    for (int i = 0; i < K; ++i) {
      if (pK > (3ll << 60) / p)
        throw std::domain_error("congruence modulus exceeds 63-bit range");
      pK *= p;
    }
    IntMatrix stacked(static_cast<size_t>(d),
                      std::vector<long long>(static_cast<size_t>(d) * dp, 0));
    for (int i = 0; i < dp; ++i) {
      long long scale = 1;
      for (int s = 0; s < K - nu[static_cast<size_t>(i)]; ++s) scale *= p;
      scale %= pK;
      IntMatrix mb = pres.matrix_at(beta[static_cast<size_t>(i)]);
      for (int r = 0; r < d; ++r)
        for (int c = 0; c < d; ++c) {
          long long v = ((mb[static_cast<size_t>(r)][static_cast<size_t>(c)] %
                          pK) +
                         pK) %
                        pK;
          stacked[static_cast<size_t>(r)][static_cast<size_t>(i * d + c)] =
              detail_lat::mulmod(v, scale, pK);
        }
    }
    std::vector<int> vals =
        detail_lat::padic_divisor_valuations(stacked, p, K, pK);
    long long log_index = 0;
    bool saturated = false;
    for (int v : vals) {
      long long strength = K - std::min(v, K);
      if (strength > nu_max) saturated = true;
      log_index += strength;
    }
    if (!saturated) return log_index;
    K *= 2;  // precision was insufficient; retry with more digits
  }
}

// Weights of a maximal lattice in the d'-block: w (index exponent) and
// w' = w + log_p |G_p : X(Lambda')|.
struct LatticeWeights {
  long long w = 0;
  long long wprime = 0;
  LatticeType type;
};

inline LatticeWeights lattice_weights(const Presentation& pres,
                                      const IntMatrix& block, long long p) {
  int dp = pres.dprime;
  if (static_cast<int>(block.size()) != dp)
    throw std::invalid_argument("block size does not match dprime");
  // column-span decomposition block^T = U^{-1} D V^{-1}: the congruence
  // directions are the rows of U and the moduli the elementary divisors
  IntMatrix at(static_cast<size_t>(dp),
               std::vector<long long>(static_cast<size_t>(dp), 0));
  for (int i = 0; i < dp; ++i)
    for (int j = 0; j < dp; ++j)
      at[static_cast<size_t>(i)][static_cast<size_t>(j)] =
          block[static_cast<size_t>(j)][static_cast<size_t>(i)];
  SmithResult snf = smith_with_left(std::move(at));
  std::vector<int> nu;
  long long w = 0;
  for (long long dvr : snf.divisors) {
    if (dvr <= 0) throw std::domain_error("lattice block is singular");
    int v = 0;
    while (dvr % p == 0) {
      dvr /= p;
      ++v;
    }
    if (dvr != 1)
      throw std::domain_error("elementary divisor is not a power of p");
    nu.push_back(v);
    w += v;
  }
  if (nu.front() != 0)
    throw std::invalid_argument("lattice is not maximal in its class");
  LatticeWeights out;
  out.w = w;
  out.wprime = w + congruence_kernel_log(pres, snf.left, nu, p);
  out.type = lattice_type(block, p);
  return out;
}

// Truncated generating function A(p, t) = sum over maximal classes of
// p^{d w} t^{w'}, as exact coefficients a_0..a_N of t^0..t^N.
inline std::vector<Int> lattice_sum_A(const Presentation& pres, long long p,
                                      int N,
                                      std::optional<long long> budget = {}) {
  require_prime(p);
  std::vector<Int> acc(static_cast<size_t>(N) + 1, Int(0));
  Int total = 0;
  for (int w = 0; w <= N; ++w) total += hnf_count(pres.dprime, p, w);
  check_budget(total > Int(1) << 62 ? (1ll << 62)
                                    : static_cast<long long>(total),
               budget, "lattice_sum_A");
  for (int w = 0; w <= N; ++w) {
    for_each_hnf(pres.dprime, p, w, [&](const IntMatrix& m) {
      if (!is_maximal_lattice(m, p)) return;
      LatticeWeights lw = lattice_weights(pres, m, p);
      if (lw.wprime > N) return;
      Int term = 1;
      for (long long i = 0; i < static_cast<long long>(pres.d) * lw.w; ++i)
        term *= p;
      acc[static_cast<size_t>(lw.wprime)] += term;
    });
  }
  return acc;
}

// ---------------------------------------------------------------------------
// Ideal counting in the Lie ring L = Z^d (+) Z^d' with brackets
// [x_i, x_j] = M(y)_{ij} and central y-part.
// ---------------------------------------------------------------------------

enum class OracleStrategy { Auto, Direct, Factored };

namespace detail_lat {

// membership of a y-block vector in the row span of the upper-triangular
// block C (reduction against the pivots)
inline bool in_rowspan(std::vector<long long> v, const IntMatrix& c) {
  int dp = static_cast<int>(c.size());
  for (int k = 0; k < dp; ++k) {
    long long piv = c[static_cast<size_t>(k)][static_cast<size_t>(k)];
    long long rem = ((v[static_cast<size_t>(k)] % piv) + piv) % piv;
    if (rem != 0) return false;
    long long q = (v[static_cast<size_t>(k)] - rem) / piv;
    if (q != 0)
      for (int j = k; j < dp; ++j)
        v[static_cast<size_t>(j)] -=
            q * c[static_cast<size_t>(k)][static_cast<size_t>(j)];
  }
  return true;
}

}  // namespace detail_lat

// Direct route: enumerate every sublattice of Z^h of index p^k and test the
// bracket condition [L, Lambda] <= Lambda row by row.
inline std::vector<Int> ideal_counts_direct(const Presentation& pres,
                                            long long p, int N,
                                            std::optional<long long> budget = {}) {
  int d = pres.d, dp = pres.dprime, h = d + dp;
  Int total = 0;
  for (int k = 0; k <= N; ++k) total += hnf_count(h, p, k);
  check_budget(total > Int(1) << 62 ? (1ll << 62)
                                    : static_cast<long long>(total),
               budget, "ideal_counts");
  std::vector<Int> out(static_cast<size_t>(N) + 1, Int(0));
  // bracket coefficient tensors: mk[k][i][j] = coefficient of y_{k+1} in
  // [x_{i+1}, x_{j+1}]
  for (int k = 0; k <= N; ++k) {
    long long count = 0;
    for_each_hnf(h, p, k, [&](const IntMatrix& m) {
      IntMatrix cblock(static_cast<size_t>(dp),
                       std::vector<long long>(static_cast<size_t>(dp), 0));
      for (int i = 0; i < dp; ++i)
        for (int j = 0; j < dp; ++j)
          cblock[static_cast<size_t>(i)][static_cast<size_t>(j)] =
              m[static_cast<size_t>(d + i)][static_cast<size_t>(d + j)];
      std::vector<long long> v(static_cast<size_t>(dp));
      for (int row = 0; row < d; ++row) {
        for (int i = 0; i < d; ++i) {
          // v = y-coordinates of [x_{i+1}, row]
          bool nonzero = false;
          for (int kk = 0; kk < dp; ++kk) {
            long long acc = 0;
            for (int j = 0; j < d; ++j)
              acc += pres.M[static_cast<size_t>(i)][static_cast<size_t>(j)]
                           [static_cast<size_t>(kk)] *
                     m[static_cast<size_t>(row)][static_cast<size_t>(j)];
            v[static_cast<size_t>(kk)] = acc;
            nonzero = nonzero || acc != 0;
          }
          if (nonzero && !detail_lat::in_rowspan(v, cblock)) return;
        }
      }
      ++count;
    });
    out[static_cast<size_t>(k)] = count;
  }
  return out;
}

// Factored route: an ideal is determined by its y-block C, its x-projection
// A, and a free block of column residues. The bracket condition constrains A
// to a sublattice K(C) of Z^d that depends only on C, so the A-side collapses
// to a universal sublattice count.
inline std::vector<Int> ideal_counts_factored(const Presentation& pres,
                                              long long p, int N,
                                              std::optional<long long> budget = {}) {
  int d = pres.d, dp = pres.dprime;
  Int total = 0;
  for (int c = 0; c <= N; ++c) total += hnf_count(dp, p, c);
  check_budget(total > Int(1) << 62 ? (1ll << 62)
                                    : static_cast<long long>(total),
               budget, "ideal_counts");
  std::vector<Int> ndc(static_cast<size_t>(N) + 1);
  for (int k = 0; k <= N; ++k) ndc[static_cast<size_t>(k)] = hnf_count(d, p, k);
  std::vector<Int> out(static_cast<size_t>(N) + 1, Int(0));
  for (int c = 0; c <= N; ++c) {
    Int bfree = 1;  // column residues of the top-right block: (det C)^d
    for (long long i = 0; i < static_cast<long long>(c) * d; ++i) bfree *= p;
    for_each_hnf(dp, p, c, [&](const IntMatrix& cblock) {
      IntMatrix at(static_cast<size_t>(dp),
                   std::vector<long long>(static_cast<size_t>(dp), 0));
      for (int i = 0; i < dp; ++i)
        for (int j = 0; j < dp; ++j)
          at[static_cast<size_t>(i)][static_cast<size_t>(j)] =
              cblock[static_cast<size_t>(j)][static_cast<size_t>(i)];
      SmithResult snf = smith_with_left(std::move(at));
      std::vector<int> nu;
      for (long long dvr : snf.divisors) {
        int v = 0;
        while (dvr % p == 0) {
          dvr /= p;
          ++v;
        }
        nu.push_back(v);
      }
      long long v = congruence_kernel_log(pres, snf.left, nu, p);
      for (int k = c + static_cast<int>(v); k <= N; ++k)
        out[static_cast<size_t>(k)] +=
            bfree * ndc[static_cast<size_t>(k - c - v)];
    });
  }
  return out;
}

// Dirichlet coefficients a_0..a_N of the ideal zeta function at p: a_k is the
// number of ideals of index p^k in the Lie ring of the presentation.
inline std::vector<Int> ideal_counts(const Presentation& pres, long long p,
                                     int N,
                                     std::optional<long long> budget = {},
                                     OracleStrategy strategy = OracleStrategy::Auto) {
  require_prime(p);
  if (strategy == OracleStrategy::Direct)
    return ideal_counts_direct(pres, p, N, budget);
  if (strategy == OracleStrategy::Factored)
    return ideal_counts_factored(pres, p, N, budget);
  Int total = 0;
  for (int k = 0; k <= N; ++k)
    total += hnf_count(pres.hirsch_length(), p, k);
  return (total <= 2'000'000) ? ideal_counts_direct(pres, p, N, budget)
                              : ideal_counts_factored(pres, p, N, budget);
}

}  // namespace zetaforge
