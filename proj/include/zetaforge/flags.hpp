#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>
#include <vector>

#include "zetaforge/ratfn.hpp"

namespace zetaforge {

// ---------------------------------------------------------------------------
// Flag variety combinatorics: Gaussian binomials, point counts b_I(q) of
// partial flag varieties, Schubert cell polynomials c_I(q) indexed by descent
// type, and the rational function F_n(q, X) they assemble into.
// ---------------------------------------------------------------------------

// A flag type: ambient rank n and a strictly increasing subset I of [n-1].
// Members of I are the codimensions occurring in the flag; I may be empty.
struct FlagType {
  int n;
  std::vector<int> I;

  FlagType(int n_, std::vector<int> I_) : n(n_), I(std::move(I_)) {
    if (n < 1) throw std::invalid_argument("flag type needs rank >= 1");
    int prev = 0;
    for (int i : I) {
      if (i <= prev || i > n - 1)
        throw std::invalid_argument(
            "flag type subset must be strictly increasing within [1, n-1]");
      prev = i;
    }
  }
};

// [n choose k]_q, the number of k-dimensional subspaces of F_q^n.
inline MPoly gaussian_binomial(int n, int k) {
  if (k < 0 || k > n)
    throw std::invalid_argument("gaussian binomial needs 0 <= k <= n");
  // [n k] = [n-1 k-1] + q^k [n-1 k]
  std::vector<MPoly> row(1, MPoly::one());  // row of [m choose j] for j <= m
  for (int m = 1; m <= n; ++m) {
    std::vector<MPoly> next(static_cast<size_t>(std::min(m, k)) + 1);
    next[0] = MPoly::one();
    for (int j = 1; j <= std::min(m, k); ++j) {
      MPoly upper = (j < m && static_cast<size_t>(j) < row.size())
                        ? row[static_cast<size_t>(j)]
                        : MPoly::zero();
      next[static_cast<size_t>(j)] =
          row[static_cast<size_t>(j - 1)] +
          MPoly::variable(var_q(), static_cast<unsigned>(j)) * upper;
    }
    row = std::move(next);
  }
  return row[static_cast<size_t>(k)];
}

// b_I(q): F_q-points of the variety of flags of type I, as the telescoping
// product of Gaussian binomials along the codimension chain.
inline MPoly flag_count(const FlagType& ft) {
  MPoly b = MPoly::one();
  int prev = 0;
  for (int i : ft.I) {
    b *= gaussian_binomial(ft.n - prev, i - prev);
    prev = i;
  }
  return b;
}

// dim F_I, read off as the q-degree of b_I.
inline int flag_dimension(const FlagType& ft) {
  return std::max(flag_count(ft).total_degree(), 0);
}

// Descent set and inversion count of a permutation given in one-line form
// (entries are 1..n in some order).
inline std::pair<std::vector<int>, int> permutation_type(
    const std::vector<int>& w) {
  int n = static_cast<int>(w.size());
  std::vector<bool> seen(static_cast<size_t>(n) + 1, false);
  for (int x : w) {
    if (x < 1 || x > n || seen[static_cast<size_t>(x)])
      throw std::invalid_argument("not a permutation of 1..n");
    seen[static_cast<size_t>(x)] = true;
  }
  std::vector<int> descents;
  for (int i = 0; i + 1 < n; ++i)
    if (w[static_cast<size_t>(i + 1)] < w[static_cast<size_t>(i)])
      descents.push_back(i + 1);
  int inv = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (w[static_cast<size_t>(i)] > w[static_cast<size_t>(j)]) ++inv;
  return {descents, inv};
}

namespace detail {

constexpr int kMaxPermutationRank = 12;

inline void check_permutation_rank(int n) {
  if (n > kMaxPermutationRank)
    throw std::invalid_argument("permutation enumeration capped at rank 12");
}

inline unsigned subset_mask(const std::vector<int>& I) {
  unsigned m = 0;
  for (int i : I) m |= 1u << (i - 1);
  return m;
}

inline std::vector<int> mask_subset(unsigned m, int n) {
  std::vector<int> I;
  for (int i = 1; i <= n - 1; ++i)
    if (m & (1u << (i - 1))) I.push_back(i);
  return I;
}

}  // namespace detail

// All c_I(q) at once, as sums of q^{l(w)} over permutations of descent type I.
inline std::map<unsigned, MPoly> schubert_c_by_enumeration(int n) {
  detail::check_permutation_rank(n);
  std::map<unsigned, MPoly> out;
  std::vector<int> w(static_cast<size_t>(n));
  std::iota(w.begin(), w.end(), 1);
  do {
    auto [descents, len] = permutation_type(w);
    out[detail::subset_mask(descents)] +=
        MPoly::variable(var_q(), static_cast<unsigned>(len));
  } while (std::next_permutation(w.begin(), w.end()));
  return out;
}

// c_I(q) by inclusion-exclusion over the b_J.
inline MPoly schubert_c_by_moebius(const FlagType& ft) {
  unsigned full = detail::subset_mask(ft.I);
  MPoly c = MPoly::zero();
  int l = static_cast<int>(ft.I.size());
  for (unsigned sub = full;; sub = (sub - 1) & full) {
    FlagType sub_ft(ft.n, detail::mask_subset(sub, ft.n));
    int sign_exp = l - static_cast<int>(sub_ft.I.size());
    MPoly term = flag_count(sub_ft);
    c += (sign_exp % 2 == 0) ? term : term.negated();
    if (sub == 0) break;
  }
  return c;
}

// c_I(q), computed both by inclusion-exclusion and by Schubert cell
// enumeration; the two must agree.
inline MPoly schubert_c(const FlagType& ft) {
  MPoly via_moebius = schubert_c_by_moebius(ft);
  MPoly via_cells = MPoly::zero();
  auto all = schubert_c_by_enumeration(ft.n);
  auto it = all.find(detail::subset_mask(ft.I));
  if (it != all.end()) via_cells = it->second;
  if (via_moebius != via_cells)
    throw std::logic_error(
        "Schubert polynomial cross-check failed: inclusion-exclusion and "
        "cell enumeration disagree");
  return via_moebius;
}

// F_n(q, X) = sum over I of b_I(q) prod_{i in I} X_i/(1-X_i), written over
// the common denominator prod (1-X_i). F_1 = 1.
inline RatFn flag_fn(int n) {
  if (n < 1) throw std::invalid_argument("flag_fn needs n >= 1");
  MPoly num = MPoly::zero();
  for (unsigned mask = 0; mask < (1u << (n - 1)); ++mask) {
    FlagType ft(n, detail::mask_subset(mask, n));
    MPoly term = schubert_c_by_moebius(ft);
    for (int i : ft.I) term *= MPoly::variable(var_X(i));
    num += term;
  }
  std::vector<MPoly> den;
  for (int i = 1; i <= n - 1; ++i)
    den.push_back(MPoly::one() - MPoly::variable(var_X(i)));
  return RatFn::of_factored(num, den);
}

// F_n(q^-1, X^-1) = (-1)^(n-1) q^-binom(n,2) F_n(q, X), checked symbolically.
inline bool check_flag_funeq(int n) {
  if (n < 2) throw std::invalid_argument("flag functional equation needs n >= 2");
  RatFn f = flag_fn(n);
  std::set<VarId> vars{var_q()};
  for (int i = 1; i <= n - 1; ++i) vars.insert(var_X(i));
  RatFn lhs = f.invert_vars(vars);
  long binom = static_cast<long>(n) * (n - 1) / 2;
  RatFn rhs = f * RatFn(Rat(n % 2 == 1 ? 1 : -1)) /
              RatFn(MPoly::variable(var_q(), static_cast<unsigned>(binom)));
  return lhs.equals(rhs);
}

}  // namespace zetaforge
