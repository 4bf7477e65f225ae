#pragma once

#include <optional>
#include <vector>

#include "zetaforge/lattice.hpp"
#include "zetaforge/zeta.hpp"

namespace zetaforge {

// ---------------------------------------------------------------------------
// Three-way comparison of a presentation's Dirichlet coefficients at a prime:
//   1. exhaustive ideal counting,
//   2. the closed form (when the Pfaffian route applies),
//   3. the prefactor series convolved with the enumerated lattice sum A.
// ---------------------------------------------------------------------------

struct CompareReport {
  long long prime = 0;
  int terms = 0;
  HypothesisReport hypothesis;
  long long n_points_used = -1;
  std::vector<Int> oracle;
  std::vector<Int> closed_form;    // empty when unavailable
  std::vector<Int> lattice_route;
  bool closed_form_available = false;
  bool agree = false;
  std::optional<int> first_divergence;
  bool expected_at_bad_prime = false;  // mismatch while hypotheses fail
};

inline std::vector<Int> series_to_ints(const std::vector<Rat>& s) {
  std::vector<Int> out;
  out.reserve(s.size());
  for (const Rat& c : s) {
    if (denominator(c) != 1)
      throw std::logic_error("zeta series coefficient is not an integer");
    out.push_back(numerator(c));
  }
  return out;
}

inline std::vector<Int> convolve_truncated(const std::vector<Int>& a,
                                           const std::vector<Int>& b, int N) {
  std::vector<Int> out(static_cast<size_t>(N) + 1, Int(0));
  for (int i = 0; i <= N && i < static_cast<int>(a.size()); ++i)
    for (int j = 0; i + j <= N && j < static_cast<int>(b.size()); ++j)
      out[static_cast<size_t>(i + j)] +=
          a[static_cast<size_t>(i)] * b[static_cast<size_t>(j)];
  return out;
}

inline CompareReport compare_report(const Presentation& pres, long long p,
                                    int N,
                                    std::optional<long long> budget = {},
                                    bool assert_irreducible = false) {
  CompareReport rep;
  rep.prime = p;
  rep.terms = N;
  rep.hypothesis = hypothesis_report(pres, p, assert_irreducible, budget);
  rep.oracle = ideal_counts(pres, p, N, budget);

  RatFn prefactor =
      zeta_lattice(pres.d) *
      zeta_p_shift(pres.d + pres.dprime,
                   static_cast<long>(pres.d) * pres.dprime);
  std::vector<Int> pref_series =
      series_to_ints(prefactor.series_coefficients(p, N));
  rep.lattice_route =
      convolve_truncated(pref_series, lattice_sum_A(pres, p, N, budget), N);

  GroupInvariants inv = group_invariants(pres);
  rep.closed_form_available =
      inv.has_hypersurface && rep.hypothesis.n_points.has_value();
  if (rep.closed_form_available) {
    rep.n_points_used = *rep.hypothesis.n_points;
    LocalZeta z =
        normal_zeta_smooth(pres, PointCount::constant(rep.n_points_used));
    rep.closed_form = series_to_ints(z.value.series_coefficients(p, N));
  }

  rep.agree = true;
  for (int k = 0; k <= N; ++k) {
    bool same = rep.oracle[static_cast<size_t>(k)] ==
                rep.lattice_route[static_cast<size_t>(k)];
    if (rep.closed_form_available)
      same = same && rep.oracle[static_cast<size_t>(k)] ==
                         rep.closed_form[static_cast<size_t>(k)];
    if (!same) {
      rep.agree = false;
      rep.first_divergence = k;
      break;
    }
  }
  bool hypotheses_fail =
      (rep.hypothesis.smooth_mod_p.has_value() &&
       !*rep.hypothesis.smooth_mod_p) ||
      (rep.hypothesis.line_free_mod_p.has_value() &&
       !*rep.hypothesis.line_free_mod_p) ||
      !rep.hypothesis.degree_preserved_mod_p;
  rep.expected_at_bad_prime = !rep.agree && hypotheses_fail;
  return rep;
}

}  // namespace zetaforge
