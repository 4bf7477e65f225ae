#include <catch2/catch_amalgamated.hpp>

#include <numeric>

#include "zetaforge/flags.hpp"

using namespace zetaforge;

namespace {

MPoly P(const std::string& s) { return MPoly::parse(s); }

// brute-force count of k-dimensional subspaces of F_p^m: ordered independent
// k-tuples divided by ordered bases of a k-space
long subspace_count(long p, int m, int k) {
  auto count_tuples = [&](int dim) {
    long total = 1, q_pow = 1;
    for (int i = 0; i < k; ++i) {
      long pm = 1;
      for (int j = 0; j < dim; ++j) pm *= p;
      total *= pm - q_pow;
      q_pow *= p;
    }
    return total;
  };
  return count_tuples(m) / count_tuples(k);
}

Rat eval_q(const MPoly& f, long q) {
  return f.eval({{var_q(), Rat(q)}});
}

std::vector<int> complement(const std::vector<int>& I, int n) {
  std::vector<int> out;
  for (int i = 1; i <= n - 1; ++i)
    if (std::find(I.begin(), I.end(), i) == I.end()) out.push_back(i);
  return out;
}

}  // namespace

TEST_CASE("gaussian binomials") {
  CHECK(gaussian_binomial(2, 1) == P("q + 1"));
  CHECK(gaussian_binomial(4, 2) == P("q^4 + q^3 + 2*q^2 + q + 1"));
  CHECK(gaussian_binomial(5, 0) == P("1"));
  CHECK(gaussian_binomial(5, 5) == P("1"));
  CHECK_THROWS_AS(gaussian_binomial(3, 4), std::invalid_argument);
  CHECK_THROWS_AS(gaussian_binomial(3, -1), std::invalid_argument);
  // value at q = 2 against brute-force subspace counting in F_2^4
  CHECK(eval_q(gaussian_binomial(4, 2), 2) == Rat(subspace_count(2, 4, 2)));
  CHECK(Rat(35) == Rat(subspace_count(2, 4, 2)));
  // palindromic coefficients, degree k(n-k)
  MPoly g = gaussian_binomial(6, 3);
  CHECK(g.total_degree() == 9);
  RatFn lhs = RatFn(g).invert_vars({var_q()});
  RatFn rhs = RatFn(g) / RatFn(MPoly::variable(var_q(), 9));
  CHECK(lhs.equals(rhs));
}

TEST_CASE("flag variety point counts") {
  CHECK(flag_count(FlagType(3, {})) == P("1"));
  CHECK(flag_count(FlagType(3, {1})) == P("q^2 + q + 1"));
  CHECK(flag_count(FlagType(3, {1, 2})) == P("q^3 + 2*q^2 + 2*q + 1"));
  // 7 hyperplanes of F_2^3; 21 complete flags over F_2
  CHECK(eval_q(flag_count(FlagType(3, {1})), 2) == Rat(7));
  CHECK(eval_q(flag_count(FlagType(3, {1, 2})), 2) == Rat(21));
  CHECK(flag_dimension(FlagType(3, {1})) == 2);
  CHECK_THROWS_AS(FlagType(3, {0, 1}), std::invalid_argument);
  CHECK_THROWS_AS(FlagType(3, {3}), std::invalid_argument);
}

TEST_CASE("permutation descent type and length") {
  auto [d1, l1] = permutation_type({3, 6, 5, 1, 4, 2});
  CHECK(d1 == std::vector<int>{2, 3, 5});

  auto [d2, l2] = permutation_type({1, 2, 3, 4});
  CHECK(d2.empty());
  CHECK(l2 == 0);

  auto [d3, l3] = permutation_type({5, 4, 3, 2, 1});
  CHECK(d3 == std::vector<int>{1, 2, 3, 4});
  CHECK(l3 == 10);

  CHECK_THROWS_AS(permutation_type({1, 1, 2}), std::invalid_argument);
  CHECK_THROWS_AS(permutation_type({0, 1}), std::invalid_argument);
}

TEST_CASE("schubert polynomials") {
  CHECK(schubert_c(FlagType(3, {1})) == P("q^2 + q"));
  CHECK(schubert_c(FlagType(5, {})) == P("1"));
  CHECK(schubert_c(FlagType(3, {1, 2})) == P("q^3"));
  CHECK_THROWS_AS(schubert_c_by_enumeration(13), std::invalid_argument);
}

TEST_CASE("b_I is the subset sum of c_J (Moebius inversion), n <= 7") {
  for (int n = 2; n <= 7; ++n) {
    auto cs = schubert_c_by_enumeration(n);
    for (unsigned mask = 0; mask < (1u << (n - 1)); ++mask) {
      FlagType ft(n, detail::mask_subset(mask, n));
      MPoly sum = MPoly::zero();
      for (unsigned sub = mask;; sub = (sub - 1) & mask) {
        auto it = cs.find(sub);
        if (it != cs.end()) sum += it->second;
        if (sub == 0) break;
      }
      REQUIRE(sum == flag_count(ft));
    }
  }
}

TEST_CASE("sum of all c_I is the q-factorial, n <= 7") {
  for (int n = 2; n <= 7; ++n) {
    auto cs = schubert_c_by_enumeration(n);
    MPoly total = MPoly::zero();
    for (const auto& [mask, c] : cs) total += c;
    MPoly qfact = MPoly::one();
    for (int i = 1; i <= n; ++i) {
      MPoly block = MPoly::zero();
      for (int k = 0; k < i; ++k)
        block += MPoly::variable(var_q(), static_cast<unsigned>(k));
      qfact *= block;
    }
    REQUIRE(total == qfact);
  }
}

TEST_CASE("coefficient palindromy a_{k,I} = a_{binom-k,I^c}, n <= 7") {
  for (int n = 2; n <= 7; ++n) {
    auto cs = schubert_c_by_enumeration(n);
    unsigned full = (1u << (n - 1)) - 1;
    long binom = static_cast<long>(n) * (n - 1) / 2;
    for (unsigned mask = 0; mask <= full; ++mask) {
      MPoly ci = cs.count(mask) ? cs[mask] : MPoly::zero();
      MPoly cc = cs.count(full ^ mask) ? cs[full ^ mask] : MPoly::zero();
      auto coeff = [&](const MPoly& f, long k) {
        Rat out = 0;
        int pos = f.var_pos(var_q());
        for (const auto& [e, c] : f.terms()) {
          long deg = (pos >= 0) ? static_cast<long>(e[static_cast<size_t>(pos)])
                                : 0;
          if (deg == k) out += c;
        }
        return out;
      };
      for (long k = 0; k <= binom; ++k)
        REQUIRE(coeff(ci, k) == coeff(cc, binom - k));
    }
  }
}

TEST_CASE("right multiplication by w_0 complements type and length, n <= 7") {
  for (int n = 2; n <= 7; ++n) {
    std::vector<int> w(static_cast<size_t>(n));
    std::iota(w.begin(), w.end(), 1);
    long binom = static_cast<long>(n) * (n - 1) / 2;
    do {
      // w * w_0 with w acting first: one-line word (n+1-w_1, ..., n+1-w_n)
      std::vector<int> ww0;
      for (int x : w) ww0.push_back(n + 1 - x);
      auto [dw, lw] = permutation_type(w);
      auto [dc, lc] = permutation_type(ww0);
      REQUIRE(lc == binom - lw);
      REQUIRE(dc == complement(dw, n));
    } while (std::next_permutation(w.begin(), w.end()));
  }
}

TEST_CASE("b_I(q^-1) = q^-dim b_I(q)") {
  for (int n = 2; n <= 6; ++n) {
    for (unsigned mask = 0; mask < (1u << (n - 1)); ++mask) {
      FlagType ft(n, detail::mask_subset(mask, n));
      MPoly b = flag_count(ft);
      RatFn lhs = RatFn(b).invert_vars({var_q()});
      RatFn rhs = RatFn(b) / RatFn(MPoly::variable(
                      var_q(), static_cast<unsigned>(flag_dimension(ft))));
      REQUIRE(lhs.equals(rhs));
    }
  }
}

TEST_CASE("flag rational function") {
  CHECK(flag_fn(1).to_string() == "1");
  CHECK(flag_fn(2).to_string() == "(q*X_1 + 1) / (1 - X_1)");
  RatFn f3 = flag_fn(3);
  MPoly expected_num = P("1") + P("q^2 + q") * P("X_1") +
                       P("q^2 + q") * P("X_2") + P("q^3") * P("X_1*X_2");
  RatFn expected =
      RatFn::of_factored(expected_num, {P("1 - X_1"), P("1 - X_2")});
  CHECK(f3.equals(expected));
}

TEST_CASE("flag functional equation, n = 2..5") {
  for (int n = 2; n <= 5; ++n) CHECK(check_flag_funeq(n));
}
