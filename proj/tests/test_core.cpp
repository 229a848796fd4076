#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include "mlag/core.hpp"
#include "test_util.hpp"

using namespace mlag;
using testutil::rel_err;

TEST_CASE("multi-index basics and invariants") {
  MultiIndex n{2, 0, 3};
  CHECK(n.dim() == 3);
  CHECK(n.total() == 5);
  CHECK(n.factorial() == doctest::Approx(12.0));
  CHECK_THROWS_AS(MultiIndex(std::vector<int>{}), DomainError);
  CHECK_THROWS_AS((MultiIndex{1, -1}), DomainError);
  CHECK_THROWS_AS((MultiIndex{200, 200}).factorial(), DomainError);
  CHECK(MultiIndex::zeros(2).is_zero());
}

TEST_CASE("cpoint algebra") {
  CPoint x{cplx(1.0, 1.0), cplx(2.0, 0.0)};
  CPoint y{cplx(0.5, 0.0), cplx(0.0, 1.0)};
  auto h = hadamard(x, y);
  CHECK(h[0] == cplx(0.5, 0.5));
  CHECK(h[1] == cplx(0.0, 2.0));
  CHECK_THROWS_AS(quotient(x, CPoint{cplx(1.0), cplx(0.0)}), DomainError);
  CHECK(cpow(x, MultiIndex{2, 1}) == cplx(1.0, 1.0) * cplx(1.0, 1.0) * 2.0);
  CHECK(x.sum() == cplx(3.0, 1.0));
  CHECK(x.abs_sum() == doctest::Approx(std::sqrt(2.0) + 2.0));
}

TEST_CASE("series control validates its invariants") {
  CHECK_THROWS_AS(SeriesControl(10, -1e-9, 3), DomainError);
  CHECK_THROWS_AS(SeriesControl(10, 1e-9, 1), DomainError);
  CHECK_THROWS_AS(SeriesControl(1, 1e-9, 2), DomainError);
}

TEST_CASE("pochhammer examples") {
  CHECK(pochhammer(cplx(2.5, 1.0), 0) == cplx(1.0));
  CHECK(pochhammer(cplx(3.0), 4) == cplx(360.0));
  CHECK(pochhammer(cplx(-2.0), 3) == cplx(0.0));  // exact zero
}

TEST_CASE("pochhammer recurrence property") {
  std::mt19937_64 rng(7101);
  for (int trial = 0; trial < 50; ++trial) {
    cplx a = testutil::crand(rng, -5.0, 5.0, 2.0);
    int m = static_cast<int>(testutil::urand(rng, 0, 50));
    cplx lhs = pochhammer(a, m + 1);
    cplx rhs = pochhammer(a, m) * (a + static_cast<double>(m));
    CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, std::abs(lhs)));
  }
}

TEST_CASE("pochhammer_ratio examples") {
  CHECK(pochhammer_ratio(cplx(1.7, 0.3), cplx(1.7, 0.3), 12) == cplx(1.0));
  CHECK(rel_err(pochhammer_ratio(cplx(1.0), cplx(2.0), 3), cplx(0.25)) < 1e-15);
  // direct product oracle: (0.5 * 1.5) / (1.5 * 2.5)
  cplx oracle = (0.5 * 1.5) / (1.5 * 2.5);
  CHECK(rel_err(pochhammer_ratio(cplx(0.5), cplx(1.5), 2), oracle) < 1e-15);
  CHECK_THROWS_AS(pochhammer_ratio(cplx(1.0), cplx(-2.0), 5), PoleError);
}

TEST_CASE("log_gamma at known points") {
  CHECK(log_gamma(cplx(1.0)) == cplx(0.0));
  CHECK(rel_err(log_gamma(cplx(5.0)), cplx(std::log(24.0))) < 1e-14);
  CHECK(rel_err(log_gamma(cplx(0.5)), cplx(0.5 * std::log(M_PI))) < 1e-14);
  CHECK_THROWS_AS(log_gamma(cplx(0.0)), PoleError);
  CHECK_THROWS_AS(log_gamma(cplx(-3.0)), PoleError);
}

TEST_CASE("log_gamma functional equation in the right half-plane") {
  std::mt19937_64 rng(7102);
  for (int trial = 0; trial < 200; ++trial) {
    double re = testutil::urand(rng, 0.05, 50.0);
    double im = testutil::urand(rng, -50.0, 50.0);
    cplx z(re, im);
    if (std::abs(z) > 50.0) continue;
    cplx lhs = std::exp(log_gamma(z + 1.0));
    cplx rhs = z * std::exp(log_gamma(z));
    CHECK(rel_err(lhs, rhs) < 1e-12);
  }
}

TEST_CASE("log_gamma duplication formula off the negative axis") {
  // Gamma(2z) = 2^{2z-1}/sqrt(pi) Gamma(z) Gamma(z+1/2)
  std::mt19937_64 rng(7103);
  for (int trial = 0; trial < 100; ++trial) {
    cplx z = testutil::crand(rng, -20.0, 20.0, 10.0);
    if (std::abs(z.imag()) < 0.1) z += cplx(0.0, 0.2);
    cplx lhs = log_gamma(2.0 * z);
    cplx rhs = (2.0 * z - 1.0) * std::log(cplx(2.0)) - 0.5 * std::log(M_PI) +
               log_gamma(z) + log_gamma(z + 0.5);
    CHECK(std::abs(std::exp(lhs - rhs) - 1.0) < 1e-11);
  }
}

TEST_CASE("log_gamma conjugate symmetry and reflection consistency") {
  std::mt19937_64 rng(7104);
  for (int trial = 0; trial < 60; ++trial) {
    cplx z = testutil::crand(rng, -30.0, 30.0, 15.0);
    if (std::abs(z.imag()) < 0.05) z += cplx(0.0, 0.1);
    CHECK(std::abs(log_gamma(std::conj(z)) - std::conj(log_gamma(z))) <
          1e-11 * std::max(1.0, std::abs(log_gamma(z))));
    // Gamma(z)Gamma(1-z) sin(pi z) = pi, pointwise through exp
    cplx prod = std::exp(log_gamma(z) + log_gamma(1.0 - z)) *
                std::sin(M_PI * z);
    CHECK(rel_err(prod, cplx(M_PI)) < 1e-10);
  }
}

TEST_CASE("graded enumeration order and counts") {
  auto seq = graded_indices(1, 2);
  REQUIRE(seq.size() == 3);
  CHECK(seq[0] == MultiIndex{0});
  CHECK(seq[1] == MultiIndex{1});
  CHECK(seq[2] == MultiIndex{2});

  auto seq2 = graded_indices(2, 1);
  REQUIRE(seq2.size() == 3);
  CHECK(seq2[0] == MultiIndex{0, 0});
  CHECK(seq2[1] == MultiIndex{1, 0});
  CHECK(seq2[2] == MultiIndex{0, 1});

  CHECK(graded_indices(3, 2).size() == 10);  // C(5,3)

  for (int k = 1; k <= 3; ++k)
    for (int N = 0; N <= 8; ++N) {
      auto v = graded_indices(k, N);
      CHECK(v.size() == graded_count(k, N));
      std::set<std::vector<int>> seen;
      int prev_total = 0;
      for (const auto& n : v) {
        CHECK(n.total() <= N);
        CHECK(n.total() >= prev_total);  // shells in increasing order
        prev_total = n.total();
        CHECK(seen.insert(n.entries()).second);  // uniqueness
      }
    }
  CHECK_THROWS_AS(graded_indices(3, 100, 1000), BudgetError);
}

TEST_CASE("diagonal_collapse examples") {
  SeriesControl ctl(60, 1e-13, 3);
  auto one = [](int) { return cplx(1.0); };
  CHECK(rel_err(diagonal_collapse(one, CPoint{cplx(0.5), cplx(-0.5)}, ctl),
                cplx(1.0)) < 1e-14);
  CHECK(rel_err(diagonal_collapse(one, CPoint{cplx(0.1), cplx(0.2)}, ctl),
                cplx(std::exp(0.3))) < 1e-14);
  // f(n) = (2)_n with <x> = 0.1: binomial series (1 - 0.1)^{-2}
  auto f = [](int n) { return pochhammer(cplx(2.0), n); };
  CHECK(rel_err(diagonal_collapse(f, CPoint{cplx(0.05), cplx(0.05)}, ctl),
                cplx(1.0 / 0.81)) < 1e-13);
}

TEST_CASE("srivastava collapse identity by brute force") {
  std::mt19937_64 rng(7105);
  SeriesControl ctl(40, 1e-12, 3);
  for (int k = 1; k <= 3; ++k)
    for (int trial = 0; trial < 8; ++trial) {
      cplx a = testutil::crand(rng, 0.3, 2.0, 0.3);
      cplx c = testutil::crand(rng, 2.2, 3.5, 0.3);
      auto f = [&](int n) { return pochhammer_ratio(a, c, n); };
      CPoint x(testutil::cvec(rng, k, -0.3, 0.3, 0.2));
      // brute force over the graded enumeration of f(<n>) x^n / n!
      KahanC brute;
      for (const auto& n : graded_indices(k, 30))
        brute.add(f(n.total()) * cpow(x, n) / n.factorial());
      cplx collapsed = diagonal_collapse(f, x, ctl);
      CHECK(rel_err(brute.get(), collapsed) < 1e-12);
    }
}

TEST_CASE("vandermonde convolution for multi-index pochhammers") {
  std::mt19937_64 rng(7106);
  for (int k = 1; k <= 3; ++k)
    for (int trial = 0; trial < 5; ++trial) {
      cplx l1 = testutil::crand(rng, -2.0, 2.0, 1.0);
      cplx l2 = testutil::crand(rng, -2.0, 2.0, 1.0);
      for (const auto& m : graded_indices(k, 6)) {
        KahanC sum;
        // p runs over the box 0 <= p <= m
        std::vector<int> p(static_cast<size_t>(k), 0);
        for (;;) {
          int pt = 0;
          double pfact = 1.0, qfact = 1.0;
          for (int i = 0; i < k; ++i) {
            pt += p[static_cast<size_t>(i)];
            for (int t = 2; t <= p[static_cast<size_t>(i)]; ++t) pfact *= t;
            for (int t = 2; t <= m[i] - p[static_cast<size_t>(i)]; ++t)
              qfact *= t;
          }
          sum.add(pochhammer(l1, pt) * pochhammer(l2, m.total() - pt) /
                  (pfact * qfact));
          int i = k - 1;
          while (i >= 0 && p[static_cast<size_t>(i)] == m[i]) {
            p[static_cast<size_t>(i)] = 0;
            --i;
          }
          if (i < 0) break;
          ++p[static_cast<size_t>(i)];
        }
        cplx rhs = pochhammer(l1 + l2, m.total()) / m.factorial();
        CHECK(std::abs(sum.get() - rhs) <=
              1e-12 * std::max(1.0, std::abs(rhs)));
      }
    }
}

TEST_CASE("shell series declares convergence via the tail window") {
  SeriesControl ctl(50, 1e-10, 3);
  ShellSeries acc(ctl);
  // geometric shells: conversges quickly
  double v = 1.0;
  int fed = 0;
  for (int s = 0; s <= 50; ++s) {
    ++fed;
    if (!acc.add_shell(cplx(v))) break;
    v *= 0.1;
  }
  CHECK(acc.converged());
  CHECK(fed < 20);
  CHECK(rel_err(acc.value(), cplx(1.0 / 0.9)) < 1e-10);
}
