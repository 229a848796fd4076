#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "mlag/quadrature.hpp"
#include "test_util.hpp"

using namespace mlag;
using testutil::rel_err;

namespace {

double beta_moment(const QuadRule& r, int p) {
  Kahan acc;
  for (size_t i = 0; i < r.nodes.size(); ++i)
    acc.add(r.weights[i] * std::pow(r.nodes[i], p));
  return acc.get();
}

}  // namespace

TEST_CASE("beta rule normalization and moments") {
  auto r = beta_rule(1.3, 2.4, 40);
  CHECK(std::abs(r.weight_sum() - 1.0) < 1e-13);
  // first moment of the normalized beta measure is a / (a + b)
  CHECK(std::abs(beta_moment(r, 1) - 1.3 / 3.7) < 1e-13);
  // dmu_{1,1} is the uniform measure: second moment 1/3
  auto u = beta_rule(1.0, 1.0, 20);
  CHECK(std::abs(beta_moment(u, 2) - 1.0 / 3.0) < 1e-13);
  // closed-form moments (a)_p / (a+b)_p, checked through degree 2m-1
  auto s = beta_rule(0.7, 1.9, 6);
  for (int p = 0; p <= 11; ++p) {
    double want =
        (pochhammer(cplx(0.7), p) / pochhammer(cplx(2.6), p)).real();
    CHECK(std::abs(beta_moment(s, p) - want) < 1e-13);
  }
  CHECK_THROWS_AS(beta_rule(-0.5, 1.0, 10), DomainError);
  CHECK_THROWS_AS(beta_rule(1.0, 1.0, 1), DomainError);
  for (double t : r.nodes) CHECK((t > 0.0 && t < 1.0));
}

TEST_CASE("semi-infinite rule integrates gamma moments") {
  auto r = semi_infinite_rule(1.0, 80);
  CHECK(std::abs(r.weight_sum() - 1.0) < 1e-12);
  Kahan first;
  for (size_t i = 0; i < r.nodes.size(); ++i)
    first.add(r.weights[i] * r.nodes[i]);
  CHECK(std::abs(first.get() - 1.0) < 1e-12);
  // int_0^inf e^{-s} s^{2.5} ds = Gamma(3.5); fractional moments converge
  // slower than the polynomial exactness degree
  auto rfine = semi_infinite_rule(1.0, 320);
  Kahan frac;
  for (size_t i = 0; i < rfine.nodes.size(); ++i)
    frac.add(rfine.weights[i] * std::pow(rfine.nodes[i], 2.5));
  CHECK(rel_err(cplx(frac.get()), gamma_fn(cplx(3.5))) < 1e-9);
  // scaled decay: int e^{-2s} ds = 1/2
  auto r2 = semi_infinite_rule(2.0, 30);
  CHECK(std::abs(r2.weight_sum() - 0.5) < 1e-12);
  CHECK_THROWS_AS(semi_infinite_rule(0.0, 30), DomainError);
}

TEST_CASE("box rule measures and smooth integrands") {
  auto r = box_rule(2, 24);
  double axis_sum = r.weight_sum();
  CHECK(std::abs(axis_sum - M_PI) < 1e-12);
  // integral of 1 over the 2-box is pi^2
  cplx one = integrate_box(r, [](const std::vector<double>&) { return cplx(1.0); });
  CHECK(rel_err(one, cplx(M_PI * M_PI)) < 1e-13);
  // per-axis: int cos(theta) over [-pi/2, pi/2] = 2
  Kahan c1;
  for (size_t i = 0; i < r.nodes.size(); ++i)
    c1.add(r.weights[i] * std::cos(r.nodes[i]));
  CHECK(std::abs(c1.get() - 2.0) < 1e-13);
  // tensor: int int cos^2 cos^2 = (pi/2)^2
  cplx c2 = integrate_box(r, [](const std::vector<double>& p) {
    double c = std::cos(p[0]) * std::cos(p[1]);
    return cplx(c * c);
  });
  CHECK(rel_err(c2, cplx(M_PI * M_PI / 4.0)) < 1e-13);
  CHECK_THROWS_AS(box_rule(3, 200), BudgetError);
}

TEST_CASE("cosine-beta identity") {
  // (2^{a+b}/pi) int e^{i(a-b)t} cos^{a+b} t dt = Gamma(a+b+1)/(Gamma(a+1)Gamma(b+1)),
  // the theta-axis integrated with the measure-matched cosine-power rule
  std::mt19937_64 rng(8201);
  for (int trial = 0; trial < 25; ++trial) {
    double a = testutil::urand(rng, -0.49, 3.0);
    double b = testutil::urand(rng, -0.49, 3.0);
    auto r = cosine_power_rule(a + b, 80);
    KahanC acc;
    for (size_t i = 0; i < r.nodes.size(); ++i)
      acc.add(r.weights[i] * std::exp(cplx(0.0, (a - b) * r.nodes[i])));
    cplx got = std::pow(2.0, a + b) / M_PI * acc.get();
    cplx want = std::exp(log_gamma(cplx(a + b + 1.0)) - log_gamma(cplx(a + 1.0)) -
                         log_gamma(cplx(b + 1.0)));
    CHECK(rel_err(got, want) < 1e-9);
    CHECK(std::abs(got.imag()) < 1e-10 * std::max(1.0, std::abs(got.real())));
  }
}

TEST_CASE("doubling per-axis nodes collapses the error on smooth integrands") {
  auto f = [](const std::vector<double>& p) {
    return cplx(std::exp(std::cos(p[0])) / (2.0 + std::sin(p[1])));
  };
  cplx ref = integrate_box(box_rule(2, 96), f);
  double prev = 1.0;
  for (int m : {8, 16, 32}) {
    cplx got = integrate_box(box_rule(2, m), f);
    double err = std::abs(got - ref) / std::abs(ref);
    if (prev > 1e-12 && err > 1e-12) CHECK(err * 100.0 <= prev);
    prev = err;
  }
  CHECK(prev < 1e-12);
}
