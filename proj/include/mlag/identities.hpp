#pragma once
// One evaluator per generating-function identity.  Each computes the
// closed/low-dimensional side and the truncated multiple series (or
// quadrature) side independently and reports both with residuals.

#include <string>
#include <vector>

#include "mlag/core.hpp"
#include "mlag/hypergeometric.hpp"
#include "mlag/laguerre.hpp"
#include "mlag/quadrature.hpp"

namespace mlag {

struct IdentityReport {
  std::string identity_id;
  cplx lhs = 0.0, rhs = 0.0;
  double abs_residual = 0.0, rel_residual = 0.0;
  int truncation_order = 0;
  int shells_used = 0;
  bool converged = false;
  double wall_time = 0.0;  // seconds
};

// The bilinear kernel (u;x,y) of the generalized Hardy-Hille formula.
struct HardyHilleKernel {
  CPoint u, x, y;
  cplx value;
  static HardyHilleKernel make(const CPoint& u, const CPoint& x,
                               const CPoint& y);
};

// The rotated arguments of the product-formula integrand.
struct XiEta {
  cplx xi, eta;
  static XiEta make(cplx xj, cplx yj, double theta, double phi);
};

// Quadrature sizes used by evaluators that build rules internally.
struct QuadOpts {
  int beta_nodes = 160;
  int semi_nodes = 200;
};

// Phi1[alpha,beta;gamma;-<u>,-<u o x>] =
//   sum_n (alpha)_<n>/(gamma)_<n> L_n^(-beta-<n>)(x) u^n,  |u|_1 < 1
// (multivariate Abdul-Halim / Al-Salam generating function).
IdentityReport alsalam_gf(cplx alpha, cplx beta, cplx gamma, const CPoint& u,
                          const CPoint& x, const SeriesControl& ctl);

// e^{-<u o x>} (1+<u>)^{-beta} = sum_n L_n^(-beta-<n>)(x) u^n.
IdentityReport exponential_gf(cplx beta, const CPoint& u, const CPoint& x,
                              const SeriesControl& ctl);

// Single-level expansion of Phi1[alpha,beta;gamma;<x>,<y>] into shifted
// Laguerre factors times inner Phi1 values.
IdentityReport phi1_expansion(cplx alpha, cplx beta, cplx beta1, cplx gamma,
                              const CPoint& sigma, const CPoint& x,
                              const CPoint& y, const SeriesControl& ctl);

// L-fold iterate of the expansion; betas = (beta_0, ..., beta_L),
// sigmas = (sigma^(1), ..., sigma^(L)).
IdentityReport multiple_expansion(cplx alpha, cplx gamma,
                                  const std::vector<cplx>& betas,
                                  const std::vector<CPoint>& sigmas,
                                  const CPoint& x, const CPoint& y,
                                  const SeriesControl& ctl,
                                  std::uint64_t index_budget = 2'000'000);

// Tremblay-Lavertu form: substituted multiple generating function with
// w-vectors; betas = (beta_0, ..., beta_L), w = (w^(1), ..., w^(L+1)).
// Evaluated directly (not through multiple_expansion).
IdentityReport tremblay_gf(cplx alpha, cplx gamma,
                           const std::vector<cplx>& betas,
                           const std::vector<CPoint>& w, const CPoint& u,
                           const SeriesControl& ctl,
                           std::uint64_t index_budget = 2'000'000);

// Finite addition theorem at <u> = -1: a = (a_1, ..., a_{L+1}),
// w = (w^(1), ..., w^(L+1)).  Both sides exact finite sums.
IdentityReport addition_theorem(int m, const std::vector<cplx>& a,
                                const CPoint& u, const std::vector<CPoint>& w);

// Kummer-point generating function at <u> = 1 with gamma = alpha-beta_L+1;
// LHS through the Phi1 beta-measure integral at x = -1.
// betas = (beta_0,...,beta_L), w = (w^(1),...,w^(L)).
IdentityReport kummer_gf(cplx alpha, const std::vector<cplx>& betas,
                         const std::vector<CPoint>& w, const CPoint& u,
                         const SeriesControl& ctl, const QuadOpts& q = {});

// Same series side with beta_L = beta_0; LHS through the two-1F2 split of
// Phi1[alpha,beta;alpha-beta+1;-1,y].
IdentityReport kummer_split(cplx alpha, const std::vector<cplx>& betas,
                            const std::vector<CPoint>& w, const CPoint& u,
                            const SeriesControl& ctl);

// Independent LHS route for kummer_split (integral representation);
// wsum = <u o (w^(1)+...+w^(L))>.
cplx kummer_split_integral_lhs(cplx alpha, cplx beta, cplx wsum,
                               const QuadOpts& q = {});

// Generalized Hardy-Hille formula:
//   sum_n n! L_n^(a)(x) L_n^(a)(y) u^n / Gamma(a+1+<n>) =
//   (1-<u>)^{-a-1} exp(-(<u o x>+<u o y>)/(1-<u>)) B_a((u;x,y)),
// with B_a the regularized Bessel combination.
IdentityReport hardy_hille(cplx alpha, const CPoint& x, const CPoint& y,
                           const CPoint& u, const SeriesControl& ctl);

// Carlitz-type product formula over the box [-pi/2,pi/2]^{k+1};
// alpha, beta real > -1 with alpha + beta > -1, <m+n> <= 6, k <= 2.
IdentityReport product_formula(const MultiIndex& m, const MultiIndex& n,
                               double alpha, double beta, const CPoint& x,
                               const CPoint& y, const QuadRule& box);

// True when the box quadrature is certified for these parameters
// (used to mark suite entries skipped rather than failed).
bool product_formula_in_regime(const MultiIndex& m, const MultiIndex& n, int k,
                               int per_axis);

// Main-diagonal generating function
//   G_k(x,u) = sum_n L_{n,..,n}^(-beta-kn)(x) u^n
//            = (1/Gamma(beta)) int_0^inf e^{-s} s^{beta-1}
//                F_k((-1)^k u (s+x_1)...(s+x_k)) ds,
// Re(beta) > 0, |u| < 1/k^k.  `semi` must be
// semi_infinite_rule(1 - k|u|^{1/k}, m); the s^{beta-1} endpoint is handled
// by an internal beta-rule split of [0,1].
IdentityReport diagonal_gf(cplx beta, const CPoint& x, cplx u,
                           const SeriesControl& ctl, const QuadRule& semi,
                           int beta_nodes = 160);

// Convenience overload building the semi-infinite rule internally.
IdentityReport diagonal_gf(cplx beta, const CPoint& x, cplx u,
                           const SeriesControl& ctl, const QuadOpts& q = {});

// Closed form G_1(x,u) = (1+u)^{-beta} e^{-ux}.
cplx diagonal_gf_closed_k1(cplx beta, cplx x, cplx u);

// Adjudicates the sign in sum_n C(2n,n) u^n = (1 -+ 4u)^{-1/2} with a
// brute-force diagonal-coefficient oracle; lhs is the oracle partial sum,
// rhs the winning closed form.  decided_sign() reports "1-4u" or "1+4u".
struct DiagonalSignFinding {
  IdentityReport report;
  std::string decided_sign;
  double losing_residual = 0.0;
};
DiagonalSignFinding diagonal_binomial_sign(double u = 0.05);

// Coefficient of u^n in G_k extracted from the quadrature side by Newton
// divided differences over Chebyshev points on [0, umax] (cross-check
// oracle, quadrature-limited accuracy).
cplx diagonal_gf_quad_coefficient(cplx beta, const CPoint& x, int n,
                                  double umax, int degree,
                                  const SeriesControl& ctl,
                                  const QuadOpts& q = {});

}  // namespace mlag
