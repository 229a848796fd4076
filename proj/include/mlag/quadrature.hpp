#pragma once
// Quadrature rules for the three integral families the identities need:
// the normalized beta measure on (0,1), exponential-weight rules on
// (0,inf), and the tensor Gauss-Legendre box on [-pi/2, pi/2]^{k+1}.

#include <cstdint>
#include <functional>
#include <vector>

#include "mlag/core.hpp"

namespace mlag {

struct QuadRule {
  enum class Kind { legendre01, jacobi_beta, semi_infinite, box };

  Kind kind = Kind::legendre01;
  int dim = 1;  // > 1 only for box rules (nodes/weights are then per-axis)
  std::vector<double> nodes;
  std::vector<double> weights;

  double a_exp = 0.0, b_exp = 0.0;  // jacobi_beta exponents
  double decay = 0.0;               // semi_infinite rate

  double weight_sum() const;
};

// Gauss rule for the normalized beta measure
//   dmu(t) = Gamma(a+b)/(Gamma(a)Gamma(b)) t^{a-1} (1-t)^{b-1} dt on (0,1),
// exact for polynomial integrands of degree <= 2m-1; weights sum to 1.
QuadRule beta_rule(double a, double b, int m);

// Gauss-Legendre on (0,1) with unit weight; weights sum to 1.
QuadRule legendre01_rule(int m);

// Gauss rule with weight e^{-decay s} on (0,inf); weights sum to 1/decay.
// DomainError for decay <= 0.
QuadRule semi_infinite_rule(double decay, int m);

// Tensor-product Gauss-Legendre on [-pi/2, pi/2]^dim; the stored nodes and
// weights are per-axis (axis weights sum to pi).  BudgetError when
// per_axis^dim exceeds node_budget.
QuadRule box_rule(int dim, int per_axis, std::uint64_t node_budget = 2'000'000);

// Gauss rule in the variable theta for the measure cos^gamma(theta) dtheta
// on (-pi/2, pi/2), gamma > -1.  Built by the Stieltjes procedure over a
// tanh-sinh discretization, so analytic factors of theta (e.g. e^{ic theta})
// integrate spectrally for any fractional gamma.  Weights sum to the
// measure mass sqrt(pi) Gamma((gamma+1)/2) / Gamma(gamma/2+1).
QuadRule cosine_power_rule(double gamma, int m);

// Integrate f over the full tensor grid of a box rule.
cplx integrate_box(const QuadRule& rule,
                   const std::function<cplx(const std::vector<double>&)>& f);

}  // namespace mlag
