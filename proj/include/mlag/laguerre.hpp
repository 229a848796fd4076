#pragma once
// Erdelyi multivariate Laguerre polynomials L_n^(alpha)(x), the
// negative-shifted family L_n^(-beta-<n>)(x), the multiple Laguerre
// polynomials of the second kind, and a brute-force generating-function
// coefficient oracle built on exact power-series composition.

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "mlag/core.hpp"

namespace mlag {

// Univariate L_n^(alpha)(x) via the pole-free finite sum
//   sum_{j=0}^{n} (-1)^j (alpha+j+1)_{n-j} x^j / (j! (n-j)!),
// admissible for every alpha including nonpositive integers.
cplx laguerre_uni(int n, cplx alpha, cplx x);

// Multivariate L_n^(alpha)(x) as the analogous finite sum over j <= n.
cplx laguerre_multi(const MultiIndex& n, cplx alpha, const CPoint& x);

// L_n^(-beta-<n>)(x).  Uses the displayed finite sum
//   (-1)^<n> (beta)_<n>/n! sum_{j<=n} prod (-n_i)_{j_i} x^j /
//                                   ((1-beta-<n>)_<j> j!)
// and falls back to the rearranged pole-free sum when the denominator
// Pochhammer would vanish (integer beta in [1-<n>, 0]).
cplx laguerre_neg_shift(const MultiIndex& n, cplx beta, const CPoint& x);

// Multiple Laguerre polynomial of the second kind:
// L_n^(alpha;beta)(x) = n! L_n^(alpha)(-beta_1 x, ..., -beta_k x).
cplx multiple_laguerre_2nd(const MultiIndex& n, cplx alpha, const CPoint& beta,
                           cplx x);

struct LaguerreEval {
  MultiIndex degree;
  cplx alpha;
  CPoint point;
  cplx value() const { return laguerre_multi(degree, alpha, point); }
};

// Taylor coefficients of (1-<z>)^{-alpha-1} exp(-<x o z>/(1-<z>)) through
// total degree N; coefficient of z^n is L_n^(alpha)(x).
class GfCoefficients {
 public:
  GfCoefficients(int k, int max_total, std::vector<MultiIndex> indices,
                 std::vector<cplx> values);
  int dim() const { return k_; }
  int max_total() const { return max_total_; }
  const std::vector<MultiIndex>& indices() const { return indices_; }
  cplx at(const MultiIndex& n) const;

 private:
  int k_, max_total_;
  std::vector<MultiIndex> indices_;
  std::vector<cplx> values_;
  std::unordered_map<MultiIndex, size_t, MultiIndexHash> rank_;
};

GfCoefficients gf_coefficients(cplx alpha, const CPoint& x, int max_total,
                               std::uint64_t budget = 200'000);

}  // namespace mlag
