#pragma once
// Scalar and multivariable hypergeometric functions: 1F1, 2F1, 1F2,
// Humbert Phi1, the confluent Lauricella Phi2^(k), the regularized modified
// Bessel combination and the Le Roy function F_gamma.

#include "mlag/core.hpp"
#include "mlag/quadrature.hpp"

namespace mlag {

// Parameters of Humbert's Phi1[a,b;c;x,y]; c must not be a nonpositive
// integer, and the beta-measure integral route additionally needs
// Re(c) > Re(a) > 0.
struct Phi1Params {
  cplx a, b, c;
};

struct LeRoyParams {
  cplx gamma;
};

// Kummer confluent series sum (a)_m z^m / ((c)_m m!).  Exact polynomial when
// a is a nonpositive integer.
cplx hyp1f1(cplx a, cplx c, cplx z, const SeriesControl& ctl);

// Gauss series for |z| < 1 or terminating; at z = -1 only the Kummer point
// c = a - b + 1 (Re b < 1) is supported, via the closed form
// Gamma(a-b+1)Gamma(a/2+1) / (Gamma(a/2-b+1)Gamma(a+1)).
cplx hyp2f1(cplx a, cplx b, cplx c, cplx z, const SeriesControl& ctl);

// Entire series sum (a)_m z^m / ((b1)_m (b2)_m m!).
cplx hyp1f2(cplx a, cplx b1, cplx b2, cplx z, const SeriesControl& ctl);

// Phi1 by its double series over graded shells m+n <= N; switches to the
// single-sum form over j with a 2F1 inner factor when |y| is large.
cplx humbert_phi1_series(const Phi1Params& p, cplx x, cplx y,
                         const SeriesControl& ctl);

// The single-sum route sum_j (a)_j/(c)_j y^j/j! 2F1[a+j,b;c+j;x], exposed so
// the two routes can be checked against each other.
cplx humbert_phi1_single_sum(const Phi1Params& p, cplx x, cplx y,
                             const SeriesControl& ctl);

// Phi1 = int_0^1 (1-xt)^{-b} e^{yt} dmu_{a,c-a}(t), Re(c) > Re(a) > 0,
// x outside [1,inf).  `rule` must be beta_rule(Re a, Re(c-a), m); complex
// parameter parts are folded into the integrand.
cplx humbert_phi1_integral(const Phi1Params& p, cplx x, cplx y,
                           const QuadRule& rule);

// Phi1[a,b;c;1,y] = Gamma(c)Gamma(c-a-b)/(Gamma(c-a)Gamma(c-b)) 1F1[a;c-b;y],
// Re(c-a-b) > 0.
cplx phi1_at_unit_x(const Phi1Params& p, cplx y, const SeriesControl& ctl);

// Phi1[a,b;a-b+1;-1,y] as the combination of two 1F2 values with argument
// y^2/4 (Re b < 1).
cplx phi1_neg1_split(cplx a, cplx b, cplx y, const SeriesControl& ctl);

// Confluent Lauricella Phi2^(k)[b1,...,bk;c;x] =
// sum_m prod (b_i)_{m_i} / (c)_{<m>} x^m/m!.  Terminates exactly when every
// b_i is a nonpositive integer.
cplx lauricella_phi2k(const CPoint& b, cplx c, const CPoint& x,
                      const SeriesControl& ctl);

// Regularized modified Bessel combination
//   t^{-alpha/2} I_alpha(2 sqrt t) = sum_m t^m / (m! Gamma(alpha+m+1)),
// entire in t, branch-free.
cplx bessel_i_reg(cplx alpha, cplx t, const SeriesControl& ctl);

// Le Roy function F_gamma(z) = sum z^n/(n!)^gamma.  For integer gamma = k
// and real z past the switch point k z^{1/k} > 35 the real-axis asymptotic
// C_k z^{(1-k)/(2k)} e^{k z^{1/k}} is used.
cplx le_roy(cplx gamma, cplx z, const SeriesControl& ctl);

// C_k = (2 pi)^{(1-k)/2} k^{-1/2}.
double le_roy_prefactor(int k);

double le_roy_asymptotic(int k, double z);

// log F_k(z) for real z >= 0; safe where F_k itself would overflow.  The
// positive-term series carries no cancellation, so this evaluator defers to
// the asymptotic only at k z^{1/k} > 120, where its relative error is below
// the quadrature targets (the plain le_roy switch at 35 keeps the leading
// term good to ~1%, which quadrature integrands cannot afford).
double log_le_roy_positive(int k, double z, const SeriesControl& ctl);

inline constexpr double kLeRoySwitch = 35.0;       // le_roy, on k z^{1/k}
inline constexpr double kLeRoyQuadSwitch = 120.0;  // log_le_roy_positive

}  // namespace mlag
