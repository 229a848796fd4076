#include "mlag/hypergeometric.hpp"

#include <algorithm>
#include <cmath>

namespace mlag {

namespace {

int as_nonpos_int(cplx a) {
  // degree of termination, or -1 when a is not a nonpositive integer
  if (!is_nonpos_integer(a)) return -1;
  return static_cast<int>(-std::llround(a.real()));
}

}  // namespace

cplx hyp1f1(cplx a, cplx c, cplx z, const SeriesControl& ctl) {
  if (is_nonpos_integer(c)) throw PoleError("hyp1f1: c is a nonpositive integer");
  int na = as_nonpos_int(a);
  if (na >= 0) {
    // exact polynomial
    KahanC acc;
    cplx term = 1.0;
    acc.add(term);
    for (int m = 0; m < na; ++m) {
      term *= (a + static_cast<double>(m)) * z /
              ((c + static_cast<double>(m)) * static_cast<double>(m + 1));
      acc.add(term);
    }
    return acc.get();
  }
  ShellSeries acc(ctl);
  cplx term = 1.0;
  for (int m = 0; m <= ctl.max_total_order; ++m) {
    if (m > 0)
      term *= (a + static_cast<double>(m - 1)) * z /
              ((c + static_cast<double>(m - 1)) * static_cast<double>(m));
    if (!acc.add_shell(term)) break;
  }
  if (!acc.converged()) throw NonConvergenceError("hyp1f1: series budget exceeded");
  return acc.value();
}

cplx hyp2f1(cplx a, cplx b, cplx c, cplx z, const SeriesControl& ctl) {
  if (is_nonpos_integer(c)) throw PoleError("hyp2f1: c is a nonpositive integer");
  int na = as_nonpos_int(a);
  int nb = as_nonpos_int(b);
  int nterm = -1;
  if (na >= 0 && nb >= 0)
    nterm = std::min(na, nb);
  else if (na >= 0)
    nterm = na;
  else if (nb >= 0)
    nterm = nb;
  if (nterm >= 0) {
    KahanC acc;
    cplx term = 1.0;
    acc.add(term);
    for (int m = 0; m < nterm; ++m) {
      double dm = static_cast<double>(m);
      term *= (a + dm) * (b + dm) * z / ((c + dm) * (dm + 1.0));
      acc.add(term);
    }
    return acc.get();
  }
  if (std::abs(z - cplx(-1.0)) <= 1e-14) {
    // Kummer's summation theorem at z = -1 for c = a - b + 1.
    if (std::abs(c - (a - b + 1.0)) > 1e-12)
      throw DomainError("hyp2f1: z = -1 supported only at c = a - b + 1");
    if (!(b.real() < 1.0))
      throw DomainError("hyp2f1: Kummer point needs Re(b) < 1");
    if (is_nonpos_integer(a - b + 1.0))
      throw PoleError("hyp2f1: a - b + 1 is a nonpositive integer");
    return std::exp(log_gamma(a - b + 1.0) + log_gamma(0.5 * a + 1.0) -
                    log_gamma(0.5 * a - b + 1.0) - log_gamma(a + 1.0));
  }
  if (!(std::abs(z) < 1.0))
    throw DomainError("hyp2f1: |z| >= 1 outside supported special cases");
  ShellSeries acc(ctl);
  cplx term = 1.0;
  for (int m = 0; m <= ctl.max_total_order; ++m) {
    if (m > 0) {
      double dm = static_cast<double>(m - 1);
      term *= (a + dm) * (b + dm) * z / ((c + dm) * (dm + 1.0));
    }
    if (!acc.add_shell(term)) break;
  }
  if (!acc.converged()) throw NonConvergenceError("hyp2f1: series budget exceeded");
  return acc.value();
}

cplx hyp1f2(cplx a, cplx b1, cplx b2, cplx z, const SeriesControl& ctl) {
  if (is_nonpos_integer(b1) || is_nonpos_integer(b2))
    throw PoleError("hyp1f2: denominator parameter is a nonpositive integer");
  int na = as_nonpos_int(a);
  ShellSeries acc(ctl);
  cplx term = 1.0;
  for (int m = 0; m <= ctl.max_total_order; ++m) {
    if (m > 0) {
      double dm = static_cast<double>(m - 1);
      term *= (a + dm) * z /
              ((b1 + dm) * (b2 + dm) * (dm + 1.0));
    }
    if (!acc.add_shell(term)) break;
    if (na >= 0 && m >= na) return acc.value();  // terminated exactly
  }
  if (!acc.converged()) throw NonConvergenceError("hyp1f2: series budget exceeded");
  return acc.value();
}

cplx humbert_phi1_single_sum(const Phi1Params& p, cplx x, cplx y,
                             const SeriesControl& ctl) {
  if (is_nonpos_integer(p.c)) throw PoleError("phi1: c is a nonpositive integer");
  if (!(std::abs(x) < 1.0)) throw DomainError("phi1: requires |x| < 1");
  SeriesControl inner(std::max(ctl.max_total_order, 240), ctl.rel_tol * 1e-2,
                      ctl.tail_window);
  ShellSeries acc(ctl);
  cplx coef = 1.0;  // (a)_j / (c)_j y^j / j!
  for (int j = 0; j <= ctl.max_total_order; ++j) {
    if (j > 0) {
      double dj = static_cast<double>(j - 1);
      coef *= (p.a + dj) * y / ((p.c + dj) * (dj + 1.0));
    }
    cplx inner2f1 = hyp2f1(p.a + static_cast<double>(j), p.b,
                           p.c + static_cast<double>(j), x, inner);
    if (!acc.add_shell(coef * inner2f1)) break;
  }
  if (!acc.converged())
    throw NonConvergenceError("phi1: single-sum budget exceeded");
  return acc.value();
}

cplx humbert_phi1_series(const Phi1Params& p, cplx x, cplx y,
                         const SeriesControl& ctl) {
  if (is_nonpos_integer(p.c)) throw PoleError("phi1: c is a nonpositive integer");
  if (!(std::abs(x) < 1.0)) throw DomainError("phi1: requires |x| < 1");
  if (std::abs(y) > 10.0 && std::abs(x) < 0.5)
    return humbert_phi1_single_sum(p, x, y, ctl);
  ShellSeries acc(ctl);
  // bx[m] = (b)_m x^m / m!, grown one entry per shell
  std::vector<cplx> bx{1.0};
  cplx ratio = 1.0;  // (a)_s / (c)_s
  for (int s = 0; s <= ctl.max_total_order; ++s) {
    if (s > 0) {
      double ds = static_cast<double>(s - 1);
      ratio *= (p.a + ds) / (p.c + ds);
      bx.push_back(bx.back() * (p.b + ds) * x / (ds + 1.0));
    }
    KahanC shell;
    cplx ypow = 1.0;  // y^{s-m} / (s-m)! built from m = s downward
    for (int m = s; m >= 0; --m) {
      shell.add(bx[static_cast<size_t>(m)] * ypow);
      if (m > 0) ypow *= y / static_cast<double>(s - m + 1);
    }
    if (!acc.add_shell(ratio * shell.get())) break;
  }
  if (!acc.converged()) throw NonConvergenceError("phi1: series budget exceeded");
  return acc.value();
}

cplx humbert_phi1_integral(const Phi1Params& p, cplx x, cplx y,
                           const QuadRule& rule) {
  if (!(p.c.real() > p.a.real() && p.a.real() > 0.0))
    throw DomainError("phi1 integral: requires Re(c) > Re(a) > 0");
  if (x.imag() == 0.0 && x.real() >= 1.0)
    throw DomainError("phi1 integral: x must lie outside [1, inf)");
  const double ia = p.a.imag();
  const double icma = (p.c - p.a).imag();
  const bool osc = (ia != 0.0) || (icma != 0.0);
  KahanC acc;
  for (size_t i = 0; i < rule.nodes.size(); ++i) {
    double t = rule.nodes[i];
    cplx f = std::exp(-p.b * std::log(cplx(1.0) - x * t) + y * t);
    if (osc)
      f *= std::exp(cplx(0.0, ia * std::log(t) + icma * std::log1p(-t)));
    acc.add(rule.weights[i] * f);
  }
  cplx val = acc.get();
  if (osc) {
    // rescale the real-parameter beta rule to the complex measure
    cplx corr = std::exp(log_gamma(p.c) - log_gamma(p.a) - log_gamma(p.c - p.a) +
                         log_gamma(cplx(p.a.real())) +
                         log_gamma(cplx(p.c.real() - p.a.real())) -
                         log_gamma(cplx(p.c.real())));
    val *= corr;
  }
  return val;
}

cplx phi1_at_unit_x(const Phi1Params& p, cplx y, const SeriesControl& ctl) {
  if (!((p.c - p.a - p.b).real() > 0.0))
    throw DomainError("phi1_at_unit_x: requires Re(c-a-b) > 0");
  if (is_nonpos_integer(p.c) || is_nonpos_integer(p.c - p.a) ||
      is_nonpos_integer(p.c - p.b))
    throw PoleError("phi1_at_unit_x: gamma factor at a pole");
  cplx g = std::exp(log_gamma(p.c) + log_gamma(p.c - p.a - p.b) -
                    log_gamma(p.c - p.a) - log_gamma(p.c - p.b));
  return g * hyp1f1(p.a, p.c - p.b, y, ctl);
}

cplx phi1_neg1_split(cplx a, cplx b, cplx y, const SeriesControl& ctl) {
  if (!(b.real() < 1.0)) throw DomainError("phi1_neg1_split: requires Re(b) < 1");
  if (is_nonpos_integer(a - b + 1.0))
    throw DomainError("phi1_neg1_split: a - b + 1 is a nonpositive integer");
  if (is_nonpos_integer(a)) throw DomainError("phi1_neg1_split: a is a nonpositive integer");
  cplx ha = 0.5 * a;
  if (is_nonpos_integer(ha - b + 1.0) || is_nonpos_integer(ha - b + 1.5))
    throw PoleError("phi1_neg1_split: 1F2 denominator at a pole");
  cplx q = 0.25 * y * y;
  cplx t1 = std::exp(log_gamma(ha) - log_gamma(ha - b + 1.0)) *
            hyp1f2(ha, 0.5, ha - b + 1.0, q, ctl);
  cplx t2 = std::exp(log_gamma(ha + 0.5) - log_gamma(ha - b + 1.5)) * y *
            hyp1f2(ha + 0.5, 1.5, ha - b + 1.5, q, ctl);
  return std::exp(log_gamma(a - b + 1.0) - log_gamma(a)) * 0.5 * (t1 + t2);
}

cplx lauricella_phi2k(const CPoint& b, cplx c, const CPoint& x,
                      const SeriesControl& ctl) {
  if (b.dim() != x.dim()) throw DomainError("phi2k: dimension mismatch");
  if (is_nonpos_integer(c)) throw PoleError("phi2k: c is a nonpositive integer");
  const int k = x.dim();
  bool terminating = true;
  int degree = 0;
  for (int i = 0; i < k; ++i) {
    int ni = as_nonpos_int(b[i]);
    if (ni < 0) {
      terminating = false;
      break;
    }
    degree += ni;
  }
  int nmax = terminating ? std::min(degree, ctl.max_total_order)
                         : ctl.max_total_order;
  // A[i][m] = (b_i)_m x_i^m / m!
  std::vector<std::vector<cplx>> A(static_cast<size_t>(k));
  for (int i = 0; i < k; ++i) {
    A[static_cast<size_t>(i)].resize(static_cast<size_t>(nmax + 1));
    A[static_cast<size_t>(i)][0] = 1.0;
    for (int m = 1; m <= nmax; ++m)
      A[static_cast<size_t>(i)][static_cast<size_t>(m)] =
          A[static_cast<size_t>(i)][static_cast<size_t>(m - 1)] *
          (b[i] + static_cast<double>(m - 1)) * x[i] / static_cast<double>(m);
  }
  ShellSeries acc(ctl);
  cplx cinv = 1.0;  // 1 / (c)_s
  GradedStream st(k, nmax);
  MultiIndex n;
  int cur_shell = 0;
  KahanC shell;
  bool stopped = false;
  while (st.next(n)) {
    int s = n.total();
    if (s != cur_shell) {
      if (!acc.add_shell(cinv * shell.get())) {
        stopped = true;
        break;
      }
      shell = KahanC{};
      cinv /= (c + static_cast<double>(cur_shell));
      cur_shell = s;
    }
    cplx t = 1.0;
    for (int i = 0; i < k; ++i) t *= A[static_cast<size_t>(i)][static_cast<size_t>(n[i])];
    shell.add(t);
  }
  if (!stopped) acc.add_shell(cinv * shell.get());
  if (terminating) return acc.value();
  if (!acc.converged()) throw NonConvergenceError("phi2k: series budget exceeded");
  return acc.value();
}

cplx bessel_i_reg(cplx alpha, cplx t, const SeriesControl& ctl) {
  if (is_nonpos_integer(alpha + 1.0))
    throw PoleError("bessel_i_reg: alpha + 1 is a nonpositive integer");
  ShellSeries acc(ctl);
  cplx term = recip_gamma(alpha + 1.0);
  for (int m = 0; m <= ctl.max_total_order; ++m) {
    if (m > 0)
      term *= t / (static_cast<double>(m) * (alpha + static_cast<double>(m)));
    if (!acc.add_shell(term)) break;
  }
  if (!acc.converged())
    throw NonConvergenceError("bessel_i_reg: series budget exceeded");
  return acc.value();
}

double le_roy_prefactor(int k) {
  return std::pow(2.0 * M_PI, 0.5 * (1.0 - k)) / std::sqrt(static_cast<double>(k));
}

double le_roy_asymptotic(int k, double z) {
  double zk = std::pow(z, 1.0 / k);
  return le_roy_prefactor(k) * std::pow(z, (1.0 - k) / (2.0 * k)) *
         std::exp(k * zk);
}

cplx le_roy(cplx gamma, cplx z, const SeriesControl& ctl) {
  if (gamma == cplx(1.0)) return std::exp(z);
  if (is_real_integer(gamma) && gamma.real() >= 1.0 && z.imag() == 0.0 &&
      z.real() > 0.0) {
    int k = static_cast<int>(std::llround(gamma.real()));
    if (k * std::pow(z.real(), 1.0 / k) > kLeRoySwitch)
      return le_roy_asymptotic(k, z.real());
  }
  ShellSeries acc(ctl);
  cplx term = 1.0;
  for (int n = 0; n <= ctl.max_total_order; ++n) {
    if (n > 0) term *= z * std::exp(-gamma * std::log(static_cast<double>(n)));
    if (!acc.add_shell(term)) break;
  }
  if (!acc.converged()) throw NonConvergenceError("le_roy: series budget exceeded");
  return acc.value();
}

double log_le_roy_positive(int k, double z, const SeriesControl& ctl) {
  if (k < 1) throw DomainError("log_le_roy_positive: k must be >= 1");
  if (!(z >= 0.0)) throw DomainError("log_le_roy_positive: z must be >= 0");
  if (k == 1) return z;
  double zk = std::pow(z, 1.0 / k);
  if (k * zk > kLeRoyQuadSwitch)
    return std::log(le_roy_prefactor(k)) + (1.0 - k) / (2.0 * k) * std::log(z) +
           k * zk;
  // positive-term series, summed directly (peak term stays within range for
  // k z^{1/k} <= 120)
  SeriesControl lc(std::max(ctl.max_total_order, 600), 1e-16,
                   std::max(ctl.tail_window, 3));
  KahanC acc;
  cplx term = 1.0;
  bool converged = false;
  int run = 0;
  for (int n = 0; n <= lc.max_total_order; ++n) {
    if (n > 0) term *= z / std::pow(static_cast<double>(n), k);
    acc.add(term);
    if (std::abs(term) < lc.rel_tol * std::abs(acc.get()))
      ++run;
    else
      run = 0;
    if (run >= lc.tail_window) {
      converged = true;
      break;
    }
  }
  if (!converged)
    throw NonConvergenceError("log_le_roy_positive: series budget exceeded");
  return std::log(acc.get().real());
}

}  // namespace mlag
