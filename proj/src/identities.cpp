#include "mlag/identities.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <unordered_map>

namespace mlag {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

IdentityReport finish(std::string id, cplx lhs, cplx rhs, int trunc,
                      int shells, bool converged, Clock::time_point t0) {
  IdentityReport r;
  r.identity_id = std::move(id);
  r.lhs = lhs;
  r.rhs = rhs;
  r.abs_residual = std::abs(lhs - rhs);
  r.rel_residual =
      r.abs_residual / std::max({std::abs(lhs), std::abs(rhs), 1e-300});
  r.truncation_order = trunc;
  r.shells_used = shells;
  r.converged = converged;
  r.wall_time = seconds_since(t0);
  return r;
}

SeriesControl inner_ctl(const SeriesControl& ctl) {
  return SeriesControl(std::max(ctl.max_total_order, 240),
                       std::max(ctl.rel_tol * 1e-2, 1e-15),
                       std::max(ctl.tail_window, 3));
}

// (alpha)_s / (gamma)_s for s = 0..N
std::vector<cplx> ratio_table(cplx alpha, cplx gamma, int N) {
  std::vector<cplx> r(static_cast<size_t>(N + 1));
  r[0] = 1.0;
  for (int s = 0; s < N; ++s) {
    cplx den = gamma + static_cast<double>(s);
    if (den == cplx(0.0)) throw PoleError("identity: (gamma)_s vanishes");
    r[static_cast<size_t>(s + 1)] =
        r[static_cast<size_t>(s)] * (alpha + static_cast<double>(s)) / den;
  }
  return r;
}

struct BlockIndexer {
  std::vector<MultiIndex> indices;
  std::unordered_map<MultiIndex, size_t, MultiIndexHash> rank;
  BlockIndexer(int k, int N) : indices(graded_indices(k, N)) {
    for (size_t i = 0; i < indices.size(); ++i) rank.emplace(indices[i], i);
  }
};

// Sum over (n^(1),...,n^(L)) with total <= N of
// shell_factor(S) * prod_r table[r][rank(n^(r))], grouped into graded shells.
void level_series(int k, int L, int N,
                  const std::vector<std::vector<cplx>>& tables,
                  const BlockIndexer& bx,
                  const std::function<cplx(int)>& shell_factor,
                  ShellSeries& acc) {
  GradedStream st(k * L, N);
  MultiIndex n;
  std::vector<int> block(static_cast<size_t>(k));
  int cur = 0;
  KahanC shell;
  bool stopped = false;
  while (st.next(n)) {
    int S = n.total();
    if (S != cur) {
      if (!acc.add_shell(shell_factor(cur) * shell.get())) {
        stopped = true;
        break;
      }
      shell = KahanC{};
      cur = S;
    }
    cplx t = 1.0;
    for (int r = 0; r < L; ++r) {
      for (int i = 0; i < k; ++i)
        block[static_cast<size_t>(i)] = n[r * k + i];
      t *= tables[static_cast<size_t>(r)][bx.rank.at(MultiIndex(block))];
    }
    shell.add(t);
  }
  if (!stopped) acc.add_shell(shell_factor(cur) * shell.get());
}

void check_beta_chain(const std::vector<cplx>& betas) {
  for (size_t r = 1; r < betas.size(); ++r)
    if (is_nonpos_integer(betas[r] - betas[r - 1]))
      throw DomainError(
          "identity: beta_r - beta_{r-1} must avoid nonpositive integers");
}

}  // namespace

HardyHilleKernel HardyHilleKernel::make(const CPoint& u, const CPoint& x,
                                        const CPoint& y) {
  if (u.dim() != x.dim() || u.dim() != y.dim())
    throw DomainError("HardyHilleKernel: dimension mismatch");
  cplx su = u.sum();
  if (su == cplx(1.0)) throw DomainError("HardyHilleKernel: <u> = 1");
  cplx uxy = hadamard(u, hadamard(x, y)).sum();
  cplx ux = hadamard(u, x).sum();
  cplx uy = hadamard(u, y).sum();
  cplx d = cplx(1.0) - su;
  return HardyHilleKernel{u, x, y, (uxy * d + ux * uy) / (d * d)};
}

XiEta XiEta::make(cplx xj, cplx yj, double theta, double phi) {
  double scale = std::cos(theta) / std::cos(phi);
  cplx rot = std::exp(cplx(0.0, theta - phi));
  return XiEta{xj * rot * scale, yj * scale / rot};
}

// ----------------------------------------------------------------- alsalam_gf

IdentityReport alsalam_gf(cplx alpha, cplx beta, cplx gamma, const CPoint& u,
                          const CPoint& x, const SeriesControl& ctl) {
  auto t0 = Clock::now();
  if (u.dim() != x.dim()) throw DomainError("alsalam_gf: dimension mismatch");
  if (!(u.abs_sum() < 1.0)) throw DomainError("alsalam_gf: requires |u|_1 < 1");
  if (is_nonneg_integer(beta))
    throw DomainError("alsalam_gf: -beta must avoid nonpositive integers");
  if (is_nonpos_integer(gamma))
    throw DomainError("alsalam_gf: gamma must avoid nonpositive integers");
  const int k = u.dim();
  const int N = ctl.max_total_order;
  cplx lhs = humbert_phi1_series({alpha, beta, gamma}, -u.sum(),
                                 -hadamard(u, x).sum(), inner_ctl(ctl));
  auto ratios = ratio_table(alpha, gamma, N);
  ShellSeries acc(ctl);
  GradedStream st(k, N);
  MultiIndex n;
  int cur = 0;
  KahanC shell;
  bool stopped = false;
  while (st.next(n)) {
    if (n.total() != cur) {
      if (!acc.add_shell(ratios[static_cast<size_t>(cur)] * shell.get())) {
        stopped = true;
        break;
      }
      shell = KahanC{};
      cur = n.total();
    }
    shell.add(laguerre_neg_shift(n, beta, x) * cpow(u, n));
  }
  if (!stopped) acc.add_shell(ratios[static_cast<size_t>(cur)] * shell.get());
  return finish("alsalam_gf", lhs, acc.value(), acc.last_shell(),
                acc.shells_used(), acc.converged(), t0);
}

// ------------------------------------------------------------- exponential_gf

IdentityReport exponential_gf(cplx beta, const CPoint& u, const CPoint& x,
                              const SeriesControl& ctl) {
  auto t0 = Clock::now();
  if (u.dim() != x.dim())
    throw DomainError("exponential_gf: dimension mismatch");
  if (!(u.abs_sum() < 1.0))
    throw DomainError("exponential_gf: requires |u|_1 < 1");
  cplx lhs = std::exp(-hadamard(u, x).sum()) *
             std::exp(-beta * std::log(cplx(1.0) + u.sum()));
  ShellSeries acc(ctl);
  GradedStream st(u.dim(), ctl.max_total_order);
  MultiIndex n;
  int cur = 0;
  KahanC shell;
  bool stopped = false;
  while (st.next(n)) {
    if (n.total() != cur) {
      if (!acc.add_shell(shell.get())) {
        stopped = true;
        break;
      }
      shell = KahanC{};
      cur = n.total();
    }
    shell.add(laguerre_neg_shift(n, beta, x) * cpow(u, n));
  }
  if (!stopped) acc.add_shell(shell.get());
  return finish("exponential_gf", lhs, acc.value(), acc.last_shell(),
                acc.shells_used(), acc.converged(), t0);
}

// ------------------------------------------------------------- phi1_expansion

IdentityReport phi1_expansion(cplx alpha, cplx beta, cplx beta1, cplx gamma,
                              const CPoint& sigma, const CPoint& x,
                              const CPoint& y, const SeriesControl& ctl) {
  auto t0 = Clock::now();
  const int k = x.dim();
  if (sigma.dim() != k || y.dim() != k)
    throw DomainError("phi1_expansion: dimension mismatch");
  if (!(x.abs_sum() < 1.0))
    throw DomainError("phi1_expansion: requires |x|_1 < 1");
  for (int i = 0; i < k; ++i)
    if (x[i] == cplx(0.0))
      throw DomainError("phi1_expansion: x components must be nonzero");
  if (is_nonpos_integer(beta1 - beta))
    throw DomainError("phi1_expansion: beta1 - beta must avoid nonpositive integers");
  if (is_nonpos_integer(gamma))
    throw DomainError("phi1_expansion: gamma must avoid nonpositive integers");
  const int N = ctl.max_total_order;
  SeriesControl ic = inner_ctl(ctl);
  cplx lhs = humbert_phi1_series({alpha, beta, gamma}, x.sum(), y.sum(), ic);
  CPoint arg = quotient(hadamard(ones_minus(sigma), y), x);
  CPoint mx = neg(x);
  cplx sy = hadamard(sigma, y).sum();
  cplx sx = x.sum();
  auto ratios = ratio_table(alpha, gamma, N);
  std::vector<cplx> tail(static_cast<size_t>(N + 1));
  ShellSeries acc(ctl);
  GradedStream st(k, N);
  MultiIndex n;
  int cur = -1;
  KahanC shell;
  bool stopped = false;
  while (st.next(n)) {
    int S = n.total();
    if (S != cur) {
      if (cur >= 0 && !acc.add_shell(ratios[static_cast<size_t>(cur)] *
                                     tail[static_cast<size_t>(cur)] *
                                     shell.get())) {
        stopped = true;
        break;
      }
      shell = KahanC{};
      cur = S;
      tail[static_cast<size_t>(S)] = humbert_phi1_series(
          {alpha + static_cast<double>(S), beta1, gamma + static_cast<double>(S)},
          sx, sy, ic);
    }
    shell.add(cpow(mx, n) * laguerre_neg_shift(n, beta - beta1, arg));
  }
  if (!stopped)
    acc.add_shell(ratios[static_cast<size_t>(cur)] *
                  tail[static_cast<size_t>(cur)] * shell.get());
  return finish("phi1_expansion", lhs, acc.value(), acc.last_shell(),
                acc.shells_used(), acc.converged(), t0);
}

// --------------------------------------------------------- multiple_expansion

IdentityReport multiple_expansion(cplx alpha, cplx gamma,
                                  const std::vector<cplx>& betas,
                                  const std::vector<CPoint>& sigmas,
                                  const CPoint& x, const CPoint& y,
                                  const SeriesControl& ctl,
                                  std::uint64_t index_budget) {
  auto t0 = Clock::now();
  const int k = x.dim();
  const int L = static_cast<int>(sigmas.size());
  if (L < 1) throw DomainError("multiple_expansion: need at least one level");
  if (betas.size() != static_cast<size_t>(L + 1))
    throw DomainError("multiple_expansion: betas must have L+1 entries");
  if (y.dim() != k) throw DomainError("multiple_expansion: dimension mismatch");
  for (const auto& s : sigmas)
    if (s.dim() != k) throw DomainError("multiple_expansion: dimension mismatch");
  if (!(x.abs_sum() < 1.0))
    throw DomainError("multiple_expansion: requires |x|_1 < 1");
  for (int i = 0; i < k; ++i)
    if (x[i] == cplx(0.0))
      throw DomainError("multiple_expansion: x components must be nonzero");
  check_beta_chain(betas);
  if (is_nonpos_integer(gamma))
    throw DomainError("multiple_expansion: gamma must avoid nonpositive integers");
  const int N = ctl.max_total_order;
  if (graded_count(k * L, N) > index_budget)
    throw BudgetError("multiple_expansion: index budget exceeded");
  SeriesControl ic = inner_ctl(ctl);
  cplx lhs = humbert_phi1_series({alpha, betas[0], gamma}, x.sum(), y.sum(), ic);

  CPoint mx = neg(x);
  BlockIndexer bx(k, N);
  // per-level tables of (-x)^m L_m^(beta_r - beta_{r-1} - <m>)(arg_r)
  std::vector<std::vector<cplx>> tables(static_cast<size_t>(L));
  CPoint sig_prod = CPoint::constant(k, 1.0);
  for (int r = 0; r < L; ++r) {
    CPoint arg = quotient(
        hadamard(ones_minus(sigmas[static_cast<size_t>(r)]),
                 hadamard(sig_prod, y)),
        x);
    cplx db = betas[static_cast<size_t>(r)] - betas[static_cast<size_t>(r + 1)];
    auto& tab = tables[static_cast<size_t>(r)];
    tab.resize(bx.indices.size());
    for (size_t i = 0; i < bx.indices.size(); ++i)
      tab[i] = cpow(mx, bx.indices[i]) *
               laguerre_neg_shift(bx.indices[i], db, arg);
    sig_prod = hadamard(sig_prod, sigmas[static_cast<size_t>(r)]);
  }
  cplx trailing_y = hadamard(sig_prod, y).sum();
  cplx sx = x.sum();
  auto ratios = ratio_table(alpha, gamma, N);
  std::vector<cplx> tail(static_cast<size_t>(N + 1));
  std::vector<bool> have(static_cast<size_t>(N + 1), false);
  cplx betaL = betas.back();
  auto shell_factor = [&](int S) {
    if (!have[static_cast<size_t>(S)]) {
      tail[static_cast<size_t>(S)] = humbert_phi1_series(
          {alpha + static_cast<double>(S), betaL,
           gamma + static_cast<double>(S)},
          sx, trailing_y, ic);
      have[static_cast<size_t>(S)] = true;
    }
    return ratios[static_cast<size_t>(S)] * tail[static_cast<size_t>(S)];
  };
  ShellSeries acc(ctl);
  level_series(k, L, N, tables, bx, shell_factor, acc);
  return finish("multiple_expansion", lhs, acc.value(), acc.last_shell(),
                acc.shells_used(), acc.converged(), t0);
}

// ---------------------------------------------------------------- tremblay_gf

IdentityReport tremblay_gf(cplx alpha, cplx gamma,
                           const std::vector<cplx>& betas,
                           const std::vector<CPoint>& w, const CPoint& u,
                           const SeriesControl& ctl,
                           std::uint64_t index_budget) {
  auto t0 = Clock::now();
  const int k = u.dim();
  const int L = static_cast<int>(betas.size()) - 1;
  if (L < 1) throw DomainError("tremblay_gf: need at least one level");
  if (w.size() != static_cast<size_t>(L + 1))
    throw DomainError("tremblay_gf: w must have L+1 entries");
  for (const auto& wi : w)
    if (wi.dim() != k) throw DomainError("tremblay_gf: dimension mismatch");
  if (!(u.abs_sum() < 1.0)) throw DomainError("tremblay_gf: requires |u|_1 < 1");
  check_beta_chain(betas);
  if (is_nonpos_integer(gamma))
    throw DomainError("tremblay_gf: gamma must avoid nonpositive integers");
  // tail sums w^(i) + ... + w^(L+1) must not vanish componentwise, i <= L
  CPoint tail_sum = w.back();
  for (int r = L - 1; r >= 0; --r) {
    tail_sum = cadd(tail_sum, w[static_cast<size_t>(r)]);
    for (int i = 0; i < k; ++i)
      if (tail_sum[i] == cplx(0.0))
        throw DomainError("tremblay_gf: vanishing w tail sum");
  }
  const int N = ctl.max_total_order;
  if (graded_count(k * L, N) > index_budget)
    throw BudgetError("tremblay_gf: index budget exceeded");
  SeriesControl ic = inner_ctl(ctl);
  CPoint wsum = w[0];
  for (int r = 1; r <= L; ++r) wsum = cadd(wsum, w[static_cast<size_t>(r)]);
  cplx lhs = humbert_phi1_series({alpha, betas[0], gamma}, -u.sum(),
                                 -hadamard(u, wsum).sum(), ic);
  BlockIndexer bx(k, N);
  std::vector<std::vector<cplx>> tables(static_cast<size_t>(L));
  for (int r = 0; r < L; ++r) {
    cplx db = betas[static_cast<size_t>(r)] - betas[static_cast<size_t>(r + 1)];
    auto& tab = tables[static_cast<size_t>(r)];
    tab.resize(bx.indices.size());
    for (size_t i = 0; i < bx.indices.size(); ++i)
      tab[i] = cpow(u, bx.indices[i]) *
               laguerre_neg_shift(bx.indices[i], db, w[static_cast<size_t>(r)]);
  }
  cplx mu = -u.sum();
  cplx mywl = -hadamard(u, w.back()).sum();
  cplx betaL = betas.back();
  auto ratios = ratio_table(alpha, gamma, N);
  std::vector<cplx> tail(static_cast<size_t>(N + 1));
  std::vector<bool> have(static_cast<size_t>(N + 1), false);
  auto shell_factor = [&](int S) {
    if (!have[static_cast<size_t>(S)]) {
      tail[static_cast<size_t>(S)] = humbert_phi1_series(
          {alpha + static_cast<double>(S), betaL,
           gamma + static_cast<double>(S)},
          mu, mywl, ic);
      have[static_cast<size_t>(S)] = true;
    }
    return ratios[static_cast<size_t>(S)] * tail[static_cast<size_t>(S)];
  };
  ShellSeries acc(ctl);
  level_series(k, L, N, tables, bx, shell_factor, acc);
  return finish("tremblay_gf", lhs, acc.value(), acc.last_shell(),
                acc.shells_used(), acc.converged(), t0);
}

// ----------------------------------------------------------- addition_theorem

IdentityReport addition_theorem(int m, const std::vector<cplx>& a,
                                const CPoint& u,
                                const std::vector<CPoint>& w) {
  auto t0 = Clock::now();
  if (m < 0) throw DomainError("addition_theorem: m must be nonnegative");
  const int L = static_cast<int>(a.size()) - 1;
  if (L < 1) throw DomainError("addition_theorem: need at least two a-parameters");
  if (w.size() != a.size())
    throw DomainError("addition_theorem: w must have L+1 entries");
  const int k = u.dim();
  for (const auto& wi : w)
    if (wi.dim() != k) throw DomainError("addition_theorem: dimension mismatch");
  if (std::abs(u.sum() + cplx(1.0)) > 1e-14)
    throw DomainError("addition_theorem: <u> = -1 required");
  cplx asum = 0.0;
  for (cplx ar : a) {
    if (is_nonpos_integer(ar))
      throw DomainError("addition_theorem: a_r must avoid nonpositive integers");
    asum += ar;
  }
  if (is_nonpos_integer(asum))
    throw DomainError("addition_theorem: sum of a_r must avoid nonpositive integers");
  CPoint wsum = w[0];
  for (size_t r = 1; r < w.size(); ++r) wsum = cadd(wsum, w[r]);
  cplx lhs = laguerre_uni(m, asum, -hadamard(u, wsum).sum());
  CPoint mu = neg(u);
  cplx last_arg = -hadamard(u, w.back()).sum();
  KahanC rhs;
  GradedStream st(k * L, m);
  MultiIndex n;
  std::vector<int> block(static_cast<size_t>(k));
  std::vector<int> bsum(static_cast<size_t>(k));
  while (st.next(n)) {
    int S = n.total();
    cplx t = 1.0;
    std::fill(bsum.begin(), bsum.end(), 0);
    for (int r = 0; r < L; ++r) {
      int bs = 0;
      for (int i = 0; i < k; ++i) {
        block[static_cast<size_t>(i)] = n[r * k + i];
        bsum[static_cast<size_t>(i)] += n[r * k + i];
        bs += n[r * k + i];
      }
      MultiIndex nb(block);
      t *= laguerre_multi(nb, a[static_cast<size_t>(r)] - static_cast<double>(bs),
                          w[static_cast<size_t>(r)]);
    }
    t *= cpow(mu, MultiIndex(bsum));
    t *= laguerre_uni(m - S, a.back() + static_cast<double>(S), last_arg);
    rhs.add(t);
  }
  auto rep = finish("addition_theorem", lhs, rhs.get(), m,
                    static_cast<int>(graded_count(k * L, m)), true, t0);
  return rep;
}

// ------------------------------------------------------------------ kummer_gf

namespace {

// Series side of the Kummer-point identities.  At <u> = 1 the multiple
// series is an alternating power-law in the shell order (the generating
// function's singularity sits on the evaluation boundary), so the partial
// sums are summed with two levels of terminal Euler averaging and the tail
// window is applied to the averaged increments.
cplx kummer_series_side(cplx alpha, const std::vector<cplx>& betas,
                        const std::vector<CPoint>& w, const CPoint& u,
                        const SeriesControl& ctl, ShellSeries& acc) {
  const int k = u.dim();
  const int L = static_cast<int>(w.size());
  const int N = ctl.max_total_order;
  cplx betaL = betas.back();
  BlockIndexer bx(k, N);
  std::vector<std::vector<cplx>> tables(static_cast<size_t>(L));
  for (int r = 0; r < L; ++r) {
    cplx db = betas[static_cast<size_t>(r)] - betas[static_cast<size_t>(r + 1)];
    auto& tab = tables[static_cast<size_t>(r)];
    tab.resize(bx.indices.size());
    for (size_t i = 0; i < bx.indices.size(); ++i)
      tab[i] = cpow(u, bx.indices[i]) *
               laguerre_neg_shift(bx.indices[i], db, w[static_cast<size_t>(r)]);
  }
  auto shell_factor = [&](int S) {
    cplx h = 0.5 * (alpha + static_cast<double>(S));
    return std::exp(log_gamma(h + 1.0) - log_gamma(h - betaL + 1.0)) /
           (alpha + static_cast<double>(S));
  };
  GradedStream st(k * L, N);
  MultiIndex n;
  std::vector<int> block(static_cast<size_t>(k));
  int cur = 0;
  KahanC shell, partial;
  cplx p_prev = 0.0, q_prev = 0.0, r_prev = 0.0;
  bool first = true;
  bool stopped = false;
  // folds the finished shell into the averaged estimator; returns false
  // once the tail window on the averaged increments is met
  auto flush_shell = [&](int S) {
    partial.add(shell_factor(S) * shell.get());
    shell = KahanC{};
    cplx p = partial.get();
    cplx q = first ? p : 0.5 * (p + p_prev);
    cplx r = first ? p : 0.5 * (q + q_prev);
    cplx incr = first ? r : (r - r_prev);
    first = false;
    p_prev = p;
    q_prev = q;
    r_prev = r;
    return acc.add_shell(incr);
  };
  while (st.next(n)) {
    int S = n.total();
    if (S != cur) {
      bool keep = flush_shell(cur);
      cur = S;
      if (!keep) {
        stopped = true;
        break;
      }
    }
    cplx t = 1.0;
    for (int r2 = 0; r2 < L; ++r2) {
      for (int i = 0; i < k; ++i)
        block[static_cast<size_t>(i)] = n[r2 * k + i];
      t *= tables[static_cast<size_t>(r2)][bx.rank.at(MultiIndex(block))];
    }
    shell.add(t);
  }
  if (!stopped) flush_shell(cur);
  return acc.value();
}

void check_kummer_pre(cplx alpha, const std::vector<cplx>& betas,
                      const std::vector<CPoint>& w, const CPoint& u) {
  const int L = static_cast<int>(w.size());
  if (L < 1) throw DomainError("kummer identity: need at least one level");
  if (betas.size() != static_cast<size_t>(L + 1))
    throw DomainError("kummer identity: betas must have L+1 entries");
  for (const auto& wi : w)
    if (wi.dim() != u.dim())
      throw DomainError("kummer identity: dimension mismatch");
  if (std::abs(u.sum() - cplx(1.0)) > 1e-14)
    throw DomainError("kummer identity: <u> = 1 required");
  cplx betaL = betas.back();
  if (!(betaL.real() < 1.0))
    throw DomainError("kummer identity: requires Re(beta_L) < 1");
  if (is_nonpos_integer(alpha - betaL + 1.0))
    throw DomainError(
        "kummer identity: alpha - beta_L + 1 must avoid nonpositive integers");
}

}  // namespace

IdentityReport kummer_gf(cplx alpha, const std::vector<cplx>& betas,
                         const std::vector<CPoint>& w, const CPoint& u,
                         const SeriesControl& ctl, const QuadOpts& q) {
  auto t0 = Clock::now();
  check_kummer_pre(alpha, betas, w, u);
  if (!(alpha.real() > 0.0))
    throw DomainError("kummer_gf: integral route requires Re(alpha) > 0");
  cplx betaL = betas.back();
  CPoint wsum = w[0];
  for (size_t r = 1; r < w.size(); ++r) wsum = cadd(wsum, w[r]);
  cplx y = -hadamard(u, wsum).sum();
  QuadRule rule = beta_rule(alpha.real(), 1.0 - betaL.real(), q.beta_nodes);
  cplx lhs = humbert_phi1_integral({alpha, betas[0], alpha - betaL + 1.0},
                                   -1.0, y, rule);
  ShellSeries acc(ctl);
  cplx series = kummer_series_side(alpha, betas, w, u, ctl, acc);
  cplx rhs = std::exp(log_gamma(alpha - betaL + 1.0) - log_gamma(alpha)) * series;
  return finish("kummer_gf", lhs, rhs, acc.last_shell(), acc.shells_used(),
                acc.converged(), t0);
}

IdentityReport kummer_split(cplx alpha, const std::vector<cplx>& betas,
                            const std::vector<CPoint>& w, const CPoint& u,
                            const SeriesControl& ctl) {
  auto t0 = Clock::now();
  check_kummer_pre(alpha, betas, w, u);
  cplx beta = betas[0];
  if (std::abs(betas.back() - beta) > 1e-12)
    throw DomainError("kummer_split: requires beta_L = beta_0");
  CPoint wsum = w[0];
  for (size_t r = 1; r < w.size(); ++r) wsum = cadd(wsum, w[r]);
  cplx W = hadamard(u, wsum).sum();
  SeriesControl ic = inner_ctl(ctl);
  cplx lhs = std::exp(log_gamma(alpha) - log_gamma(alpha - beta + 1.0)) *
             phi1_neg1_split(alpha, beta, -W, ic);
  ShellSeries acc(ctl);
  cplx rhs = kummer_series_side(alpha, betas, w, u, ctl, acc);
  return finish("kummer_split", lhs, rhs, acc.last_shell(), acc.shells_used(),
                acc.converged(), t0);
}

cplx kummer_split_integral_lhs(cplx alpha, cplx beta, cplx wsum,
                               const QuadOpts& q) {
  if (!(alpha.real() > 0.0))
    throw DomainError("kummer_split_integral_lhs: requires Re(alpha) > 0");
  QuadRule rule = beta_rule(alpha.real(), 1.0 - beta.real(), q.beta_nodes);
  return std::exp(log_gamma(alpha) - log_gamma(alpha - beta + 1.0)) *
         humbert_phi1_integral({alpha, beta, alpha - beta + 1.0}, -1.0, -wsum,
                               rule);
}

// ---------------------------------------------------------------- hardy_hille

IdentityReport hardy_hille(cplx alpha, const CPoint& x, const CPoint& y,
                           const CPoint& u, const SeriesControl& ctl) {
  auto t0 = Clock::now();
  const int k = u.dim();
  if (x.dim() != k || y.dim() != k)
    throw DomainError("hardy_hille: dimension mismatch");
  if (!(u.abs_sum() < 1.0)) throw DomainError("hardy_hille: requires |u|_1 < 1");
  if (is_real_integer(alpha) && alpha.real() <= -1.0)
    throw DomainError("hardy_hille: alpha must avoid integers <= -1");
  const int N = ctl.max_total_order;
  // 1 / Gamma(alpha + 1 + s)
  std::vector<cplx> ig(static_cast<size_t>(N + 1));
  ig[0] = recip_gamma(alpha + 1.0);
  for (int s = 0; s < N; ++s)
    ig[static_cast<size_t>(s + 1)] =
        ig[static_cast<size_t>(s)] / (alpha + 1.0 + static_cast<double>(s));
  ShellSeries acc(ctl);
  GradedStream st(k, N);
  MultiIndex n;
  int cur = 0;
  KahanC shell;
  bool stopped = false;
  while (st.next(n)) {
    if (n.total() != cur) {
      if (!acc.add_shell(ig[static_cast<size_t>(cur)] * shell.get())) {
        stopped = true;
        break;
      }
      shell = KahanC{};
      cur = n.total();
    }
    shell.add(n.factorial() * laguerre_multi(n, alpha, x) *
              laguerre_multi(n, alpha, y) * cpow(u, n));
  }
  if (!stopped) acc.add_shell(ig[static_cast<size_t>(cur)] * shell.get());

  cplx su = u.sum();
  cplx d = cplx(1.0) - su;
  cplx kernel = HardyHilleKernel::make(u, x, y).value;
  cplx rhs = std::exp(-(alpha + 1.0) * std::log(d)) *
             std::exp(-(hadamard(u, x).sum() + hadamard(u, y).sum()) / d) *
             bessel_i_reg(alpha, kernel, inner_ctl(ctl));
  return finish("hardy_hille", acc.value(), rhs, acc.last_shell(),
                acc.shells_used(), acc.converged(), t0);
}

// ------------------------------------------------------------ product_formula

bool product_formula_in_regime(const MultiIndex& m, const MultiIndex& n, int k,
                               int per_axis) {
  return k <= 2 && (m + n).total() <= 6 && per_axis <= 96;
}

IdentityReport product_formula(const MultiIndex& m, const MultiIndex& n,
                               double alpha, double beta, const CPoint& x,
                               const CPoint& y, const QuadRule& box) {
  auto t0 = Clock::now();
  const int k = m.dim();
  if (n.dim() != k || x.dim() != k || y.dim() != k)
    throw DomainError("product_formula: dimension mismatch");
  if (!(alpha > -1.0) || !(beta > -1.0) || !(alpha + beta > -1.0))
    throw DomainError("product_formula: requires alpha, beta, alpha+beta > -1");
  if (box.kind != QuadRule::Kind::box || box.dim != k + 1)
    throw DomainError("product_formula: box rule of dimension k+1 required");
  MultiIndex mn = m + n;
  if (!product_formula_in_regime(m, n, k, static_cast<int>(box.nodes.size())))
    throw BudgetError("product_formula: outside the certified quadrature regime");

  cplx lhs = laguerre_multi(m, alpha, x) * laguerre_multi(n, beta, y) *
             std::exp(-log_gamma(cplx(alpha + 1.0 + m.total())) -
                      log_gamma(cplx(beta + 1.0 + n.total())));

  // coefficient table of L_{m+n}^{(alpha+beta)}(.) over j <= m+n
  auto jlist = std::vector<MultiIndex>{};
  auto jcoef = std::vector<double>{};
  {
    GradedStream st(k, mn.total());
    MultiIndex j;
    while (st.next(j)) {
      bool ok = true;
      for (int i = 0; i < k; ++i)
        if (j[i] > mn[i]) ok = false;
      if (!ok) continue;
      double c = pochhammer(cplx(alpha + beta + j.total() + 1.0),
                            mn.total() - j.total())
                     .real();
      double denr = j.factorial();
      for (int i = 0; i < k; ++i)
        for (int t = 2; t <= mn[i] - j[i]; ++t) denr *= t;
      c /= denr;
      if (j.total() & 1) c = -c;
      jlist.push_back(j);
      jcoef.push_back(c);
    }
  }
  double ig = std::exp(-std::lgamma(alpha + beta + 1.0 + mn.total()));
  double adiff = alpha - beta;
  double apb = alpha + beta;
  // theta axis: measure-matched rule with the cos^{alpha+beta} weight built
  // in (robust for fractional exponents); phi axes: the box rule's
  // Gauss-Legendre nodes, smooth integer cosine powers kept in the integrand.
  QuadRule theta_rule =
      cosine_power_rule(apb, static_cast<int>(box.nodes.size()));
  const int mphi = static_cast<int>(box.nodes.size());
  std::vector<int> idx(static_cast<size_t>(k), 0);
  KahanC integral;
  std::vector<cplx> xi(static_cast<size_t>(k));
  for (size_t it = 0; it < theta_rule.nodes.size(); ++it) {
    double theta = theta_rule.nodes[it];
    double wtheta = theta_rule.weights[it];
    std::fill(idx.begin(), idx.end(), 0);
    KahanC slice;
    for (;;) {
      double wphi = 1.0;
      double phase_arg = adiff * theta;
      double cosfac = 1.0;
      for (int i = 0; i < k; ++i) {
        double phi = box.nodes[static_cast<size_t>(idx[static_cast<size_t>(i)])];
        wphi *= box.weights[static_cast<size_t>(idx[static_cast<size_t>(i)])];
        XiEta xe = XiEta::make(x[i], y[i], theta, phi);
        xi[static_cast<size_t>(i)] = xe.xi + xe.eta;
        phase_arg += (m[i] - n[i]) * phi;
        for (int t = 0; t < m[i] + n[i]; ++t) cosfac *= std::cos(phi);
      }
      cplx lag = 0.0;
      for (size_t jj = 0; jj < jlist.size(); ++jj) {
        cplx p = jcoef[jj];
        for (int i = 0; i < k; ++i)
          for (int t = 0; t < jlist[jj][i]; ++t) p *= xi[static_cast<size_t>(i)];
        lag += p;
      }
      slice.add(wphi * std::exp(cplx(0.0, phase_arg)) * cosfac * lag * ig);
      int i = k - 1;
      while (i >= 0 && ++idx[static_cast<size_t>(i)] == mphi) {
        idx[static_cast<size_t>(i)] = 0;
        --i;
      }
      if (i < 0) break;
    }
    integral.add(wtheta * slice.get());
  }
  double pref = std::pow(2.0, apb + mn.total()) / std::pow(M_PI, k + 1);
  cplx rhs = pref * integral.get();
  auto rep = finish("product_formula", lhs, rhs,
                    static_cast<int>(box.nodes.size()), 1, true, t0);
  return rep;
}

// ---------------------------------------------------------------- diagonal_gf

namespace {

// quadrature side of G_k(x,u), split as [0,1] + [1,inf)
cplx diagonal_quad_side(cplx beta, const CPoint& x, cplx u,
                        const SeriesControl& ctl, const QuadRule& semi,
                        int beta_nodes) {
  const int k = x.dim();
  const double sign = (k % 2 == 0) ? 1.0 : -1.0;
  SeriesControl lc(std::max(ctl.max_total_order, 400), 1e-16, 3);
  auto leroy_arg = [&](double s) {
    cplx p = sign * u;
    for (int i = 0; i < k; ++i) p *= (s + x[i]);
    return p;
  };
  // [0,1]: weight s^{Re beta - 1} through a (Re beta, 1) beta rule
  QuadRule rb = beta_rule(beta.real(), 1.0, beta_nodes);
  KahanC part1;
  for (size_t i = 0; i < rb.nodes.size(); ++i) {
    double t = rb.nodes[i];
    cplx g = std::exp(-t) * le_roy(cplx(static_cast<double>(k)), leroy_arg(t), lc);
    if (beta.imag() != 0.0)
      g *= std::exp(cplx(0.0, beta.imag() * std::log(t)));
    part1.add(rb.weights[i] * g);
  }
  cplx i1 = part1.get() / beta.real();
  // [1,inf): s = 1 + v against weight e^{-decay v}
  KahanC part2;
  for (size_t i = 0; i < semi.nodes.size(); ++i) {
    double v = semi.nodes[i];
    double s = 1.0 + v;
    cplx arg = leroy_arg(s);
    cplx val;
    if (k == 1) {
      val = std::exp(-s + semi.decay * v + (beta - 1.0) * std::log(s) + arg);
    } else if (arg.imag() == 0.0 && arg.real() >= 0.0) {
      cplx lf = -s + semi.decay * v + (beta - 1.0) * std::log(s) +
                log_le_roy_positive(k, arg.real(), lc);
      val = std::exp(lf);
    } else {
      val = std::exp(-s + semi.decay * v) *
            std::exp((beta - 1.0) * std::log(s)) *
            le_roy(cplx(static_cast<double>(k)), arg, lc);
    }
    part2.add(semi.weights[i] * val);
  }
  return std::exp(-log_gamma(beta)) * (i1 + part2.get());
}

}  // namespace

IdentityReport diagonal_gf(cplx beta, const CPoint& x, cplx u,
                           const SeriesControl& ctl, const QuadRule& semi,
                           int beta_nodes) {
  auto t0 = Clock::now();
  const int k = x.dim();
  if (!(beta.real() > 0.0)) throw DomainError("diagonal_gf: requires Re(beta) > 0");
  double bound = std::pow(static_cast<double>(k), -static_cast<double>(k));
  if (!(std::abs(u) < bound))
    throw DomainError("diagonal_gf: requires |u| < 1/k^k");
  if (semi.kind != QuadRule::Kind::semi_infinite)
    throw DomainError("diagonal_gf: semi-infinite rule required");
  ShellSeries acc(ctl);
  cplx upow = 1.0;
  for (int nn = 0; nn <= ctl.max_total_order; ++nn) {
    if (nn > 0) upow *= u;
    MultiIndex n(std::vector<int>(static_cast<size_t>(k), nn));
    if (!acc.add_shell(laguerre_neg_shift(n, beta, x) * upow)) break;
  }
  cplx rhs = diagonal_quad_side(beta, x, u, ctl, semi, beta_nodes);
  return finish("diagonal_gf", acc.value(), rhs, acc.last_shell(),
                acc.shells_used(), acc.converged(), t0);
}

IdentityReport diagonal_gf(cplx beta, const CPoint& x, cplx u,
                           const SeriesControl& ctl, const QuadOpts& q) {
  const int k = x.dim();
  double bound = std::pow(static_cast<double>(k), -static_cast<double>(k));
  if (!(std::abs(u) < bound))
    throw DomainError("diagonal_gf: requires |u| < 1/k^k");
  double decay = 1.0 - k * std::pow(std::abs(u), 1.0 / k);
  QuadRule semi = semi_infinite_rule(decay, q.semi_nodes);
  return diagonal_gf(beta, x, u, ctl, semi, q.beta_nodes);
}

cplx diagonal_gf_closed_k1(cplx beta, cplx x, cplx u) {
  return std::exp(-beta * std::log(cplx(1.0) + u)) * std::exp(-u * x);
}

cplx diagonal_gf_quad_coefficient(cplx beta, const CPoint& x, int n,
                                  double umax, int degree,
                                  const SeriesControl& ctl,
                                  const QuadOpts& q) {
  if (n > degree) throw DomainError("diagonal_gf_quad_coefficient: n > degree");
  const int k = x.dim();
  // Chebyshev points on [0, umax]; Newton divided differences; expand the
  // Newton form to monomial coefficients.
  std::vector<double> pts(static_cast<size_t>(degree + 1));
  std::vector<cplx> vals(static_cast<size_t>(degree + 1));
  for (int p = 0; p <= degree; ++p) {
    double c = std::cos(M_PI * p / degree);
    pts[static_cast<size_t>(p)] = 0.5 * umax * (1.0 + c);
    double decay = 1.0 - k * std::pow(pts[static_cast<size_t>(p)], 1.0 / k);
    QuadRule semi = semi_infinite_rule(decay, q.semi_nodes);
    vals[static_cast<size_t>(p)] = diagonal_quad_side(
        beta, x, cplx(pts[static_cast<size_t>(p)]), ctl, semi, q.beta_nodes);
  }
  // divided-difference table (in place)
  for (int lev = 1; lev <= degree; ++lev)
    for (int i = degree; i >= lev; --i)
      vals[static_cast<size_t>(i)] =
          (vals[static_cast<size_t>(i)] - vals[static_cast<size_t>(i - 1)]) /
          (pts[static_cast<size_t>(i)] - pts[static_cast<size_t>(i - lev)]);
  // Newton form -> monomial coefficients
  std::vector<cplx> mono(static_cast<size_t>(degree + 1), cplx(0.0));
  for (int i = degree; i >= 0; --i) {
    for (int j = degree; j >= 1; --j)
      mono[static_cast<size_t>(j)] =
          mono[static_cast<size_t>(j - 1)] -
          mono[static_cast<size_t>(j)] * pts[static_cast<size_t>(i)];
    mono[0] = vals[static_cast<size_t>(i)] - mono[0] * pts[static_cast<size_t>(i)];
  }
  return mono[static_cast<size_t>(n)];
}

// ------------------------------------------------------ diagonal sign finding

DiagonalSignFinding diagonal_binomial_sign(double u) {
  auto t0 = Clock::now();
  if (!(u > 0.0 && u < 0.25))
    throw DomainError("diagonal_binomial_sign: need 0 < u < 1/4");
  // brute-force diagonal of 1/(1-x-y): expand (x+y)^t with a Pascal row and
  // read the coefficient of x^n y^n from level t = 2n
  const int terms = 10;
  Kahan partial;
  std::vector<double> row{1.0};
  double upow = 1.0;
  for (int t = 0; t <= 2 * terms; ++t) {
    if (t > 0) {
      std::vector<double> next(row.size() + 1, 0.0);
      for (size_t i = 0; i < row.size(); ++i) {
        next[i] += row[i];
        next[i + 1] += row[i];
      }
      row.swap(next);
    }
    if (t % 2 == 0) {
      int nn = t / 2;
      if (nn > 0) upow *= u;
      partial.add(row[static_cast<size_t>(nn)] * upow);
    }
  }
  double series = partial.get();
  double minus = 1.0 / std::sqrt(1.0 - 4.0 * u);
  double plus = 1.0 / std::sqrt(1.0 + 4.0 * u);
  double rm = std::abs(series - minus) / std::abs(minus);
  double rp = std::abs(series - plus) / std::abs(plus);
  DiagonalSignFinding f;
  f.decided_sign = (rm < rp) ? "1-4u" : "1+4u";
  f.losing_residual = std::max(rm, rp);
  double winner = (rm < rp) ? minus : plus;
  f.report = finish("diagonal_binomial_sign", cplx(series), cplx(winner), terms,
                    terms + 1, true, t0);
  return f;
}

}  // namespace mlag
