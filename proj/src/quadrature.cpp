#include "mlag/quadrature.hpp"

#include <cmath>
#include <cstdlib>

namespace mlag {

namespace {

// Symmetric tridiagonal QL with implicit shifts, tracking the first row of
// the eigenvector matrix (Golub-Welsch).  d = diagonal, e = off-diagonal
// (e[0..n-2]), z = first-component vector, initialized to (1,0,...,0).
// Classic imtqlx scheme.
void imtqlx(std::vector<double>& d, std::vector<double>& e,
            std::vector<double>& z) {
  const int n = static_cast<int>(d.size());
  if (n == 1) return;
  const double eps = 2.220446049250313e-16;
  e.resize(static_cast<size_t>(n), 0.0);
  for (int l = 0; l < n; ++l) {
    int iter = 0;
    int m;
    do {
      for (m = l; m < n - 1; ++m) {
        double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= eps * dd) break;
      }
      if (m != l) {
        if (iter++ == 60)
          throw Error("quadrature: eigenvalue iteration failed to converge");
        double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
        double r = std::hypot(g, 1.0);
        g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
        double s = 1.0, c = 1.0, p = 0.0;
        bool underflow = false;
        for (int i = m - 1; i >= l; --i) {
          double f = s * e[i];
          double b = c * e[i];
          r = std::hypot(f, g);
          e[i + 1] = r;
          if (r == 0.0) {
            d[i + 1] -= p;
            e[m] = 0.0;
            underflow = true;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[i + 1] - p;
          r = (d[i] - g) * s + 2.0 * c * b;
          p = s * r;
          d[i + 1] = g + p;
          g = c * r - b;
          f = z[i + 1];
          z[i + 1] = s * z[i] + c * f;
          z[i] = c * z[i] - s * f;
        }
        if (underflow) continue;
        d[l] -= p;
        e[l] = g;
        e[m] = 0.0;
      }
    } while (m != l);
  }
  // Sort ascending, carrying z along.
  for (int i = 0; i < n - 1; ++i) {
    int k = i;
    for (int j = i + 1; j < n; ++j)
      if (d[j] < d[k]) k = j;
    std::swap(d[i], d[k]);
    std::swap(z[i], z[k]);
  }
}

// Nodes and normalized weights (summing to 1) from the monic three-term
// recurrence p_{j+1} = (x - alpha_j) p_j - beta_j p_{j-1}.
void gauss_from_recurrence(const std::vector<double>& alpha,
                           const std::vector<double>& beta_sq,
                           std::vector<double>& nodes,
                           std::vector<double>& weights) {
  const int n = static_cast<int>(alpha.size());
  std::vector<double> d = alpha;
  std::vector<double> e(static_cast<size_t>(n > 0 ? n - 1 : 0));
  for (int j = 1; j < n; ++j) e[static_cast<size_t>(j - 1)] = std::sqrt(beta_sq[static_cast<size_t>(j)]);
  std::vector<double> z(static_cast<size_t>(n), 0.0);
  z[0] = 1.0;
  imtqlx(d, e, z);
  nodes = d;
  weights.resize(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) weights[static_cast<size_t>(i)] = z[static_cast<size_t>(i)] * z[static_cast<size_t>(i)];
}

// Monic Jacobi recurrence on [-1,1] for weight (1-x)^A (1+x)^B.
void jacobi_recurrence(double A, double B, int n, std::vector<double>& alpha,
                       std::vector<double>& beta_sq) {
  alpha.resize(static_cast<size_t>(n));
  beta_sq.assign(static_cast<size_t>(n), 0.0);
  double ab = A + B;
  alpha[0] = (B - A) / (ab + 2.0);
  for (int j = 1; j < n; ++j) {
    double t = 2.0 * j + ab;
    alpha[static_cast<size_t>(j)] = (B * B - A * A) / (t * (t + 2.0));
  }
  if (n > 1) beta_sq[1] = 4.0 * (1.0 + A) * (1.0 + B) / ((ab + 2.0) * (ab + 2.0) * (ab + 3.0));
  for (int j = 2; j < n; ++j) {
    double t = 2.0 * j + ab;
    beta_sq[static_cast<size_t>(j)] =
        4.0 * j * (j + A) * (j + B) * (j + ab) /
        (t * t * (t + 1.0) * (t - 1.0));
  }
}

}  // namespace

double QuadRule::weight_sum() const {
  Kahan acc;
  for (double w : weights) acc.add(w);
  return acc.get();
}

QuadRule beta_rule(double a, double b, int m) {
  if (!(a > 0.0) || !(b > 0.0))
    throw DomainError("beta_rule: exponents must be positive");
  if (m < 2) throw DomainError("beta_rule: need at least 2 nodes");
  // t = (1+xi)/2 maps weight t^{a-1}(1-t)^{b-1} to Jacobi (A,B) = (b-1,a-1).
  std::vector<double> alpha, beta_sq, xi, w;
  jacobi_recurrence(b - 1.0, a - 1.0, m, alpha, beta_sq);
  gauss_from_recurrence(alpha, beta_sq, xi, w);
  QuadRule rule;
  rule.kind = QuadRule::Kind::jacobi_beta;
  rule.a_exp = a;
  rule.b_exp = b;
  rule.nodes.resize(static_cast<size_t>(m));
  rule.weights = w;
  for (int i = 0; i < m; ++i)
    rule.nodes[static_cast<size_t>(i)] = 0.5 * (1.0 + xi[static_cast<size_t>(i)]);
  return rule;
}

QuadRule legendre01_rule(int m) {
  if (m < 2) throw DomainError("legendre01_rule: need at least 2 nodes");
  std::vector<double> alpha(static_cast<size_t>(m), 0.0);
  std::vector<double> beta_sq(static_cast<size_t>(m), 0.0);
  for (int j = 1; j < m; ++j)
    beta_sq[static_cast<size_t>(j)] =
        static_cast<double>(j) * j / (4.0 * j * j - 1.0);
  std::vector<double> xi, w;
  gauss_from_recurrence(alpha, beta_sq, xi, w);
  QuadRule rule;
  rule.kind = QuadRule::Kind::legendre01;
  rule.nodes.resize(static_cast<size_t>(m));
  rule.weights = w;
  for (int i = 0; i < m; ++i)
    rule.nodes[static_cast<size_t>(i)] = 0.5 * (1.0 + xi[static_cast<size_t>(i)]);
  return rule;
}

QuadRule semi_infinite_rule(double decay, int m) {
  if (!(decay > 0.0))
    throw DomainError("semi_infinite_rule: decay rate must be positive");
  if (m < 2) throw DomainError("semi_infinite_rule: need at least 2 nodes");
  // Monic Laguerre recurrence for weight e^{-s}: alpha_j = 2j+1, beta_j = j^2.
  std::vector<double> alpha(static_cast<size_t>(m));
  std::vector<double> beta_sq(static_cast<size_t>(m), 0.0);
  for (int j = 0; j < m; ++j) alpha[static_cast<size_t>(j)] = 2.0 * j + 1.0;
  for (int j = 1; j < m; ++j)
    beta_sq[static_cast<size_t>(j)] = static_cast<double>(j) * j;
  std::vector<double> s, w;
  gauss_from_recurrence(alpha, beta_sq, s, w);
  QuadRule rule;
  rule.kind = QuadRule::Kind::semi_infinite;
  rule.decay = decay;
  rule.nodes.resize(static_cast<size_t>(m));
  rule.weights.resize(static_cast<size_t>(m));
  for (int i = 0; i < m; ++i) {
    rule.nodes[static_cast<size_t>(i)] = s[static_cast<size_t>(i)] / decay;
    rule.weights[static_cast<size_t>(i)] = w[static_cast<size_t>(i)] / decay;
  }
  return rule;
}

QuadRule box_rule(int dim, int per_axis, std::uint64_t node_budget) {
  if (dim < 2) throw DomainError("box_rule: dimension must be >= 2");
  if (per_axis < 2) throw DomainError("box_rule: need at least 2 nodes per axis");
  double total = std::pow(static_cast<double>(per_axis), dim);
  if (total > static_cast<double>(node_budget))
    throw BudgetError("box_rule: node budget exceeded");
  std::vector<double> alpha(static_cast<size_t>(per_axis), 0.0);
  std::vector<double> beta_sq(static_cast<size_t>(per_axis), 0.0);
  for (int j = 1; j < per_axis; ++j)
    beta_sq[static_cast<size_t>(j)] =
        static_cast<double>(j) * j / (4.0 * j * j - 1.0);
  std::vector<double> xi, w;
  gauss_from_recurrence(alpha, beta_sq, xi, w);
  QuadRule rule;
  rule.kind = QuadRule::Kind::box;
  rule.dim = dim;
  rule.nodes.resize(static_cast<size_t>(per_axis));
  rule.weights.resize(static_cast<size_t>(per_axis));
  for (int i = 0; i < per_axis; ++i) {
    rule.nodes[static_cast<size_t>(i)] = 0.5 * M_PI * xi[static_cast<size_t>(i)];
    // the normalized weights sum to 1; the axis measure is pi
    rule.weights[static_cast<size_t>(i)] = M_PI * w[static_cast<size_t>(i)];
  }
  return rule;
}

QuadRule cosine_power_rule(double gamma, int m) {
  if (!(gamma > -1.0))
    throw DomainError("cosine_power_rule: gamma must be > -1");
  if (m < 2) throw DomainError("cosine_power_rule: need at least 2 nodes");
  // tanh-sinh discretization of the measure: theta = (pi/2) tanh((pi/2) sinh t).
  // The transformed integrand decays like exp(-(1+gamma) pi sinh t), so the
  // window must widen as gamma approaches -1; weights are assembled in log
  // space to survive the wide window.
  const double tmax =
      std::max(4.0, std::asinh(45.0 / (M_PI * (1.0 + gamma))));
  const int naux = std::max(2400, static_cast<int>(2.0 * tmax / 0.0035));
  const double h = 2.0 * tmax / naux;
  std::vector<double> th(static_cast<size_t>(naux + 1));
  std::vector<double> wt(static_cast<size_t>(naux + 1));
  for (int i = 0; i <= naux; ++i) {
    double t = -tmax + i * h;
    double sh = 0.5 * M_PI * std::sinh(t);
    double ash = std::abs(sh);
    double theta = 0.5 * M_PI * std::tanh(sh);
    // pi/2 - |theta| = pi e^{-2|sh|} / (1 + e^{-2|sh|}), stable at the ends
    double q = std::exp(-2.0 * ash);
    double dist = M_PI * q / (1.0 + q);
    double logc = (dist > 1e-8) ? std::log(std::sin(dist))
                                : std::log(M_PI) - 2.0 * ash - std::log1p(q);
    double logcosh_sh = ash + std::log1p(q) - std::log(2.0);
    double lw = std::log(h * 0.25 * M_PI * M_PI) + std::log(std::cosh(t)) -
                2.0 * logcosh_sh + gamma * logc;
    th[static_cast<size_t>(i)] = theta;
    wt[static_cast<size_t>(i)] = std::exp(lw);
  }
  // Stieltjes procedure for the recurrence coefficients
  std::vector<double> alpha(static_cast<size_t>(m), 0.0);
  std::vector<double> beta_sq(static_cast<size_t>(m), 0.0);
  std::vector<double> pk(th.size(), 1.0), pkm1(th.size(), 0.0);
  double nrm = 0.0, mu0 = 0.0;
  for (size_t i = 0; i < th.size(); ++i) mu0 += wt[i];
  nrm = mu0;
  for (int j = 0; j < m; ++j) {
    double num = 0.0;
    for (size_t i = 0; i < th.size(); ++i) num += wt[i] * th[i] * pk[i] * pk[i];
    alpha[static_cast<size_t>(j)] = num / nrm;
    std::vector<double> pnext(th.size());
    double bj = (j > 0) ? beta_sq[static_cast<size_t>(j)] : 0.0;
    for (size_t i = 0; i < th.size(); ++i)
      pnext[i] = (th[i] - alpha[static_cast<size_t>(j)]) * pk[i] - bj * pkm1[i];
    double nrm_next = 0.0;
    for (size_t i = 0; i < th.size(); ++i) nrm_next += wt[i] * pnext[i] * pnext[i];
    if (j + 1 < m) beta_sq[static_cast<size_t>(j + 1)] = nrm_next / nrm;
    pkm1.swap(pk);
    pk.swap(pnext);
    nrm = nrm_next;
  }
  std::vector<double> nodes, weights;
  gauss_from_recurrence(alpha, beta_sq, nodes, weights);
  QuadRule rule;
  rule.kind = QuadRule::Kind::box;  // angular axis rule
  rule.a_exp = gamma;
  rule.nodes = nodes;
  rule.weights = weights;
  for (auto& w : rule.weights) w *= mu0;
  return rule;
}

cplx integrate_box(const QuadRule& rule,
                   const std::function<cplx(const std::vector<double>&)>& f) {
  if (rule.kind != QuadRule::Kind::box)
    throw DomainError("integrate_box: rule is not a box rule");
  const int d = rule.dim;
  const int m = static_cast<int>(rule.nodes.size());
  std::vector<int> idx(static_cast<size_t>(d), 0);
  std::vector<double> pt(static_cast<size_t>(d));
  KahanC acc;
  for (;;) {
    double w = 1.0;
    for (int i = 0; i < d; ++i) {
      pt[static_cast<size_t>(i)] = rule.nodes[static_cast<size_t>(idx[static_cast<size_t>(i)])];
      w *= rule.weights[static_cast<size_t>(idx[static_cast<size_t>(i)])];
    }
    acc.add(w * f(pt));
    int i = d - 1;
    while (i >= 0 && ++idx[static_cast<size_t>(i)] == m) {
      idx[static_cast<size_t>(i)] = 0;
      --i;
    }
    if (i < 0) break;
  }
  return acc.get();
}

}  // namespace mlag
