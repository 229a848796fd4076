#include "mlag/laguerre.hpp"

#include <algorithm>
#include <cmath>

namespace mlag {

namespace {

// alpha lies within 1e-12 of an integer in [lo, hi]
bool near_int_in(cplx a, long lo, long hi) {
  if (!is_real_integer(a)) return false;
  long r = std::llround(a.real());
  return r >= lo && r <= hi;
}

// Odometer over the box 0 <= j <= n; returns false after the last index.
bool box_advance(std::vector<int>& j, const MultiIndex& n) {
  int k = n.dim();
  for (int i = k - 1; i >= 0; --i) {
    if (j[static_cast<size_t>(i)] < n[i]) {
      ++j[static_cast<size_t>(i)];
      return true;
    }
    j[static_cast<size_t>(i)] = 0;
  }
  return false;
}

}  // namespace

cplx laguerre_uni(int n, cplx alpha, cplx x) {
  if (n < 0) throw DomainError("laguerre_uni: degree must be nonnegative");
  if (n == 0) return 1.0;
  KahanC acc;
  if (near_int_in(alpha, -static_cast<long>(n), -1)) {
    // term ratio would divide by zero; build each Pochhammer directly
    double invfact = 1.0;
    for (int j = 2; j <= n; ++j) invfact *= j;
    cplx xj = 1.0;
    double jfact = 1.0, njfact = invfact;
    for (int j = 0; j <= n; ++j) {
      if (j > 0) {
        xj *= -x;
        jfact *= j;
        njfact /= (n - j + 1);
      }
      acc.add(pochhammer(alpha + static_cast<double>(j + 1), n - j) * xj /
              (jfact * njfact));
    }
    return acc.get();
  }
  cplx term = pochhammer(alpha + 1.0, n);
  double nf = 1.0;
  for (int j = 2; j <= n; ++j) nf *= j;
  term /= nf;
  acc.add(term);
  for (int j = 0; j < n; ++j) {
    term *= -x * static_cast<double>(n - j) /
            ((static_cast<double>(j) + 1.0) * (alpha + static_cast<double>(j) + 1.0));
    acc.add(term);
  }
  return acc.get();
}

cplx laguerre_multi(const MultiIndex& n, cplx alpha, const CPoint& x) {
  if (n.dim() != x.dim()) throw DomainError("laguerre_multi: dimension mismatch");
  const int k = n.dim();
  const int S = n.total();
  if (S == 0) return 1.0;
  // P[t] = (alpha + t + 1)_{S - t}, downward recurrence (exact zeros kept)
  std::vector<cplx> P(static_cast<size_t>(S + 1));
  P[static_cast<size_t>(S)] = 1.0;
  for (int t = S - 1; t >= 0; --t)
    P[static_cast<size_t>(t)] =
        (alpha + static_cast<double>(t) + 1.0) * P[static_cast<size_t>(t + 1)];
  // C[i][j] = x_i^j / (j! (n_i - j)!)
  std::vector<std::vector<cplx>> C(static_cast<size_t>(k));
  for (int i = 0; i < k; ++i) {
    auto& ci = C[static_cast<size_t>(i)];
    ci.resize(static_cast<size_t>(n[i] + 1));
    double nf = 1.0;
    for (int j = 2; j <= n[i]; ++j) nf *= j;
    ci[0] = 1.0 / nf;
    for (int j = 1; j <= n[i]; ++j)
      ci[static_cast<size_t>(j)] = ci[static_cast<size_t>(j - 1)] * x[i] *
                                   static_cast<double>(n[i] - j + 1) /
                                   static_cast<double>(j);
  }
  KahanC acc;
  std::vector<int> j(static_cast<size_t>(k), 0);
  do {
    cplx t = 1.0;
    int tj = 0;
    for (int i = 0; i < k; ++i) {
      t *= C[static_cast<size_t>(i)][static_cast<size_t>(j[static_cast<size_t>(i)])];
      tj += j[static_cast<size_t>(i)];
    }
    if (tj & 1) t = -t;
    acc.add(t * P[static_cast<size_t>(tj)]);
  } while (box_advance(j, n));
  return acc.get();
}

cplx laguerre_neg_shift(const MultiIndex& n, cplx beta, const CPoint& x) {
  if (n.dim() != x.dim())
    throw DomainError("laguerre_neg_shift: dimension mismatch");
  const int k = n.dim();
  const int S = n.total();
  if (S == 0) return 1.0;
  if (near_int_in(beta, 1 - static_cast<long>(S), 0)) {
    // (1 - beta - <n>)_<j> vanishes inside the sum; use the rearranged form
    return laguerre_multi(n, -beta - static_cast<double>(S), x);
  }
  // D[i][j] = (-n_i)_j x_i^j / j!
  std::vector<std::vector<cplx>> D(static_cast<size_t>(k));
  for (int i = 0; i < k; ++i) {
    auto& di = D[static_cast<size_t>(i)];
    di.resize(static_cast<size_t>(n[i] + 1));
    di[0] = 1.0;
    for (int j = 1; j <= n[i]; ++j)
      di[static_cast<size_t>(j)] =
          di[static_cast<size_t>(j - 1)] * x[i] *
          (static_cast<double>(-n[i] + j - 1)) / static_cast<double>(j);
  }
  // W[t] = prefactor / (1 - beta - S)_t with
  // prefactor = (-1)^S (beta)_S / n!; go through log-gamma once the direct
  // product would overflow.
  cplx pref;
  if (S <= 120) {
    pref = pochhammer(beta, S) / n.factorial();
  } else {
    cplx lg = log_gamma(beta + static_cast<double>(S)) - log_gamma(beta);
    for (int i = 0; i < k; ++i)
      lg -= log_gamma(cplx(static_cast<double>(n[i] + 1)));
    pref = std::exp(lg);
  }
  if (S & 1) pref = -pref;
  std::vector<cplx> W(static_cast<size_t>(S + 1));
  W[0] = pref;
  const cplx base = cplx(1.0) - beta - static_cast<double>(S);
  for (int t = 1; t <= S; ++t)
    W[static_cast<size_t>(t)] =
        W[static_cast<size_t>(t - 1)] / (base + static_cast<double>(t - 1));
  // shell sums M_t = sum_{<j> = t} prod D_i[j_i]
  std::vector<KahanC> M(static_cast<size_t>(S + 1));
  std::vector<int> j(static_cast<size_t>(k), 0);
  do {
    cplx t = 1.0;
    int tj = 0;
    for (int i = 0; i < k; ++i) {
      t *= D[static_cast<size_t>(i)][static_cast<size_t>(j[static_cast<size_t>(i)])];
      tj += j[static_cast<size_t>(i)];
    }
    M[static_cast<size_t>(tj)].add(t);
  } while (box_advance(j, n));
  KahanC acc;
  for (int t = 0; t <= S; ++t)
    acc.add(W[static_cast<size_t>(t)] * M[static_cast<size_t>(t)].get());
  return acc.get();
}

cplx multiple_laguerre_2nd(const MultiIndex& n, cplx alpha, const CPoint& beta,
                           cplx x) {
  if (n.dim() != beta.dim())
    throw DomainError("multiple_laguerre_2nd: dimension mismatch");
  return n.factorial() * laguerre_multi(n, alpha, scale(-x, beta));
}

// --------------------------------------------------- generating-function oracle

namespace {

// Dense polynomial in z_1..z_k truncated at total degree N, coefficients
// indexed by the graded enumeration.
struct TruncPoly {
  int k, N;
  const std::vector<MultiIndex>* idx;
  const std::unordered_map<MultiIndex, size_t, MultiIndexHash>* rank;
  std::vector<cplx> c;

  TruncPoly(int kk, int NN, const std::vector<MultiIndex>* ix,
            const std::unordered_map<MultiIndex, size_t, MultiIndexHash>* rk)
      : k(kk), N(NN), idx(ix), rank(rk), c(ix->size(), cplx(0.0)) {}
};

TruncPoly mul(const TruncPoly& a, const TruncPoly& b) {
  TruncPoly r(a.k, a.N, a.idx, a.rank);
  const auto& ix = *a.idx;
  for (size_t i = 0; i < ix.size(); ++i) {
    if (a.c[i] == cplx(0.0)) continue;
    int ti = ix[i].total();
    for (size_t j = 0; j < ix.size(); ++j) {
      if (b.c[j] == cplx(0.0)) continue;
      if (ti + ix[j].total() > a.N) continue;
      r.c[a.rank->at(ix[i] + ix[j])] += a.c[i] * b.c[j];
    }
  }
  return r;
}

void axpy(TruncPoly& y, cplx a, const TruncPoly& x) {
  for (size_t i = 0; i < y.c.size(); ++i) y.c[i] += a * x.c[i];
}

}  // namespace

GfCoefficients::GfCoefficients(int k, int max_total,
                               std::vector<MultiIndex> indices,
                               std::vector<cplx> values)
    : k_(k), max_total_(max_total), indices_(std::move(indices)),
      values_(std::move(values)) {
  for (size_t i = 0; i < indices_.size(); ++i) rank_.emplace(indices_[i], i);
}

cplx GfCoefficients::at(const MultiIndex& n) const {
  auto it = rank_.find(n);
  if (it == rank_.end())
    throw DomainError("GfCoefficients: index outside the expansion");
  return values_[it->second];
}

GfCoefficients gf_coefficients(cplx alpha, const CPoint& x, int max_total,
                               std::uint64_t budget) {
  const int k = x.dim();
  const int N = max_total;
  if (graded_count(k, N) > budget)
    throw BudgetError("gf_coefficients: index budget exceeded");
  auto indices = graded_indices(k, N);
  std::unordered_map<MultiIndex, size_t, MultiIndexHash> rank;
  for (size_t i = 0; i < indices.size(); ++i) rank.emplace(indices[i], i);

  // A = <z>, B = <x o z>; both homogeneous of degree 1.
  TruncPoly A(k, N, &indices, &rank), B(k, N, &indices, &rank);
  for (int i = 0; i < k; ++i) {
    std::vector<int> e(static_cast<size_t>(k), 0);
    e[static_cast<size_t>(i)] = 1;
    size_t r = rank.at(MultiIndex(e));
    A.c[r] = 1.0;
    B.c[r] = x[i];
  }
  // geom = 1/(1 - <z>) = sum A^m
  TruncPoly geom(k, N, &indices, &rank), Apow(k, N, &indices, &rank);
  Apow.c[0] = 1.0;
  geom.c[0] = 1.0;
  for (int m = 1; m <= N; ++m) {
    Apow = mul(Apow, A);
    axpy(geom, 1.0, Apow);
  }
  // W = -B * geom, then e^W = sum W^m / m! (W has no constant term)
  TruncPoly W = mul(B, geom);
  for (auto& v : W.c) v = -v;
  TruncPoly expW(k, N, &indices, &rank), Wpow(k, N, &indices, &rank);
  Wpow.c[0] = 1.0;
  expW.c[0] = 1.0;
  double mfact = 1.0;
  for (int m = 1; m <= N; ++m) {
    Wpow = mul(Wpow, W);
    mfact *= m;
    axpy(expW, 1.0 / mfact, Wpow);
  }
  // pref = (1 - <z>)^{-alpha-1} = sum (alpha+1)_m A^m / m!
  TruncPoly pref(k, N, &indices, &rank);
  Apow = TruncPoly(k, N, &indices, &rank);
  Apow.c[0] = 1.0;
  pref.c[0] = 1.0;
  cplx rising = 1.0;
  mfact = 1.0;
  for (int m = 1; m <= N; ++m) {
    Apow = mul(Apow, A);
    rising *= alpha + static_cast<double>(m);
    mfact *= m;
    axpy(pref, rising / mfact, Apow);
  }
  TruncPoly result = mul(pref, expW);
  return GfCoefficients(k, N, std::move(indices), std::move(result.c));
}

}  // namespace mlag
