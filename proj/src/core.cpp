#include "mlag/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace mlag {

namespace {

constexpr double kLogPi = 1.14472988584940017414342735135306;
constexpr double kHalfLog2Pi = 0.91893853320467274178032973640562;

// Stirling series coefficients B_{2n} / (2n (2n-1)).
constexpr double kStirling[] = {
    1.0 / 12.0,           -1.0 / 360.0,         1.0 / 1260.0,
    -1.0 / 1680.0,        1.0 / 1188.0,         -691.0 / 360360.0,
    1.0 / 156.0,          -3617.0 / 122400.0,
};
constexpr double kStirlingRadius = 10.0;

}  // namespace

bool is_real_integer(cplx z, double tol) {
  return std::abs(z.imag()) <= tol &&
         std::abs(z.real() - std::round(z.real())) <= tol;
}

bool is_nonpos_integer(cplx z, double tol) {
  return is_real_integer(z, tol) && std::round(z.real()) <= 0.0;
}

bool is_nonneg_integer(cplx z, double tol) {
  return is_real_integer(z, tol) && std::round(z.real()) >= 0.0;
}

// ----------------------------------------------------------------- MultiIndex

MultiIndex::MultiIndex(std::vector<int> entries) : e_(std::move(entries)) {
  validate_();
}

MultiIndex::MultiIndex(std::initializer_list<int> entries) : e_(entries) {
  validate_();
}

void MultiIndex::validate_() const {
  if (e_.empty()) throw DomainError("MultiIndex: dimension must be >= 1");
  for (int v : e_)
    if (v < 0) throw DomainError("MultiIndex: entries must be nonnegative");
}

MultiIndex MultiIndex::zeros(int k) {
  return MultiIndex(std::vector<int>(static_cast<size_t>(k), 0));
}

int MultiIndex::total() const {
  int s = 0;
  for (int v : e_) s += v;
  return s;
}

double MultiIndex::factorial() const {
  double p = 1.0;
  for (int v : e_) {
    for (int j = 2; j <= v; ++j) p *= j;
    if (std::isinf(p)) throw DomainError("MultiIndex: factorial overflow");
  }
  return p;
}

bool MultiIndex::is_zero() const { return total() == 0; }

MultiIndex operator+(const MultiIndex& a, const MultiIndex& b) {
  if (a.dim() != b.dim()) throw DomainError("MultiIndex: dimension mismatch");
  std::vector<int> e(a.e_);
  for (size_t i = 0; i < e.size(); ++i) e[i] += b.e_[i];
  return MultiIndex(std::move(e));
}

size_t MultiIndexHash::operator()(const MultiIndex& n) const {
  size_t h = 0x9e3779b97f4a7c15ull;
  for (int v : n.entries())
    h = h * 0x100000001b3ull ^ static_cast<size_t>(v + 1);
  return h;
}

// --------------------------------------------------------------------- CPoint

CPoint::CPoint(std::vector<cplx> entries) : e_(std::move(entries)) {
  if (e_.empty()) throw DomainError("CPoint: dimension must be >= 1");
}

CPoint::CPoint(std::initializer_list<cplx> entries) : e_(entries) {
  if (e_.empty()) throw DomainError("CPoint: dimension must be >= 1");
}

CPoint CPoint::zeros(int k) {
  return CPoint(std::vector<cplx>(static_cast<size_t>(k), cplx(0.0)));
}

CPoint CPoint::constant(int k, cplx v) {
  return CPoint(std::vector<cplx>(static_cast<size_t>(k), v));
}

cplx CPoint::sum() const {
  KahanC acc;
  for (cplx v : e_) acc.add(v);
  return acc.get();
}

double CPoint::abs_sum() const {
  Kahan acc;
  for (cplx v : e_) acc.add(std::abs(v));
  return acc.get();
}

CPoint hadamard(const CPoint& x, const CPoint& y) {
  if (x.dim() != y.dim()) throw DomainError("hadamard: dimension mismatch");
  std::vector<cplx> e(static_cast<size_t>(x.dim()));
  for (int i = 0; i < x.dim(); ++i) e[static_cast<size_t>(i)] = x[i] * y[i];
  return CPoint(std::move(e));
}

CPoint quotient(const CPoint& x, const CPoint& y) {
  if (x.dim() != y.dim()) throw DomainError("quotient: dimension mismatch");
  std::vector<cplx> e(static_cast<size_t>(x.dim()));
  for (int i = 0; i < x.dim(); ++i) {
    if (y[i] == cplx(0.0)) throw DomainError("quotient: zero denominator");
    e[static_cast<size_t>(i)] = x[i] / y[i];
  }
  return CPoint(std::move(e));
}

CPoint cadd(const CPoint& x, const CPoint& y) {
  if (x.dim() != y.dim()) throw DomainError("cadd: dimension mismatch");
  std::vector<cplx> e(static_cast<size_t>(x.dim()));
  for (int i = 0; i < x.dim(); ++i) e[static_cast<size_t>(i)] = x[i] + y[i];
  return CPoint(std::move(e));
}

CPoint neg(const CPoint& x) {
  std::vector<cplx> e(static_cast<size_t>(x.dim()));
  for (int i = 0; i < x.dim(); ++i) e[static_cast<size_t>(i)] = -x[i];
  return CPoint(std::move(e));
}

CPoint ones_minus(const CPoint& x) {
  std::vector<cplx> e(static_cast<size_t>(x.dim()));
  for (int i = 0; i < x.dim(); ++i)
    e[static_cast<size_t>(i)] = cplx(1.0) - x[i];
  return CPoint(std::move(e));
}

CPoint scale(cplx c, const CPoint& x) {
  std::vector<cplx> e(static_cast<size_t>(x.dim()));
  for (int i = 0; i < x.dim(); ++i) e[static_cast<size_t>(i)] = c * x[i];
  return CPoint(std::move(e));
}

cplx cpow(const CPoint& x, const MultiIndex& n) {
  if (x.dim() != n.dim()) throw DomainError("cpow: dimension mismatch");
  cplx p = 1.0;
  for (int i = 0; i < x.dim(); ++i)
    for (int j = 0; j < n[i]; ++j) p *= x[i];
  return p;
}

// ------------------------------------------------------------- SeriesControl

SeriesControl::SeriesControl(int n, double tol, int window)
    : max_total_order(n), rel_tol(tol), tail_window(window) {
  if (rel_tol <= 0.0) throw DomainError("SeriesControl: rel_tol must be > 0");
  if (tail_window < 2)
    throw DomainError("SeriesControl: tail_window must be >= 2");
  if (max_total_order < tail_window)
    throw DomainError("SeriesControl: max_total_order must be >= tail_window");
}

void Kahan::add(double x) {
  double t = s + x;
  if (std::abs(s) >= std::abs(x))
    c += (s - t) + x;
  else
    c += (x - t) + s;
  s = t;
}

bool ShellSeries::add_shell(cplx shell_value) {
  acc_.add(shell_value);
  ++shells_;
  double mag = std::max(std::abs(acc_.get()), 1e-300);
  if (std::abs(shell_value) < ctl_.rel_tol * mag)
    ++run_;
  else
    run_ = 0;
  if (run_ >= ctl_.tail_window) converged_ = true;
  return !converged_;
}

// ------------------------------------------------------------ special values

cplx pochhammer(cplx a, int m) {
  cplx p = 1.0;
  for (int j = 0; j < m; ++j) p *= a + static_cast<double>(j);
  return p;
}

cplx pochhammer_ratio(cplx a, cplx c, int m) {
  cplx p = 1.0;
  for (int j = 0; j < m; ++j) {
    cplx den = c + static_cast<double>(j);
    if (den == cplx(0.0))
      throw PoleError("pochhammer_ratio: denominator factor vanishes");
    p *= (a + static_cast<double>(j)) / den;
  }
  return p;
}

namespace {

// Stirling expansion, valid for |z| >= kStirlingRadius, |arg z| < pi.
cplx stirling_log_gamma(cplx z) {
  cplx lg = (z - 0.5) * std::log(z) - z + kHalfLog2Pi;
  cplx w2 = 1.0 / (z * z);
  cplx term = 1.0 / z;
  for (double c : kStirling) {
    lg += c * term;
    term *= w2;
  }
  return lg;
}

}  // namespace

cplx log_gamma(cplx z) {
  if (is_nonpos_integer(z, 0.0))
    throw PoleError("log_gamma: pole at nonpositive integer");
  if (z == cplx(1.0) || z == cplx(2.0)) return 0.0;
  if (z.real() < 0.5) {
    if (z.imag() < 0.0) return std::conj(log_gamma(std::conj(z)));
    // Reflection adapted to the upper half-plane:
    // log sin(pi z) = i pi/2 - log 2 - i pi z + log(1 - e^{2 pi i z}).
    const cplx ipi(0.0, M_PI);
    cplx logsin = 0.5 * ipi - std::log(2.0) - ipi * z +
                  std::log(cplx(1.0) - std::exp(2.0 * ipi * z));
    return kLogPi - logsin - log_gamma(cplx(1.0) - z);
  }
  cplx acc = 0.0;
  cplx w = z;
  while (std::abs(w) < kStirlingRadius) {
    acc += std::log(w);
    w += 1.0;
  }
  return stirling_log_gamma(w) - acc;
}

cplx gamma_fn(cplx z) { return std::exp(log_gamma(z)); }

cplx recip_gamma(cplx z) {
  if (is_nonpos_integer(z, 0.0)) return 0.0;
  return std::exp(-log_gamma(z));
}

// --------------------------------------------------------- graded enumeration

GradedStream::GradedStream(int k, int max_total)
    : k_(k), max_total_(max_total), cur_(static_cast<size_t>(k), 0) {
  if (k < 1) throw DomainError("GradedStream: dimension must be >= 1");
  if (max_total < 0) done_ = true;
}

bool GradedStream::next(MultiIndex& out) {
  if (done_) return false;
  if (fresh_) {
    fresh_ = false;
    out = MultiIndex(cur_);
    return true;
  }
  // Advance inside the current shell: decrement the last positive entry
  // before the final slot, push the remainder just after it.
  int j = -1;
  for (int i = k_ - 2; i >= 0; --i)
    if (cur_[static_cast<size_t>(i)] > 0) {
      j = i;
      break;
    }
  if (j < 0) {
    ++shell_;
    if (shell_ > max_total_) {
      done_ = true;
      return false;
    }
    std::fill(cur_.begin(), cur_.end(), 0);
    cur_[0] = shell_;
    out = MultiIndex(cur_);
    return true;
  }
  int rest = 1;
  for (int i = j + 1; i < k_; ++i) {
    rest += cur_[static_cast<size_t>(i)];
    cur_[static_cast<size_t>(i)] = 0;
  }
  --cur_[static_cast<size_t>(j)];
  cur_[static_cast<size_t>(j + 1)] = rest;
  out = MultiIndex(cur_);
  return true;
}

std::uint64_t graded_count(int k, int max_total) {
  if (max_total < 0) return 0;
  double b = 1.0;
  for (int i = 1; i <= k; ++i) b *= static_cast<double>(max_total + i) / i;
  return static_cast<std::uint64_t>(std::llround(b));
}

std::vector<MultiIndex> graded_indices(int k, int max_total,
                                       std::uint64_t cap) {
  std::uint64_t count = graded_count(k, max_total);
  if (count > cap) throw BudgetError("graded_indices: index budget exceeded");
  std::vector<MultiIndex> out;
  out.reserve(count);
  GradedStream st(k, max_total);
  MultiIndex n;
  while (st.next(n)) out.push_back(n);
  return out;
}

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  k = std::min(k, n - k);
  double b = 1.0;
  for (int i = 1; i <= k; ++i) b *= static_cast<double>(n - k + i) / i;
  return b;
}

cplx diagonal_collapse(const std::function<cplx(int)>& f, const CPoint& x,
                       const SeriesControl& ctl) {
  cplx sx = x.sum();
  ShellSeries acc(ctl);
  cplx w = 1.0;  // <x>^n / n!
  for (int n = 0; n <= ctl.max_total_order; ++n) {
    if (n > 0) w *= sx / static_cast<double>(n);
    if (!acc.add_shell(f(n) * w)) break;
  }
  if (!acc.converged())
    throw NonConvergenceError("diagonal_collapse: tail test failed");
  return acc.value();
}

}  // namespace mlag
