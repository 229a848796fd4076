#pragma once
// Core substrate: multi-indices, complex vectors, Pochhammer symbols,
// complex log-gamma, graded enumeration of Z^k_{>=0} and the shell-based
// convergence control used by every multiple series in the library.

#include <complex>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

namespace mlag {

using cplx = std::complex<double>;

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DomainError : Error {
  using Error::Error;
};
struct PoleError : Error {
  using Error::Error;
};
struct NonConvergenceError : Error {
  using Error::Error;
};
struct BudgetError : Error {
  using Error::Error;
};

bool is_real_integer(cplx z, double tol = 1e-12);
bool is_nonpos_integer(cplx z, double tol = 1e-12);
bool is_nonneg_integer(cplx z, double tol = 1e-12);

// ----------------------------------------------------------------- MultiIndex

// Tuple n = (n_1,...,n_k) of nonnegative integers.  total() is <n>,
// factorial() is n! = prod n_i! (exact until the double range runs out,
// past which it is rejected).
class MultiIndex {
 public:
  MultiIndex() = default;
  explicit MultiIndex(std::vector<int> entries);
  MultiIndex(std::initializer_list<int> entries);
  static MultiIndex zeros(int k);

  int dim() const { return static_cast<int>(e_.size()); }
  int operator[](int i) const { return e_[static_cast<size_t>(i)]; }
  const std::vector<int>& entries() const { return e_; }
  int total() const;
  double factorial() const;
  bool is_zero() const;

  friend bool operator==(const MultiIndex& a, const MultiIndex& b) {
    return a.e_ == b.e_;
  }
  friend MultiIndex operator+(const MultiIndex& a, const MultiIndex& b);

 private:
  std::vector<int> e_;
  void validate_() const;
};

struct MultiIndexHash {
  size_t operator()(const MultiIndex& n) const;
};

// k-tuple of complex scalars supporting the vector operations the series
// are written in: <x>, x o y, x / y, x^n.
class CPoint {
 public:
  CPoint() = default;
  explicit CPoint(std::vector<cplx> entries);
  CPoint(std::initializer_list<cplx> entries);
  static CPoint zeros(int k);
  static CPoint constant(int k, cplx v);

  int dim() const { return static_cast<int>(e_.size()); }
  cplx operator[](int i) const { return e_[static_cast<size_t>(i)]; }
  const std::vector<cplx>& entries() const { return e_; }
  cplx sum() const;  // <x>, compensated
  double abs_sum() const;  // |x_1| + ... + |x_k|

  friend bool operator==(const CPoint& a, const CPoint& b) {
    return a.e_ == b.e_;
  }

 private:
  std::vector<cplx> e_;
};

CPoint hadamard(const CPoint& x, const CPoint& y);
CPoint quotient(const CPoint& x, const CPoint& y);  // DomainError on zero denom
CPoint cadd(const CPoint& x, const CPoint& y);
CPoint neg(const CPoint& x);
CPoint ones_minus(const CPoint& x);          // (1 - x_i)_i
CPoint scale(cplx c, const CPoint& x);
cplx cpow(const CPoint& x, const MultiIndex& n);  // x^n = prod x_i^{n_i}

// ------------------------------------------------------------- SeriesControl

// Truncation policy for the infinite multiple series: sum graded shells
// <n> = 0,1,...,max_total_order and declare convergence once tail_window
// consecutive shells each contribute less than rel_tol times the running
// magnitude of the partial sum.
struct SeriesControl {
  int max_total_order = 60;
  double rel_tol = 1e-12;
  int tail_window = 3;

  SeriesControl() = default;
  SeriesControl(int n, double tol, int window);
};

// --------------------------------------------------------------- summation

// Neumaier compensated accumulator.
struct Kahan {
  double s = 0.0, c = 0.0;
  void add(double x);
  double get() const { return s + c; }
};

struct KahanC {
  Kahan re, im;
  void add(cplx z) {
    re.add(z.real());
    im.add(z.imag());
  }
  cplx get() const { return {re.get(), im.get()}; }
};

// Shell-by-shell accumulator implementing the SeriesControl tail test.
class ShellSeries {
 public:
  explicit ShellSeries(const SeriesControl& ctl) : ctl_(ctl) {}
  // Feed the total contribution of one graded shell; returns false once the
  // tail criterion is met (caller should stop).
  bool add_shell(cplx shell_value);
  bool converged() const { return converged_; }
  int shells_used() const { return shells_; }
  int last_shell() const { return shells_ - 1; }
  cplx value() const { return acc_.get(); }

 private:
  SeriesControl ctl_;
  KahanC acc_;
  int run_ = 0, shells_ = 0;
  bool converged_ = false;
};

// ------------------------------------------------------------ special values

// Rising factorial (a)_m, computed multiplicatively so that nonpositive
// integer parameters give exact zeros.
cplx pochhammer(cplx a, int m);

// (a)_m / (c)_m as a product of factor ratios; PoleError if some c + j = 0.
cplx pochhammer_ratio(cplx a, cplx c, int m);

// Principal-branch log Gamma.  Stirling asymptotic with upward recurrence
// for small |z|; reflection into Re z < 1/2.  PoleError at 0, -1, -2, ...
cplx log_gamma(cplx z);

// exp(log_gamma(z)); PoleError at the poles.
cplx gamma_fn(cplx z);

// 1/Gamma(z); exact zero at the poles.
cplx recip_gamma(cplx z);

// --------------------------------------------------------- graded enumeration

// Streams every n in Z^k_{>=0} with <n> <= max_total exactly once, shells of
// constant <n> in increasing order, lexicographically decreasing inside a
// shell: (0,0),(1,0),(0,1),(2,0),(1,1),(0,2),...  Single consumer.
class GradedStream {
 public:
  GradedStream(int k, int max_total);
  bool next(MultiIndex& out);

 private:
  int k_, max_total_, shell_ = 0;
  bool fresh_ = true, done_ = false;
  std::vector<int> cur_;
};

// Number of multi-indices with <n> <= N in dimension k, i.e. C(N + k, k).
std::uint64_t graded_count(int k, int max_total);

// Eagerly collected graded enumeration; BudgetError if the count exceeds cap.
std::vector<MultiIndex> graded_indices(int k, int max_total,
                                       std::uint64_t cap = 10'000'000);

double binomial(int n, int k);

// Sum_{n=0}^{N} f(n) <x>^n / n! -- the collapsed (Srivastava) form of
// sum_n f(<n>) x^n / n!.  NonConvergenceError if the tail test fails.
cplx diagonal_collapse(const std::function<cplx(int)>& f, const CPoint& x,
                       const SeriesControl& ctl);

}  // namespace mlag
