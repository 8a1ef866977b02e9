#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "minsurf/parallel.hpp"

namespace minsurf {

using cplx = std::complex<double>;

// Finite Laurent polynomial  sum_{k=lo..hi} a_k z^k,  holomorphic on any
// annulus around 0 (on a disk through 0 only when lo >= 0).  Coefficients are
// stored densely over [lo, hi]; the class keeps lo <= hi and trims nothing
// automatically, so degree bounds mean what the caller set.
class LaurentSeries {
 public:
  LaurentSeries() : lo_(0), coeffs_(1, cplx(0.0)) {}
  LaurentSeries(int lo, std::vector<cplx> coeffs);

  static LaurentSeries zero() { return LaurentSeries(); }
  static LaurentSeries constant(cplx a) { return LaurentSeries(0, {a}); }
  static LaurentSeries monomial(int k, cplx a) { return LaurentSeries(k, {a}); }

  int min_degree() const { return lo_; }
  int max_degree() const { return lo_ + static_cast<int>(coeffs_.size()) - 1; }

  cplx coeff(int k) const;
  void set_coeff(int k, cplx a);  // grows the window as needed

  bool has_negative_powers(double tol = 0.0) const;

  // Two-sided Horner: nonnegative part in z, negative part in 1/z.
  cplx eval(cplx z) const;
  void eval_many(const std::vector<cplx>& pts, std::vector<cplx>& out, Exec exec) const;

  LaurentSeries derivative() const;

  // Primitive of every mode except k = -1; pair with residue() to integrate
  // along paths (the missing mode contributes a_{-1} * log z).
  LaurentSeries antiderivative_dropping_residue() const;
  cplx residue() const { return coeff(-1); }

  LaurentSeries& operator+=(const LaurentSeries& o);
  LaurentSeries& operator-=(const LaurentSeries& o);
  friend LaurentSeries operator+(LaurentSeries a, const LaurentSeries& b) { return a += b; }
  friend LaurentSeries operator-(LaurentSeries a, const LaurentSeries& b) { return a -= b; }
  friend LaurentSeries operator*(const LaurentSeries& a, const LaurentSeries& b);
  friend LaurentSeries operator*(cplx s, LaurentSeries a);

  // Shift degrees by m (multiplication by z^m).
  LaurentSeries shifted(int m) const;

  // Drop leading/trailing coefficients below tol * max |a_k|.
  LaurentSeries trimmed(double rel_tol = 0.0) const;

  double max_abs_coeff() const;

  const std::vector<cplx>& raw() const { return coeffs_; }

 private:
  int lo_;
  std::vector<cplx> coeffs_;
};

// Coefficients of an analytic function from equispaced samples on the circle
// |z| = radius:  a_k = (1/n) sum_j f(z_j) z_j^{-k}.  The rule is exact on
// Laurent modes with |k - k'| not a multiple of n, so for a function that is
// (numerically) a Laurent polynomial of width < n the recovery is spectral.
// samples[j] must be f(radius * exp(2*pi*i*j/n)).
//
// noise_floor > 0 shrinks the window before unscaling: modes whose ring-space
// magnitude |a_k| * radius^k stays below noise_floor * max are discarded from
// the edges inward.  Those modes carry only rounding noise of the samples,
// which the radius^{-k} unscaling would otherwise blow up (or overflow) into
// garbage away from the extraction ring.
LaurentSeries laurent_from_ring_samples(const std::vector<cplx>& samples, double radius,
                                        int min_deg, int max_deg, Exec exec = Exec::serial,
                                        double noise_floor = 0.0);

// Convenience wrapper sampling f on the ring.
LaurentSeries laurent_from_ring(const std::function<cplx(cplx)>& f, double radius,
                                int min_deg, int max_deg, int ring_samples,
                                Exec exec = Exec::serial, double noise_floor = 0.0);

}  // namespace minsurf
