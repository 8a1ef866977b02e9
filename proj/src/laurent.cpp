#include "minsurf/laurent.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "minsurf/error.hpp"

namespace minsurf {

const char* to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::config: return "config";
    case ErrorKind::domain_degenerate: return "degenerate domain";
    case ErrorKind::resolution: return "insufficient resolution";
    case ErrorKind::labyrinth_fit: return "labyrinth does not fit";
    case ErrorKind::representation: return "representation failure";
    case ErrorKind::branch_point: return "branch point";
    case ErrorKind::period: return "period condition violated";
    case ErrorKind::flux_mismatch: return "flux mismatch";
    case ErrorKind::approximation: return "approximation budget exceeded";
    case ErrorKind::well_definedness: return "ill-defined surface data";
    case ErrorKind::connectivity: return "disconnected target";
  }
  return "error";
}

LaurentSeries::LaurentSeries(int lo, std::vector<cplx> coeffs) : lo_(lo), coeffs_(std::move(coeffs)) {
  if (coeffs_.empty()) {
    lo_ = 0;
    coeffs_.assign(1, cplx(0.0));
  }
}

cplx LaurentSeries::coeff(int k) const {
  int i = k - lo_;
  if (i < 0 || i >= static_cast<int>(coeffs_.size())) return cplx(0.0);
  return coeffs_[static_cast<std::size_t>(i)];
}

void LaurentSeries::set_coeff(int k, cplx a) {
  if (k < lo_) {
    coeffs_.insert(coeffs_.begin(), static_cast<std::size_t>(lo_ - k), cplx(0.0));
    lo_ = k;
  } else if (k > max_degree()) {
    coeffs_.resize(coeffs_.size() + static_cast<std::size_t>(k - max_degree()), cplx(0.0));
  }
  coeffs_[static_cast<std::size_t>(k - lo_)] = a;
}

bool LaurentSeries::has_negative_powers(double tol) const {
  for (int k = lo_; k < 0 && k <= max_degree(); ++k)
    if (std::abs(coeff(k)) > tol) return true;
  return false;
}

cplx LaurentSeries::eval(cplx z) const {
  int hi = max_degree();
  // Nonnegative-degree part, Horner in z.
  cplx pos(0.0);
  for (int k = hi; k >= std::max(lo_, 0); --k) pos = pos * z + coeff(k);
  if (lo_ >= 0) {
    // Whole series is polynomial; account for a positive lowest degree.
    for (int k = 0; k < lo_; ++k) pos *= z;  // only when lo_ > 0: pad missing low modes
    return pos;
  }
  // Negative-degree part, Horner in w = 1/z: sum_{k=lo..-1} a_k z^k = w * (a_{-1} + w*(a_{-2} + ...)).
  cplx w = 1.0 / z;
  cplx neg(0.0);
  for (int k = lo_; k <= -1; ++k) neg = neg * w + coeff(k);
  return pos + neg * w;
}

void LaurentSeries::eval_many(const std::vector<cplx>& pts, std::vector<cplx>& out, Exec exec) const {
  out.resize(pts.size());
  for_each_index(pts.size(), exec, [&](std::size_t i) { out[i] = eval(pts[i]); });
}

LaurentSeries LaurentSeries::derivative() const {
  std::vector<cplx> d(coeffs_.size(), cplx(0.0));
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    int k = lo_ + static_cast<int>(i);
    d[i] = coeffs_[i] * static_cast<double>(k);
  }
  return LaurentSeries(lo_ - 1, std::move(d));
}

LaurentSeries LaurentSeries::antiderivative_dropping_residue() const {
  LaurentSeries out = LaurentSeries::zero();
  for (int k = lo_; k <= max_degree(); ++k) {
    if (k == -1) continue;
    cplx a = coeff(k);
    if (a != cplx(0.0)) out.set_coeff(k + 1, a / static_cast<double>(k + 1));
  }
  return out;
}

LaurentSeries& LaurentSeries::operator+=(const LaurentSeries& o) {
  for (int k = o.lo_; k <= o.max_degree(); ++k) {
    cplx a = o.coeff(k);
    if (a != cplx(0.0) || (k >= lo_ && k <= max_degree())) set_coeff(k, coeff(k) + a);
  }
  return *this;
}

LaurentSeries& LaurentSeries::operator-=(const LaurentSeries& o) {
  for (int k = o.lo_; k <= o.max_degree(); ++k) {
    cplx a = o.coeff(k);
    if (a != cplx(0.0) || (k >= lo_ && k <= max_degree())) set_coeff(k, coeff(k) - a);
  }
  return *this;
}

LaurentSeries operator*(const LaurentSeries& a, const LaurentSeries& b) {
  int lo = a.lo_ + b.lo_;
  std::size_t n = a.coeffs_.size() + b.coeffs_.size() - 1;
  std::vector<cplx> c(n, cplx(0.0));
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
    if (a.coeffs_[i] == cplx(0.0)) continue;
    for (std::size_t j = 0; j < b.coeffs_.size(); ++j) c[i + j] += a.coeffs_[i] * b.coeffs_[j];
  }
  return LaurentSeries(lo, std::move(c));
}

LaurentSeries operator*(cplx s, LaurentSeries a) {
  for (auto& c : a.coeffs_) c *= s;
  return a;
}

LaurentSeries LaurentSeries::shifted(int m) const {
  LaurentSeries out = *this;
  out.lo_ += m;
  return out;
}

double LaurentSeries::max_abs_coeff() const {
  double m = 0.0;
  for (const auto& c : coeffs_) m = std::max(m, std::abs(c));
  return m;
}

LaurentSeries LaurentSeries::trimmed(double rel_tol) const {
  double cut = rel_tol * max_abs_coeff();
  int a = lo_, b = max_degree();
  while (a < b && std::abs(coeff(a)) <= cut) ++a;
  while (b > a && std::abs(coeff(b)) <= cut) --b;
  std::vector<cplx> c;
  c.reserve(static_cast<std::size_t>(b - a + 1));
  for (int k = a; k <= b; ++k) c.push_back(coeff(k));
  return LaurentSeries(a, std::move(c));
}

LaurentSeries laurent_from_ring_samples(const std::vector<cplx>& samples, double radius,
                                        int min_deg, int max_deg, Exec exec,
                                        double noise_floor) {
  if (samples.empty()) fail(ErrorKind::config, "empty ring sample set");
  if (min_deg > max_deg) fail(ErrorKind::config, "empty degree window");
  for (const auto& s : samples)
    if (!std::isfinite(s.real()) || !std::isfinite(s.imag()))
      fail(ErrorKind::representation, "ring sample is not finite");
  int n = static_cast<int>(samples.size());
  if (max_deg - min_deg + 1 > n)
    fail(ErrorKind::resolution, "degree window wider than ring sample count");
  int width = max_deg - min_deg + 1;
  // Ring-space coefficients first: hat_k = a_k * radius^k, all O(sample scale).
  std::vector<cplx> hat(static_cast<std::size_t>(width));
  const double two_pi = 2.0 * std::numbers::pi;
  for_each_index(static_cast<std::size_t>(width), exec, [&](std::size_t idx) {
    int k = min_deg + static_cast<int>(idx);
    cplx acc(0.0);
    for (int j = 0; j < n; ++j) {
      double ang = -two_pi * static_cast<double>(k) * static_cast<double>(j) / static_cast<double>(n);
      acc += samples[static_cast<std::size_t>(j)] * std::polar(1.0, ang);
    }
    hat[idx] = acc / static_cast<double>(n);
  });

  int lo = min_deg, hi = max_deg;
  if (noise_floor > 0.0) {
    double peak = 0.0;
    for (const auto& h : hat) peak = std::max(peak, std::abs(h));
    double cut = noise_floor * peak;
    while (lo < hi && std::abs(hat[static_cast<std::size_t>(lo - min_deg)]) <= cut) ++lo;
    while (hi > lo && std::abs(hat[static_cast<std::size_t>(hi - min_deg)]) <= cut) --hi;
  }
  std::vector<cplx> coeffs(static_cast<std::size_t>(hi - lo + 1));
  const double log_r = std::log(radius);
  for (int k = lo; k <= hi; ++k) {
    // radius^{-k} through exp/log: wide windows at radius != 1 overflow the
    // direct pow long before the coefficient itself leaves double range.
    cplx h = hat[static_cast<std::size_t>(k - min_deg)];
    double mag = std::abs(h);
    cplx a(0.0, 0.0);
    if (mag > 0.0) {
      double lg = std::log(mag) - static_cast<double>(k) * log_r;
      if (lg > 700.0)
        fail(ErrorKind::representation,
             "ring coefficient exceeds double range at degree " + std::to_string(k));
      a = (h / mag) * std::exp(lg);  // underflow to zero is fine
    }
    coeffs[static_cast<std::size_t>(k - lo)] = a;
  }
  return LaurentSeries(lo, std::move(coeffs));
}

LaurentSeries laurent_from_ring(const std::function<cplx(cplx)>& f, double radius,
                                int min_deg, int max_deg, int ring_samples, Exec exec,
                                double noise_floor) {
  if (ring_samples <= 0) fail(ErrorKind::config, "ring_samples must be positive");
  std::vector<cplx> samples(static_cast<std::size_t>(ring_samples));
  const double two_pi = 2.0 * std::numbers::pi;
  for (int j = 0; j < ring_samples; ++j)
    samples[static_cast<std::size_t>(j)] =
        f(std::polar(radius, two_pi * static_cast<double>(j) / static_cast<double>(ring_samples)));
  return laurent_from_ring_samples(samples, radius, min_deg, max_deg, exec, noise_floor);
}

}  // namespace minsurf
