#include "lri/stats.hpp"

#include <cmath>
#include <stdexcept>

namespace lri {

namespace {

// Acklam's rational approximation to the probit function.
double probit_estimate(double p) {
  static constexpr double a[6] = {
      -3.969683028665376e+01, 2.209460984245205e+02,  -2.759285104469687e+02,
      1.383577518672690e+02,  -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[5] = {
      -5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
      6.680131188771972e+01,  -1.328068155288572e+01};
  static constexpr double c[6] = {
      -7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
      -2.549732539343734e+00, 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                                  2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double p_low = 0.02425;

  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  if (p <= 1.0 - p_low) {
    const double q = p - 0.5;
    const double r = q * q;
    return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
           (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  }
  const double q = std::sqrt(-2.0 * std::log(1.0 - p));
  return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
         ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
}

}  // namespace

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw std::invalid_argument("normal_quantile: p must lie in (0,1)");
  }
  double x = probit_estimate(p);
  // Halley refinement: e is the CDF error at x, u the Newton step.
  static const double sqrt2pi = std::sqrt(8.0 * std::atan(1.0));
  const double e = 0.5 * std::erfc(-x / std::sqrt(2.0)) - p;
  const double u = e * sqrt2pi * std::exp(0.5 * x * x);
  x = x - u / (1.0 + 0.5 * x * u);
  return x;
}

WilsonInterval wilson_interval(std::uint64_t k, std::uint64_t m, double level) {
  if (m == 0) throw std::invalid_argument("wilson_interval: m must be positive");
  if (k > m) throw std::invalid_argument("wilson_interval: k exceeds m");
  if (!(level > 0.0 && level < 1.0)) {
    throw std::invalid_argument("wilson_interval: level must lie in (0,1)");
  }
  const double z = normal_quantile(0.5 + 0.5 * level);
  const double n = static_cast<double>(m);
  const double phat = static_cast<double>(k) / n;
  const double z2n = z * z / n;
  const double denom = 1.0 + z2n;
  const double center = (phat + 0.5 * z2n) / denom;
  const double spread =
      z * std::sqrt(phat * (1.0 - phat) / n + 0.25 * z2n / n) / denom;
  WilsonInterval w;
  w.lo = center - spread;
  w.hi = center + spread;
  if (w.lo < 0.0) w.lo = 0.0;
  if (w.hi > 1.0) w.hi = 1.0;
  return w;
}

}  // namespace lri
