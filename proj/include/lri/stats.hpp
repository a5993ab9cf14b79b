#pragma once

#include <cstdint>

namespace lri {

// Compensated (Kahan) accumulator. For a fixed sequence of add() calls
// the result is a deterministic function of the inputs, independent of
// platform FMA contraction, which the reproducibility contract needs.
class KahanSum {
 public:
  void add(double x) {
    const double y = x - c_;
    const double t = s_ + y;
    c_ = (t - s_) - y;
    s_ = t;
  }
  double value() const { return s_; }

 private:
  double s_ = 0.0;
  double c_ = 0.0;
};

// Inverse standard normal CDF for p in (0,1). Rational approximation
// refined with one Halley step against erfc; absolute error < 1e-14
// over (1e-300, 1 - 1e-16).
double normal_quantile(double p);

struct WilsonInterval {
  double lo = 0.0;
  double hi = 1.0;
  double half_width() const { return 0.5 * (hi - lo); }
};

// Wilson score interval for k successes out of m trials at the given
// two-sided confidence level (e.g. 0.99).
WilsonInterval wilson_interval(std::uint64_t k, std::uint64_t m, double level);

}  // namespace lri
