#include "lri/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "lri/stats.hpp"

namespace lri {

double failure_lb_constant(double x, double p_b, double gamma) {
  if (!(x >= 0.0 && x <= 1.0)) {
    throw std::invalid_argument("failure_lb_constant: x must lie in [0,1]");
  }
  if (!(p_b > 0.0 && p_b <= 1.0)) {
    throw std::invalid_argument("failure_lb_constant: p_b must lie in (0,1]");
  }
  if (!(gamma > 0.0 && gamma < 1.0)) {
    throw std::invalid_argument("failure_lb_constant: gamma must lie in (0,1)");
  }
  return std::pow(1.0 - x, 1.0 / (p_b * gamma));
}

double success_lb_theorem2(double x, double p_a, double p_b, double gamma) {
  if (!(x > 0.0 && x <= 1.0)) {
    throw std::invalid_argument("success_lb_theorem2: x must lie in (0,1]");
  }
  if (!(p_b >= 0.0 && p_a <= 1.0 && p_a > p_b)) {
    throw std::invalid_argument("success_lb_theorem2: requires 0 <= p_b < p_a <= 1");
  }
  if (!(gamma > 0.0 && gamma < 1.0)) {
    throw std::invalid_argument("success_lb_theorem2: gamma must lie in (0,1)");
  }
  const double pi = p_a - p_b;
  const double one_minus = 1.0 - gamma;
  const double coeff = 2.0 * p_a * gamma / (pi * one_minus * one_minus);
  return std::max(0.0, 1.0 - coeff * (1.0 / x - 1.0));
}

double interior_mass_formula(double x, double p_a, const StepSchedule& schedule,
                             std::uint64_t n) {
  if (!(x >= 0.0 && x <= 1.0)) {
    throw std::invalid_argument("interior_mass_formula: x must lie in [0,1]");
  }
  if (!(p_a >= 0.0 && p_a <= 1.0)) {
    throw std::invalid_argument("interior_mass_formula: p_a must lie in [0,1]");
  }
  ScheduleScan scan(schedule);
  double prod = 1.0;
  for (std::uint64_t k = 1; k <= n; ++k) {
    scan.advance();
    const double g = scan.gamma();
    prod *= 1.0 - p_a * g * g;
  }
  return x * (1.0 - x) * prod;
}

double interior_mass_limit(double x, double p_a, const StepSchedule& schedule) {
  if (!(x >= 0.0 && x <= 1.0)) {
    throw std::invalid_argument("interior_mass_limit: x must lie in [0,1]");
  }
  if (!(p_a >= 0.0 && p_a <= 1.0)) {
    throw std::invalid_argument("interior_mass_limit: p_a must lie in [0,1]");
  }
  const auto sq = schedule.sq_summable();
  if (!sq.has_value()) {
    throw std::domain_error(
        "interior_mass_limit: square summability undecidable for this schedule");
  }
  if (!*sq) return 0.0;
  if (p_a == 0.0) return x * (1.0 - x);

  // Multiply factors out to K, then absorb the tail: the exact remainder
  // log is in [-2 p_a T, 0] for true tail T <= tail_sq_sum_ub(K), and for
  // the supported families the certified bound is tight to O(gamma_K^2),
  // so applying exp(-p_a * bound) leaves an error of that order.
  constexpr std::uint64_t kCap = 1u << 22;
  ScheduleScan scan(schedule);
  double prod = 1.0;
  std::uint64_t k = 0;
  std::uint64_t next_check = 1024;  // tail queries can be O(K), space them out
  while (k < kCap) {
    ++k;
    scan.advance();
    const double g = scan.gamma();
    prod *= 1.0 - p_a * g * g;
    if (k == next_check) {
      if (p_a * tail_sq_sum_ub(schedule, k) < 1e-14) break;
      next_check *= 2;
    }
  }
  const double tail = tail_sq_sum_ub(schedule, k);
  return x * (1.0 - x) * prod * std::exp(-p_a * tail);
}

std::optional<double> moment_ub(double x, const StepSchedule& schedule,
                                std::uint64_t m, MomentTarget target) {
  if (!(x >= 0.0 && x <= 1.0)) {
    throw std::invalid_argument("moment_ub: x must lie in [0,1]");
  }

  // Applicability: Delta nonincreasing from Delta_1 onward, checked over
  // a prefix that covers the factors actually used.
  const std::uint64_t check_to = std::max<std::uint64_t>(m + 1, 64);
  {
    ScheduleScan scan(schedule);
    double prev = 0.0;
    for (std::uint64_t k = 1; k <= check_to; ++k) {
      scan.advance();
      double d;
      try {
        d = scan.delta();
      } catch (const std::overflow_error&) {
        return std::nullopt;  // S_n blew up, Delta certainly not nonincreasing
      }
      if (k >= 2 && d > prev * (1.0 + 1e-12)) return std::nullopt;
      prev = d;
    }
  }

  const double mass = target == MomentTarget::XLimit ? 1.0 - x : x;
  ScheduleScan scan(schedule);
  double prod = 1.0 - mass;  // k = 0 factor, S_0 = 1
  for (std::uint64_t k = 1; k <= m; ++k) {
    scan.advance();
    prod *= 1.0 - mass / scan.s();
  }
  return prod;
}

double beta_limit_moment(double x, double delta, std::uint64_t m) {
  if (!(x >= 0.0 && x <= 1.0)) {
    throw std::invalid_argument("beta_limit_moment: x must lie in [0,1]");
  }
  if (!(delta > 0.0)) {
    throw std::invalid_argument("beta_limit_moment: delta must be positive");
  }
  double prod = 1.0;
  for (std::uint64_t k = 0; k <= m; ++k) {
    prod *= (x / delta + static_cast<double>(k)) /
            (1.0 / delta + static_cast<double>(k));
  }
  return prod;
}

}  // namespace lri
