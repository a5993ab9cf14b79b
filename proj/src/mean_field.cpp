#include "lri/mean_field.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "lri/stats.hpp"

namespace lri {

MeanPath mean_path(double x0, double pi, const StepSchedule& schedule,
                   std::uint64_t n_steps) {
  if (!(x0 >= 0.0 && x0 <= 1.0)) {
    throw std::invalid_argument("mean_path: x0 must lie in [0,1]");
  }
  if (!(pi >= 0.0 && pi <= 1.0)) {
    throw std::invalid_argument("mean_path: pi must lie in [0,1]");
  }

  MeanPath m;
  m.x0 = x0;
  m.pi = pi;
  m.schedule_name = schedule.name();
  m.x.resize(n_steps + 1);
  m.big_gamma.resize(n_steps + 1);
  m.upper_path.resize(n_steps + 1);
  m.upper_x0.resize(n_steps + 1);
  m.lower.resize(n_steps + 1);
  m.rate.resize(n_steps + 1);

  const double q0 = 1.0 - x0;
  m.x[0] = x0;
  m.big_gamma[0] = 0.0;
  m.upper_path[0] = q0;
  m.upper_x0[0] = q0;
  m.lower[0] = q0;
  m.rate[0] = q0;

  ScheduleScan scan(schedule);
  KahanSum weighted;  // sum gamma_k x_{k-1}
  double lower_prod = 1.0;
  double x = x0;
  for (std::uint64_t n = 1; n <= n_steps; ++n) {
    scan.advance();
    const double g = scan.gamma();
    weighted.add(g * x);
    x = x + pi * g * x * (1.0 - x);
    lower_prod *= 1.0 - pi * g;
    const double big = scan.big_gamma();
    m.x[n] = x;
    m.big_gamma[n] = big;
    m.upper_path[n] = q0 * std::exp(-pi * weighted.value());
    m.upper_x0[n] = q0 * std::exp(-pi * x0 * big);
    m.lower[n] = q0 * lower_prod;
    m.rate[n] = std::exp(pi * big) * (1.0 - x);
  }
  return m;
}

double ode_flow(double x, double t, double pi) {
  if (!(x >= 0.0 && x <= 1.0)) {
    throw std::invalid_argument("ode_flow: x must lie in [0,1]");
  }
  if (!(t >= 0.0)) throw std::invalid_argument("ode_flow: t must be nonnegative");
  return x / ((1.0 - x) * std::exp(-pi * t) + x);
}

RateBand mean_rate_band(const MeanPath& path, const StepSchedule& schedule) {
  if (path.rate.empty()) throw std::invalid_argument("mean_rate_band: empty path");
  if (!(tail_sq_sum_ub(schedule, 1) < std::numeric_limits<double>::infinity())) {
    throw std::domain_error(
        "mean_rate_band: schedule squares are not certified summable, "
        "the rate has no finite limit to bracket");
  }
  RateBand band;
  if (path.x0 == 1.0) {
    band.degenerate = true;
    return band;  // rate is identically zero
  }
  band.lo = path.rate[0];
  band.hi = path.rate[0];
  for (double r : path.rate) {
    if (r < band.lo) band.lo = r;
    if (r > band.hi) band.hi = r;
  }
  return band;
}

std::vector<std::pair<std::uint64_t, double>> path_rate_diagnostic(
    const Trajectory& trajectory, double p_a, const StepSchedule& schedule) {
  if (!trajectory.ascent_alive) {
    throw std::invalid_argument(
        "path_rate_diagnostic: trajectory inspected arm B, the ascent "
        "product form does not apply");
  }
  if (!(p_a >= 0.0 && p_a <= 1.0)) {
    throw std::invalid_argument("path_rate_diagnostic: p_a must lie in [0,1]");
  }
  std::vector<std::pair<std::uint64_t, double>> out;
  out.reserve(trajectory.samples.size());
  ScheduleScan scan(schedule);
  for (const auto& [n, xn] : trajectory.samples) {
    while (scan.n() < n) scan.advance();
    out.emplace_back(n, std::exp(p_a * scan.big_gamma()) * (1.0 - xn));
  }
  return out;
}

}  // namespace lri
