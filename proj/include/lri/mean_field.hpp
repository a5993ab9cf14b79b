#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "lri/bandit.hpp"
#include "lri/schedule.hpp"

namespace lri {

// Deterministic averaged recursion
//   x_{n+1} = x_n + pi * gamma_{n+1} * x_n (1 - x_n),   pi = p_a - p_b,
// together with the comparison quantities used to bracket how fast
// 1 - x_n dies:
//   upper_path[n] = (1-x0) exp(-pi sum_{k<=n} gamma_k x_{k-1})   (exact bound)
//   upper_x0[n]   = (1-x0) exp(-pi x0 Gamma_n)                   (weaker bound)
//   lower[n]      = (1-x0) prod_{k<=n} (1 - pi gamma_k)
//   rate[n]       = exp(pi Gamma_n) (1 - x_n)
struct MeanPath {
  double x0 = 0.0;
  double pi = 0.0;
  std::string schedule_name;
  std::vector<double> x;
  std::vector<double> big_gamma;
  std::vector<double> upper_path;
  std::vector<double> upper_x0;
  std::vector<double> lower;
  std::vector<double> rate;
};

MeanPath mean_path(double x0, double pi, const StepSchedule& schedule,
                   std::uint64_t n_steps);

// Closed-form flow of the limiting logistic ODE dx/dt = pi x (1 - x):
// the state reached from x after time t.
double ode_flow(double x, double t, double pi);

// Envelope of rate[n] over n = 0..N. Requires a square-summable
// schedule (checked through tail_sq_sum_ub at n = 1), otherwise the
// rate has no finite limit to bracket and the call signals
// inapplicability. x0 = 1 collapses the rate to zero and is flagged.
struct RateBand {
  double lo = 0.0;
  double hi = 0.0;
  bool degenerate = false;
};

RateBand mean_rate_band(const MeanPath& path, const StepSchedule& schedule);

// Pathwise analogue along one simulated trajectory: values of
// exp(p_a Gamma_n) (1 - X_n) at the trajectory's sample points. Only
// meaningful while the path has never inspected arm B, so a dead
// ascent flag is rejected.
std::vector<std::pair<std::uint64_t, double>> path_rate_diagnostic(
    const Trajectory& trajectory, double p_a, const StepSchedule& schedule);

}  // namespace lri
