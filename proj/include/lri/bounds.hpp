#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lri/schedule.hpp"

namespace lri {

// Lower bound on the probability of locking onto the inferior arm under
// a constant step gamma started from x: (1 - x)^(1 / (p_b gamma)).
double failure_lb_constant(double x, double p_b, double gamma);

// Lower bound on the probability of locking onto the better arm under a
// constant step, valid for p_a > p_b:
//   1 - (2 p_a gamma / ((p_a - p_b) (1 - gamma)^2)) (1/x - 1),
// clamped below at 0.
double success_lb_theorem2(double x, double p_a, double p_b, double gamma);

// Exact interior mass at step n for matched arms (p_a = p_b):
//   E[X_n (1 - X_n)] = x (1 - x) prod_{k<=n} (1 - p_a gamma_k^2).
double interior_mass_formula(double x, double p_a, const StepSchedule& schedule,
                             std::uint64_t n);

// Limit of the above as n grows: 0 when the squared steps diverge, the
// convergent infinite product otherwise. The product is truncated once
// the certified log-tail (via tail_sq_sum_ub) is negligible and the
// remaining factor exp(-p_a * tail) is applied, leaving an absolute
// error of order p_a * gamma_K^2 at the truncation point. Throws when
// square summability cannot be decided (Custom without a tail bound).
double interior_mass_limit(double x, double p_a, const StepSchedule& schedule);

enum class MomentTarget { XLimit, OneMinusXLimit };

// Upper bound on the (m+1)-th moment of the limit value:
//   E[X_inf^(m+1)]      <= prod_{k=0}^{m} (1 - (1-x)/S_k)  (XLimit)
//   E[(1-X_inf)^(m+1)]  <= prod_{k=0}^{m} (1 - x/S_k)      (OneMinusXLimit)
// Valid only when the Delta sequence is nonincreasing from Delta_1 on
// (Delta_1 may exceed Delta_0); returns nullopt when the checked prefix
// violates that, e.g. for constant steps.
std::optional<double> moment_ub(double x, const StepSchedule& schedule,
                                std::uint64_t m, MomentTarget target);

// (m+1)-th moment of the Beta(x/Delta, (1-x)/Delta) law that arises as
// the limit under constant increments Delta_n = Delta:
//   prod_{k=0}^{m} (x/Delta + k) / (1/Delta + k).
double beta_limit_moment(double x, double delta, std::uint64_t m);

enum class BoundDirection { LowerBound, UpperBound, Exact };

// Uniform envelope for reporting any of the above through the CLI.
struct BoundReport {
  std::string name;
  std::vector<std::pair<std::string, double>> inputs;
  double value = 0.0;
  BoundDirection direction = BoundDirection::Exact;
};

}  // namespace lri
