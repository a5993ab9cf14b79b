#include "lri/stopping.hpp"

#include <algorithm>
#include <cmath>

#include "lri/noise.hpp"
#include "lri/stats.hpp"

namespace lri {

const char* to_string(Arm a) {
  return a == Arm::A ? "A" : "B";
}

double error_bound(double x_n, double tail_sq) {
  if (!(x_n > 0.0 && x_n < 1.0)) {
    throw std::invalid_argument(
        "error_bound: x_n must lie strictly inside (0,1); the endpoints are "
        "already decided");
  }
  if (!(tail_sq >= 0.0) || !std::isfinite(tail_sq)) {
    throw std::invalid_argument("error_bound: tail_sq must be finite and >= 0");
  }
  const double lo = std::min((1.0 - x_n) / x_n, tail_sq / x_n);
  const double hi = std::min(x_n / (1.0 - x_n), tail_sq / (1.0 - x_n));
  return std::min(std::max(lo, hi), 1.0);
}

StoppingContext::StoppingContext(const StepSchedule& schedule,
                                 std::uint64_t horizon)
    : horizon_(horizon) {
  if (horizon == 0) {
    throw std::invalid_argument("StoppingContext: horizon must be positive");
  }
  gammas_ = schedule.gamma_table(horizon);

  const double beyond = tail_sq_sum_ub(schedule, horizon);
  if (!std::isfinite(beyond)) {
    throw InapplicableSchedule(
        "monitor needs a finite certified bound on the remaining squared "
        "steps; schedule '" + schedule.name() + "' has none");
  }
  // Suffix accumulation keeps each entry a true sum, not a difference.
  tail_.assign(horizon + 1, 0.0);
  KahanSum suffix;
  suffix.add(beyond);
  tail_[horizon] = suffix.value();
  for (std::uint64_t n = horizon; n-- > 0;) {
    suffix.add(gammas_[n + 1] * gammas_[n + 1]);
    tail_[n] = suffix.value();
  }
}

MonitorResult monitor(const BanditParams& params, const StoppingContext& context,
                      double epsilon, std::uint64_t seed,
                      bool continue_to_horizon) {
  params.validate();
  if (!(epsilon > 0.0 && epsilon <= 1.0)) {
    throw std::invalid_argument("monitor: epsilon must lie in (0,1]");
  }

  const std::uint64_t horizon = context.horizon();
  PathSim sim(params, context.gammas(), horizon, DriverNoise(seed));

  MonitorResult res;
  while (sim.n() < horizon) {
    const double x = sim.advance();
    const std::uint64_t n = sim.n();
    double bound;
    if (x == 0.0 || x == 1.0) {
      bound = 0.0;
    } else {
      bound = error_bound(x, context.tail_sq(n));
    }
    if (bound <= epsilon) {
      StoppingCertificate cert;
      cert.n = n;
      cert.x_n = x;
      cert.bound = bound;
      cert.declared_target = x > 0.5 ? Arm::A : Arm::B;
      cert.epsilon = epsilon;
      cert.tail_sq_used = context.tail_sq(n);
      res.certificate = cert;
      break;
    }
  }

  if (res.certificate && continue_to_horizon) {
    while (sim.n() < horizon) sim.advance();
  }
  res.steps_run = sim.n();
  res.x_final = sim.state();
  return res;
}

MonitorResult monitor(const BanditParams& params, const StepSchedule& schedule,
                      double epsilon, std::uint64_t horizon, std::uint64_t seed,
                      bool continue_to_horizon) {
  const StoppingContext context(schedule, horizon);
  return monitor(params, context, epsilon, seed, continue_to_horizon);
}

}  // namespace lri
