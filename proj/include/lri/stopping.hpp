#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "lri/bandit.hpp"
#include "lri/schedule.hpp"

namespace lri {

enum class Arm { A, B };

const char* to_string(Arm a);

// Conditional bound on declaring the wrong limit from state x_n with a
// certified upper bound t on the remaining squared steps:
//   max(min((1 - x)/x, t/x), min(x/(1 - x), t/(1 - x))),
// clamped to [0,1]. Nondecreasing in t, so substituting an upper bound
// for the true tail keeps it valid. The expression needs no knowledge
// of the arm probabilities.
double error_bound(double x_n, double tail_sq);

struct StoppingCertificate {
  std::uint64_t n = 0;
  double x_n = 0.0;
  double bound = 0.0;
  Arm declared_target = Arm::A;
  double epsilon = 0.0;
  double tail_sq_used = 0.0;
};

struct MonitorResult {
  std::optional<StoppingCertificate> certificate;
  std::uint64_t steps_run = 0;
  double x_final = 0.0;  // state when the monitor stopped
};

struct InapplicableSchedule : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Step and tail tables for one (schedule, horizon) pair, shared across
// monitored paths. tail_sq(n) upper-bounds sum_{k >= n} gamma_{k+1}^2:
// exact squared steps out to the horizon plus the schedule's certified
// bound beyond it. Construction throws InapplicableSchedule when that
// bound is infinite (constant steps, slow power steps, custom steps
// without a certificate), since no certificate could ever be emitted.
class StoppingContext {
 public:
  StoppingContext(const StepSchedule& schedule, std::uint64_t horizon);

  std::uint64_t horizon() const { return horizon_; }
  const double* gammas() const { return gammas_.data(); }
  double tail_sq(std::uint64_t n) const { return tail_[n]; }

 private:
  std::uint64_t horizon_;
  std::vector<double> gammas_;  // 1-indexed, entry 0 unused
  std::vector<double> tail_;    // tail_[n] for n = 0..horizon
};

// Runs one path, evaluating error_bound(X_n, tail_sq(n)) at each
// n = 1..horizon, and stops at the first n where the bound reaches
// epsilon; absorbing states certify immediately with bound 0. The
// declared target is the majority cut X_n > 1/2. Without a certificate
// the result carries no certificate and x_final is the horizon state.
// With continue_to_horizon the path keeps running after certification
// so the caller can compare the declaration against the eventual state.
MonitorResult monitor(const BanditParams& params, const StoppingContext& context,
                      double epsilon, std::uint64_t seed,
                      bool continue_to_horizon = false);

MonitorResult monitor(const BanditParams& params, const StepSchedule& schedule,
                      double epsilon, std::uint64_t horizon, std::uint64_t seed,
                      bool continue_to_horizon = false);

}  // namespace lri
