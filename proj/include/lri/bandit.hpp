#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "lri/noise.hpp"
#include "lri/schedule.hpp"

namespace lri {

// Two-armed environment for the reward-inaction scheme: arm A pays with
// probability p_a, arm B with probability p_b, and x0 is the initial
// probability of playing A.
struct BanditParams {
  double p_a = 0.5;
  double p_b = 0.5;
  double x0 = 0.5;

  void validate() const {
    if (!(p_a >= 0.0 && p_a <= 1.0)) throw std::invalid_argument("p_a must lie in [0,1]");
    if (!(p_b >= 0.0 && p_b <= 1.0)) throw std::invalid_argument("p_b must lie in [0,1]");
    if (!(x0 >= 0.0 && x0 <= 1.0)) throw std::invalid_argument("x0 must lie in [0,1]");
  }
};

// One update of the play probability. Arm A is inspected when u <= x,
// arm B otherwise; an inspected arm that pays (v under its probability)
// moves x by gamma toward that arm. The x > 0 guard keeps the origin
// absorbing even for a literal u == 0 draw, which the driver noise
// never emits.
inline double step(double x, double u, double v, double p_a, double p_b,
                   double gamma) {
  if (u <= x) {
    if (v <= p_a && x > 0.0) return x + gamma * (1.0 - x);
    return x;
  }
  if (v <= p_b) return x - gamma * x;
  return x;
}

inline double step(double x, double u, double v, const BanditParams& params,
                   double gamma) {
  return step(x, u, v, params.p_a, params.p_b, gamma);
}

// Single path advanced one step at a time against a gamma table
// (1-indexed; entry 0 unused). The noise pair for step n is consumed as
// a whole even on no-op branches, so two simulations with the same key
// stay aligned regardless of which branches fire.
//
// Monotone-event flags, maintained online from the pre-step state:
//   descent_alive: u_k > X_{k-1} held for every k so far. On that event
//       the path equals x0 * prod(1 - gamma_k 1{B rewarded}), i.e. it has
//       never inspected arm A and is nonincreasing.
//   ascent_alive: u_k < X_{k-1} held for every k so far; symmetric, the
//       path has never inspected arm B and is nondecreasing.
template <class Noise>
class PathSimT {
 public:
  PathSimT(const BanditParams& params, const double* gammas,
           std::uint64_t horizon, Noise noise)
      : p_a_(params.p_a),
        p_b_(params.p_b),
        gammas_(gammas),
        horizon_(horizon),
        noise_(std::move(noise)),
        x_(params.x0) {
    params.validate();
  }

  double advance() {
    if (n_ >= horizon_) throw std::logic_error("PathSimT: advanced past horizon");
    ++n_;
    const auto [u, v] = noise_.pair(n_);
    descent_ = descent_ && u > x_;
    ascent_ = ascent_ && u < x_;
    x_ = step(x_, u, v, p_a_, p_b_, gammas_[n_]);
    if (!(x_ >= 0.0 && x_ <= 1.0)) {
      throw std::logic_error("PathSimT: state left [0,1]");
    }
    return x_;
  }

  double state() const { return x_; }
  std::uint64_t n() const { return n_; }
  bool descent_alive() const { return descent_; }
  bool ascent_alive() const { return ascent_; }

 private:
  double p_a_, p_b_;
  const double* gammas_;
  std::uint64_t horizon_;
  Noise noise_;
  double x_;
  std::uint64_t n_ = 0;
  bool descent_ = true;
  bool ascent_ = true;
};

using PathSim = PathSimT<DriverNoise>;

// Record of one simulated path. Samples hold (n, X_n) at the thinning
// stride, always including n = 0 and n = N.
struct Trajectory {
  BanditParams params;
  std::string schedule_name;
  std::uint64_t seed = 0;
  std::uint64_t n_steps = 0;
  std::uint64_t thin = 1;
  std::vector<std::pair<std::uint64_t, double>> samples;
  double x_final = 0.0;
  bool descent_alive = true;
  bool ascent_alive = true;
};

Trajectory simulate_path(const BanditParams& params, const StepSchedule& schedule,
                         std::uint64_t n_steps, std::uint64_t seed,
                         std::uint64_t thin = 1);

// Two paths driven by the same noise stream, with x0 <= x0' and
// p_a <= p_a' and a shared p_b. The shared (U, V) pairs couple the
// inspected arm and its payoff so the ordering X_n <= X'_n holds
// pathwise; violations are counted rather than assumed.
struct CoupledPair {
  Trajectory lo;
  Trajectory hi;
  std::uint64_t dominance_violations = 0;
};

CoupledPair coupled_pair(double x0_lo, double x0_hi, double p_a_lo, double p_a_hi,
                         double p_b, const StepSchedule& schedule,
                         std::uint64_t n_steps, std::uint64_t seed,
                         std::uint64_t thin = 1);

// Terminal state of a path when only the endpoint matters (Monte Carlo
// batches); avoids materializing samples.
struct FinalState {
  double x = 0.0;
  bool descent_alive = true;
  bool ascent_alive = true;
};

FinalState simulate_final(const BanditParams& params, const double* gammas,
                          std::uint64_t n_steps, std::uint64_t seed);

}  // namespace lri
