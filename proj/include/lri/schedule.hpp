#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "lri/stats.hpp"

namespace lri {

enum class ScheduleKind { Constant, Power, Ratio, Custom };

// Convergence-in-probability verdict for a (schedule, p_b) pair, where
// p_b is the payoff probability of the inferior arm. Unknown is reserved
// for families whose critical behaviour the classifier does not decide.
enum class Classification { Fallible, Infallible, Unknown };

// Step-size schedule gamma_n, n >= 1. Three closed families plus an
// escape hatch:
//   Constant: gamma_n = g                          with g in (0,1)
//   Power:    gamma_n = (C / (n + C))^alpha        with C > 0, alpha in (0,1]
//   Ratio:    gamma_n = Delta_n / S_n              with
//             Delta_0 = 1, Delta_1 = C,
//             Delta_n = C n^(1/p - 1) (log n)^alpha  for n >= 2,
//             S_n = Delta_0 + ... + Delta_n,
//             C > 0, alpha > 0, p in (0,1]
//   Custom:   caller-supplied generator, optionally with a certified
//             upper bound on the squared-step tails.
//
// Schedules are immutable values; copying is cheap.
class StepSchedule {
 public:
  // Certified upper bound on sum_{k >= n} gamma_{k+1}^2 for a Custom
  // schedule. Without it the tail is reported as infinite and every
  // consumer that needs square summability treats the schedule as
  // out of scope.
  using TailBoundFn = std::function<double(std::uint64_t)>;

  static StepSchedule constant(double gamma);
  static StepSchedule power(double c, double alpha);
  static StepSchedule ratio(double c, double alpha, double p);
  static StepSchedule custom(std::string name,
                             std::function<double(std::uint64_t)> gamma_fn,
                             TailBoundFn tail_sq_bound = nullptr);

  ScheduleKind kind() const { return kind_; }
  const std::string& name() const { return name_; }

  // gamma_n for n >= 1. O(1) for Constant/Power/Custom; O(n) for Ratio
  // (sequential access should go through ScheduleScan or gamma_table).
  double gamma(std::uint64_t n) const;

  // Table of gamma_1..gamma_n_max; slot 0 is unused and set to 0.
  std::vector<double> gamma_table(std::uint64_t n_max) const;

  // Whether sum gamma_n^2 converges: definite answer for the closed
  // families, nullopt for Custom without a tail bound.
  std::optional<bool> sq_summable() const;

  // Family parameters; throws std::logic_error when the kind mismatches.
  double constant_gamma() const;
  double power_c() const;
  double power_alpha() const;
  double ratio_c() const;
  double ratio_alpha() const;
  double ratio_p() const;

  // Custom-family tail bound access; custom_tail throws when absent.
  bool has_custom_tail() const { return static_cast<bool>(tail_fn_); }
  double custom_tail(std::uint64_t n) const;

  // JSON round trip for the three closed families, schema
  // {"kind": "constant"|"power"|"ratio", ...params}. Custom schedules
  // are not serializable and to_json throws for them.
  std::string to_json() const;
  static StepSchedule from_json(const std::string& text);

  // Ratio-family increment Delta_n from its defining formula.
  double ratio_delta(std::uint64_t n) const;

 private:
  StepSchedule() = default;

  ScheduleKind kind_ = ScheduleKind::Constant;
  std::string name_;
  double g_ = 0.0;          // Constant
  double c_ = 0.0;          // Power / Ratio
  double alpha_ = 0.0;      // Power / Ratio
  double p_ = 0.0;          // Ratio
  std::shared_ptr<const std::function<double(std::uint64_t)>> fn_;  // Custom
  std::shared_ptr<const TailBoundFn> tail_fn_;                      // Custom
};

// Sequential walker over a schedule. Maintains, after n advances:
//   gamma()     = gamma_n
//   big_gamma() = Gamma_n = sum_{k<=n} gamma_k   (compensated)
//   s(), delta(): S_n and Delta_n from the stable recursion
//       S_0 = Delta_0 = 1, S_n = S_{n-1} / (1 - gamma_n),
//       Delta_n = S_n - S_{n-1}.
// S_n grows like exp(Gamma_n); when it leaves double range the s() and
// delta() accessors throw std::overflow_error while gamma()/big_gamma()
// remain usable. The scan is the per-worker prefix cache: Ratio-family
// prefix sums are carried incrementally so a full sweep costs O(n_max).
class ScheduleScan {
 public:
  explicit ScheduleScan(StepSchedule schedule);

  void advance();

  std::uint64_t n() const { return n_; }
  double gamma() const { return gamma_; }
  double big_gamma() const { return big_gamma_.value(); }
  double s() const;
  double delta() const;

 private:
  StepSchedule sched_;
  std::uint64_t n_ = 0;
  double gamma_ = 0.0;
  KahanSum big_gamma_;
  double s_ = 1.0;
  double s_prev_ = 1.0;
  // Ratio family: defining prefix sum S_n = sum Delta_k, kept separately
  // from the recursion value so gamma_n uses the defining formula.
  KahanSum ratio_s_;
};

// Gamma_n by fresh compensated scan.
double big_gamma(const StepSchedule& schedule, std::uint64_t n);

struct DeltaS {
  double delta = 1.0;
  double s = 1.0;
};

// (Delta_n, S_n) from the stable recursion; throws std::overflow_error
// once S_n exceeds double range.
DeltaS delta_s(const StepSchedule& schedule, std::uint64_t n);

// Power family gamma_n = (C/(n+C))^alpha against inferior-arm payoff
// probability p_b: Fallible iff alpha < 1, or alpha = 1 and C > 1/p_b.
Classification classify_power(double c, double alpha, double p_b);

// Ratio family whose p parameter equals p_b: Infallible iff alpha <= 1/p_b.
Classification classify_ratio(double alpha, double p_b);

// Whole-schedule dispatch: Constant is always Fallible; Power uses
// classify_power; Ratio uses classify_ratio when its p equals p_b and
// is otherwise Unknown; Custom is Unknown.
Classification classify_schedule(const StepSchedule& schedule, double p_b);

// Certified upper bound on sum_{k >= n} gamma_{k+1}^2, n >= 1.
// Returns +infinity when the tail diverges (Constant, Power with
// alpha <= 1/2) or cannot be certified (Custom without a bound).
double tail_sq_sum_ub(const StepSchedule& schedule, std::uint64_t n);

// Numerical probes behind the fallibility dichotomy; diagnostic only,
// no pass/fail semantics.
//   mass_partial_sums[m] = sum_{i=0}^{m} prod_{k<=i} (1 - p_b gamma_k),
//       m = 0..n_max (the i = 0 term is the empty product 1);
//       bounded iff the scheme can get stuck on the inferior arm.
//   ratio_sup[m] = sup_{j<=m} gamma_j / (Gamma_j exp(-p_b Gamma_j)),
//       m = 1..n_max, slot 0 unused.
struct FallibilityDiagnostics {
  std::vector<double> mass_partial_sums;
  std::vector<double> ratio_sup;
  bool heuristic = true;  // always: evidence, not proof
};

FallibilityDiagnostics diagnostics_fallibility(const StepSchedule& schedule,
                                               double p_b, std::uint64_t n_max);

}  // namespace lri
