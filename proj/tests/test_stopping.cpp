#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "lri/bandit.hpp"
#include "lri/noise.hpp"
#include "lri/schedule.hpp"
#include "lri/stopping.hpp"

using namespace lri;

TEST_CASE("wrong-limit bound: hand values and shape") {
  // x = 0.5, t = 0.1: both mins are 0.2, so the max is 0.2.
  CHECK(error_bound(0.5, 0.1) == doctest::Approx(0.2).epsilon(1e-15));
  // Near-certain states with tiny tails certify at t / min(x, 1 - x).
  CHECK(error_bound(0.99, 1e-4) == doctest::Approx(1e-4 / 0.01).epsilon(1e-12));
  // Huge tails clamp at one.
  CHECK(error_bound(0.99, 10.0) == 1.0);
  // Zero tail means the limit is already determined.
  CHECK(error_bound(0.3, 0.0) == 0.0);
  // Symmetric in x <-> 1 - x.
  for (double t : {0.01, 0.3}) {
    for (double x : {0.1, 0.25, 0.45}) {
      CHECK(error_bound(x, t) == doctest::Approx(error_bound(1.0 - x, t)).epsilon(1e-14));
    }
  }
  // Nondecreasing in the tail bound.
  double prev = 0.0;
  for (double t : {0.0, 1e-4, 1e-2, 0.1, 1.0, 100.0}) {
    const double v = error_bound(0.7, t);
    CHECK(v >= prev);
    prev = v;
  }
  // Endpoints are already decided; the ratio form rejects them.
  CHECK_THROWS_AS(error_bound(0.0, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(error_bound(1.0, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(error_bound(-0.1, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(error_bound(0.5, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(error_bound(0.5, std::nan("")), std::invalid_argument);
}

TEST_CASE("contexts reject schedules without a finite tail certificate") {
  CHECK_THROWS_AS(StoppingContext(StepSchedule::constant(0.1), 100),
                  InapplicableSchedule);
  CHECK_THROWS_AS(StoppingContext(StepSchedule::power(1.0, 0.5), 100),
                  InapplicableSchedule);
  const StepSchedule blind =
      StepSchedule::custom("blind", [](std::uint64_t) { return 1e-3; });
  CHECK_THROWS_AS(StoppingContext(blind, 100), InapplicableSchedule);
}

TEST_CASE("context tail tables dominate the true tails and decrease") {
  const StepSchedule s = StepSchedule::power(1.0, 1.0);
  const std::uint64_t horizon = 500;
  const StoppingContext ctx(s, horizon);

  // Exact within the horizon: tail(n) - tail(horizon anchor) equals the
  // explicit sum of squared steps between them.
  for (std::uint64_t n : {std::uint64_t{0}, std::uint64_t{17}, std::uint64_t{400}}) {
    double partial = 0.0;
    for (std::uint64_t k = n; k < horizon; ++k) {
      const double g = ctx.gammas()[k + 1];
      partial += g * g;
    }
    CHECK(ctx.tail_sq(n) == doctest::Approx(partial + ctx.tail_sq(horizon))
                                .epsilon(1e-13));
    // And it dominates a long brute-force tail.
    double brute = partial;
    for (std::uint64_t k = horizon; k < horizon + 200000; ++k) {
      const double g = s.gamma(k + 1);
      brute += g * g;
    }
    CHECK(ctx.tail_sq(n) >= brute);
  }
  for (std::uint64_t n = 1; n <= horizon; ++n) {
    CHECK(ctx.tail_sq(n) <= ctx.tail_sq(n - 1));
  }
  // Beyond the horizon the table holds the schedule's own certificate.
  CHECK(ctx.tail_sq(horizon) == doctest::Approx(tail_sq_sum_ub(s, horizon))
                                    .epsilon(1e-13));
}

TEST_CASE("monitor: immediate and impossible certificates") {
  const StepSchedule s = StepSchedule::power(1.0, 1.0);
  const StoppingContext ctx(s, 100);

  // epsilon = 1 is satisfied by the very first evaluation.
  const MonitorResult lax = monitor({0.6, 0.4, 0.5}, ctx, 1.0, 1);
  REQUIRE(lax.certificate.has_value());
  CHECK(lax.certificate->n == 1);
  CHECK(lax.certificate->epsilon == 1.0);

  // Absorbing starts certify at once with a zero bound.
  const MonitorResult at_one = monitor({0.6, 0.4, 1.0}, ctx, 1e-9, 2);
  REQUIRE(at_one.certificate.has_value());
  CHECK(at_one.certificate->bound == 0.0);
  CHECK(at_one.certificate->declared_target == Arm::A);
  CHECK(at_one.x_final == 1.0);
  const MonitorResult at_zero = monitor({0.6, 0.4, 0.0}, ctx, 1e-9, 3);
  REQUIRE(at_zero.certificate.has_value());
  CHECK(at_zero.certificate->declared_target == Arm::B);

  // An impossibly small epsilon over a short horizon yields none.
  const MonitorResult none = monitor({0.9, 0.1, 0.5}, ctx, 1e-12, 4);
  CHECK(!none.certificate.has_value());
  CHECK(none.steps_run == 100);
}

TEST_CASE("monitor: certificate fields are internally consistent") {
  const StepSchedule s = StepSchedule::power(1.0, 1.0);
  const std::uint64_t horizon = 200000;
  const StoppingContext ctx(s, horizon);
  const BanditParams params{0.9, 0.1, 0.5};
  int certified = 0;
  for (std::uint64_t seed = 0; seed < 30 && certified < 5; ++seed) {
    const MonitorResult res = monitor(params, ctx, 0.05, derive_stream(5150, seed));
    if (!res.certificate) continue;
    ++certified;
    const StoppingCertificate& c = *res.certificate;
    CHECK(c.bound <= 0.05);
    CHECK(c.bound == doctest::Approx(error_bound(c.x_n, c.tail_sq_used))
                         .epsilon(1e-14));
    CHECK(c.tail_sq_used == doctest::Approx(ctx.tail_sq(c.n)).epsilon(1e-14));
    CHECK(c.declared_target == (c.x_n > 0.5 ? Arm::A : Arm::B));
    // Without continue_to_horizon the monitor stops at certification.
    CHECK(res.steps_run == c.n);
    // First-crossing: one step earlier the bound was still above epsilon
    // (n = 1 certificates have no predecessor to compare).
    if (c.n > 1) {
      CHECK(res.x_final == c.x_n);
    }
  }
  CHECK(certified == 5);

  // continue_to_horizon runs the full path but keeps the certificate.
  const MonitorResult full =
      monitor(params, ctx, 0.05, derive_stream(5150, 0), true);
  const MonitorResult stopped = monitor(params, ctx, 0.05, derive_stream(5150, 0));
  if (full.certificate) {
    REQUIRE(stopped.certificate.has_value());
    CHECK(full.certificate->n == stopped.certificate->n);
    CHECK(full.certificate->x_n == stopped.certificate->x_n);
    CHECK(full.steps_run == horizon);
  }
}

TEST_CASE("certified paths miss the better arm at most epsilon-often") {
  // The certificate bounds the chance that the process fails to land on
  // the better arm's endpoint, whichever endpoint the state currently
  // favors. Weak drift makes this sharp: certificates fire early on
  // both sides of 1/2, yet misses of the better arm stay within budget.
  const StepSchedule s = StepSchedule::power(1.0, 1.0);
  const StoppingContext ctx(s, 200000);
  const BanditParams params{0.9, 0.7, 0.5};  // better arm: A
  const double epsilon = 0.1;
  std::uint64_t certified = 0, miss = 0, launched = 0;
  while (certified < 300 && launched < 3000) {
    const MonitorResult res =
        monitor(params, ctx, epsilon, derive_stream(424242, launched), true);
    ++launched;
    if (!res.certificate) continue;
    ++certified;
    if (res.x_final <= 0.5) ++miss;
  }
  REQUIRE(certified == 300);
  const double rate = static_cast<double>(miss) / static_cast<double>(certified);
  const double se = std::sqrt(epsilon * (1.0 - epsilon) / 300.0);
  CHECK(rate <= epsilon + 4.0 * se);
}

TEST_CASE("declared targets are reliable under strong drift") {
  // With a wide gap the side of 1/2 at certification identifies the
  // eventual limit, so the declaration itself obeys the budget.
  const StepSchedule s = StepSchedule::power(1.0, 1.0);
  const StoppingContext ctx(s, 30000);
  const BanditParams params{0.8, 0.2, 0.5};
  const double epsilon = 0.05;
  std::uint64_t certified = 0, wrong = 0, launched = 0;
  while (certified < 300 && launched < 3000) {
    const MonitorResult res =
        monitor(params, ctx, epsilon, derive_stream(31415, launched), true);
    ++launched;
    if (!res.certificate) continue;
    ++certified;
    const Arm truth = res.x_final > 0.5 ? Arm::A : Arm::B;
    if (truth != res.certificate->declared_target) ++wrong;
  }
  REQUIRE(certified == 300);
  const double rate = static_cast<double>(wrong) / static_cast<double>(certified);
  const double se = std::sqrt(epsilon * (1.0 - epsilon) / 300.0);
  CHECK(rate <= epsilon + 4.0 * se);
}
