#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>

#include "lri/bounds.hpp"
#include "lri/schedule.hpp"

using namespace lri;

TEST_CASE("failure floor for constant steps") {
  // (1 - 1/2)^(1/(1 * 1/2)) = 1/4.
  CHECK(failure_lb_constant(0.5, 1.0, 0.5) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(failure_lb_constant(0.0, 1.0, 0.5) == doctest::Approx(1.0));
  // Decreasing in the start point, decreasing in gamma.
  CHECK(failure_lb_constant(0.3, 0.5, 0.2) > failure_lb_constant(0.6, 0.5, 0.2));
  CHECK(failure_lb_constant(0.5, 0.5, 0.1) < failure_lb_constant(0.5, 0.5, 0.2));
  CHECK_THROWS_AS(failure_lb_constant(1.5, 0.5, 0.2), std::invalid_argument);
  CHECK_THROWS_AS(failure_lb_constant(0.5, 0.0, 0.2), std::invalid_argument);
  CHECK_THROWS_AS(failure_lb_constant(0.5, 0.5, 1.0), std::invalid_argument);
}

TEST_CASE("success floor for constant steps") {
  // 1 - (2 p_a g / ((p_a - p_b)(1-g)^2)) (1/x - 1) at the criterion-5
  // configuration, frozen by hand: 1 - 0.06/0.1805.
  CHECK(success_lb_theorem2(0.5, 0.6, 0.4, 0.05) ==
        doctest::Approx(1.0 - 0.06 / 0.1805).epsilon(1e-13));
  CHECK(success_lb_theorem2(1.0, 0.6, 0.4, 0.05) == doctest::Approx(1.0));
  // Clamped at zero when the start point is too low for the bound to bite.
  CHECK(success_lb_theorem2(0.01, 0.6, 0.4, 0.3) == 0.0);
  // Nondecreasing in x.
  double prev = 0.0;
  for (double x : {0.1, 0.3, 0.5, 0.7, 0.9}) {
    const double v = success_lb_theorem2(x, 0.6, 0.4, 0.05);
    CHECK(v >= prev);
    prev = v;
  }
  CHECK_THROWS_AS(success_lb_theorem2(0.0, 0.6, 0.4, 0.05), std::invalid_argument);
  CHECK_THROWS_AS(success_lb_theorem2(0.5, 0.4, 0.6, 0.05), std::invalid_argument);
  CHECK_THROWS_AS(success_lb_theorem2(0.5, 0.6, 0.4, 0.0), std::invalid_argument);
}

TEST_CASE("interior mass identity at small n by hand") {
  // Constant 1/2, matched arms 1/2: 0.25 * (1 - 1/8)^n.
  CHECK(interior_mass_formula(0.5, 0.5, StepSchedule::constant(0.5), 0) ==
        doctest::Approx(0.25).epsilon(1e-15));
  CHECK(interior_mass_formula(0.5, 0.5, StepSchedule::constant(0.5), 2) ==
        doctest::Approx(0.25 * 0.875 * 0.875).epsilon(1e-14));
  // power(1,1): gamma_1 = 1/2 gives 0.25 * (1 - 0.5 * 0.25).
  CHECK(interior_mass_formula(0.5, 0.5, StepSchedule::power(1.0, 1.0), 1) ==
        doctest::Approx(0.21875).epsilon(1e-14));
  // Degenerate start points carry no interior mass.
  CHECK(interior_mass_formula(0.0, 0.5, StepSchedule::constant(0.5), 10) == 0.0);
  CHECK(interior_mass_formula(1.0, 0.5, StepSchedule::constant(0.5), 10) == 0.0);
}

TEST_CASE("interior mass limit: zero iff squared steps diverge") {
  CHECK(interior_mass_limit(0.5, 0.5, StepSchedule::constant(0.5)) == 0.0);
  CHECK(interior_mass_limit(0.5, 0.5, StepSchedule::power(1.0, 0.5)) == 0.0);

  // Square-summable case against a long explicit product.
  const StepSchedule s = StepSchedule::power(1.0, 1.0);
  const double limit = interior_mass_limit(0.5, 0.5, s);
  double brute = 0.25;
  for (std::uint64_t k = 1; k <= 2000000; ++k) {
    const double g = 1.0 / (static_cast<double>(k) + 1.0);
    brute *= 1.0 - 0.5 * g * g;
  }
  // The remaining factors lie within exp(-0.5 * 5e-7) of 1.
  CHECK(limit == doctest::Approx(brute).epsilon(1e-6));
  CHECK(limit > 0.0);
  CHECK(limit < 0.25);

  // p_a = 0 keeps all the mass.
  CHECK(interior_mass_limit(0.3, 0.0, s) == doctest::Approx(0.21).epsilon(1e-14));

  const StepSchedule blind =
      StepSchedule::custom("blind", [](std::uint64_t) { return 0.01; });
  CHECK_THROWS_AS(interior_mass_limit(0.5, 0.5, blind), std::domain_error);
}

TEST_CASE("limit moment bound needs nonincreasing increments") {
  CHECK(moment_ub(0.5, StepSchedule::constant(0.3), 2, MomentTarget::XLimit) ==
        std::nullopt);
  CHECK(moment_ub(0.5, StepSchedule::power(1.0, 0.7), 2, MomentTarget::XLimit) ==
        std::nullopt);
  CHECK(moment_ub(0.5, StepSchedule::ratio(1.0, 1.0, 0.5), 2,
                  MomentTarget::XLimit) == std::nullopt);
  CHECK(moment_ub(0.5, StepSchedule::power(2.0, 1.0), 2, MomentTarget::XLimit) ==
        std::nullopt);

  // gamma_n = c/(n+c) with c <= 1 keeps Delta nonincreasing.
  const auto ok = moment_ub(0.5, StepSchedule::power(0.5, 1.0), 3,
                            MomentTarget::XLimit);
  REQUIRE(ok.has_value());
  CHECK(*ok > 0.0);
  CHECK(*ok < 1.0);
}

TEST_CASE("for unit increments the moment bound is the beta moment") {
  // power(1,1) has S_k = k + 1 exactly, so the product over
  // 1 - (1-x)/S_k telescopes into the beta moment with delta = 1.
  for (double x : {0.2, 0.5, 0.8}) {
    for (std::uint64_t m = 0; m <= 5; ++m) {
      const auto ub = moment_ub(x, StepSchedule::power(1.0, 1.0), m,
                                MomentTarget::XLimit);
      REQUIRE(ub.has_value());
      CHECK(*ub == doctest::Approx(beta_limit_moment(x, 1.0, m)).epsilon(1e-12));
    }
  }
  // Swapping the target mirrors the start point.
  const auto a = moment_ub(0.3, StepSchedule::power(1.0, 1.0), 2,
                           MomentTarget::OneMinusXLimit);
  const auto b = moment_ub(0.7, StepSchedule::power(1.0, 1.0), 2,
                           MomentTarget::XLimit);
  REQUIRE(a.has_value());
  REQUIRE(b.has_value());
  CHECK(*a == doctest::Approx(*b).epsilon(1e-14));
}

TEST_CASE("beta limit moments, frozen values") {
  // Beta(1/2, 1/2): E[X] = 1/2, E[X^2] = 3/8, E[X^3] = 5/16, E[X^4] = 35/128.
  CHECK(beta_limit_moment(0.5, 1.0, 0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(beta_limit_moment(0.5, 1.0, 1) == doctest::Approx(0.375).epsilon(1e-15));
  CHECK(beta_limit_moment(0.5, 1.0, 2) == doctest::Approx(0.3125).epsilon(1e-15));
  CHECK(beta_limit_moment(0.5, 1.0, 3) == doctest::Approx(0.2734375).epsilon(1e-15));
  // Beta(1.2, 0.8): E[X^2] = (1.2/2)(2.2/3) = 0.44.
  CHECK(beta_limit_moment(0.6, 0.5, 1) == doctest::Approx(0.44).epsilon(1e-14));
  // Small delta concentrates the law at x: moments approach powers of x.
  CHECK(beta_limit_moment(0.3, 1e-12, 2) ==
        doctest::Approx(0.3 * 0.3 * 0.3).epsilon(1e-9));
  // First moment is always the start point (martingale property).
  for (double delta : {0.1, 0.5, 1.0, 3.0}) {
    CHECK(beta_limit_moment(0.7, delta, 0) == doctest::Approx(0.7).epsilon(1e-14));
  }
  CHECK_THROWS_AS(beta_limit_moment(-0.1, 1.0, 1), std::invalid_argument);
  CHECK_THROWS_AS(beta_limit_moment(0.5, 0.0, 1), std::invalid_argument);
}
