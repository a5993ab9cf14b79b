#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "lri/bandit.hpp"
#include "lri/bounds.hpp"
#include "lri/monte_carlo.hpp"
#include "lri/noise.hpp"
#include "lri/schedule.hpp"

using namespace lri;

TEST_CASE("classifier config validation") {
  ClassifierConfig ok;
  CHECK_NOTHROW(ok.validate());

  ClassifierConfig c = ok;
  c.eps_zero = 0.0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = ok;
  c.interior_lo = 1e-7;  // not above eps_zero
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = ok;
  c.interior_hi = 1.0 - 1e-7;  // not below 1 - eps_one
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = ok;
  c.interior_lo = 0.6;
  c.interior_hi = 0.4;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
}

TEST_CASE("terminal-state classification table") {
  ClassifierConfig c;  // defaults: eps 1e-6, band [0.01, 0.99]

  CHECK(classify(0.0, true, false, c, true) == PathClass::AtZero);
  CHECK(classify(5e-7, false, false, c, false) == PathClass::AtZero);
  CHECK(classify(1.0, false, true, c, false) == PathClass::AtOne);
  CHECK(classify(1.0 - 5e-7, false, false, c, true) == PathClass::AtOne);

  // Interior calls require both the band and square-summable steps.
  CHECK(classify(0.5, false, false, c, true) == PathClass::Interior);
  CHECK(classify(0.5, false, false, c, false) == PathClass::Undecided);
  CHECK(classify(0.005, false, false, c, true) == PathClass::Undecided);
  CHECK(classify(0.995, false, false, c, true) == PathClass::Undecided);

  // Monotone gating: a boundary call must ride the matching event.
  ClassifierConfig strict = c;
  strict.require_monotone_tail = true;
  CHECK(classify(0.0, true, false, strict, true) == PathClass::AtZero);
  CHECK(classify(0.0, false, false, strict, true) == PathClass::Undecided);
  CHECK(classify(1.0, false, true, strict, true) == PathClass::AtOne);
  CHECK(classify(1.0, false, false, strict, true) == PathClass::Undecided);

  CHECK_THROWS_AS(classify(-0.1, false, false, c, true), std::invalid_argument);
  CHECK_THROWS_AS(classify(1.1, false, false, c, true), std::invalid_argument);
}

TEST_CASE("trajectory overload agrees with the flag-level classifier") {
  ClassifierConfig c;
  c.require_monotone_tail = true;
  const StepSchedule sched[] = {StepSchedule::constant(0.5),
                                StepSchedule::power(1.0, 1.0)};
  const BanditParams cfgs[] = {{1.0, 1.0, 0.5}, {0.2, 0.9, 0.4}, {0.5, 0.5, 0.5}};
  for (const auto& s : sched) {
    const bool summable = s.sq_summable().value();
    for (const auto& p : cfgs) {
      for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const Trajectory t = simulate_path(p, s, 400, seed);
        CHECK(classify(t, c, s) ==
              classify(t.x_final, t.descent_alive, t.ascent_alive, c, summable));
      }
    }
  }
}

TEST_CASE("count merging is associative and commutative") {
  const ClassCounts a{3, 7, 11, 2};
  const ClassCounts b{5, 0, 1, 9};
  const ClassCounts c{8, 4, 6, 3};
  const ClassCounts ab = merge(a, b);
  const ClassCounts ba = merge(b, a);
  CHECK(ab.at_zero == ba.at_zero);
  CHECK(ab.at_one == ba.at_one);
  CHECK(ab.interior == ba.interior);
  CHECK(ab.undecided == ba.undecided);
  const ClassCounts l = merge(merge(a, b), c);
  const ClassCounts r = merge(a, merge(b, c));
  CHECK(l.at_zero == r.at_zero);
  CHECK(l.at_one == r.at_one);
  CHECK(l.interior == r.interior);
  CHECK(l.undecided == r.undecided);
  CHECK(l.total() == a.total() + b.total() + c.total());
}

TEST_CASE("batch estimates do not depend on the worker count") {
  const BanditParams params{0.6, 0.4, 0.5};
  const StepSchedule s = StepSchedule::constant(0.1);
  ClassifierConfig config;
  // 3000 paths spans several scheduling blocks.
  std::vector<FinalState> f1, f4;
  const McEstimate e1 = run_batch(params, s, 500, 3000, 42, config, 1, 0.99, &f1);
  const McEstimate e4 = run_batch(params, s, 500, 3000, 42, config, 4, 0.99, &f4);

  CHECK(e1.counts.at_zero == e4.counts.at_zero);
  CHECK(e1.counts.at_one == e4.counts.at_one);
  CHECK(e1.counts.interior == e4.counts.interior);
  CHECK(e1.counts.undecided == e4.counts.undecided);
  CHECK(e1.at_one.p_hat == e4.at_one.p_hat);
  CHECK(e1.at_one.ci.lo == e4.at_one.ci.lo);
  CHECK(e1.at_one.ci.hi == e4.at_one.ci.hi);

  REQUIRE(f1.size() == 3000);
  REQUIRE(f4.size() == 3000);
  for (std::size_t i = 0; i < f1.size(); ++i) {
    CHECK(f1[i].x == f4[i].x);
    CHECK(f1[i].descent_alive == f4[i].descent_alive);
    CHECK(f1[i].ascent_alive == f4[i].ascent_alive);
  }

  // Path i is pinned to its derived stream, independent of batching.
  const auto gammas = s.gamma_table(500);
  for (std::uint64_t i : {std::uint64_t{0}, std::uint64_t{1023},
                          std::uint64_t{1024}, std::uint64_t{2999}}) {
    const FinalState direct =
        simulate_final(params, gammas.data(), 500, derive_stream(42, i));
    CHECK(direct.x == f1[i].x);
  }
}

TEST_CASE("per-class stats are consistent with the tallies") {
  const BanditParams params{0.9, 0.1, 0.5};
  const StepSchedule s = StepSchedule::power(1.0, 1.0);
  ClassifierConfig config;
  const McEstimate e = run_batch(params, s, 2000, 2500, 7, config, 2);
  CHECK(e.counts.total() == 2500);
  CHECK(e.n_paths == 2500);
  CHECK(e.schedule_name == s.name());

  const ClassStat* stats[] = {&e.at_zero, &e.at_one, &e.interior, &e.undecided};
  const std::uint64_t counts[] = {e.counts.at_zero, e.counts.at_one,
                                  e.counts.interior, e.counts.undecided};
  for (int k = 0; k < 4; ++k) {
    CHECK(stats[k]->count == counts[k]);
    CHECK(stats[k]->p_hat == doctest::Approx(counts[k] / 2500.0).epsilon(1e-15));
    CHECK(stats[k]->ci.lo <= stats[k]->p_hat);
    CHECK(stats[k]->ci.hi >= stats[k]->p_hat);
    CHECK(stats[k]->ci.lo >= 0.0);
    CHECK(stats[k]->ci.hi <= 1.0);
  }

  CHECK_THROWS_AS(run_batch(params, s, 10, 0, 7, config), std::invalid_argument);
}

TEST_CASE("interior mass estimate matches its closed form when arms agree") {
  const BanditParams params{0.5, 0.5, 0.5};
  const StepSchedule s = StepSchedule::power(1.0, 1.0);
  const InteriorMassEstimate est = estimate_interior_mass(params, s, 2000, 4000, 11, 2);
  CHECK(est.formula ==
        doctest::Approx(interior_mass_formula(0.5, 0.5, s, 2000)).epsilon(1e-14));
  CHECK(est.se > 0.0);
  CHECK(std::abs(est.mean - est.formula) <= 5.0 * est.se);

  const BanditParams skew{0.6, 0.4, 0.5};
  CHECK_THROWS_AS(estimate_interior_mass(skew, s, 100, 100, 1),
                  std::invalid_argument);
}

TEST_CASE("moment estimates: martingale mean and argument checks") {
  const BanditParams params{0.7, 0.7, 0.3};
  const StepSchedule s = StepSchedule::constant(0.05);
  const MomentEstimate est = estimate_moments(params, s, 300, 4000, 5, 3, 2);
  REQUIRE(est.mean.size() == 3);
  REQUIRE(est.se.size() == 3);
  // E[X_N] = x0 for matched arms; the sample second moment dominates the
  // squared sample mean by construction.
  CHECK(std::abs(est.mean[0] - 0.3) <= 5.0 * est.se[0]);
  CHECK(est.mean[1] >= est.mean[0] * est.mean[0] - 1e-12);
  for (double v : est.se) CHECK(v > 0.0);

  CHECK_THROWS_AS(estimate_moments(params, s, 10, 10, 1, 0), std::invalid_argument);
  CHECK_THROWS_AS(estimate_moments(params, s, 10, 10, 1, 9), std::invalid_argument);
  CHECK_THROWS_AS(estimate_moments(params, s, 10, 0, 1, 2), std::invalid_argument);
}
