#include "lri/acceptance.hpp"

#include <algorithm>
#include <cmath>
#include <cstdarg>
#include <cstdio>

#include "lri/absorption.hpp"
#include "lri/bandit.hpp"
#include "lri/bounds.hpp"
#include "lri/cli.hpp"
#include "lri/mean_field.hpp"
#include "lri/monte_carlo.hpp"
#include "lri/noise.hpp"
#include "lri/polya.hpp"
#include "lri/schedule.hpp"
#include "lri/stopping.hpp"

namespace lri {
namespace {

std::string strf(const char* fmt, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, fmt);
  std::vsnprintf(buf, sizeof buf, fmt, ap);
  va_end(ap);
  return buf;
}

// Collects named sub-checks; the criterion passes when all of them do.
class Checks {
 public:
  void expect(bool ok, const std::string& what) {
    if (!ok) pass_ = false;
    if (!detail_.empty()) detail_ += "; ";
    detail_ += what + (ok ? "" : " [FAIL]");
  }

  void note(const std::string& what) {
    if (!detail_.empty()) detail_ += "; ";
    detail_ += what;
  }

  bool pass() const { return pass_; }
  const std::string& detail() const { return detail_; }

 private:
  bool pass_ = true;
  std::string detail_;
};

struct Scale {
  std::uint64_t n;  // steps
  std::uint64_t m;  // paths
};

Scale scaled(std::uint64_t n, std::uint64_t m, bool quick) {
  if (!quick) return {n, m};
  return {n, std::max<std::uint64_t>(m / 10, 200)};
}

// Moments of the terminal state against the limit-law moments of the
// urn regime (both arms always pay, steps 1/(n+1), constant increment
// 1). Agreement within 4 standard errors each.
CriterionResult beta_limit_moments(int workers, bool quick, std::uint64_t seed) {
  const Scale sc = scaled(100000, 20000, quick);
  BanditParams params;
  params.p_a = 1.0;
  params.p_b = 1.0;
  params.x0 = 0.5;
  const StepSchedule schedule = StepSchedule::power(1.0, 1.0);
  const MomentEstimate est = estimate_moments(
      params, schedule, sc.n, sc.m, derive_stream(seed, 1), 4, workers);

  Checks ck;
  for (std::uint64_t m = 1; m <= 4; ++m) {
    const double target = beta_limit_moment(params.x0, 1.0, m - 1);
    const double diff = std::fabs(est.mean[m - 1] - target);
    const double tol = 4.0 * est.se[m - 1];
    ck.expect(diff <= tol, strf("m=%llu |%.6f-%.6f|=%.2e <= 4SE=%.2e",
                                static_cast<unsigned long long>(m),
                                est.mean[m - 1], target, diff, tol));
  }
  return {1, "beta limit moments", ck.pass(), ck.detail()};
}

// Terminal interior mass E[X_N (1 - X_N)] against its closed form,
// exact at every finite N for matched arms.
CriterionResult interior_mass_identity(int workers, bool quick,
                                       std::uint64_t seed) {
  const Scale sc = scaled(10000, 20000, quick);
  BanditParams params;
  params.p_a = 0.5;
  params.p_b = 0.5;
  params.x0 = 0.5;
  const StepSchedule schedule = StepSchedule::power(1.0, 1.0);
  const InteriorMassEstimate est = estimate_interior_mass(
      params, schedule, sc.n, sc.m, derive_stream(seed, 2), workers);

  Checks ck;
  const double diff = std::fabs(est.mean - est.formula);
  ck.expect(diff <= 4.0 * est.se,
            strf("|mean %.6e - formula %.6e| = %.2e <= 4SE = %.2e", est.mean,
                 est.formula, diff, 4.0 * est.se));
  return {2, "interior mass identity", ck.pass(), ck.detail()};
}

// Constant steps with matched arms: the limit takes value 1 with
// probability x0 and no mass remains in the interior.
CriterionResult bernoulli_endpoint_law(int workers, bool quick,
                                       std::uint64_t seed) {
  const Scale sc = scaled(1000, 10000, quick);
  const StepSchedule schedule = StepSchedule::constant(0.5);
  const ClassifierConfig config;

  Checks ck;
  const double x0s[3] = {0.1, 0.5, 0.9};
  for (int i = 0; i < 3; ++i) {
    BanditParams params;
    params.p_a = 0.5;
    params.p_b = 0.5;
    params.x0 = x0s[i];
    const McEstimate est =
        run_batch(params, schedule, sc.n, sc.m, derive_stream(seed, 30 + i),
                  config, workers);
    ck.expect(est.at_one.ci.lo <= params.x0 && params.x0 <= est.at_one.ci.hi,
              strf("x0=%.1f p(at_one)=%.4f ci=[%.4f,%.4f]", params.x0,
                   est.at_one.p_hat, est.at_one.ci.lo, est.at_one.ci.hi));
    ck.expect(est.counts.interior == 0,
              strf("x0=%.1f interior=%llu", params.x0,
                   static_cast<unsigned long long>(est.counts.interior)));
  }
  return {3, "bernoulli endpoint law", ck.pass(), ck.detail()};
}

// Lower bound on locking onto the wrong arm under constant steps: the
// empirical miss rate cannot fall below it by more than noise.
CriterionResult failure_floor(int workers, bool quick, std::uint64_t seed) {
  const Scale sc = scaled(1000, 10000, quick);
  BanditParams params;
  params.p_a = 1.0;
  params.p_b = 1.0;
  params.x0 = 0.5;
  const double gamma = 0.5;
  const McEstimate est =
      run_batch(params, StepSchedule::constant(gamma), sc.n, sc.m,
                derive_stream(seed, 4), ClassifierConfig{}, workers);

  const double bound = failure_lb_constant(params.x0, params.p_b, gamma);
  const double p = est.at_zero.p_hat;
  const double se = std::sqrt(p * (1.0 - p) / static_cast<double>(sc.m));
  Checks ck;
  ck.expect(p >= bound - 4.0 * se,
            strf("p(at_zero)=%.4f >= bound %.4f - 4SE (%.4f)", p, bound,
                 bound - 4.0 * se));
  return {4, "constant-step failure floor", ck.pass(), ck.detail()};
}

// Absorption probability three ways: grid fixed point, truncated
// transition series, and Monte Carlo, plus the analytic envelope.
CriterionResult absorption_cross_check(int workers, bool quick,
                                       std::uint64_t seed) {
  const Scale sc = scaled(100000, 20000, quick);
  const double p_a = 0.6, p_b = 0.4;
  const double pi = p_a - p_b;
  const double gammas[2] = {0.05, 0.1};
  const double xs[3] = {0.3, 0.5, 0.7};

  Checks ck;
  for (int gi = 0; gi < 2; ++gi) {
    const double gamma = gammas[gi];
    const AbsorptionSolution sol = absorption_solve(gamma, p_a, p_b);
    const PsiResult psi = psi_neumann(gamma, p_a, p_b);
    ck.expect(psi.converged, strf("g=%.2f psi terms=%llu tail=%.1e", gamma,
                                  static_cast<unsigned long long>(psi.terms),
                                  psi.last_term_sup));
    for (int xi = 0; xi < 3; ++xi) {
      const double x = xs[xi];
      const double u = sol.u(x);
      const double lo = success_lb_theorem2(x, p_a, p_b, gamma);
      const double hi = 1.0 - failure_lb_constant(x, p_b, gamma);
      ck.expect(u >= lo && u <= hi,
                strf("g=%.2f x=%.1f u=%.6f in [%.6f,%.6f]", gamma, x, u, lo, hi));

      const double series = x + pi * gamma * psi.psi(x);
      ck.expect(std::fabs(u - series) <= 1e-6,
                strf("g=%.2f x=%.1f |u-series|=%.2e <= 1e-6", gamma, x,
                     std::fabs(u - series)));

      BanditParams params;
      params.p_a = p_a;
      params.p_b = p_b;
      params.x0 = x;
      const McEstimate est = run_batch(
          params, StepSchedule::constant(gamma), sc.n, sc.m,
          derive_stream(seed, 50 + 10 * gi + xi), ClassifierConfig{}, workers);
      const double allow = est.at_one.ci.half_width() + 1e-3;
      ck.expect(std::fabs(u - est.at_one.p_hat) <= allow,
                strf("g=%.2f x=%.1f |u-mc|=%.2e <= %.2e", gamma, x,
                     std::fabs(u - est.at_one.p_hat), allow));
    }
  }
  return {5, "absorption solver cross-check", ck.pass(), ck.detail()};
}

// Monotone coupling: a path with the larger start and better arm A,
// driven by the same noise, never falls below its partner.
CriterionResult coupling_dominance(int workers, bool quick, std::uint64_t seed) {
  (void)workers;
  const std::uint64_t n_pairs = 200;
  const std::uint64_t n_steps = quick ? 1000 : 10000;
  const StepSchedule pool[5] = {
      StepSchedule::constant(0.1), StepSchedule::constant(0.3),
      StepSchedule::power(1.0, 1.0), StepSchedule::power(2.0, 0.7),
      StepSchedule::ratio(1.0, 1.0, 0.5)};

  std::uint64_t violations = 0;
  for (std::uint64_t i = 0; i < n_pairs; ++i) {
    DriverNoise rng(derive_stream(seed, 600 + i));
    const auto [u1, u2] = rng.pair(0);
    const auto [u3, u4] = rng.pair(1);
    const auto [u5, u6] = rng.pair(2);
    (void)u6;
    const double x_lo = 0.01 + 0.98 * std::min(u1, u2);
    const double x_hi = 0.01 + 0.98 * std::max(u1, u2);
    const double pa_lo = std::min(u3, u4);
    const double pa_hi = std::max(u3, u4);
    const CoupledPair cp =
        coupled_pair(x_lo, x_hi, pa_lo, pa_hi, u5, pool[i % 5], n_steps,
                     derive_stream(seed, 6000 + i));
    violations += cp.dominance_violations;
  }
  Checks ck;
  ck.expect(violations == 0,
            strf("%llu pairs x %llu steps, violations=%llu",
                 static_cast<unsigned long long>(n_pairs),
                 static_cast<unsigned long long>(n_steps),
                 static_cast<unsigned long long>(violations)));
  return {6, "coupling dominance", ck.pass(), ck.detail()};
}

// Urn proportions against the bandit recursion on the same noise:
// floating-point discrepancy at length 10^4 and an exact integer replay
// of the first hundred draws.
CriterionResult urn_equivalence(int workers, bool quick, std::uint64_t seed) {
  (void)workers;
  const std::uint64_t n_steps = quick ? 1000 : 10000;
  Checks ck;

  double max_diff = 0.0;
  DriverNoise rng(derive_stream(seed, 7));
  std::uint64_t draws[50][2];
  for (int i = 0; i < 50; ++i) {
    const auto [u1, u2] = rng.pair(static_cast<std::uint64_t>(i));
    draws[i][0] = 1 + static_cast<std::uint64_t>(u1 * 10.0);
    draws[i][1] = 1 + static_cast<std::uint64_t>(u2 * 10.0);
    max_diff = std::max(
        max_diff, urn_bandit_equivalence(draws[i][0], draws[i][1], n_steps,
                                         derive_stream(seed, 700 + i)));
  }
  ck.expect(max_diff <= 1e-12, strf("max |urn - bandit| = %.3e <= 1e-12", max_diff));

  // Replay the first draws in exact arithmetic: u <= beta/(s+n) decided
  // as (2m+1)(s+n) <= beta 2^53 with u = (2m+1) 2^-53.
  std::uint64_t replay_mismatch = 0;
  double replay_diff = 0.0;
  for (int i = 0; i < 5; ++i) {
    const std::uint64_t r = draws[i][0], b = draws[i][1];
    const std::uint64_t s = r + b;
    const std::uint64_t path_seed = derive_stream(seed, 700 + i);
    const UrnPath urn = urn_path(r, b, 100, path_seed);

    BanditParams params;
    params.p_a = 1.0;
    params.p_b = 1.0;
    params.x0 = static_cast<double>(b) / static_cast<double>(s);
    const StepSchedule schedule = urn_schedule(s);
    const std::vector<double> gt = schedule.gamma_table(100);
    PathSim sim(params, gt.data(), 100, DriverNoise(path_seed));

    DriverNoise noise(path_seed);
    std::uint64_t beta = b;
    for (std::uint64_t n = 0; n < 100; ++n) {
      const auto [u, v] = noise.pair(n + 1);
      (void)v;
      const auto num = static_cast<std::uint64_t>(u * 9007199254740992.0);  // 2^53
      const bool black = static_cast<unsigned __int128>(num) * (s + n) <=
                         static_cast<unsigned __int128>(beta) << 53;
      if (black) ++beta;
      if (urn.beta[n + 1] != beta) ++replay_mismatch;
      sim.advance();
      const double exact = static_cast<double>(beta) / static_cast<double>(s + n + 1);
      replay_diff = std::max(replay_diff, std::fabs(sim.state() - exact));
    }
  }
  ck.expect(replay_mismatch == 0,
            strf("integer replay mismatches=%llu",
                 static_cast<unsigned long long>(replay_mismatch)));
  ck.expect(replay_diff <= 1e-12,
            strf("bandit vs exact rational max diff=%.3e", replay_diff));
  return {7, "urn equivalence", ck.pass(), ck.detail()};
}

// Steps 1/(n+1) with the B arm paying half the time sit at the
// infallibility boundary: no path may settle at 0. A count of zero
// certifies the miss probability only up to ~3/M, which is all sampling
// can say about a true zero.
CriterionResult infallible_ceiling(int workers, bool quick, std::uint64_t seed) {
  const Scale sc = scaled(1000000, 10000, quick);
  const std::uint64_t n = quick ? 100000 : sc.n;
  BanditParams params;
  params.p_a = 0.6;
  params.p_b = 0.5;
  params.x0 = 0.2;
  const McEstimate est =
      run_batch(params, StepSchedule::power(1.0, 1.0), n, sc.m,
                derive_stream(seed, 8), ClassifierConfig{}, workers);
  Checks ck;
  ck.expect(est.counts.at_zero == 0,
            strf("at_zero=%llu of %llu paths",
                 static_cast<unsigned long long>(est.counts.at_zero),
                 static_cast<unsigned long long>(sc.m)));
  return {8, "infallible regime ceiling", ck.pass(), ck.detail()};
}

// Certified stops are wrong no more often than the requested level:
// monitored runs that emit a certificate and then keep running to the
// horizon declare the side they actually settle on, within 3 binomial
// standard errors of epsilon.
CriterionResult stopping_validity(int workers, bool quick, std::uint64_t seed) {
  (void)workers;
  const std::uint64_t horizon = quick ? 100000 : 1000000;
  const std::uint64_t m = quick ? 1000 : 10000;
  const double epsilon = 0.05;
  BanditParams params;
  params.p_a = 0.9;
  params.p_b = 0.1;
  params.x0 = 0.5;
  const StoppingContext context(StepSchedule::power(1.0, 1.0), horizon);

  // Not every path certifies before the horizon (roughly half do at this
  // configuration), so keep launching until m certified runs are in hand.
  std::uint64_t certified = 0, wrong = 0, launched = 0;
  const std::uint64_t launch_cap = 20 * m;
  while (certified < m && launched < launch_cap) {
    const MonitorResult res = monitor(
        params, context, epsilon, derive_stream(seed, 90000 + launched), true);
    ++launched;
    if (!res.certificate) continue;
    ++certified;
    const Arm truth = res.x_final > 0.5 ? Arm::A : Arm::B;
    if (truth != res.certificate->declared_target) ++wrong;
  }

  Checks ck;
  ck.expect(certified == m, strf("certified %llu of %llu launched",
                                 static_cast<unsigned long long>(certified),
                                 static_cast<unsigned long long>(launched)));
  if (certified > 0) {
    const double rate =
        static_cast<double>(wrong) / static_cast<double>(certified);
    const double se =
        std::sqrt(epsilon * (1.0 - epsilon) / static_cast<double>(certified));
    ck.expect(rate <= epsilon + 3.0 * se,
              strf("wrong rate %.4f <= %.4f (eps + 3SE)", rate,
                   epsilon + 3.0 * se));
  }
  return {9, "stopping rule validity", ck.pass(), ck.detail()};
}

// Deterministic averaged recursion stays inside its exponential
// envelopes at every step, and the compensated-rate band is a genuine
// positive interval when the squared steps are summable.
CriterionResult mean_field_envelopes(int workers, bool quick,
                                     std::uint64_t seed) {
  (void)workers;
  (void)seed;
  const std::uint64_t n = quick ? 10000 : 100000;
  const StepSchedule schedule = StepSchedule::power(1.0, 1.0);
  const double slack = 1.0 + 1e-12;

  Checks ck;
  for (double pi : {0.1, 0.5}) {
    for (double x0 : {0.1, 0.5, 0.9}) {
      const MeanPath mp = mean_path(x0, pi, schedule, n);
      std::uint64_t upper_bad = 0, lower_bad = 0;
      for (std::uint64_t k = 0; k <= n; ++k) {
        const double rem = 1.0 - mp.x[k];
        if (rem > mp.upper_x0[k] * slack) ++upper_bad;
        if (mp.lower[k] > rem * slack) ++lower_bad;
      }
      const RateBand band = mean_rate_band(mp, schedule);
      const bool band_ok =
          band.lo > 0.0 && std::isfinite(band.hi) && band.lo <= band.hi;
      ck.expect(upper_bad == 0 && lower_bad == 0 && band_ok,
                strf("pi=%.1f x0=%.1f upper_bad=%llu lower_bad=%llu band=[%.3e,%.3e]",
                     pi, x0, static_cast<unsigned long long>(upper_bad),
                     static_cast<unsigned long long>(lower_bad), band.lo,
                     band.hi));
    }
  }
  return {10, "mean field envelopes", ck.pass(), ck.detail()};
}

// The batch estimator is a pure function of its inputs: the same
// configuration rendered to JSON is byte-identical across worker
// counts.
CriterionResult worker_determinism(int workers, bool quick, std::uint64_t seed) {
  (void)workers;
  const Scale sc = scaled(100000, 20000, quick);
  BanditParams params;
  params.p_a = 0.6;
  params.p_b = 0.4;
  params.x0 = 0.5;
  const StepSchedule schedule = StepSchedule::constant(0.05);

  std::string reports[3];
  const int counts[3] = {1, 4, 8};
  for (int i = 0; i < 3; ++i) {
    const McEstimate est = run_batch(params, schedule, sc.n, sc.m,
                                     derive_stream(seed, 5), ClassifierConfig{},
                                     counts[i]);
    reports[i] = mc_estimate_json(est);
  }
  Checks ck;
  ck.expect(reports[1] == reports[0] && reports[2] == reports[0],
            strf("reports of %llu bytes for workers {1,4,8} %s",
                 static_cast<unsigned long long>(reports[0].size()),
                 (reports[1] == reports[0] && reports[2] == reports[0])
                     ? "identical"
                     : "differ"));
  return {11, "worker-count determinism", ck.pass(), ck.detail()};
}

}  // namespace

CriterionResult run_criterion(int index, int workers, bool quick,
                              std::uint64_t seed) {
  switch (index) {
    case 1: return beta_limit_moments(workers, quick, seed);
    case 2: return interior_mass_identity(workers, quick, seed);
    case 3: return bernoulli_endpoint_law(workers, quick, seed);
    case 4: return failure_floor(workers, quick, seed);
    case 5: return absorption_cross_check(workers, quick, seed);
    case 6: return coupling_dominance(workers, quick, seed);
    case 7: return urn_equivalence(workers, quick, seed);
    case 8: return infallible_ceiling(workers, quick, seed);
    case 9: return stopping_validity(workers, quick, seed);
    case 10: return mean_field_envelopes(workers, quick, seed);
    case 11: return worker_determinism(workers, quick, seed);
    default:
      throw std::invalid_argument("criterion index must lie in 1..11");
  }
}

std::vector<CriterionResult> run_acceptance(const std::vector<int>& indices,
                                            int workers, bool quick,
                                            std::uint64_t seed) {
  std::vector<CriterionResult> out;
  out.reserve(indices.size());
  for (int i : indices) out.push_back(run_criterion(i, workers, quick, seed));
  return out;
}

}  // namespace lri
