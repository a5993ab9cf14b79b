#include "lri/polya.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "lri/bandit.hpp"
#include "lri/noise.hpp"

namespace lri {

UrnPath urn_path(std::uint64_t r, std::uint64_t b, std::uint64_t n_steps,
                 std::uint64_t seed) {
  if (r == 0 || b == 0) {
    throw std::invalid_argument("urn_path: initial counts must be positive");
  }
  UrnPath path;
  path.r = r;
  path.b = b;
  path.seed = seed;
  path.n_steps = n_steps;
  path.beta.reserve(n_steps + 1);
  path.beta.push_back(b);

  DriverNoise noise(seed);
  std::uint64_t beta = b;
  for (std::uint64_t n = 0; n < n_steps; ++n) {
    const auto [u, v] = noise.pair(n + 1);
    (void)v;
    const double x = static_cast<double>(beta) / static_cast<double>(r + b + n);
    if (u <= x) ++beta;
    path.beta.push_back(beta);
  }
  return path;
}

StepSchedule urn_schedule(std::uint64_t initial_total) {
  if (initial_total < 2) {
    throw std::invalid_argument("urn_schedule: needs at least 2 initial balls");
  }
  const double s = static_cast<double>(initial_total);
  char name[48];
  std::snprintf(name, sizeof name, "urn(%llu)",
                static_cast<unsigned long long>(initial_total));
  return StepSchedule::custom(
      name,
      [s](std::uint64_t n) { return 1.0 / (s + static_cast<double>(n)); },
      [s](std::uint64_t n) { return 1.0 / (s + static_cast<double>(n)); });
}

double urn_bandit_equivalence(std::uint64_t r, std::uint64_t b,
                              std::uint64_t n_steps, std::uint64_t seed) {
  const UrnPath urn = urn_path(r, b, n_steps, seed);

  BanditParams params;
  params.p_a = 1.0;
  params.p_b = 1.0;
  params.x0 = static_cast<double>(b) / static_cast<double>(r + b);
  const StepSchedule schedule = urn_schedule(r + b);
  const std::vector<double> gammas = schedule.gamma_table(n_steps);

  PathSim sim(params, gammas.data(), n_steps, DriverNoise(seed));
  double max_diff = std::fabs(urn.proportion(0) - sim.state());
  for (std::uint64_t n = 1; n <= n_steps; ++n) {
    sim.advance();
    max_diff = std::max(max_diff, std::fabs(urn.proportion(n) - sim.state()));
  }
  return max_diff;
}

}  // namespace lri
