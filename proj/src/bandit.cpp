#include "lri/bandit.hpp"

namespace lri {

Trajectory simulate_path(const BanditParams& params, const StepSchedule& schedule,
                         std::uint64_t n_steps, std::uint64_t seed,
                         std::uint64_t thin) {
  params.validate();
  if (thin == 0) throw std::invalid_argument("simulate_path: thin must be positive");

  const std::vector<double> gammas = schedule.gamma_table(n_steps);
  PathSim sim(params, gammas.data(), n_steps, DriverNoise(seed));

  Trajectory t;
  t.params = params;
  t.schedule_name = schedule.name();
  t.seed = seed;
  t.n_steps = n_steps;
  t.thin = thin;
  t.samples.reserve(n_steps / thin + 2);
  t.samples.emplace_back(0, params.x0);
  for (std::uint64_t n = 1; n <= n_steps; ++n) {
    const double x = sim.advance();
    if (n % thin == 0 || n == n_steps) t.samples.emplace_back(n, x);
  }
  t.x_final = sim.state();
  t.descent_alive = sim.descent_alive();
  t.ascent_alive = sim.ascent_alive();
  return t;
}

CoupledPair coupled_pair(double x0_lo, double x0_hi, double p_a_lo, double p_a_hi,
                         double p_b, const StepSchedule& schedule,
                         std::uint64_t n_steps, std::uint64_t seed,
                         std::uint64_t thin) {
  if (x0_lo > x0_hi) throw std::invalid_argument("coupled_pair: x0 order violated");
  if (p_a_lo > p_a_hi) throw std::invalid_argument("coupled_pair: p_a order violated");
  if (thin == 0) throw std::invalid_argument("coupled_pair: thin must be positive");
  const BanditParams lo{p_a_lo, p_b, x0_lo};
  const BanditParams hi{p_a_hi, p_b, x0_hi};
  lo.validate();
  hi.validate();

  const std::vector<double> gammas = schedule.gamma_table(n_steps);
  // Same stream key on both simulators: the counter-based noise then
  // feeds identical (U_n, V_n) to both paths.
  PathSim sim_lo(lo, gammas.data(), n_steps, DriverNoise(seed));
  PathSim sim_hi(hi, gammas.data(), n_steps, DriverNoise(seed));

  CoupledPair out;
  auto init = [&](Trajectory& t, const BanditParams& p) {
    t.params = p;
    t.schedule_name = schedule.name();
    t.seed = seed;
    t.n_steps = n_steps;
    t.thin = thin;
    t.samples.reserve(n_steps / thin + 2);
    t.samples.emplace_back(0, p.x0);
  };
  init(out.lo, lo);
  init(out.hi, hi);

  for (std::uint64_t n = 1; n <= n_steps; ++n) {
    const double a = sim_lo.advance();
    const double b = sim_hi.advance();
    if (a > b) ++out.dominance_violations;
    if (n % thin == 0 || n == n_steps) {
      out.lo.samples.emplace_back(n, a);
      out.hi.samples.emplace_back(n, b);
    }
  }
  out.lo.x_final = sim_lo.state();
  out.hi.x_final = sim_hi.state();
  out.lo.descent_alive = sim_lo.descent_alive();
  out.hi.descent_alive = sim_hi.descent_alive();
  out.lo.ascent_alive = sim_lo.ascent_alive();
  out.hi.ascent_alive = sim_hi.ascent_alive();
  return out;
}

FinalState simulate_final(const BanditParams& params, const double* gammas,
                          std::uint64_t n_steps, std::uint64_t seed) {
  PathSim sim(params, gammas, n_steps, DriverNoise(seed));
  while (sim.n() < n_steps) {
    const double x = sim.advance();
    if (x == 0.0 || x == 1.0) {
      // Absorbed: the state can never move again, and the only further
      // observable change is the next step forcing the far-side monotone
      // flag (u < 0 and u > 1 are impossible). Reproducing that here
      // makes skipping the remaining steps output-identical.
      bool descent = sim.descent_alive();
      bool ascent = sim.ascent_alive();
      if (sim.n() < n_steps) {
        if (x == 0.0) ascent = false;
        else descent = false;
      }
      return {x, descent, ascent};
    }
  }
  return {sim.state(), sim.descent_alive(), sim.ascent_alive()};
}

}  // namespace lri
