#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lri/bandit.hpp"
#include "lri/schedule.hpp"
#include "lri/stats.hpp"

namespace lri {

enum class PathClass { AtZero, AtOne, Interior, Undecided };

const char* to_string(PathClass c);

// Terminal-state classifier. A path counts as Interior only when the
// squared steps are certified summable; when they diverge the limit law
// lives on {0,1} and interior endpoints stay Undecided. When
// require_monotone_tail is set, a boundary class additionally requires
// the corresponding whole-path monotone event.
struct ClassifierConfig {
  double eps_zero = 1e-6;
  double eps_one = 1e-6;
  double interior_lo = 0.01;
  double interior_hi = 0.99;
  bool require_monotone_tail = false;

  void validate() const;
};

PathClass classify(double x_final, bool descent_alive, bool ascent_alive,
                   const ClassifierConfig& config, bool sq_summable);
PathClass classify(const Trajectory& trajectory, const ClassifierConfig& config,
                   const StepSchedule& schedule);

// Per-class tallies. Merging is integer addition, hence associative and
// commutative: partial results can be combined in any order without
// changing the batch estimate.
struct ClassCounts {
  std::uint64_t at_zero = 0;
  std::uint64_t at_one = 0;
  std::uint64_t interior = 0;
  std::uint64_t undecided = 0;

  std::uint64_t total() const { return at_zero + at_one + interior + undecided; }
};

ClassCounts merge(const ClassCounts& a, const ClassCounts& b);

struct ClassStat {
  std::uint64_t count = 0;
  double p_hat = 0.0;
  WilsonInterval ci;
};

struct McEstimate {
  BanditParams params;
  std::string schedule_name;
  std::uint64_t n_steps = 0;
  std::uint64_t n_paths = 0;
  std::uint64_t master_seed = 0;
  double ci_level = 0.99;
  ClassCounts counts;
  ClassStat at_zero, at_one, interior, undecided;
};

// M independent paths, path i driven by derive_stream(master_seed, i).
// The estimate is a pure function of (params, schedule, n_steps, n_paths,
// master_seed, config, ci_level); the worker count only schedules work.
// When finals is given it receives the per-path terminal states by index.
McEstimate run_batch(const BanditParams& params, const StepSchedule& schedule,
                     std::uint64_t n_steps, std::uint64_t n_paths,
                     std::uint64_t master_seed, const ClassifierConfig& config,
                     int workers = 1, double ci_level = 0.99,
                     std::vector<FinalState>* finals = nullptr);

// Mean of X_N (1 - X_N) over M paths next to the closed-form value it
// must match when the arms are symmetric.
struct InteriorMassEstimate {
  double mean = 0.0;
  double se = 0.0;
  double formula = 0.0;
  std::uint64_t n_steps = 0;
  std::uint64_t n_paths = 0;
};

InteriorMassEstimate estimate_interior_mass(const BanditParams& params,
                                            const StepSchedule& schedule,
                                            std::uint64_t n_steps,
                                            std::uint64_t n_paths,
                                            std::uint64_t master_seed,
                                            int workers = 1);

// Empirical moments E[X_N^m], m = 1..m_max (m_max <= 8), with
// delete-one jackknife standard errors (for a plain mean this equals
// the classical s/sqrt(M)).
struct MomentEstimate {
  std::vector<double> mean;  // [m-1] holds E[X^m]
  std::vector<double> se;
  std::uint64_t n_steps = 0;
  std::uint64_t n_paths = 0;
};

MomentEstimate estimate_moments(const BanditParams& params,
                                const StepSchedule& schedule,
                                std::uint64_t n_steps, std::uint64_t n_paths,
                                std::uint64_t master_seed, std::uint64_t m_max,
                                int workers = 1);

}  // namespace lri
