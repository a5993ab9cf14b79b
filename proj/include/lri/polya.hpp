#pragma once

#include <cstdint>
#include <vector>

#include "lri/schedule.hpp"

namespace lri {

// Regular urn: start with r red and b black balls; each draw returns the
// ball plus one more of the same color. Black counts are kept as exact
// integers; proportions are derived on demand.
struct UrnPath {
  std::uint64_t r = 1;
  std::uint64_t b = 1;
  std::uint64_t seed = 0;
  std::uint64_t n_steps = 0;
  std::vector<std::uint64_t> beta;  // beta[n] = black count after n draws

  double proportion(std::uint64_t n) const {
    return static_cast<double>(beta[n]) / static_cast<double>(r + b + n);
  }
};

// Draw n+1 is black when U_{n+1} <= beta_n / (r + b + n). The driver
// noise is consumed as (u, v) pairs with v unused, keeping the stream
// aligned with a bandit path on the same seed.
UrnPath urn_path(std::uint64_t r, std::uint64_t b, std::uint64_t n_steps,
                 std::uint64_t seed);

// The urn proportion follows the reward-inaction recursion with both
// arms always paying and step 1/(s + n), s = r + b. Packaged as a
// custom schedule with certified squared tail sum_{j>n} (s+j)^-2 <=
// 1/(s+n).
StepSchedule urn_schedule(std::uint64_t initial_total);

// Max over n <= N of |urn proportion - bandit state| when both consume
// the same noise stream; algebraically zero, so anything beyond
// accumulated rounding indicates a transcription bug.
double urn_bandit_equivalence(std::uint64_t r, std::uint64_t b,
                              std::uint64_t n_steps, std::uint64_t seed);

}  // namespace lri
