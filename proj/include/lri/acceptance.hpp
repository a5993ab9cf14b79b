#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace lri {

struct CriterionResult {
  int index = 0;
  std::string name;
  bool pass = false;
  std::string detail;
};

inline constexpr int kNumCriteria = 11;
inline constexpr std::uint64_t kAcceptanceSeed = 0xA11CE5EDull;

// Runs one numbered check of the verification suite at full scale, or
// at roughly one-tenth the path counts when quick is set (useful while
// iterating; the recorded tolerances assume full scale).
CriterionResult run_criterion(int index, int workers = 1, bool quick = false,
                              std::uint64_t seed = kAcceptanceSeed);

std::vector<CriterionResult> run_acceptance(const std::vector<int>& indices,
                                            int workers = 1, bool quick = false,
                                            std::uint64_t seed = kAcceptanceSeed);

}  // namespace lri
