// Verification-suite runner: one pass/fail line per criterion, exit code
// equal to the number of failures. ctest registers each criterion as its
// own test via --criterion.

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <string>
#include <vector>

#include "lri/acceptance.hpp"

namespace {

int usage(const char* argv0) {
  std::fprintf(stderr,
               "usage: %s [--criterion K] [--suite full|quick] [--workers W] "
               "[--seed S]\n",
               argv0);
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  int criterion = 0;
  int workers = 1;
  bool quick = false;
  std::uint64_t seed = lri::kAcceptanceSeed;

  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    auto next = [&]() -> const char* {
      if (i + 1 >= argc) {
        std::exit(usage(argv[0]));
      }
      return argv[++i];
    };
    if (arg == "--criterion") {
      criterion = std::atoi(next());
      if (criterion < 1 || criterion > lri::kNumCriteria) return usage(argv[0]);
    } else if (arg == "--suite") {
      const std::string s = next();
      if (s != "full" && s != "quick") return usage(argv[0]);
      quick = s == "quick";
    } else if (arg == "--workers") {
      workers = std::atoi(next());
      if (workers < 1) return usage(argv[0]);
    } else if (arg == "--seed") {
      seed = std::strtoull(next(), nullptr, 10);
    } else {
      return usage(argv[0]);
    }
  }

  std::vector<int> indices;
  if (criterion > 0) {
    indices.push_back(criterion);
  } else {
    for (int i = 1; i <= lri::kNumCriteria; ++i) indices.push_back(i);
  }

  int failures = 0;
  for (int i : indices) {
    const lri::CriterionResult r = lri::run_criterion(i, workers, quick, seed);
    if (!r.pass) ++failures;
    std::printf("%02d %-4s %-32s %s\n", r.index, r.pass ? "PASS" : "FAIL",
                r.name.c_str(), r.detail.c_str());
    std::fflush(stdout);
  }
  return failures;
}
