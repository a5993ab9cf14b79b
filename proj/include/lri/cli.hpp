#pragma once

#include <string>

#include "lri/absorption.hpp"
#include "lri/bandit.hpp"
#include "lri/bounds.hpp"
#include "lri/mean_field.hpp"
#include "lri/monte_carlo.hpp"
#include "lri/polya.hpp"
#include "lri/stopping.hpp"

namespace lri {

// Report renderers used by both the CLI and the acceptance suite. All
// floating-point fields go through the 17-significant-digit form, so a
// byte-compare of two reports is a full-precision compare of their
// contents.
std::string trajectory_csv(const Trajectory& trajectory);
std::string trajectory_summary_json(const Trajectory& trajectory);
std::string mc_estimate_json(const McEstimate& estimate);
std::string interior_mass_json(const InteriorMassEstimate& estimate,
                               const BanditParams& params);
std::string moments_json(const MomentEstimate& estimate,
                         const BanditParams& params);
std::string bound_report_json(const BoundReport& report);
std::string absorption_csv(const AbsorptionSolution& solution);
std::string absorption_report_json(const AbsorptionSolution& solution);
std::string psi_report_json(const PsiResult& psi);
std::string urn_csv(const UrnPath& path);
std::string monitor_result_json(const MonitorResult& result,
                                const BanditParams& params, double epsilon);
std::string mean_path_csv(const MeanPath& path);

// Entry point behind main(); parses subcommands and flags, reads an
// optional JSON config, and writes reports to stdout or --out.
int run_cli(int argc, const char* const* argv);

}  // namespace lri
