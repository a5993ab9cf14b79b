#include "lri/cli.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "lri/acceptance.hpp"
#include "lri/json_io.hpp"
#include "lri/schedule.hpp"

namespace lri {
namespace {

void write_params(JsonWriter& w, const BanditParams& params) {
  w.key("params").begin_object();
  w.kv("p_a", params.p_a).kv("p_b", params.p_b).kv("x0", params.x0);
  w.end_object();
}

void write_class_stat(JsonWriter& w, std::string_view name, const ClassStat& s) {
  w.key(name).begin_object();
  w.kv("count", s.count).kv("p", s.p_hat);
  w.kv("ci_lo", s.ci.lo).kv("ci_hi", s.ci.hi);
  w.end_object();
}

const char* to_string(Classification c) {
  switch (c) {
    case Classification::Fallible: return "Fallible";
    case Classification::Infallible: return "Infallible";
    case Classification::Unknown: return "Unknown";
  }
  throw std::logic_error("bad Classification");
}

const char* to_string(BoundDirection d) {
  switch (d) {
    case BoundDirection::LowerBound: return "lower_bound";
    case BoundDirection::UpperBound: return "upper_bound";
    case BoundDirection::Exact: return "exact";
  }
  throw std::logic_error("bad BoundDirection");
}

}  // namespace

std::string trajectory_csv(const Trajectory& trajectory) {
  std::string out = "n,x\n";
  for (const auto& [n, x] : trajectory.samples) {
    out += std::to_string(n);
    out += ',';
    out += fmt17(x);
    out += '\n';
  }
  return out;
}

std::string trajectory_summary_json(const Trajectory& trajectory) {
  JsonWriter w;
  w.begin_object();
  write_params(w, trajectory.params);
  w.kv("schedule", trajectory.schedule_name);
  w.kv("seed", trajectory.seed);
  w.kv("n_steps", trajectory.n_steps);
  w.kv("thin", trajectory.thin);
  w.kv("x_final", trajectory.x_final);
  w.kv("descent_alive", trajectory.descent_alive);
  w.kv("ascent_alive", trajectory.ascent_alive);
  w.end_object();
  return w.str() + "\n";
}

std::string mc_estimate_json(const McEstimate& estimate) {
  JsonWriter w;
  w.begin_object();
  write_params(w, estimate.params);
  w.kv("schedule", estimate.schedule_name);
  w.kv("n_steps", estimate.n_steps);
  w.kv("n_paths", estimate.n_paths);
  w.kv("seed", estimate.master_seed);
  w.kv("ci_level", estimate.ci_level);
  w.key("counts").begin_object();
  w.kv("at_zero", estimate.counts.at_zero).kv("at_one", estimate.counts.at_one);
  w.kv("interior", estimate.counts.interior).kv("undecided", estimate.counts.undecided);
  w.end_object();
  w.key("estimates").begin_object();
  write_class_stat(w, "at_zero", estimate.at_zero);
  write_class_stat(w, "at_one", estimate.at_one);
  write_class_stat(w, "interior", estimate.interior);
  write_class_stat(w, "undecided", estimate.undecided);
  w.end_object();
  w.end_object();
  return w.str() + "\n";
}

std::string interior_mass_json(const InteriorMassEstimate& estimate,
                               const BanditParams& params) {
  JsonWriter w;
  w.begin_object();
  write_params(w, params);
  w.kv("n_steps", estimate.n_steps);
  w.kv("n_paths", estimate.n_paths);
  w.kv("mean", estimate.mean);
  w.kv("se", estimate.se);
  w.kv("formula", estimate.formula);
  w.end_object();
  return w.str() + "\n";
}

std::string moments_json(const MomentEstimate& estimate,
                         const BanditParams& params) {
  JsonWriter w;
  w.begin_object();
  write_params(w, params);
  w.kv("n_steps", estimate.n_steps);
  w.kv("n_paths", estimate.n_paths);
  w.key("moments").begin_array();
  for (std::size_t i = 0; i < estimate.mean.size(); ++i) {
    w.begin_object();
    w.kv("m", static_cast<std::uint64_t>(i + 1));
    w.kv("mean", estimate.mean[i]);
    w.kv("se", estimate.se[i]);
    w.end_object();
  }
  w.end_array();
  w.end_object();
  return w.str() + "\n";
}

std::string bound_report_json(const BoundReport& report) {
  JsonWriter w;
  w.begin_object();
  w.kv("name", report.name);
  w.key("inputs").begin_object();
  for (const auto& [k, v] : report.inputs) w.kv(k, v);
  w.end_object();
  w.kv("value", report.value);
  w.kv("direction", to_string(report.direction));
  w.end_object();
  return w.str() + "\n";
}

std::string absorption_csv(const AbsorptionSolution& solution) {
  std::string out = "x,u\n";
  for (std::size_t i = 0; i < solution.u.size(); ++i) {
    out += fmt17(solution.u.grid[i]);
    out += ',';
    out += fmt17(solution.u.values[i]);
    out += '\n';
  }
  return out;
}

std::string absorption_report_json(const AbsorptionSolution& solution) {
  JsonWriter w;
  w.begin_object();
  w.kv("gamma", solution.gamma);
  w.kv("p_a", solution.p_a);
  w.kv("p_b", solution.p_b);
  w.kv("grid_points", static_cast<std::uint64_t>(solution.u.size()));
  w.kv("iterations", solution.iterations);
  w.kv("residual", solution.residual);
  w.end_object();
  return w.str() + "\n";
}

std::string psi_report_json(const PsiResult& psi) {
  JsonWriter w;
  w.begin_object();
  w.kv("grid_points", static_cast<std::uint64_t>(psi.psi.size()));
  w.kv("terms", psi.terms);
  w.kv("last_term_sup", psi.last_term_sup);
  w.kv("converged", psi.converged);
  w.end_object();
  return w.str() + "\n";
}

std::string urn_csv(const UrnPath& path) {
  std::string out = "n,beta,x\n";
  for (std::uint64_t n = 0; n <= path.n_steps; ++n) {
    out += std::to_string(n);
    out += ',';
    out += std::to_string(path.beta[n]);
    out += ',';
    out += fmt17(path.proportion(n));
    out += '\n';
  }
  return out;
}

std::string monitor_result_json(const MonitorResult& result,
                                const BanditParams& params, double epsilon) {
  JsonWriter w;
  w.begin_object();
  write_params(w, params);
  w.kv("epsilon", epsilon);
  w.kv("steps_run", result.steps_run);
  w.kv("x_final", result.x_final);
  if (result.certificate) {
    const StoppingCertificate& c = *result.certificate;
    w.key("certificate").begin_object();
    w.kv("n", c.n);
    w.kv("x_n", c.x_n);
    w.kv("bound", c.bound);
    w.kv("target", to_string(c.declared_target));
    w.kv("epsilon", c.epsilon);
    w.kv("tail_sq", c.tail_sq_used);
    w.end_object();
  } else {
    w.key("certificate").null();
  }
  w.end_object();
  return w.str() + "\n";
}

std::string mean_path_csv(const MeanPath& path) {
  std::string out = "n,x,rate\n";
  for (std::size_t n = 0; n < path.x.size(); ++n) {
    out += std::to_string(n);
    out += ',';
    out += fmt17(path.x[n]);
    out += ',';
    out += fmt17(path.rate[n]);
    out += '\n';
  }
  return out;
}

namespace {

std::uint64_t seed_from_env() {
  const char* env = std::getenv("LRI_SEED");
  if (env == nullptr || *env == '\0') return 0;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(env, &end, 10);
  if (end == nullptr || *end != '\0') {
    throw std::runtime_error("LRI_SEED must be a decimal unsigned integer");
  }
  return static_cast<std::uint64_t>(v);
}

void write_output(const std::string& path, const std::string& content) {
  if (path.empty()) {
    std::fwrite(content.data(), 1, content.size(), stdout);
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file " + path);
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw std::runtime_error("failed writing output file " + path);
}

// Config-file overlay: any field the command line did not set may come
// from the JSON config instead; explicit flags always win.
using FieldSetter = std::function<void(const nlohmann::json&)>;

struct ConfigField {
  std::string key;
  FieldSetter set;
};

void apply_config(const CLI::App& cmd, const std::string& config_path,
                  const std::vector<ConfigField>& fields) {
  if (config_path.empty()) return;
  std::ifstream in(config_path);
  if (!in) throw std::runtime_error("cannot open config file " + config_path);
  nlohmann::json j;
  in >> j;
  if (!j.is_object()) throw std::runtime_error("config root must be an object");
  for (const auto& field : fields) {
    if (!j.contains(field.key)) continue;
    const CLI::Option* opt = cmd.get_option_no_throw("--" + field.key);
    if (opt != nullptr && opt->count() > 0) continue;
    field.set(j.at(field.key));
  }
  for (const auto& [key, value] : j.items()) {
    (void)value;
    bool known = false;
    for (const auto& field : fields) known = known || field.key == key;
    if (!known) throw std::runtime_error("config has unknown field '" + key + "'");
  }
}

FieldSetter set_double(double* target) {
  return [target](const nlohmann::json& j) { *target = j.get<double>(); };
}

FieldSetter set_u64(std::uint64_t* target) {
  return [target](const nlohmann::json& j) { *target = j.get<std::uint64_t>(); };
}

FieldSetter set_bool(bool* target) {
  return [target](const nlohmann::json& j) { *target = j.get<bool>(); };
}

FieldSetter set_string(std::string* target) {
  return [target](const nlohmann::json& j) { *target = j.get<std::string>(); };
}

// The schedule appears in configs as the serialized object itself; on
// the command line it is the same JSON as one string argument.
FieldSetter set_schedule(std::string* target) {
  return [target](const nlohmann::json& j) {
    *target = j.is_string() ? j.get<std::string>() : j.dump();
  };
}

struct ClassifierFlags {
  ClassifierConfig config;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--eps_zero", config.eps_zero,
                    "proximity to 0 that counts as settled");
    cmd->add_option("--eps_one", config.eps_one,
                    "proximity to 1 that counts as settled");
    cmd->add_option("--interior_lo", config.interior_lo, "interior band lower edge");
    cmd->add_option("--interior_hi", config.interior_hi, "interior band upper edge");
    cmd->add_flag("--require_monotone_tail", config.require_monotone_tail,
                  "boundary classes also need the monotone whole-path event");
  }

  std::vector<ConfigField> fields() {
    return {{"eps_zero", set_double(&config.eps_zero)},
            {"eps_one", set_double(&config.eps_one)},
            {"interior_lo", set_double(&config.interior_lo)},
            {"interior_hi", set_double(&config.interior_hi)},
            {"require_monotone_tail", set_bool(&config.require_monotone_tail)}};
  }
};

}  // namespace

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"two-armed bandit reward-inaction toolkit"};
  app.require_subcommand(1);
  std::uint64_t env_seed = 0;
  try {
    env_seed = seed_from_env();
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }

  int exit_code = 0;
  const std::string default_schedule = R"({"kind":"power","c":1,"alpha":1})";

  // simulate: one path, CSV samples or a JSON endpoint summary.
  auto* sim_cmd = app.add_subcommand("simulate", "simulate one path");
  struct {
    BanditParams params;
    std::string schedulefmt, config, out, format = "csv";
    std::uint64_t n_steps = 1000, seed = 0, thin = 1;
  } sim;
  sim.schedulefmt = default_schedule;
  sim.seed = env_seed;
  sim_cmd->add_option("--p_a", sim.params.p_a, "arm A payoff probability");
  sim_cmd->add_option("--p_b", sim.params.p_b, "arm B payoff probability");
  sim_cmd->add_option("--x0", sim.params.x0, "initial probability of playing A");
  sim_cmd->add_option("--schedule", sim.schedulefmt, "step schedule as JSON");
  sim_cmd->add_option("--n_steps", sim.n_steps, "path length");
  sim_cmd->add_option("--seed", sim.seed, "path seed");
  sim_cmd->add_option("--thin", sim.thin, "keep every thin-th sample");
  sim_cmd->add_option("--format", sim.format, "csv (samples) or json (summary)")
      ->check(CLI::IsMember({"csv", "json"}));
  sim_cmd->add_option("--out", sim.out, "output file (default stdout)");
  sim_cmd->add_option("--config", sim.config, "JSON config supplying unset flags");
  sim_cmd->callback([&] {
    apply_config(*sim_cmd, sim.config,
                 {{"p_a", set_double(&sim.params.p_a)},
                  {"p_b", set_double(&sim.params.p_b)},
                  {"x0", set_double(&sim.params.x0)},
                  {"schedule", set_schedule(&sim.schedulefmt)},
                  {"n_steps", set_u64(&sim.n_steps)},
                  {"seed", set_u64(&sim.seed)},
                  {"thin", set_u64(&sim.thin)},
                  {"format", set_string(&sim.format)},
                  {"out", set_string(&sim.out)}});
    const StepSchedule schedule = StepSchedule::from_json(sim.schedulefmt);
    const Trajectory t =
        simulate_path(sim.params, schedule, sim.n_steps, sim.seed, sim.thin);
    write_output(sim.out, sim.format == "csv" ? trajectory_csv(t)
                                              : trajectory_summary_json(t));
  });

  // mc: batch of terminal states with class counts and intervals.
  auto* mc_cmd = app.add_subcommand("mc", "Monte Carlo batch estimate");
  struct {
    BanditParams params;
    std::string schedulefmt, config, out, paths_out;
    std::uint64_t n_steps = 1000, n_paths = 10000, seed = 0;
    std::uint64_t workers = 1;
    double ci_level = 0.99;
  } mc;
  mc.schedulefmt = default_schedule;
  mc.seed = env_seed;
  ClassifierFlags mc_classifier;
  mc_cmd->add_option("--p_a", mc.params.p_a, "arm A payoff probability");
  mc_cmd->add_option("--p_b", mc.params.p_b, "arm B payoff probability");
  mc_cmd->add_option("--x0", mc.params.x0, "initial probability of playing A");
  mc_cmd->add_option("--schedule", mc.schedulefmt, "step schedule as JSON");
  mc_cmd->add_option("--n_steps", mc.n_steps, "steps per path");
  mc_cmd->add_option("--n_paths", mc.n_paths, "number of paths");
  mc_cmd->add_option("--seed", mc.seed, "master seed");
  mc_cmd->add_option("--workers", mc.workers, "worker threads (never changes results)");
  mc_cmd->add_option("--ci_level", mc.ci_level, "confidence level for intervals");
  mc_classifier.add_to(mc_cmd);
  mc_cmd->add_option("--out", mc.out, "output file (default stdout)");
  mc_cmd->add_option("--paths_out", mc.paths_out, "also dump per-path finals CSV here");
  mc_cmd->add_option("--config", mc.config, "JSON config supplying unset flags");
  mc_cmd->callback([&] {
    std::vector<ConfigField> fields = {
        {"p_a", set_double(&mc.params.p_a)},
        {"p_b", set_double(&mc.params.p_b)},
        {"x0", set_double(&mc.params.x0)},
        {"schedule", set_schedule(&mc.schedulefmt)},
        {"n_steps", set_u64(&mc.n_steps)},
        {"n_paths", set_u64(&mc.n_paths)},
        {"seed", set_u64(&mc.seed)},
        {"workers", set_u64(&mc.workers)},
        {"ci_level", set_double(&mc.ci_level)},
        {"out", set_string(&mc.out)},
        {"paths_out", set_string(&mc.paths_out)}};
    for (auto& f : mc_classifier.fields()) fields.push_back(std::move(f));
    apply_config(*mc_cmd, mc.config, fields);
    const StepSchedule schedule = StepSchedule::from_json(mc.schedulefmt);
    std::vector<FinalState> finals;
    const McEstimate est = run_batch(
        mc.params, schedule, mc.n_steps, mc.n_paths, mc.seed,
        mc_classifier.config, static_cast<int>(mc.workers), mc.ci_level,
        mc.paths_out.empty() ? nullptr : &finals);
    write_output(mc.out, mc_estimate_json(est));
    if (!mc.paths_out.empty()) {
      std::string csv = "i,x_final,descent_alive,ascent_alive\n";
      for (std::size_t i = 0; i < finals.size(); ++i) {
        csv += std::to_string(i);
        csv += ',';
        csv += fmt17(finals[i].x);
        csv += ',';
        csv += finals[i].descent_alive ? '1' : '0';
        csv += ',';
        csv += finals[i].ascent_alive ? '1' : '0';
        csv += '\n';
      }
      write_output(mc.paths_out, csv);
    }
  });

  // bounds: closed-form evaluators with echoed inputs.
  auto* bounds_cmd = app.add_subcommand("bounds", "evaluate a closed-form bound");
  struct {
    std::string name, schedulefmt, config, out, target = "x";
    double x = 0.5, p_a = 0.6, p_b = 0.4, gamma = 0.1, delta = 1.0;
    std::uint64_t n = 1000, m = 1;
  } bd;
  bd.schedulefmt = default_schedule;
  bounds_cmd
      ->add_option("--name", bd.name,
                   "failure_lb | success_lb | interior_mass | "
                   "interior_mass_limit | moment_ub | beta_moment")
      ->required()
      ->check(CLI::IsMember({"failure_lb", "success_lb", "interior_mass",
                             "interior_mass_limit", "moment_ub", "beta_moment"}));
  bounds_cmd->add_option("--x", bd.x, "start point");
  bounds_cmd->add_option("--p_a", bd.p_a, "arm A payoff probability");
  bounds_cmd->add_option("--p_b", bd.p_b, "arm B payoff probability");
  bounds_cmd->add_option("--gamma", bd.gamma, "constant step");
  bounds_cmd->add_option("--delta", bd.delta, "constant increment of S_n");
  bounds_cmd->add_option("--n", bd.n, "step index for finite-n formulas");
  bounds_cmd->add_option("--m", bd.m, "moment order");
  bounds_cmd->add_option("--target", bd.target, "x | one_minus_x (moment_ub)")
      ->check(CLI::IsMember({"x", "one_minus_x"}));
  bounds_cmd->add_option("--schedule", bd.schedulefmt, "step schedule as JSON");
  bounds_cmd->add_option("--out", bd.out, "output file (default stdout)");
  bounds_cmd->add_option("--config", bd.config, "JSON config supplying unset flags");
  bounds_cmd->callback([&] {
    apply_config(*bounds_cmd, bd.config,
                 {{"name", set_string(&bd.name)},
                  {"x", set_double(&bd.x)},
                  {"p_a", set_double(&bd.p_a)},
                  {"p_b", set_double(&bd.p_b)},
                  {"gamma", set_double(&bd.gamma)},
                  {"delta", set_double(&bd.delta)},
                  {"n", set_u64(&bd.n)},
                  {"m", set_u64(&bd.m)},
                  {"target", set_string(&bd.target)},
                  {"schedule", set_schedule(&bd.schedulefmt)},
                  {"out", set_string(&bd.out)}});
    BoundReport report;
    report.name = bd.name;
    if (bd.name == "failure_lb") {
      report.inputs = {{"x", bd.x}, {"p_b", bd.p_b}, {"gamma", bd.gamma}};
      report.value = failure_lb_constant(bd.x, bd.p_b, bd.gamma);
      report.direction = BoundDirection::LowerBound;
    } else if (bd.name == "success_lb") {
      report.inputs = {
          {"x", bd.x}, {"p_a", bd.p_a}, {"p_b", bd.p_b}, {"gamma", bd.gamma}};
      report.value = success_lb_theorem2(bd.x, bd.p_a, bd.p_b, bd.gamma);
      report.direction = BoundDirection::LowerBound;
    } else if (bd.name == "interior_mass") {
      const StepSchedule schedule = StepSchedule::from_json(bd.schedulefmt);
      report.inputs = {{"x", bd.x}, {"p_a", bd.p_a}, {"n", static_cast<double>(bd.n)}};
      report.value = interior_mass_formula(bd.x, bd.p_a, schedule, bd.n);
      report.direction = BoundDirection::Exact;
    } else if (bd.name == "interior_mass_limit") {
      const StepSchedule schedule = StepSchedule::from_json(bd.schedulefmt);
      report.inputs = {{"x", bd.x}, {"p_a", bd.p_a}};
      report.value = interior_mass_limit(bd.x, bd.p_a, schedule);
      report.direction = BoundDirection::Exact;
    } else if (bd.name == "moment_ub") {
      const StepSchedule schedule = StepSchedule::from_json(bd.schedulefmt);
      report.inputs = {{"x", bd.x}, {"m", static_cast<double>(bd.m)}};
      const auto value =
          moment_ub(bd.x, schedule, bd.m,
                    bd.target == "x" ? MomentTarget::XLimit
                                     : MomentTarget::OneMinusXLimit);
      if (!value) {
        throw std::runtime_error(
            "moment_ub needs nonincreasing increments; schedule does not qualify");
      }
      report.value = *value;
      report.direction = BoundDirection::UpperBound;
    } else {  // beta_moment
      report.inputs = {{"x", bd.x}, {"delta", bd.delta}, {"m", static_cast<double>(bd.m)}};
      report.value = beta_limit_moment(bd.x, bd.delta, bd.m);
      report.direction = BoundDirection::Exact;
    }
    write_output(bd.out, bound_report_json(report));
  });

  // solve: absorption probability on a grid.
  auto* solve_cmd = app.add_subcommand("solve", "grid absorption solver");
  struct {
    double gamma = 0.1, p_a = 0.6, p_b = 0.4, tol = 1e-10;
    std::uint64_t grid_n = 4097, max_iter = 1000000;
    std::string config, out;
  } sv;
  solve_cmd->add_option("--gamma", sv.gamma, "constant step");
  solve_cmd->add_option("--p_a", sv.p_a, "arm A payoff probability");
  solve_cmd->add_option("--p_b", sv.p_b, "arm B payoff probability");
  solve_cmd->add_option("--grid_n", sv.grid_n, "grid points");
  solve_cmd->add_option("--tol", sv.tol, "sup-norm residual tolerance");
  solve_cmd->add_option("--max_iter", sv.max_iter, "iteration cap");
  solve_cmd->add_option("--out", sv.out, "write (x,u) CSV here");
  solve_cmd->add_option("--config", sv.config, "JSON config supplying unset flags");
  solve_cmd->callback([&] {
    apply_config(*solve_cmd, sv.config,
                 {{"gamma", set_double(&sv.gamma)},
                  {"p_a", set_double(&sv.p_a)},
                  {"p_b", set_double(&sv.p_b)},
                  {"grid_n", set_u64(&sv.grid_n)},
                  {"tol", set_double(&sv.tol)},
                  {"max_iter", set_u64(&sv.max_iter)},
                  {"out", set_string(&sv.out)}});
    const AbsorptionSolution sol = absorption_solve(
        sv.gamma, sv.p_a, sv.p_b, sv.grid_n, sv.tol, sv.max_iter);
    if (!sv.out.empty()) write_output(sv.out, absorption_csv(sol));
    write_output("", absorption_report_json(sol));
  });

  // polya: urn path plus the bandit-equivalence check.
  auto* polya_cmd = app.add_subcommand("polya", "urn path and equivalence check");
  struct {
    std::uint64_t r = 1, b = 1, n_steps = 100, seed = 0;
    std::string config, out;
  } po;
  po.seed = env_seed;
  polya_cmd->add_option("--r", po.r, "initial red count");
  polya_cmd->add_option("--b", po.b, "initial black count");
  polya_cmd->add_option("--n_steps", po.n_steps, "number of draws");
  polya_cmd->add_option("--seed", po.seed, "path seed");
  polya_cmd->add_option("--out", po.out, "write (n,beta,x) CSV here");
  polya_cmd->add_option("--config", po.config, "JSON config supplying unset flags");
  polya_cmd->callback([&] {
    apply_config(*polya_cmd, po.config,
                 {{"r", set_u64(&po.r)},
                  {"b", set_u64(&po.b)},
                  {"n_steps", set_u64(&po.n_steps)},
                  {"seed", set_u64(&po.seed)},
                  {"out", set_string(&po.out)}});
    const UrnPath path = urn_path(po.r, po.b, po.n_steps, po.seed);
    if (!po.out.empty()) write_output(po.out, urn_csv(path));
    JsonWriter w;
    w.begin_object();
    w.kv("r", po.r).kv("b", po.b).kv("n_steps", po.n_steps).kv("seed", po.seed);
    w.kv("x_final", path.proportion(po.n_steps));
    w.kv("bandit_max_diff", urn_bandit_equivalence(po.r, po.b, po.n_steps, po.seed));
    w.end_object();
    write_output("", w.str() + "\n");
  });

  // stop: run the online monitor on one path.
  auto* stop_cmd = app.add_subcommand("stop", "stopping-rule monitor");
  struct {
    BanditParams params;
    std::string schedulefmt, config, out;
    double epsilon = 0.05;
    std::uint64_t horizon = 1000000, seed = 0;
  } st;
  st.schedulefmt = default_schedule;
  st.seed = env_seed;
  stop_cmd->add_option("--p_a", st.params.p_a, "arm A payoff probability");
  stop_cmd->add_option("--p_b", st.params.p_b, "arm B payoff probability");
  stop_cmd->add_option("--x0", st.params.x0, "initial probability of playing A");
  stop_cmd->add_option("--schedule", st.schedulefmt, "step schedule as JSON");
  stop_cmd->add_option("--epsilon", st.epsilon, "requested error level");
  stop_cmd->add_option("--horizon", st.horizon, "give up after this many steps");
  stop_cmd->add_option("--seed", st.seed, "path seed");
  stop_cmd->add_option("--out", st.out, "output file (default stdout)");
  stop_cmd->add_option("--config", st.config, "JSON config supplying unset flags");
  stop_cmd->callback([&] {
    apply_config(*stop_cmd, st.config,
                 {{"p_a", set_double(&st.params.p_a)},
                  {"p_b", set_double(&st.params.p_b)},
                  {"x0", set_double(&st.params.x0)},
                  {"schedule", set_schedule(&st.schedulefmt)},
                  {"epsilon", set_double(&st.epsilon)},
                  {"horizon", set_u64(&st.horizon)},
                  {"seed", set_u64(&st.seed)},
                  {"out", set_string(&st.out)}});
    const StepSchedule schedule = StepSchedule::from_json(st.schedulefmt);
    const MonitorResult res =
        monitor(st.params, schedule, st.epsilon, st.horizon, st.seed);
    write_output(st.out, monitor_result_json(res, st.params, st.epsilon));
  });

  // classify: fallibility of a schedule against a given p_b.
  auto* classify_cmd = app.add_subcommand("classify", "schedule fallibility");
  struct {
    std::string schedulefmt, config;
    double p_b = 0.5;
  } cl;
  cl.schedulefmt = default_schedule;
  classify_cmd->add_option("--schedule", cl.schedulefmt, "step schedule as JSON");
  classify_cmd->add_option("--p_b", cl.p_b, "inferior arm payoff probability");
  classify_cmd->add_option("--config", cl.config, "JSON config supplying unset flags");
  classify_cmd->callback([&] {
    apply_config(*classify_cmd, cl.config,
                 {{"schedule", set_schedule(&cl.schedulefmt)},
                  {"p_b", set_double(&cl.p_b)}});
    const StepSchedule schedule = StepSchedule::from_json(cl.schedulefmt);
    std::printf("%s\n", to_string(classify_schedule(schedule, cl.p_b)));
  });

  // accept: the verification suite, one line per criterion.
  auto* accept_cmd = app.add_subcommand("accept", "run the verification suite");
  struct {
    std::string suite = "full", config;
    int criterion = 0;
    std::uint64_t workers = 1, seed = kAcceptanceSeed;
  } ac;
  accept_cmd->add_option("--suite", ac.suite, "full or quick")
      ->check(CLI::IsMember({"full", "quick"}));
  accept_cmd->add_option("--criterion", ac.criterion, "run a single criterion (1..11)")
      ->check(CLI::Range(0, kNumCriteria));
  accept_cmd->add_option("--workers", ac.workers, "worker threads");
  accept_cmd->add_option("--seed", ac.seed, "suite master seed");
  accept_cmd->add_option("--config", ac.config, "JSON config supplying unset flags");
  accept_cmd->callback([&] {
    apply_config(*accept_cmd, ac.config,
                 {{"suite", set_string(&ac.suite)},
                  {"criterion",
                   [&ac](const nlohmann::json& j) { ac.criterion = j.get<int>(); }},
                  {"workers", set_u64(&ac.workers)},
                  {"seed", set_u64(&ac.seed)}});
    std::vector<int> indices;
    if (ac.criterion > 0) {
      indices.push_back(ac.criterion);
    } else {
      for (int i = 1; i <= kNumCriteria; ++i) indices.push_back(i);
    }
    int failures = 0;
    for (int i : indices) {
      const CriterionResult r = run_criterion(i, static_cast<int>(ac.workers),
                                              ac.suite == "quick", ac.seed);
      if (!r.pass) ++failures;
      std::printf("%02d %-4s %-32s %s\n", r.index, r.pass ? "PASS" : "FAIL",
                  r.name.c_str(), r.detail.c_str());
      std::fflush(stdout);
    }
    std::printf("%zu/%zu criteria passed%s\n", indices.size() - failures,
                indices.size(), ac.suite == "quick" ? " (quick scale)" : "");
    exit_code = failures;
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return exit_code;
}

}  // namespace lri
