#include "lri/monte_carlo.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "lri/bounds.hpp"
#include "lri/noise.hpp"

namespace lri {
namespace {

// Paths are reduced in fixed blocks of this many, whatever the worker
// count. Counts merge by integer addition and real-valued partials are
// combined in block order, so a batch result is byte-identical across
// worker counts.
constexpr std::uint64_t kBlock = 1024;

std::uint64_t block_count(std::uint64_t n_paths) {
  return (n_paths + kBlock - 1) / kBlock;
}

// fn(block, first, last) over [0, n_paths) split into kBlock chunks.
// Blocks are claimed dynamically; outputs must be written into per-block
// slots so the caller controls reduction order.
template <class Fn>
void for_each_block(std::uint64_t n_paths, int workers, Fn fn) {
  const std::uint64_t n_blocks = block_count(n_paths);
  auto run_block = [&](std::uint64_t b) {
    const std::uint64_t first = b * kBlock;
    const std::uint64_t last = std::min(first + kBlock, n_paths);
    fn(b, first, last);
  };
  if (workers <= 1 || n_blocks <= 1) {
    for (std::uint64_t b = 0; b < n_blocks; ++b) run_block(b);
    return;
  }
  std::atomic<std::uint64_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mu;
  auto worker = [&] {
    for (;;) {
      const std::uint64_t b = next.fetch_add(1, std::memory_order_relaxed);
      if (b >= n_blocks || failed.load(std::memory_order_relaxed)) return;
      try {
        run_block(b);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mu);
        if (!error) error = std::current_exception();
        failed.store(true, std::memory_order_relaxed);
        return;
      }
    }
  };
  const std::uint64_t cap = std::min<std::uint64_t>(
      static_cast<std::uint64_t>(workers), n_blocks);
  std::vector<std::thread> pool;
  pool.reserve(cap);
  for (std::uint64_t t = 0; t < cap; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

ClassStat make_stat(std::uint64_t count, std::uint64_t total, double level) {
  ClassStat s;
  s.count = count;
  s.p_hat = static_cast<double>(count) / static_cast<double>(total);
  s.ci = wilson_interval(count, total, level);
  return s;
}

// Standard error of a sample mean from raw power sums, guarded against
// the tiny negative values cancellation can produce.
double mean_se(double sum, double sum_sq, std::uint64_t m) {
  if (m < 2) return std::numeric_limits<double>::infinity();
  const double n = static_cast<double>(m);
  double var = (sum_sq - sum * sum / n) / (n - 1.0);
  if (var < 0.0) var = 0.0;
  return std::sqrt(var / n);
}

}  // namespace

const char* to_string(PathClass c) {
  switch (c) {
    case PathClass::AtZero: return "at_zero";
    case PathClass::AtOne: return "at_one";
    case PathClass::Interior: return "interior";
    case PathClass::Undecided: return "undecided";
  }
  throw std::logic_error("to_string: bad PathClass");
}

void ClassifierConfig::validate() const {
  if (!(eps_zero > 0.0 && eps_one > 0.0)) {
    throw std::invalid_argument("classifier tolerances must be positive");
  }
  if (!(eps_zero < interior_lo && interior_lo < interior_hi &&
        interior_hi < 1.0 - eps_one)) {
    throw std::invalid_argument(
        "classifier bands must satisfy eps_zero < interior_lo < interior_hi "
        "< 1 - eps_one");
  }
}

PathClass classify(double x_final, bool descent_alive, bool ascent_alive,
                   const ClassifierConfig& config, bool sq_summable) {
  config.validate();
  if (!(x_final >= 0.0 && x_final <= 1.0)) {
    throw std::invalid_argument("classify: x_final outside [0,1]");
  }
  if (x_final <= config.eps_zero) {
    if (!config.require_monotone_tail || descent_alive) return PathClass::AtZero;
    return PathClass::Undecided;
  }
  if (x_final >= 1.0 - config.eps_one) {
    if (!config.require_monotone_tail || ascent_alive) return PathClass::AtOne;
    return PathClass::Undecided;
  }
  if (sq_summable && x_final >= config.interior_lo &&
      x_final <= config.interior_hi) {
    return PathClass::Interior;
  }
  return PathClass::Undecided;
}

PathClass classify(const Trajectory& trajectory, const ClassifierConfig& config,
                   const StepSchedule& schedule) {
  const auto sq = schedule.sq_summable();
  return classify(trajectory.x_final, trajectory.descent_alive,
                  trajectory.ascent_alive, config, sq.value_or(false));
}

ClassCounts merge(const ClassCounts& a, const ClassCounts& b) {
  ClassCounts out;
  out.at_zero = a.at_zero + b.at_zero;
  out.at_one = a.at_one + b.at_one;
  out.interior = a.interior + b.interior;
  out.undecided = a.undecided + b.undecided;
  return out;
}

McEstimate run_batch(const BanditParams& params, const StepSchedule& schedule,
                     std::uint64_t n_steps, std::uint64_t n_paths,
                     std::uint64_t master_seed, const ClassifierConfig& config,
                     int workers, double ci_level,
                     std::vector<FinalState>* finals) {
  params.validate();
  config.validate();
  if (n_paths == 0) throw std::invalid_argument("run_batch: n_paths must be positive");
  const bool sq_summable = schedule.sq_summable().value_or(false);
  const std::vector<double> gammas = schedule.gamma_table(n_steps);
  if (finals != nullptr) finals->assign(n_paths, FinalState{});

  std::vector<ClassCounts> partial(block_count(n_paths));
  for_each_block(n_paths, workers,
                 [&](std::uint64_t b, std::uint64_t first, std::uint64_t last) {
                   ClassCounts local;
                   for (std::uint64_t i = first; i < last; ++i) {
                     const FinalState fin = simulate_final(
                         params, gammas.data(), n_steps,
                         derive_stream(master_seed, i));
                     if (finals != nullptr) (*finals)[i] = fin;
                     switch (classify(fin.x, fin.descent_alive, fin.ascent_alive,
                                      config, sq_summable)) {
                       case PathClass::AtZero: ++local.at_zero; break;
                       case PathClass::AtOne: ++local.at_one; break;
                       case PathClass::Interior: ++local.interior; break;
                       case PathClass::Undecided: ++local.undecided; break;
                     }
                   }
                   partial[b] = local;
                 });

  McEstimate est;
  est.params = params;
  est.schedule_name = schedule.name();
  est.n_steps = n_steps;
  est.n_paths = n_paths;
  est.master_seed = master_seed;
  est.ci_level = ci_level;
  for (const ClassCounts& c : partial) est.counts = merge(est.counts, c);
  est.at_zero = make_stat(est.counts.at_zero, n_paths, ci_level);
  est.at_one = make_stat(est.counts.at_one, n_paths, ci_level);
  est.interior = make_stat(est.counts.interior, n_paths, ci_level);
  est.undecided = make_stat(est.counts.undecided, n_paths, ci_level);
  return est;
}

InteriorMassEstimate estimate_interior_mass(const BanditParams& params,
                                            const StepSchedule& schedule,
                                            std::uint64_t n_steps,
                                            std::uint64_t n_paths,
                                            std::uint64_t master_seed,
                                            int workers) {
  params.validate();
  if (params.p_a != params.p_b) {
    throw std::invalid_argument(
        "estimate_interior_mass: exact comparison needs p_a == p_b");
  }
  if (n_paths == 0) {
    throw std::invalid_argument("estimate_interior_mass: n_paths must be positive");
  }
  const std::vector<double> gammas = schedule.gamma_table(n_steps);

  struct BlockSums {
    double y = 0.0;
    double y_sq = 0.0;
  };
  std::vector<BlockSums> partial(block_count(n_paths));
  for_each_block(n_paths, workers,
                 [&](std::uint64_t b, std::uint64_t first, std::uint64_t last) {
                   KahanSum y, y_sq;
                   for (std::uint64_t i = first; i < last; ++i) {
                     const FinalState fin = simulate_final(
                         params, gammas.data(), n_steps,
                         derive_stream(master_seed, i));
                     const double m = fin.x * (1.0 - fin.x);
                     y.add(m);
                     y_sq.add(m * m);
                   }
                   partial[b] = BlockSums{y.value(), y_sq.value()};
                 });

  KahanSum sum, sum_sq;
  for (const BlockSums& s : partial) {
    sum.add(s.y);
    sum_sq.add(s.y_sq);
  }

  InteriorMassEstimate est;
  est.n_steps = n_steps;
  est.n_paths = n_paths;
  est.mean = sum.value() / static_cast<double>(n_paths);
  est.se = mean_se(sum.value(), sum_sq.value(), n_paths);
  est.formula = interior_mass_formula(params.x0, params.p_a, schedule, n_steps);
  return est;
}

MomentEstimate estimate_moments(const BanditParams& params,
                                const StepSchedule& schedule,
                                std::uint64_t n_steps, std::uint64_t n_paths,
                                std::uint64_t master_seed, std::uint64_t m_max,
                                int workers) {
  params.validate();
  if (m_max == 0 || m_max > 8) {
    throw std::invalid_argument("estimate_moments: m_max must lie in 1..8");
  }
  if (n_paths == 0) {
    throw std::invalid_argument("estimate_moments: n_paths must be positive");
  }
  const std::vector<double> gammas = schedule.gamma_table(n_steps);

  // Power sums for exponents 1..2*m_max; moment m needs exponents m and
  // 2m for its standard error.
  const std::size_t n_pows = static_cast<std::size_t>(2 * m_max);
  using BlockSums = std::array<double, 16>;
  std::vector<BlockSums> partial(block_count(n_paths));
  for_each_block(n_paths, workers,
                 [&](std::uint64_t b, std::uint64_t first, std::uint64_t last) {
                   std::array<KahanSum, 16> acc;
                   for (std::uint64_t i = first; i < last; ++i) {
                     const FinalState fin = simulate_final(
                         params, gammas.data(), n_steps,
                         derive_stream(master_seed, i));
                     double pw = 1.0;
                     for (std::size_t j = 0; j < n_pows; ++j) {
                       pw *= fin.x;
                       acc[j].add(pw);
                     }
                   }
                   BlockSums out{};
                   for (std::size_t j = 0; j < n_pows; ++j) out[j] = acc[j].value();
                   partial[b] = out;
                 });

  std::array<KahanSum, 16> total;
  for (const BlockSums& s : partial) {
    for (std::size_t j = 0; j < n_pows; ++j) total[j].add(s[j]);
  }

  MomentEstimate est;
  est.n_steps = n_steps;
  est.n_paths = n_paths;
  est.mean.resize(m_max);
  est.se.resize(m_max);
  for (std::uint64_t m = 1; m <= m_max; ++m) {
    const double s1 = total[m - 1].value();
    const double s2 = total[2 * m - 1].value();
    est.mean[m - 1] = s1 / static_cast<double>(n_paths);
    est.se[m - 1] = mean_se(s1, s2, n_paths);
  }
  return est;
}

}  // namespace lri
