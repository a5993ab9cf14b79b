#include "lri/schedule.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>
#include <utility>

#include <json.hpp>

#include "lri/json_io.hpp"

namespace lri {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string short_num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

void require(bool cond, const char* msg) {
  if (!cond) throw std::invalid_argument(msg);
}

}  // namespace

StepSchedule StepSchedule::constant(double gamma) {
  require(gamma > 0.0 && gamma < 1.0, "constant schedule: gamma must lie in (0,1)");
  StepSchedule s;
  s.kind_ = ScheduleKind::Constant;
  s.g_ = gamma;
  s.name_ = "constant(" + short_num(gamma) + ")";
  return s;
}

StepSchedule StepSchedule::power(double c, double alpha) {
  require(c > 0.0, "power schedule: C must be positive");
  require(alpha > 0.0 && alpha <= 1.0, "power schedule: alpha must lie in (0,1]");
  StepSchedule s;
  s.kind_ = ScheduleKind::Power;
  s.c_ = c;
  s.alpha_ = alpha;
  s.name_ = "power(" + short_num(c) + "," + short_num(alpha) + ")";
  return s;
}

StepSchedule StepSchedule::ratio(double c, double alpha, double p) {
  require(c > 0.0, "ratio schedule: C must be positive");
  require(alpha > 0.0, "ratio schedule: alpha must be positive");
  require(p > 0.0 && p <= 1.0, "ratio schedule: p must lie in (0,1]");
  StepSchedule s;
  s.kind_ = ScheduleKind::Ratio;
  s.c_ = c;
  s.alpha_ = alpha;
  s.p_ = p;
  s.name_ = "ratio(" + short_num(c) + "," + short_num(alpha) + "," + short_num(p) + ")";
  return s;
}

StepSchedule StepSchedule::custom(std::string name,
                                  std::function<double(std::uint64_t)> gamma_fn,
                                  TailBoundFn tail_sq_bound) {
  require(static_cast<bool>(gamma_fn), "custom schedule: generator required");
  StepSchedule s;
  s.kind_ = ScheduleKind::Custom;
  s.name_ = std::move(name);
  s.fn_ = std::make_shared<const std::function<double(std::uint64_t)>>(
      std::move(gamma_fn));
  if (tail_sq_bound) {
    s.tail_fn_ = std::make_shared<const TailBoundFn>(std::move(tail_sq_bound));
  }
  return s;
}

double StepSchedule::ratio_delta(std::uint64_t n) const {
  if (kind_ != ScheduleKind::Ratio) {
    throw std::logic_error("ratio_delta: not a ratio schedule");
  }
  if (n == 0) return 1.0;
  if (n == 1) return c_;
  const double nn = static_cast<double>(n);
  return c_ * std::pow(nn, 1.0 / p_ - 1.0) * std::pow(std::log(nn), alpha_);
}

double StepSchedule::gamma(std::uint64_t n) const {
  require(n >= 1, "gamma: step index starts at 1");
  switch (kind_) {
    case ScheduleKind::Constant:
      return g_;
    case ScheduleKind::Power:
      return std::pow(c_ / (static_cast<double>(n) + c_), alpha_);
    case ScheduleKind::Ratio: {
      KahanSum s;
      s.add(1.0);
      for (std::uint64_t k = 1; k <= n; ++k) s.add(ratio_delta(k));
      return ratio_delta(n) / s.value();
    }
    case ScheduleKind::Custom: {
      const double g = (*fn_)(n);
      if (!(g > 0.0 && g < 1.0)) {
        throw std::domain_error("custom schedule: generator left (0,1)");
      }
      return g;
    }
  }
  throw std::logic_error("gamma: unreachable");
}

std::vector<double> StepSchedule::gamma_table(std::uint64_t n_max) const {
  std::vector<double> table(n_max + 1, 0.0);
  ScheduleScan scan(*this);
  for (std::uint64_t n = 1; n <= n_max; ++n) {
    scan.advance();
    table[n] = scan.gamma();
  }
  return table;
}

std::optional<bool> StepSchedule::sq_summable() const {
  switch (kind_) {
    case ScheduleKind::Constant:
      return false;
    case ScheduleKind::Power:
      return alpha_ > 0.5;
    case ScheduleKind::Ratio:
      // gamma_n ~ 1/(p n), so the squares always sum.
      return true;
    case ScheduleKind::Custom:
      if (tail_fn_) return true;
      return std::nullopt;
  }
  return std::nullopt;
}

double StepSchedule::constant_gamma() const {
  if (kind_ != ScheduleKind::Constant) throw std::logic_error("not a constant schedule");
  return g_;
}
double StepSchedule::power_c() const {
  if (kind_ != ScheduleKind::Power) throw std::logic_error("not a power schedule");
  return c_;
}
double StepSchedule::power_alpha() const {
  if (kind_ != ScheduleKind::Power) throw std::logic_error("not a power schedule");
  return alpha_;
}
double StepSchedule::ratio_c() const {
  if (kind_ != ScheduleKind::Ratio) throw std::logic_error("not a ratio schedule");
  return c_;
}
double StepSchedule::ratio_alpha() const {
  if (kind_ != ScheduleKind::Ratio) throw std::logic_error("not a ratio schedule");
  return alpha_;
}
double StepSchedule::ratio_p() const {
  if (kind_ != ScheduleKind::Ratio) throw std::logic_error("not a ratio schedule");
  return p_;
}

std::string StepSchedule::to_json() const {
  JsonWriter w(0);
  w.begin_object();
  switch (kind_) {
    case ScheduleKind::Constant:
      w.kv("kind", "constant").kv("gamma", g_);
      break;
    case ScheduleKind::Power:
      w.kv("kind", "power").kv("c", c_).kv("alpha", alpha_);
      break;
    case ScheduleKind::Ratio:
      w.kv("kind", "ratio").kv("c", c_).kv("alpha", alpha_).kv("p", p_);
      break;
    case ScheduleKind::Custom:
      throw std::invalid_argument("to_json: custom schedules are not serializable");
  }
  w.end_object();
  return w.str();
}

double StepSchedule::custom_tail(std::uint64_t n) const {
  if (kind_ != ScheduleKind::Custom || !tail_fn_) {
    throw std::logic_error("custom_tail: no tail bound attached");
  }
  return (*tail_fn_)(n);
}

StepSchedule StepSchedule::from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "constant") return constant(j.at("gamma").get<double>());
  if (kind == "power") return power(j.at("c").get<double>(), j.at("alpha").get<double>());
  if (kind == "ratio") {
    return ratio(j.at("c").get<double>(), j.at("alpha").get<double>(),
                 j.at("p").get<double>());
  }
  throw std::invalid_argument("schedule from_json: unknown kind '" + kind + "'");
}

ScheduleScan::ScheduleScan(StepSchedule schedule) : sched_(std::move(schedule)) {
  if (sched_.kind() == ScheduleKind::Ratio) ratio_s_.add(1.0);  // Delta_0
}

void ScheduleScan::advance() {
  ++n_;
  switch (sched_.kind()) {
    case ScheduleKind::Constant:
      gamma_ = sched_.constant_gamma();
      break;
    case ScheduleKind::Power: {
      const double c = sched_.power_c();
      gamma_ = std::pow(c / (static_cast<double>(n_) + c), sched_.power_alpha());
      break;
    }
    case ScheduleKind::Ratio: {
      const double d = sched_.ratio_delta(n_);
      ratio_s_.add(d);
      gamma_ = d / ratio_s_.value();
      break;
    }
    case ScheduleKind::Custom:
      gamma_ = sched_.gamma(n_);
      break;
  }
  big_gamma_.add(gamma_);
  s_prev_ = s_;
  s_ = s_ / (1.0 - gamma_);  // may saturate to +inf; accessors police this
}

double ScheduleScan::s() const {
  if (!std::isfinite(s_)) {
    throw std::overflow_error("ScheduleScan: S_n exceeded double range");
  }
  return s_;
}

double ScheduleScan::delta() const {
  if (!std::isfinite(s_)) {
    throw std::overflow_error("ScheduleScan: S_n exceeded double range");
  }
  return n_ == 0 ? 1.0 : s_ - s_prev_;
}

double big_gamma(const StepSchedule& schedule, std::uint64_t n) {
  ScheduleScan scan(schedule);
  for (std::uint64_t k = 0; k < n; ++k) scan.advance();
  return scan.big_gamma();
}

DeltaS delta_s(const StepSchedule& schedule, std::uint64_t n) {
  ScheduleScan scan(schedule);
  for (std::uint64_t k = 0; k < n; ++k) scan.advance();
  return {scan.delta(), scan.s()};
}

Classification classify_power(double c, double alpha, double p_b) {
  if (!(c > 0.0) || !(alpha > 0.0 && alpha <= 1.0)) {
    throw std::invalid_argument("classify_power: invalid family parameters");
  }
  if (!(p_b > 0.0 && p_b <= 1.0)) {
    throw std::invalid_argument("classify_power: p_b must lie in (0,1]");
  }
  if (alpha < 1.0) return Classification::Fallible;
  return c <= 1.0 / p_b ? Classification::Infallible : Classification::Fallible;
}

Classification classify_ratio(double alpha, double p_b) {
  if (!(alpha > 0.0)) {
    throw std::invalid_argument("classify_ratio: alpha must be positive");
  }
  if (!(p_b > 0.0 && p_b <= 1.0)) {
    throw std::invalid_argument("classify_ratio: p_b must lie in (0,1]");
  }
  return alpha <= 1.0 / p_b ? Classification::Infallible : Classification::Fallible;
}

Classification classify_schedule(const StepSchedule& schedule, double p_b) {
  if (!(p_b > 0.0 && p_b <= 1.0)) {
    throw std::invalid_argument("classify_schedule: p_b must lie in (0,1]");
  }
  switch (schedule.kind()) {
    case ScheduleKind::Constant:
      return Classification::Fallible;
    case ScheduleKind::Power:
      return classify_power(schedule.power_c(), schedule.power_alpha(), p_b);
    case ScheduleKind::Ratio:
      // The dichotomy for this family is only settled when its p
      // parameter matches the inferior arm's payoff probability.
      if (schedule.ratio_p() == p_b) return classify_ratio(schedule.ratio_alpha(), p_b);
      return Classification::Unknown;
    case ScheduleKind::Custom:
      return Classification::Unknown;
  }
  return Classification::Unknown;
}

double tail_sq_sum_ub(const StepSchedule& schedule, std::uint64_t n) {
  if (n < 1) throw std::invalid_argument("tail_sq_sum_ub: n starts at 1");
  switch (schedule.kind()) {
    case ScheduleKind::Constant:
      return kInf;
    case ScheduleKind::Power: {
      const double a = schedule.power_alpha();
      if (a <= 0.5) return kInf;
      const double c = schedule.power_c();
      // Integral comparison for the decreasing summand (C/(k+C))^(2a):
      // sum_{k>=n} gamma_{k+1}^2 <= C^(2a) / ((2a-1) (n+C-1)^(2a-1)).
      return std::pow(c, 2.0 * a) /
             ((2.0 * a - 1.0) * std::pow(static_cast<double>(n) + c - 1.0, 2.0 * a - 1.0));
    }
    case ScheduleKind::Ratio: {
      // Explicit prefix to K, then a certified envelope. For j >= K,
      //   S_j >= C integral_1^j t^(1/p-1) (log t)^alpha dt
      //       >= C p (log(j)/2)^alpha (j^(1/p) - j^(1/(2p))),
      // hence gamma_j <= c(K)/j with
      //   c(K) = (2^alpha / p) / (1 - K^(-1/(2p))),
      // and sum_{j>K} gamma_j^2 <= c(K)^2 / K.
      const std::uint64_t K = std::max<std::uint64_t>(n, 1 << 16);
      const double p = schedule.ratio_p();
      const double alpha = schedule.ratio_alpha();
      KahanSum s;
      s.add(1.0);
      KahanSum acc;
      for (std::uint64_t j = 1; j <= K; ++j) {
        const double d = schedule.ratio_delta(j);
        s.add(d);
        if (j >= n + 1) {
          const double g = d / s.value();
          acc.add(g * g);
        }
      }
      const double ck = (std::pow(2.0, alpha) / p) /
                        (1.0 - std::pow(static_cast<double>(K), -0.5 / p));
      return acc.value() + ck * ck / static_cast<double>(K);
    }
    case ScheduleKind::Custom: {
      if (!schedule.has_custom_tail()) return kInf;
      const double t = schedule.custom_tail(n);
      if (!(t >= 0.0)) {
        throw std::domain_error("tail_sq_sum_ub: custom tail bound must be nonnegative");
      }
      return t;
    }
  }
  throw std::logic_error("tail_sq_sum_ub: unreachable");
}

FallibilityDiagnostics diagnostics_fallibility(const StepSchedule& schedule,
                                               double p_b, std::uint64_t n_max) {
  if (!(p_b > 0.0 && p_b <= 1.0)) {
    throw std::invalid_argument("diagnostics_fallibility: p_b must lie in (0,1]");
  }
  if (n_max < 10) {
    throw std::invalid_argument("diagnostics_fallibility: n_max must be at least 10");
  }
  FallibilityDiagnostics d;
  d.mass_partial_sums.resize(n_max + 1);
  d.ratio_sup.resize(n_max + 1);
  d.ratio_sup[0] = 0.0;

  ScheduleScan scan(schedule);
  KahanSum partial;
  double prod = 1.0;  // empty product, the m = 0 term
  partial.add(prod);
  d.mass_partial_sums[0] = partial.value();
  double sup = 0.0;
  for (std::uint64_t m = 1; m <= n_max; ++m) {
    scan.advance();
    const double g = scan.gamma();
    prod *= 1.0 - p_b * g;
    partial.add(prod);
    d.mass_partial_sums[m] = partial.value();
    const double big = scan.big_gamma();
    const double ratio = g * std::exp(p_b * big) / big;
    if (ratio > sup) sup = ratio;
    d.ratio_sup[m] = sup;
  }
  return d;
}

}  // namespace lri
