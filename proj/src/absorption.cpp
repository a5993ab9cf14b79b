#include "lri/absorption.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>

#include "lri/stats.hpp"

namespace lri {
namespace {

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

void require_transition_params(double gamma, double p_a, double p_b) {
  require(gamma > 0.0 && gamma < 1.0, "gamma must lie in (0,1)");
  require(p_a >= 0.0 && p_a <= 1.0, "p_a must lie in [0,1]");
  require(p_b >= 0.0 && p_b <= 1.0, "p_b must lie in [0,1]");
}

// Transition applied on a uniform grid, with the two displaced argument
// positions resolved to interpolation indices once. Both the absorption
// solver and the Neumann sum go through this exact kernel, which makes
// their discrete outputs satisfy u = id + pi gamma sum_k P^k h as an
// identity of the iteration rather than an approximation claim.
class UniformKernel {
 public:
  UniformKernel(double gamma, double p_a, double p_b, std::size_t n)
      : n_(n) {
    require(n >= 3, "grid needs at least 3 points");
    require_transition_params(gamma, p_a, p_b);
    const double scale = static_cast<double>(n - 1);
    up_idx_.resize(n);
    dn_idx_.resize(n);
    up_w_.resize(n);
    dn_w_.resize(n);
    c_up_.resize(n);
    c_dn_.resize(n);
    c_stay_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double x = static_cast<double>(i) / scale;
      c_up_[i] = p_a * x;
      c_dn_[i] = p_b * (1.0 - x);
      c_stay_[i] = 1.0 - c_up_[i] - c_dn_[i];
      locate(x + gamma * (1.0 - x), scale, &up_idx_[i], &up_w_[i]);
      locate(x * (1.0 - gamma), scale, &dn_idx_[i], &dn_w_[i]);
    }
  }

  std::size_t size() const { return n_; }

  double x_at(std::size_t i) const {
    return static_cast<double>(i) / static_cast<double>(n_ - 1);
  }

  void apply(const double* f, double* out) const {
    for (std::size_t i = 0; i < n_; ++i) {
      const double fu = lerp(f, up_idx_[i], up_w_[i]);
      const double fd = lerp(f, dn_idx_[i], dn_w_[i]);
      out[i] = c_up_[i] * fu + c_dn_[i] * fd + c_stay_[i] * f[i];
    }
  }

 private:
  static double lerp(const double* f, std::uint32_t j, double w) {
    return f[j] + w * (f[j + 1] - f[j]);
  }

  static void locate(double y, double scale, std::uint32_t* idx, double* w) {
    y = std::min(std::max(y, 0.0), 1.0);
    double t = y * scale;
    auto j = static_cast<std::uint32_t>(t);
    if (j >= static_cast<std::uint32_t>(scale)) j = static_cast<std::uint32_t>(scale) - 1;
    *idx = j;
    *w = t - static_cast<double>(j);
  }

  std::size_t n_;
  std::vector<std::uint32_t> up_idx_, dn_idx_;
  std::vector<double> up_w_, dn_w_, c_up_, c_dn_, c_stay_;
};

}  // namespace

GridFunction::GridFunction(std::vector<double> g, std::vector<double> v)
    : grid(std::move(g)), values(std::move(v)) {
  validate();
  detect_uniform();
}

GridFunction GridFunction::uniform(std::size_t n_points) {
  return uniform(n_points, [](double) { return 0.0; });
}

GridFunction GridFunction::uniform(std::size_t n_points,
                                   const std::function<double(double)>& f) {
  if (n_points < 2) throw std::invalid_argument("grid needs at least 2 points");
  std::vector<double> g(n_points), v(n_points);
  const double scale = static_cast<double>(n_points - 1);
  for (std::size_t i = 0; i < n_points; ++i) {
    g[i] = static_cast<double>(i) / scale;
    v[i] = f(g[i]);
  }
  g.front() = 0.0;
  g.back() = 1.0;
  return GridFunction(std::move(g), std::move(v));
}

void GridFunction::validate() const {
  if (grid.size() < 2 || grid.size() != values.size()) {
    throw std::invalid_argument("grid and values must share a size of at least 2");
  }
  if (grid.front() != 0.0 || grid.back() != 1.0) {
    throw std::invalid_argument("grid must span [0,1] exactly");
  }
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] > grid[i - 1])) {
      throw std::invalid_argument("grid must be strictly increasing");
    }
  }
  for (double v : values) {
    if (!std::isfinite(v)) throw std::invalid_argument("grid values must be finite");
  }
}

void GridFunction::detect_uniform() {
  const double scale = static_cast<double>(grid.size() - 1);
  uniform_ = true;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (grid[i] != static_cast<double>(i) / scale) {
      uniform_ = false;
      return;
    }
  }
}

double GridFunction::operator()(double x) const {
  if (!(x >= 0.0 && x <= 1.0)) {
    throw std::invalid_argument("GridFunction: argument outside [0,1]");
  }
  std::size_t j;
  if (uniform_) {
    const double scale = static_cast<double>(grid.size() - 1);
    j = static_cast<std::size_t>(x * scale);
    if (j >= grid.size() - 1) j = grid.size() - 2;
  } else {
    j = static_cast<std::size_t>(
        std::upper_bound(grid.begin(), grid.end(), x) - grid.begin());
    j = (j == 0) ? 0 : j - 1;
    if (j >= grid.size() - 1) j = grid.size() - 2;
  }
  const double t = (x - grid[j]) / (grid[j + 1] - grid[j]);
  return values[j] + t * (values[j + 1] - values[j]);
}

double p_gamma_point(const std::function<double(double)>& f, double x,
                     double gamma, double p_a, double p_b) {
  require_transition_params(gamma, p_a, p_b);
  require(x >= 0.0 && x <= 1.0, "x must lie in [0,1]");
  const double up = p_a * x;
  const double dn = p_b * (1.0 - x);
  return up * f(x + gamma * (1.0 - x)) + dn * f(x * (1.0 - gamma)) +
         (1.0 - up - dn) * f(x);
}

GridFunction p_gamma_apply(const GridFunction& f, double gamma, double p_a,
                           double p_b) {
  f.validate();
  GridFunction out = f;
  auto interp = [&f](double y) { return f(y); };
  for (std::size_t i = 0; i < f.size(); ++i) {
    out.values[i] = p_gamma_point(interp, f.grid[i], gamma, p_a, p_b);
  }
  return out;
}

double q_gamma_point(const std::function<double(double)>& g, double x,
                     double gamma, double p_a, double p_b) {
  require_transition_params(gamma, p_a, p_b);
  require(x >= 0.0 && x <= 1.0, "x must lie in [0,1]");
  const double y_up = x + gamma * (1.0 - x);
  const double y_dn = x * (1.0 - gamma);
  return (1.0 - gamma) * (p_a * y_up * g(y_up) + p_b * (1.0 - y_dn) * g(y_dn)) +
         (1.0 - p_a * x - p_b * (1.0 - x)) * g(x);
}

GridFunction q_gamma_apply(const GridFunction& g, double gamma, double p_a,
                           double p_b) {
  g.validate();
  GridFunction out = g;
  auto interp = [&g](double y) { return g(y); };
  for (std::size_t i = 0; i < g.size(); ++i) {
    out.values[i] = q_gamma_point(interp, g.grid[i], gamma, p_a, p_b);
  }
  return out;
}

PsiResult psi_neumann(double gamma, double p_a, double p_b, std::size_t grid_n,
                      std::uint64_t max_depth, double tol) {
  require(p_a > p_b, "psi_neumann needs p_a > p_b");
  require(tol > 0.0, "tol must be positive");
  require(max_depth > 0, "max_depth must be positive");
  const UniformKernel kernel(gamma, p_a, p_b, grid_n);
  const std::size_t n = kernel.size();

  std::vector<double> term(n), next(n);
  std::vector<KahanSum> acc(n);
  double sup = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = kernel.x_at(i);
    term[i] = x * (1.0 - x);
    sup = std::max(sup, term[i]);
  }

  PsiResult res;
  while (res.terms < max_depth) {
    for (std::size_t i = 0; i < n; ++i) acc[i].add(term[i]);
    ++res.terms;
    if (sup <= tol) {
      res.converged = true;
      break;
    }
    kernel.apply(term.data(), next.data());
    term.swap(next);
    sup = 0.0;
    for (std::size_t i = 0; i < n; ++i) sup = std::max(sup, term[i]);
  }
  res.last_term_sup = sup;

  std::vector<double> psi(n);
  for (std::size_t i = 0; i < n; ++i) psi[i] = acc[i].value();
  psi.front() = 0.0;
  psi.back() = 0.0;
  std::vector<double> grid(n);
  for (std::size_t i = 0; i < n; ++i) grid[i] = kernel.x_at(i);
  res.psi = GridFunction(std::move(grid), std::move(psi));
  return res;
}

AbsorptionSolution absorption_solve(double gamma, double p_a, double p_b,
                                    std::size_t grid_n, double tol,
                                    std::uint64_t max_iter) {
  require(p_a > p_b, "absorption_solve needs p_a > p_b");
  require(tol > 0.0, "tol must be positive");
  require(max_iter > 0, "max_iter must be positive");
  const UniformKernel kernel(gamma, p_a, p_b, grid_n);
  const std::size_t n = kernel.size();

  std::vector<double> u(n), next(n);
  for (std::size_t i = 0; i < n; ++i) u[i] = kernel.x_at(i);

  AbsorptionSolution sol;
  sol.gamma = gamma;
  sol.p_a = p_a;
  sol.p_b = p_b;

  double residual = std::numeric_limits<double>::infinity();
  while (sol.iterations < max_iter) {
    kernel.apply(u.data(), next.data());
    next.front() = 0.0;
    next.back() = 1.0;
    residual = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      residual = std::max(residual, std::fabs(next[i] - u[i]));
    }
    u.swap(next);
    ++sol.iterations;
    if (residual <= tol) break;
  }
  if (residual > tol) {
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "absorption_solve: residual %.3e after %llu iterations (tol %.3e)",
                  residual, static_cast<unsigned long long>(sol.iterations), tol);
    throw MaxIterExceeded(buf);
  }
  sol.residual = residual;

  for (std::size_t i = 1; i < n; ++i) {
    if (u[i] < u[i - 1] - 10.0 * tol) {
      char buf[160];
      std::snprintf(buf, sizeof buf,
                    "absorption_solve: u decreases by %.3e near x = %.6f",
                    u[i - 1] - u[i], kernel.x_at(i));
      throw MonotonicityViolation(buf);
    }
  }

  std::vector<double> grid(n);
  for (std::size_t i = 0; i < n; ++i) grid[i] = kernel.x_at(i);
  sol.u = GridFunction(std::move(grid), std::move(u));
  return sol;
}

}  // namespace lri
