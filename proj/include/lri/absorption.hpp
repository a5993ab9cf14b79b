#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

namespace lri {

// Piecewise-linear function on a strictly increasing grid spanning [0,1].
struct GridFunction {
  std::vector<double> grid;
  std::vector<double> values;

  GridFunction() = default;
  GridFunction(std::vector<double> g, std::vector<double> v);

  // Uniform n-point grid sampling f; f defaults to zero.
  static GridFunction uniform(std::size_t n_points);
  static GridFunction uniform(std::size_t n_points,
                              const std::function<double(double)>& f);

  double operator()(double x) const;
  std::size_t size() const { return grid.size(); }
  void validate() const;

 private:
  bool uniform_ = false;  // set when spacing is exactly i / (n - 1)
  void detect_uniform();
};

// One transition of the play probability under constant step gamma:
//   (P f)(x) = p_a x f(x + gamma (1 - x)) + p_b (1 - x) f(x (1 - gamma))
//              + (1 - p_a x - p_b (1 - x)) f(x).
// The point form evaluates f exactly; the grid form evaluates the same
// formula at every grid node with f replaced by its interpolant.
double p_gamma_point(const std::function<double(double)>& f, double x,
                     double gamma, double p_a, double p_b);
GridFunction p_gamma_apply(const GridFunction& f, double gamma, double p_a,
                           double p_b);

// Conjugate transition satisfying P(g h) = h Q(g) with h(x) = x (1 - x):
//   (Q g)(x) = (1 - gamma) [p_a (x + gamma (1 - x)) g(x + gamma (1 - x))
//              + p_b (1 - x (1 - gamma)) g(x (1 - gamma))]
//              + (1 - p_a x - p_b (1 - x)) g(x).
double q_gamma_point(const std::function<double(double)>& g, double x,
                     double gamma, double p_a, double p_b);
GridFunction q_gamma_apply(const GridFunction& g, double gamma, double p_a,
                           double p_b);

// Truncated Neumann sum psi(x) = sum_{k >= 0} (P^k h)(x) on a uniform
// grid. Terms are nonnegative with nonincreasing sup norm; the last
// term's sup norm is the truncation certificate. converged reports
// whether it fell below tol within max_depth.
struct PsiResult {
  GridFunction psi;
  std::uint64_t terms = 0;
  double last_term_sup = 0.0;
  bool converged = false;
};

PsiResult psi_neumann(double gamma, double p_a, double p_b,
                      std::size_t grid_n = 4097, std::uint64_t max_depth = 1000000,
                      double tol = 1e-12);

struct MaxIterExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct MonotonicityViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Fixed point of u = P u with u(0) = 0, u(1) = 1: the probability of
// absorption at 1 as a function of the start point, computed without
// Monte Carlo. Iterates from u0(x) = x until the sup-norm residual
// falls to tol. Monotonicity of the result is checked afterwards, not
// enforced: a decrease beyond 10 tol throws.
struct AbsorptionSolution {
  double gamma = 0.0;
  double p_a = 0.0;
  double p_b = 0.0;
  GridFunction u;
  std::uint64_t iterations = 0;
  double residual = 0.0;
};

AbsorptionSolution absorption_solve(double gamma, double p_a, double p_b,
                                    std::size_t grid_n = 4097,
                                    double tol = 1e-10,
                                    std::uint64_t max_iter = 1000000);

}  // namespace lri
