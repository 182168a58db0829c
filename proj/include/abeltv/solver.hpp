#pragma once

#include <chrono>
#include <cmath>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Cholesky>

#include "abeltv/grid.hpp"
#include "abeltv/operators.hpp"

namespace abeltv {

/// Raised when an iterate stops being finite.
class DivergedError : public std::runtime_error {
 public:
  explicit DivergedError(int iteration)
      : std::runtime_error("solve_tv: non-finite iterate at iteration " +
                           std::to_string(iteration)),
        iteration_(iteration) {}
  int iteration() const { return iteration_; }

 private:
  int iteration_;
};

/// Parameters of the primal-dual iteration, in the units of the h-scaled
/// operators (gradient carries 1/h, norms carry h^2).
struct SolverParams {
  double lambda = 1.0;
  double tau = 0.1;
  double gamma = 0.1;
  int max_iter = 1000;
  int record_every = 100;

  /// Maps parameters quoted for unit-spacing differences (the usual
  /// convention for published lambda/tau/gamma tables) onto the h-scaled
  /// operators. The iterates are identical: tau*h*grad_h = tau*D and
  /// lambda*tau is preserved.
  static SolverParams from_unit_spacing(double lambda, double tau, double gamma, double h,
                                        int max_iter, int record_every = 100) {
    return {lambda / h, tau * h, gamma * h, max_iter, record_every};
  }

  void validate() const {
    if (!(lambda > 0.0 && tau > 0.0 && gamma > 0.0))
      throw std::invalid_argument("SolverParams: lambda, tau and gamma must be positive");
    if (max_iter < 1 || record_every < 1)
      throw std::invalid_argument("SolverParams: max_iter and record_every must be >= 1");
  }
};

struct EnergySample {
  int iteration;
  double energy;
};

struct SolveResult {
  RadialField u_star;
  std::vector<EnergySample> energy_trace;
  double final_energy = 0.0;
  int iterations_run = 0;
  std::chrono::duration<double> wall_time{};
};

namespace detail {
inline void require_same_shape(const Matrix& a, const Matrix& b, const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument(std::string(what) + ": field shapes differ");
}
}  // namespace detail

/// h^2 * sum |grad_h u| + (lambda/2) * h^2 * sum (Au - f)^2
inline double energy(const RadialField& u, const AbelMatrix& a, const ProjectionField& f,
                     double lambda) {
  detail::require_rows(a, u.values, "energy");
  detail::require_same_shape(u.values, f.values, "energy");
  const double h = u.grid.h;
  const DualField g = gradient(u.values, h);
  const double tv = (g.radial.array().square() + g.axial.array().square()).sqrt().sum();
  const Matrix r = a.entries.triangularView<Eigen::Upper>() * u.values - f.values;
  return h * h * (tv + 0.5 * lambda * r.squaredNorm());
}

/// Solver for (I + tau*lambda*A^T A) x = b, factored once.
class PrimalStep {
 public:
  PrimalStep(const AbelMatrix& a, double tau_lambda)
      : system_(Matrix::Identity(a.n, a.n) +
                tau_lambda * a.entries.transpose() * a.entries),
        llt_(system_) {
    if (llt_.info() != Eigen::Success)
      throw std::runtime_error("PrimalStep: Cholesky factorization failed");
  }

  Matrix solve(const Matrix& rhs) const { return llt_.solve(rhs); }
  const Matrix& system() const { return system_; }

 private:
  Matrix system_;
  Eigen::LLT<Matrix> llt_;
};

/// Per-cell isotropic projection onto the unit ball.
inline void project_unit_ball(Matrix& p1, Matrix& p2) {
  const Eigen::ArrayXXd scale =
      (p1.array().square() + p2.array().square()).sqrt().max(1.0);
  p1.array() /= scale;
  p2.array() /= scale;
}

/// State after iteration `n`, handed to an optional observer.
struct IterationView {
  int n;
  const Matrix& u;
  const Matrix& v_radial;
  const Matrix& v_axial;
};

using IterationObserver = std::function<void(const IterationView&)>;

/// Primal-dual iteration for min_u |grad_h u|_1 + (lambda/2)|Au - f|^2.
inline SolveResult solve_tv(const AbelMatrix& a, const ProjectionField& f, const SolverParams& p,
                            const std::optional<RadialField>& u_init = std::nullopt,
                            const IterationObserver& observe = {}) {
  p.validate();
  detail::require_rows(a, f.values, "solve_tv");
  if (u_init) detail::require_same_shape(u_init->values, f.values, "solve_tv");

  const auto start = std::chrono::steady_clock::now();
  const GridRZ& g = f.grid;
  const double h = g.h;

  RadialField u = u_init ? *u_init : RadialField(g);
  Matrix w = u.values;
  Matrix v1 = Matrix::Zero(g.n_r, g.n_z), v2 = Matrix::Zero(g.n_r, g.n_z);

  const PrimalStep step(a, p.tau * p.lambda);
  Matrix data_term = a.entries.transpose().triangularView<Eigen::Lower>() * f.values;
  data_term *= p.tau * p.lambda;

  SolveResult res;
  res.energy_trace.push_back({0, energy(u, a, f, p.lambda)});

  for (int n = 1; n <= p.max_iter; ++n) {
    DualField grad = gradient(w, h);
    v1 += p.gamma * grad.radial;
    v2 += p.gamma * grad.axial;
    project_unit_ball(v1, v2);

    const Matrix q = u.values + p.tau * divergence(v1, v2, h);
    Matrix next = step.solve(q + data_term);
    if (!next.allFinite()) throw DivergedError(n);

    w = 2.0 * next - u.values;
    u.values = std::move(next);
    if (observe) observe({n, u.values, v1, v2});

    if (n % p.record_every == 0 || n == p.max_iter)
      res.energy_trace.push_back({n, energy(u, a, f, p.lambda)});
  }

  res.final_energy = res.energy_trace.back().energy;
  res.iterations_run = p.max_iter;
  res.u_star = std::move(u);
  res.wall_time = std::chrono::steady_clock::now() - start;
  return res;
}

/// Unregularized inversion: back-substitution on A u = f, column by column.
inline RadialField solve_onion_peeling(const AbelMatrix& a, const ProjectionField& f) {
  detail::require_rows(a, f.values, "solve_onion_peeling");
  const int n = a.n;
  Matrix u(n, f.values.cols());
  for (Eigen::Index k = 0; k < f.values.cols(); ++k) {
    for (int i = n - 1; i >= 0; --i) {
      double s = f.values(i, k);
      for (int j = i + 1; j < n; ++j) s -= a.entries(i, j) * u(j, k);
      u(i, k) = s / a.entries(i, i);
    }
  }
  return RadialField(f.grid, std::move(u));
}

}  // namespace abeltv
