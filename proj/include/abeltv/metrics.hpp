#pragma once

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "abeltv/grid.hpp"
#include "abeltv/operators.hpp"

namespace abeltv {

/// Raised when the C* ratio has a zero denominator.
class DegenerateInstance : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// (h^3 * sum u^2)^{1/2} over the Cartesian grid.
inline double norm_l2_uh(const Array3& u3, double h) {
  const double s = std::transform_reduce(u3.data.begin(), u3.data.end(), 0.0, std::plus<>(),
                                         [](double v) { return v * v; });
  return std::sqrt(h * h * h * s);
}

/// (h^2 * sum u^2)^{1/2} over the cylindrical grid.
inline double norm_l2_vh(const Matrix& u, double h) { return h * u.norm(); }

/// h^2 * sum of per-cell Euclidean magnitudes of grad_h u.
inline double tv_seminorm(const Matrix& u, double h) {
  const DualField g = gradient(u, h);
  return h * h * (g.radial.array().square() + g.axial.array().square()).sqrt().sum();
}

inline double norm_linf(const Matrix& u) { return u.size() ? u.cwiseAbs().maxCoeff() : 0.0; }

struct BoundReport {
  double c = 0.0;
  double M = 0.0;
  double M1 = 0.0;
  double c_star = 0.0;
  double err_l2_uh = 0.0;
  double resid_l2_vh = 0.0;
  double noise_l2_vh = 0.0;  // the ||f - f0|| term that entered M1
};

/// Assembles the report from an already known noise norm ||f - f0||, which
/// may be the realized value or an estimate.
inline BoundReport bound_report(const RadialField& u_star, const RadialField& u0,
                                const ProjectionField& f_star, const ProjectionField& f,
                                double noise_l2, const GridXYZ& g3) {
  if (!(u_star.grid == u0.grid && f_star.grid == f.grid && u0.grid == f.grid))
    throw std::invalid_argument("bound_report: fields live on different grids");
  const double h = u0.grid.h;
  BoundReport rep;
  rep.c = std::max(tv_seminorm(u_star.values, h), tv_seminorm(u0.values, h));
  rep.M = std::max(norm_linf(u_star.values), norm_linf(u0.values));
  rep.resid_l2_vh = norm_l2_vh(f_star.values - f.values, h);
  rep.noise_l2_vh = noise_l2;
  rep.M1 = std::cbrt(rep.resid_l2_vh + noise_l2);
  const RadialField diff(u0.grid, u_star.values - u0.values);
  rep.err_l2_uh = norm_l2_uh(revolve(diff, g3), h);
  const double denom = rep.M1 * std::cbrt(4.0 * rep.c * rep.M);
  if (!(denom > 0.0))
    throw DegenerateInstance("bound_report: C* denominator vanishes (M1 = " +
                             std::to_string(rep.M1) + ", c*M = " +
                             std::to_string(rep.c * rep.M) + ")");
  rep.c_star = rep.err_l2_uh / denom;
  return rep;
}

inline BoundReport bound_report(const RadialField& u_star, const RadialField& u0,
                                const ProjectionField& f_star, const ProjectionField& f,
                                const ProjectionField& f0, const GridXYZ& g3) {
  return bound_report(u_star, u0, f_star, f, norm_l2_vh(f.values - f0.values, f0.grid.h), g3);
}

/// sigma * sqrt(|Omega|) with |Omega| = 2, for when f0 is unknown.
inline double estimated_noise_l2(double sigma) { return sigma * std::sqrt(2.0); }

}  // namespace abeltv
