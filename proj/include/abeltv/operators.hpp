#pragma once

#include <cmath>
#include <stdexcept>

#include "abeltv/grid.hpp"

namespace abeltv {

/// Onion-peeling discretization of the Abel transform. Row i is the chord
/// at x_i = i*h; column j is the annulus [j*h, (j+1)*h]. Upper triangular
/// with a strictly positive diagonal.
struct AbelMatrix {
  int n = 0;
  double h = 0.0;
  Matrix entries;
};

inline AbelMatrix build_abel_matrix(const GridRZ& g) {
  const int n = g.n_r;
  AbelMatrix a{n, g.h, Matrix::Zero(n, n)};
  for (int i = 0; i < n; ++i) {
    const double x2 = g.abscissa(i) * g.abscissa(i);
    // Chord half-length through the inner edge of each annulus; the first
    // annulus seen by row i starts at x_i itself, so its inner term is 0.
    double inner = 0.0;
    for (int j = i; j < n; ++j) {
      const double r = g.cell_upper(j);
      const double outer = std::sqrt(r * r - x2);
      a.entries(i, j) = 2.0 * (outer - inner);
      inner = outer;
    }
  }
  return a;
}

namespace detail {
inline void require_rows(const AbelMatrix& a, const Matrix& m, const char* what) {
  if (m.rows() != a.n)
    throw std::invalid_argument(std::string(what) + ": Abel matrix size " +
                                std::to_string(a.n) + " does not match field with " +
                                std::to_string(m.rows()) + " radial samples");
}
}  // namespace detail

inline ProjectionField apply_abel(const AbelMatrix& a, const RadialField& u) {
  detail::require_rows(a, u.values, "apply_abel");
  Matrix f = a.entries.triangularView<Eigen::Upper>() * u.values;
  return ProjectionField(u.grid, std::move(f));
}

inline RadialField apply_abel_transpose(const AbelMatrix& a, const ProjectionField& f) {
  detail::require_rows(a, f.values, "apply_abel_transpose");
  Matrix u = a.entries.transpose().triangularView<Eigen::Lower>() * f.values;
  return RadialField(f.grid, std::move(u));
}

/// Forward differences divided by h; the last radial row of component 1 and
/// the last axial column of component 2 are zero.
inline DualField gradient(const Matrix& u, double h) {
  const Eigen::Index n = u.rows(), m = u.cols();
  DualField p;
  p.radial = Matrix::Zero(n, m);
  p.axial = Matrix::Zero(n, m);
  if (n > 1) p.radial.topRows(n - 1) = (u.bottomRows(n - 1) - u.topRows(n - 1)) / h;
  if (m > 1) p.axial.leftCols(m - 1) = (u.rightCols(m - 1) - u.leftCols(m - 1)) / h;
  return p;
}

inline DualField gradient(const RadialField& u) {
  DualField p = gradient(u.values, u.grid.h);
  p.grid = u.grid;
  return p;
}

/// Backward-difference divergence, the negative adjoint of gradient().
inline Matrix divergence(const Matrix& p1, const Matrix& p2, double h) {
  if (p1.rows() != p2.rows() || p1.cols() != p2.cols())
    throw std::invalid_argument("divergence: component shapes differ");
  const Eigen::Index n = p1.rows(), m = p1.cols();
  Matrix d(n, m);
  if (n == 1) {
    d.setZero();
  } else {
    d.row(0) = p1.row(0);
    if (n > 2) d.middleRows(1, n - 2) = p1.middleRows(1, n - 2) - p1.topRows(n - 2);
    d.row(n - 1) = -p1.row(n - 2);
  }
  if (m > 1) {
    d.col(0) += p2.col(0);
    if (m > 2) d.middleCols(1, m - 2) += p2.middleCols(1, m - 2) - p2.leftCols(m - 2);
    d.col(m - 1) -= p2.col(m - 2);
  }
  return d / h;
}

inline Matrix divergence(const DualField& p) {
  return divergence(p.radial, p.axial, p.grid.h);
}

}  // namespace abeltv
