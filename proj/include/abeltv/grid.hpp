#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace abeltv {

using Matrix = Eigen::MatrixXd;

/// Cylindrical (r,z) grid. Radial cell j (0-based) covers [j*h, (j+1)*h];
/// measurement abscissa i sits at x_i = i*h, so x_0 = 0. Axial samples
/// cover [-1,1] with the same spacing.
struct GridRZ {
  int n_r = 0;
  int n_z = 0;
  double h = 0.0;

  GridRZ() = default;

  explicit GridRZ(int radial_cells)
      : n_r(radial_cells), n_z(2 * radial_cells + 1), h(1.0 / radial_cells) {
    if (radial_cells < 2)
      throw std::invalid_argument("GridRZ: n_r must be >= 2, got " +
                                  std::to_string(radial_cells));
  }

  double abscissa(int i) const { return i * h; }
  double cell_lower(int j) const { return j * h; }
  double cell_upper(int j) const { return (j + 1) * h; }
  double cell_mid(int j) const { return (j + 0.5) * h; }
  double axial(int k) const { return -1.0 + k * h; }

  friend bool operator==(const GridRZ&, const GridRZ&) = default;
};

/// Cartesian grid of the revolved volume: x_i, y_j = i*h for i in [-n, n],
/// axial samples shared with the companion GridRZ.
struct GridXYZ {
  int n = 0;
  int n_z = 0;
  double h = 0.0;

  int n_xy() const { return 2 * n + 1; }
  double coord(int i) const { return (i - n) * h; }

  friend bool operator==(const GridXYZ&, const GridXYZ&) = default;
};

inline std::pair<GridRZ, GridXYZ> make_grids(int n_r) {
  GridRZ g(n_r);
  GridXYZ g3{g.n_r, g.n_z, g.h};
  return {g, g3};
}

struct RadialTag {};
struct ProjectionTag {};

/// Values on a GridRZ, indexed (radial index, axial index). The tag keeps
/// densities u(r,z) and projections f(x,z) from being mixed up.
template <class Tag>
struct GridField {
  GridRZ grid;
  Matrix values;

  GridField() = default;
  explicit GridField(const GridRZ& g) : grid(g), values(Matrix::Zero(g.n_r, g.n_z)) {}
  GridField(const GridRZ& g, Matrix v) : grid(g), values(std::move(v)) {
    if (values.rows() != g.n_r || values.cols() != g.n_z)
      throw std::invalid_argument("GridField: values shape does not match grid");
  }

  double& operator()(int j, int k) { return values(j, k); }
  double operator()(int j, int k) const { return values(j, k); }

  bool all_finite() const { return values.allFinite(); }
};

using RadialField = GridField<RadialTag>;
using ProjectionField = GridField<ProjectionTag>;

/// Pair of matrices shaped like a RadialField: component 1 differences
/// along r, component 2 along z.
struct DualField {
  GridRZ grid;
  Matrix radial;
  Matrix axial;

  DualField() = default;
  explicit DualField(const GridRZ& g)
      : grid(g), radial(Matrix::Zero(g.n_r, g.n_z)), axial(Matrix::Zero(g.n_r, g.n_z)) {}

  /// Largest per-cell Euclidean magnitude.
  double max_magnitude() const {
    return (radial.array().square() + axial.array().square()).sqrt().maxCoeff();
  }
};

/// Dense 3-D array on a GridXYZ, laid out with the axial index fastest.
struct Array3 {
  int nx = 0, ny = 0, nz = 0;
  std::vector<double> data;

  Array3() = default;
  Array3(int x, int y, int z)
      : nx(x), ny(y), nz(z), data(static_cast<std::size_t>(x) * y * z, 0.0) {}

  std::size_t index(int i, int j, int k) const {
    return (static_cast<std::size_t>(i) * ny + j) * nz + k;
  }
  double& operator()(int i, int j, int k) { return data[index(i, j, k)]; }
  double operator()(int i, int j, int k) const { return data[index(i, j, k)]; }
};

/// Radial cell containing radius r, or -1 when r >= 1.
inline int radial_cell(const GridRZ& g, double r) {
  if (r >= 1.0) return -1;
  int j = static_cast<int>(std::floor(r * g.n_r));
  return j < g.n_r ? j : -1;
}

/// Samples u(r = sqrt(x^2+y^2), z) on the Cartesian grid by piecewise
/// constant lookup over the radial cells.
inline Array3 revolve(const RadialField& u, const GridXYZ& g3) {
  if (g3.n != u.grid.n_r || g3.n_z != u.grid.n_z || g3.h != u.grid.h)
    throw std::invalid_argument("revolve: Cartesian grid spacing does not match field grid");
  const int m = g3.n_xy();
  Array3 out(m, m, g3.n_z);
  for (int i = 0; i < m; ++i) {
    const double x = g3.coord(i);
    for (int j = 0; j < m; ++j) {
      const double y = g3.coord(j);
      const int cell = radial_cell(u.grid, std::sqrt(x * x + y * y));
      if (cell < 0) continue;
      for (int k = 0; k < g3.n_z; ++k) out(i, j, k) = u.values(cell, k);
    }
  }
  return out;
}

}  // namespace abeltv
