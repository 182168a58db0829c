#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include "abeltv/grid.hpp"

namespace abeltv {

/// r0 <= r < r1, z0 <= z <= z1
struct RectRegion {
  double r0, r1, z0, z1;
};

/// Strict interior of the ellipse centred at (r_center, z_center), clipped to r >= 0.
struct HalfEllipseRegion {
  double r_center, r_semi, z_center, z_semi;
};

struct PhantomShape {
  std::variant<RectRegion, HalfEllipseRegion> region;
  double level = 1.0;

  bool contains(double r, double z) const {
    if (const auto* q = std::get_if<RectRegion>(&region))
      return r >= q->r0 && r < q->r1 && z >= q->z0 && z <= q->z1;
    const auto& e = std::get<HalfEllipseRegion>(region);
    const double dr = (r - e.r_center) / e.r_semi, dz = (z - e.z_center) / e.z_semi;
    return dr * dr + dz * dz < 1.0;
  }

  /// Bounding box (r_max, z_min, z_max) of the part with r >= 0.
  void bounds(double& r_max, double& z_min, double& z_max) const {
    if (const auto* q = std::get_if<RectRegion>(&region)) {
      r_max = q->r1;
      z_min = q->z0;
      z_max = q->z1;
    } else {
      const auto& e = std::get<HalfEllipseRegion>(region);
      r_max = e.r_center + e.r_semi;
      z_min = e.z_center - e.z_semi;
      z_max = e.z_center + e.z_semi;
    }
  }
};

/// Shapes are painted in order; later shapes overwrite earlier ones.
struct PhantomSpec {
  std::vector<PhantomShape> shapes;
};

inline RadialField rasterize_phantom(const PhantomSpec& spec, const GridRZ& g) {
  for (std::size_t s = 0; s < spec.shapes.size(); ++s) {
    const auto& shape = spec.shapes[s];
    double r_max, z_min, z_max;
    shape.bounds(r_max, z_min, z_max);
    const bool degenerate = std::visit(
        [](const auto& q) {
          if constexpr (std::is_same_v<std::decay_t<decltype(q)>, RectRegion>)
            return !(q.r1 > q.r0 && q.z1 >= q.z0 && q.r0 >= 0.0);
          else
            return !(q.r_semi > 0.0 && q.z_semi > 0.0 && q.r_center >= 0.0);
        },
        shape.region);
    if (degenerate)
      throw std::invalid_argument("rasterize_phantom: shape " + std::to_string(s) +
                                  " has an empty or negative-radius region");
    if (!(shape.level >= 0.0 && shape.level <= 1.0))
      throw std::invalid_argument("rasterize_phantom: shape " + std::to_string(s) +
                                  " level must lie in [0,1]");
    if (r_max > 1.0 - g.h || z_min < -1.0 + g.h || z_max > 1.0 - g.h)
      throw std::invalid_argument("rasterize_phantom: shape " + std::to_string(s) +
                                  " escapes the support box [0,1-h) x [-1+h,1-h]");
  }
  RadialField u(g);
  for (int j = 0; j < g.n_r; ++j) {
    const double r = g.cell_mid(j);
    for (int k = 0; k < g.n_z; ++k) {
      const double z = g.axial(k);
      for (const auto& shape : spec.shapes)
        if (shape.contains(r, z)) u(j, k) = shape.level;
    }
  }
  return u;
}

/// Concentric ellipsoidal shells with alternating levels, peak level 1.
inline PhantomSpec nested_annuli_phantom() {
  return {{
      {HalfEllipseRegion{0.0, 0.80, 0.0, 0.75}, 0.4},
      {HalfEllipseRegion{0.0, 0.62, 0.05, 0.58}, 0.8},
      {HalfEllipseRegion{0.0, 0.45, 0.0, 0.42}, 0.2},
      {HalfEllipseRegion{0.0, 0.26, -0.05, 0.24}, 1.0},
  }};
}

/// Four disjoint components at different levels, peak level 1.
inline PhantomSpec four_blobs_phantom() {
  return {{
      {RectRegion{0.0, 0.30, 0.35, 0.70}, 1.0},
      {HalfEllipseRegion{0.0, 0.28, -0.50, 0.22}, 0.7},
      {HalfEllipseRegion{0.62, 0.18, 0.30, 0.28}, 0.5},
      {RectRegion{0.45, 0.80, -0.75, -0.35}, 0.9},
  }};
}

inline PhantomSpec builtin_phantom(const std::string& name) {
  if (name == "nested-annuli") return nested_annuli_phantom();
  if (name == "four-blobs") return four_blobs_phantom();
  throw std::invalid_argument("unknown built-in phantom '" + name +
                              "' (expected nested-annuli or four-blobs)");
}

struct NoiseSpec {
  double variance_fraction = 0.0;  // sigma^2 as a fraction of max|f0|
  std::uint64_t seed = 0;
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Uniform in (0, 1) from a (seed, counter) pair.
inline double counter_uniform(std::uint64_t seed, std::uint64_t counter) {
  const std::uint64_t bits = splitmix64(splitmix64(seed) ^ splitmix64(counter));
  return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

/// Standard normal for cell `index`, Box-Muller on two counter draws.
inline double counter_normal(std::uint64_t seed, std::uint64_t index) {
  const double u1 = counter_uniform(seed, 2 * index);
  const double u2 = counter_uniform(seed, 2 * index + 1);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace detail

inline ProjectionField add_noise(const ProjectionField& f0, const NoiseSpec& ns) {
  if (!(ns.variance_fraction >= 0.0))
    throw std::invalid_argument("add_noise: variance_fraction must be >= 0");
  ProjectionField f = f0;
  if (ns.variance_fraction == 0.0) return f;
  const double sigma = std::sqrt(ns.variance_fraction * f0.values.cwiseAbs().maxCoeff());
  for (Eigen::Index k = 0; k < f.values.cols(); ++k)
    for (Eigen::Index i = 0; i < f.values.rows(); ++i) {
      const auto index = static_cast<std::uint64_t>(k * f.values.rows() + i);
      f.values(i, k) += sigma * detail::counter_normal(ns.seed, index);
    }
  return f;
}

}  // namespace abeltv
