#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "abeltv/quadrature.hpp"

namespace abeltv {

inline const double kInvSqrtPi = 1.0 / std::sqrt(std::numbers::pi);

/// Step function on [0,1): value values[m] on [breakpoints[m], breakpoints[m+1]),
/// zero from the last breakpoint on.
class PiecewiseConstantProfile {
 public:
  struct Jump {
    double location;
    double size;  // value after minus value before
  };

  PiecewiseConstantProfile() : breakpoints_{0.0} {}

  PiecewiseConstantProfile(std::vector<double> breakpoints, std::vector<double> values)
      : breakpoints_(std::move(breakpoints)), values_(std::move(values)) {
    if (breakpoints_.empty() || breakpoints_.front() != 0.0)
      throw std::invalid_argument("profile: breakpoints must start at 0");
    if (values_.size() + 1 != breakpoints_.size())
      throw std::invalid_argument("profile: need exactly one value per piece");
    for (std::size_t m = 1; m < breakpoints_.size(); ++m)
      if (!(breakpoints_[m] > breakpoints_[m - 1]))
        throw std::invalid_argument("profile: breakpoints must be strictly increasing");
    if (breakpoints_.back() > 1.0)
      throw std::invalid_argument("profile: support must lie in [0,1]");
  }

  const std::vector<double>& breakpoints() const { return breakpoints_; }
  const std::vector<double>& values() const { return values_; }
  std::size_t pieces() const { return values_.size(); }
  double support_end() const { return breakpoints_.back(); }

  double operator()(double r) const {
    if (r < 0.0 || r >= support_end()) return 0.0;
    auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), r);
    return values_[static_cast<std::size_t>(it - breakpoints_.begin()) - 1];
  }

  /// Jumps at every interior breakpoint plus the drop to zero at the end.
  std::vector<Jump> jumps() const {
    std::vector<Jump> out;
    for (std::size_t m = 1; m < breakpoints_.size(); ++m) {
      const double after = m < values_.size() ? values_[m] : 0.0;
      out.push_back({breakpoints_[m], after - values_[m - 1]});
    }
    return out;
  }

  double total_variation() const {
    double tv = 0.0;
    for (const auto& j : jumps()) tv += std::abs(j.size);
    return tv;
  }

  double norm_l1() const {
    double s = 0.0;
    for (std::size_t m = 0; m < values_.size(); ++m)
      s += std::abs(values_[m]) * (breakpoints_[m + 1] - breakpoints_[m]);
    return s;
  }

  double norm_l2() const {
    double s = 0.0;
    for (std::size_t m = 0; m < values_.size(); ++m)
      s += values_[m] * values_[m] * (breakpoints_[m + 1] - breakpoints_[m]);
    return std::sqrt(s);
  }

  /// Closed-form J-transform of a step function:
  /// (2/sqrt(pi)) * sum_m c_m (sqrt(b_{m+1}-x)_+ - sqrt(b_m-x)_+).
  double j_closed_form(double x) const {
    auto root = [x](double b) { return b > x ? std::sqrt(b - x) : 0.0; };
    double s = 0.0;
    for (std::size_t m = 0; m < values_.size(); ++m)
      s += values_[m] * (root(breakpoints_[m + 1]) - root(breakpoints_[m]));
    return 2.0 * kInvSqrtPi * s;
  }

 private:
  std::vector<double> breakpoints_;
  std::vector<double> values_;
};

namespace detail {

inline void require_unit_interval(double x, const char* what) {
  if (!(x >= 0.0 && x <= 1.0))
    throw std::invalid_argument(std::string(what) + ": x must lie in [0,1], got " +
                                std::to_string(x));
}

/// Sorted, de-duplicated split points of [lo, hi] including both ends.
inline std::vector<double> split_points(double lo, double hi, const std::vector<double>& extra) {
  std::vector<double> pts{lo};
  for (double b : extra)
    if (b > lo && b < hi) pts.push_back(b);
  pts.push_back(hi);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

}  // namespace detail

/// Integral of f over [lo, hi], split at the given points, with square-root
/// endpoint substitution on every piece.
template <class F>
double integrate_pieces(F&& f, double lo, double hi, const std::vector<double>& splits = {}) {
  const auto pts = detail::split_points(lo, hi, splits);
  double s = 0.0;
  for (std::size_t m = 0; m + 1 < pts.size(); ++m)
    s += quadrature::integrate_endpoint_singular(
        [&](double r, double, double) { return f(r); }, pts[m], pts[m + 1]);
  return s;
}

/// J v(x) = (1/sqrt(pi)) * int_x^1 v(r) / sqrt(r - x) dr for a callable v.
/// `breakpoints` lists points where v jumps or is singular.
template <class V>
double j_transform(V&& v, double x, const std::vector<double>& breakpoints = {}) {
  detail::require_unit_interval(x, "j_transform");
  const auto pts = detail::split_points(x, 1.0, breakpoints);
  double s = 0.0;
  for (std::size_t m = 0; m + 1 < pts.size(); ++m) {
    const double offset = pts[m] - x;
    s += quadrature::integrate_endpoint_singular(
        [&](double r, double da, double) { return v(r) / std::sqrt(offset + da); }, pts[m],
        pts[m + 1]);
  }
  return kInvSqrtPi * s;
}

inline double j_transform(const PiecewiseConstantProfile& v, double x) {
  return j_transform([&v](double r) { return v(r); }, x, v.breakpoints());
}

/// A u(x) = 2 int_x^1 u(r) r / sqrt(r^2 - x^2) dr.
template <class U>
double abel_transform(U&& u, double x, const std::vector<double>& breakpoints = {}) {
  detail::require_unit_interval(x, "abel_transform");
  const auto pts = detail::split_points(x, 1.0, breakpoints);
  double s = 0.0;
  for (std::size_t m = 0; m + 1 < pts.size(); ++m) {
    const double offset = pts[m] - x;
    s += quadrature::integrate_endpoint_singular(
        [&](double r, double da, double) {
          return u(r) * r / std::sqrt((offset + da) * (r + x));
        },
        pts[m], pts[m + 1]);
  }
  return 2.0 * s;
}

/// v_k(r) = chi(k r) and its closed-form J-transform.
struct IndicatorFamily {
  struct Norms {
    double tv_v;  // ||v_k'||_{L1}
    double l1_v;
    double l2_v;
    double l1_g;
    double l2_g;
  };

  double k;
  PiecewiseConstantProfile profile;
  Norms norms;

  /// g_k(x) = 2 pi^{-1/2} (1/k - x)^{1/2} chi(k x)
  double g(double x) const {
    if (x < 0.0 || x > 1.0 / k) return 0.0;
    return 2.0 * kInvSqrtPi * std::sqrt(1.0 / k - x);
  }
};

inline IndicatorFamily indicator_family(double k) {
  if (!(k >= 1.0))
    throw std::invalid_argument("indicator_family: k must be >= 1, got " + std::to_string(k));
  const double pi = std::numbers::pi;
  IndicatorFamily fam{k,
                      PiecewiseConstantProfile({0.0, 1.0 / k}, {1.0}),
                      {1.0, 1.0 / k, 1.0 / std::sqrt(k), 4.0 / (3.0 * std::sqrt(pi)) * std::pow(k, -1.5),
                       std::sqrt(2.0 / pi) / k}};
  return fam;
}

/// Solution of J v = g for step data g: the Stieltjes integral against dg
/// collapses to a sum over the jumps of g.
class StieltjesSolution {
 public:
  explicit StieltjesSolution(const PiecewiseConstantProfile& g) : jumps_(g.jumps()) {
    if (!g.values().empty() && !(g.values().front() >= 0.0))
      throw std::invalid_argument("stieltjes_inverse: requires g(0) >= 0");
  }

  double operator()(double r) const {
    if (r < 0.0) throw std::invalid_argument("stieltjes_inverse: r must be >= 0");
    double s = 0.0;
    for (const auto& j : jumps_)
      if (j.location > r) s += j.size / std::sqrt(j.location - r);
    return -kInvSqrtPi * s;
  }

  std::vector<double> singular_points() const {
    std::vector<double> pts;
    for (const auto& j : jumps_) pts.push_back(j.location);
    return pts;
  }

 private:
  std::vector<PiecewiseConstantProfile::Jump> jumps_;
};

inline double stieltjes_inverse(const PiecewiseConstantProfile& g, double r) {
  return StieltjesSolution(g)(r);
}

/// v_h(x) = (1/h) int_{x-h}^x v.
template <class V>
double running_average(V&& v, double h, double x) {
  if (!(h > 0.0 && h <= 0.5))
    throw std::invalid_argument("running_average: h must lie in (0, 1/2]");
  if (!(x >= h - 1e-15 && x <= 1.0 + 1e-15))
    throw std::invalid_argument("running_average: x must lie in [h, 1]");
  return quadrature::default_rule().integrate(v, x - h, x) / h;
}

/// Constants of the one-dimensional stability and Young-type bounds.
struct BoundConstants {
  double c_l2_2d;
  double c_l1_2d;
  double young_l2;
  double young_l1;

  static double kernel_k1_l1(double h) { return 2.0 * std::sqrt(h); }
  static double kernel_k2_l1(double h) { return 2.0 * (2.0 - std::sqrt(2.0)) * std::sqrt(h); }
};

inline BoundConstants bound_constants() {
  const double pi = std::numbers::pi;
  const double s2 = std::sqrt(2.0), s3 = std::sqrt(3.0);
  return {2.0 * std::pow(pi, -0.25) * std::sqrt(1.0 + 1.0 / s3) * std::sqrt(3.0 - s2),
          std::pow(3.0, 4.0 / 3.0) * std::pow(pi, -1.0 / 3.0) * std::pow(3.0 - s2, 2.0 / 3.0),
          std::sqrt(2.0 / pi), 4.0 / (3.0 * std::sqrt(pi))};
}

/// Random step profile: 1..8 pieces, breakpoints uniform in (0, 0.95),
/// values uniform in [0, 1].
template <class Rng>
PiecewiseConstantProfile random_step_profile(Rng& rng) {
  std::uniform_int_distribution<int> pieces(1, 8);
  std::uniform_real_distribution<double> where(0.0, 0.95), level(0.0, 1.0);
  const int n = pieces(rng);
  std::vector<double> cuts;
  while (static_cast<int>(cuts.size()) < n) {
    const double b = where(rng);
    if (b > 0.0 && std::find(cuts.begin(), cuts.end(), b) == cuts.end()) cuts.push_back(b);
  }
  std::sort(cuts.begin(), cuts.end());
  std::vector<double> bps{0.0};
  bps.insert(bps.end(), cuts.begin(), cuts.end());
  std::vector<double> vals(n);
  for (auto& v : vals) v = level(rng);
  return PiecewiseConstantProfile(std::move(bps), std::move(vals));
}

/// L^p norms of the J-transform of a step profile, by quadrature of the
/// closed-form transform over its smooth pieces.
inline double j_norm_l1(const PiecewiseConstantProfile& v) {
  return integrate_pieces([&](double x) { return std::abs(v.j_closed_form(x)); }, 0.0,
                          v.support_end(), v.breakpoints());
}

inline double j_norm_l2(const PiecewiseConstantProfile& v) {
  return std::sqrt(integrate_pieces(
      [&](double x) {
        const double g = v.j_closed_form(x);
        return g * g;
      },
      0.0, v.support_end(), v.breakpoints()));
}

}  // namespace abeltv
