#pragma once

#include <cmath>
#include <numbers>
#include <vector>

namespace abeltv::quadrature {

/// Gauss-Legendre rule on [-1, 1], nodes by Newton iteration on P_n.
class GaussLegendre {
 public:
  explicit GaussLegendre(int n) : nodes_(n), weights_(n) {
    for (int i = 0; i < (n + 1) / 2; ++i) {
      double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
      double dp = 0.0;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= n; ++k) {
          const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        const double dx = p1 / dp;
        x -= dx;
        if (std::abs(dx) < 1e-16) break;
      }
      nodes_[i] = -x;
      nodes_[n - 1 - i] = x;
      weights_[i] = weights_[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
  }

  int size() const { return static_cast<int>(nodes_.size()); }
  double node(int i) const { return nodes_[i]; }
  double weight(int i) const { return weights_[i]; }

  /// Integral of f over [a, b].
  template <class F>
  double integrate(F&& f, double a, double b) const {
    const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
    double s = 0.0;
    for (int i = 0; i < size(); ++i) s += weights_[i] * f(mid + half * nodes_[i]);
    return s * half;
  }

 private:
  std::vector<double> nodes_;
  std::vector<double> weights_;
};

inline const GaussLegendre& default_rule() {
  static const GaussLegendre rule(200);
  return rule;
}

/// Integral over [a, b] of an integrand that may carry inverse square-root
/// singularities at either endpoint. The interval is halved; the left half
/// uses r = a + t^2 and the right half r = b - s^2, which turns those
/// singularities into smooth integrands. f is called as f(r, r - a, b - r)
/// with both distances computed without cancellation.
template <class F>
double integrate_endpoint_singular(F&& f, double a, double b,
                                   const GaussLegendre& rule = default_rule()) {
  if (!(b > a)) return 0.0;
  const double half = 0.5 * (b - a);
  const double t_max = std::sqrt(half);
  const double left = rule.integrate(
      [&](double t) {
        const double da = t * t;
        return 2.0 * t * f(a + da, da, (b - a) - da);
      },
      0.0, t_max);
  const double right = rule.integrate(
      [&](double s) {
        const double db = s * s;
        return 2.0 * s * f(b - db, (b - a) - db, db);
      },
      0.0, t_max);
  return left + right;
}

}  // namespace abeltv::quadrature
