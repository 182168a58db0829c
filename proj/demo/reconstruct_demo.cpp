// Reconstructs the nested-annuli phantom from noisy projections with TV
// regularization and with plain onion peeling, and prints both errors.
//
//   reconstruct_demo [n_r] [sigma2_fraction] [lambda] [iterations]

#include <cstdlib>
#include <iostream>

#include "abeltv/metrics.hpp"
#include "abeltv/phantoms.hpp"
#include "abeltv/solver.hpp"

int main(int argc, char** argv) {
  using namespace abeltv;
  const int n = argc > 1 ? std::atoi(argv[1]) : 64;
  const double frac = argc > 2 ? std::atof(argv[2]) : 0.0005;
  const double lambda = argc > 3 ? std::atof(argv[3]) : 80.0;
  const int iters = argc > 4 ? std::atoi(argv[4]) : 2000;

  const auto [g, g3] = make_grids(n);
  const RadialField u0 = rasterize_phantom(nested_annuli_phantom(), g);
  const AbelMatrix a = build_abel_matrix(g);
  const ProjectionField f0 = apply_abel(a, u0);
  const ProjectionField f = add_noise(f0, {frac, 7});

  const auto params = SolverParams::from_unit_spacing(lambda, 0.2, 0.2, g.h, iters);
  const SolveResult tv = solve_tv(a, f, params);
  const RadialField onion = solve_onion_peeling(a, f);

  const BoundReport rep = bound_report(tv.u_star, u0, apply_abel(a, tv.u_star), f, f0, g3);
  const RadialField onion_diff(g, onion.values - u0.values);
  std::cout << "grid n_r=" << n << "  sigma2_frac=" << frac << "  lambda=" << lambda << '\n'
            << "TV solve:      err_l2_uh=" << rep.err_l2_uh << "  C*=" << rep.c_star
            << "  c=" << rep.c << "  M1=" << rep.M1 << "  (" << tv.wall_time.count() << " s)\n"
            << "onion peeling: err_l2_uh=" << norm_l2_uh(revolve(onion_diff, g3), g.h) << '\n';
}
