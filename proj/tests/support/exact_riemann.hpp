#pragma once

#include <array>

namespace subswe::testing {

/// Exact solution of the 1D shallow water Riemann problem over a flat bed,
/// sampled at x/t = 0. Independent oracle for the HLLC solver: iterates on the
/// star depth with depth functions for shocks and rarefactions, and handles
/// the dry-left, dry-right and dry-middle configurations.
struct ExactRiemannSample {
  double h = 0.0;
  double u = 0.0;
  double h_star = 0.0;  // star-region depth (0 for dry middle)
};

ExactRiemannSample exact_riemann_at_zero(double h_l, double u_l, double h_r, double u_r, double g);

/// Physical flux (h u, h u^2 + g h^2 / 2) of the sampled state.
std::array<double, 2> exact_riemann_flux_at_zero(double h_l, double u_l, double h_r, double u_r,
                                                 double g);

}  // namespace subswe::testing
