#pragma once

#include <array>

#include "subswe/geom.hpp"

namespace subswe {

/// Numerical flux across one subgrid face plus the unified starred values
/// consumed by the gravity source. For Riemann faces the two sides share one
/// starred state; wall faces carry per-side values.
struct FluxResult {
  std::array<double, 3> flux{};  // mass, x-momentum, y-momentum (global frame)
  double h_star_l = 0.0, eta_star_l = 0.0, d_star_l = 0.0;
  double h_star_r = 0.0, eta_star_r = 0.0, d_star_r = 0.0;
  double s_l = 0.0, s_r = 0.0;
  double alpha = 0.5;
};

/// Rotated 1D HLLC with dry-bed wave speed estimates. Both sides share the
/// reconstructed bathymetry d_lr; the momentum flux carries the gravity term
/// in the free-surface form 0.5*g*(eta^2 + 2*eta*d). Zero depth on both sides
/// yields a zero flux.
FluxResult hllc_flux(double h_l, double h_r, Vec2 vel_l, Vec2 vel_r, double d_lr, Vec2 n);

/// Impermeability flux: zero mass transport, hydrostatic momentum
/// 0.5*g*(eta^2 + 2*eta*d) * n from the side's own starred values.
FluxResult wall_flux(double h, double eta, double d, Vec2 n);

}  // namespace subswe
