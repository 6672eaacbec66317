#pragma once

#include <span>

#include "subswe/geom.hpp"

namespace subswe {

/// Gravity source as a line integral over the cell's subgrid faces:
///   S_g = (1/|T|) * 0.5*g * sum (eta*_f + etabar)(d*_f - dbar) |E_f| n_f,
/// with the starred values taken from the same flux evaluation that updates
/// the cell. Returns the momentum source (x, y).
Vec2 gravity_source(double cell_area, double etabar, double dbar, std::span<const double> eta_star,
                    std::span<const double> d_star, std::span<const double> face_len,
                    std::span<const Vec2> face_normal);

/// Subgrid friction coefficient: area-weighted average of g/(M^2 h^(1/3))
/// over the wet subcells (h > 0). The cell must not be dry.
double friction_coefficient(std::span<const double> sub_area, std::span<const double> sub_h,
                            std::span<const double> manning);

/// Explicit Manning deceleration (-c|u|u, -c|u|v).
Vec2 friction_source(Vec2 vel, double c);

/// Solves w + dt*c*|w|w = explicit_vel by Newton iteration (Jacobian
/// I + dt*c*(|w| I + w w^T/|w|)). The result is a nonnegative multiple of the
/// explicit velocity; a non-converged solve falls back to explicit friction
/// clamped so it cannot reverse the velocity.
Vec2 implicit_friction_correct(Vec2 explicit_vel, double c, double dt);

}  // namespace subswe
