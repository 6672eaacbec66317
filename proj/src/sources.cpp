#include "subswe/sources.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "subswe/state.hpp"

namespace subswe {

Vec2 gravity_source(double cell_area, double etabar, double dbar, std::span<const double> eta_star,
                    std::span<const double> d_star, std::span<const double> face_len,
                    std::span<const Vec2> face_normal) {
  Vec2 sum{};
  for (size_t f = 0; f < eta_star.size(); ++f) {
    const double w = (eta_star[f] + etabar) * (d_star[f] - dbar) * face_len[f];
    sum += face_normal[f] * w;
  }
  return sum * (0.5 * kGravity / cell_area);
}

double friction_coefficient(std::span<const double> sub_area, std::span<const double> sub_h,
                            std::span<const double> manning) {
  double wet_area = 0.0;
  double acc = 0.0;
  for (size_t k = 0; k < sub_h.size(); ++k) {
    if (sub_h[k] <= 0.0) continue;
    wet_area += sub_area[k];
    acc += sub_area[k] * kGravity / (manning[k] * manning[k] * std::cbrt(sub_h[k]));
  }
  if (wet_area <= 0.0) {
    throw std::runtime_error("friction_coefficient: empty wet set");
  }
  return acc / wet_area;
}

Vec2 friction_source(Vec2 vel, double c) {
  const double speed = vel.norm();
  return vel * (-c * speed);
}

Vec2 implicit_friction_correct(Vec2 explicit_vel, double c, double dt) {
  const double a = dt * c;
  if (a <= 0.0) return explicit_vel;

  Vec2 w = explicit_vel;
  for (int it = 0; it < 30; ++it) {
    const double speed = w.norm();
    const Vec2 res = w + w * (a * speed) - explicit_vel;
    if (res.norm() < 1e-12) return w;
    // J = I + a*(|w| I + w w^T / |w|); at w = 0 the friction Jacobian vanishes.
    double jxx = 1.0, jxy = 0.0, jyy = 1.0;
    if (speed > 0.0) {
      jxx += a * (speed + w.x * w.x / speed);
      jxy += a * (w.x * w.y / speed);
      jyy += a * (speed + w.y * w.y / speed);
    }
    const double det = jxx * jyy - jxy * jxy;
    if (!(std::abs(det) > 0.0)) break;
    w -= Vec2{(jyy * res.x - jxy * res.y) / det, (-jxy * res.x + jxx * res.y) / det};
  }
  // Explicit fallback, limited so friction cannot reverse the velocity sign.
  const double mag = explicit_vel.norm();
  return explicit_vel * std::max(0.0, 1.0 - a * mag);
}

}  // namespace subswe
