#include "subswe/riemann.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "subswe/state.hpp"

namespace subswe {

namespace {

constexpr double kFaceDry = 1e-13;  // depth below which a face side is handled as dry

}  // namespace

FluxResult hllc_flux(double h_l, double h_r, Vec2 vel_l, Vec2 vel_r, double d_lr, Vec2 n) {
  if (!(std::isfinite(h_l) && std::isfinite(h_r) && std::isfinite(vel_l.x) && std::isfinite(vel_l.y) &&
        std::isfinite(vel_r.x) && std::isfinite(vel_r.y))) {
    throw std::runtime_error("hllc_flux: non-finite input");
  }
  const double g = kGravity;
  const Vec2 t = perp(n);

  FluxResult out;
  out.d_star_l = out.d_star_r = d_lr;

  const bool dry_l = h_l <= kFaceDry;
  const bool dry_r = h_r <= kFaceDry;
  if (dry_l && dry_r) {
    // No transport, but the free-surface flux form carries the -g*d^2/2
    // datum term even at zero depth; dropping it unbalances the gravity
    // source on the adjacent cells.
    out.h_star_l = out.h_star_r = 0.0;
    out.eta_star_l = out.eta_star_r = -d_lr;
    const double p = -0.5 * g * d_lr * d_lr;
    out.flux = {0.0, p * n.x, p * n.y};
    return out;
  }

  const double un_l = dot(vel_l, n), ut_l = dot(vel_l, t);
  const double un_r = dot(vel_r, n), ut_r = dot(vel_r, t);
  const double c_l = std::sqrt(g * std::max(h_l, 0.0));
  const double c_r = std::sqrt(g * std::max(h_r, 0.0));

  // Rotated-frame flux of a given state, pressure still in plain h^2 form.
  auto rotated_flux = [&](double h, double un, double ut) {
    const double fh = h * un;
    return std::array<double, 3>{fh, fh * un + 0.5 * g * h * h, fh * ut};
  };

  double s_l, s_r;
  if (dry_r || dry_l) {
    // Dry front: the wave structure is a single rarefaction, so the exact
    // fan solution is sampled directly at x/t = 0.
    std::array<double, 3> rf{};
    if (dry_r) {
      s_l = un_l - c_l;
      s_r = un_l + 2.0 * c_l;
      if (s_l >= 0.0) {
        rf = rotated_flux(h_l, un_l, ut_l);
        out.alpha = 0.0;
      } else if (s_r <= 0.0) {
        out.alpha = 1.0;
      } else {
        const double c = (un_l + 2.0 * c_l) / 3.0;
        rf = rotated_flux(c * c / g, c, ut_l);
        out.alpha = s_r / (s_r - s_l);
      }
    } else {
      s_l = un_r - 2.0 * c_r;
      s_r = un_r + c_r;
      if (s_r <= 0.0) {
        rf = rotated_flux(h_r, un_r, ut_r);
        out.alpha = 1.0;
      } else if (s_l >= 0.0) {
        out.alpha = 0.0;
      } else {
        const double c = (2.0 * c_r - un_r) / 3.0;
        rf = rotated_flux(c * c / g, -c, ut_r);
        out.alpha = s_r / (s_r - s_l);
      }
    }
    out.s_l = s_l;
    out.s_r = s_r;
    const double h2 = out.alpha * h_r * h_r + (1.0 - out.alpha) * h_l * h_l;
    const double h_star = std::sqrt(std::max(0.0, h2));
    out.h_star_l = out.h_star_r = h_star;
    out.eta_star_l = out.eta_star_r = h_star - d_lr;
    rf[1] -= 0.5 * g * d_lr * d_lr;
    out.flux = {rf[0], rf[1] * n.x - rf[2] * n.y, rf[1] * n.y + rf[2] * n.x};
    return out;
  }

  {
    // Two-rarefaction depth estimate with shock-corrected speeds.
    const double sq = 0.5 * (c_l + c_r) + 0.25 * (un_l - un_r);
    const double h_est = std::max(0.0, sq * sq / g);
    const double q_l = h_est > h_l ? std::sqrt(0.5 * (h_est + h_l) * h_est / (h_l * h_l)) : 1.0;
    const double q_r = h_est > h_r ? std::sqrt(0.5 * (h_est + h_r) * h_est / (h_r * h_r)) : 1.0;
    s_l = un_l - c_l * q_l;
    s_r = un_r + c_r * q_r;
  }
  out.s_l = s_l;
  out.s_r = s_r;

  // Rotated-frame fluxes with the plain 0.5*g*h^2 pressure; the constant
  // -0.5*g*d^2 datum shift is identical on both sides and applied at the end.
  const double f_h_l = h_l * un_l;
  const double f_h_r = h_r * un_r;
  const double f_m_l = h_l * un_l * un_l + 0.5 * g * h_l * h_l;
  const double f_m_r = h_r * un_r * un_r + 0.5 * g * h_r * h_r;

  double f_h, f_m, f_t;
  if (s_l >= 0.0) {
    f_h = f_h_l;
    f_m = f_m_l;
    f_t = f_h_l * ut_l;
    out.alpha = 0.0;
  } else if (s_r <= 0.0) {
    f_h = f_h_r;
    f_m = f_m_r;
    f_t = f_h_r * ut_r;
    out.alpha = 1.0;
  } else {
    const double inv = 1.0 / (s_r - s_l);
    f_h = (s_r * f_h_l - s_l * f_h_r + s_l * s_r * (h_r - h_l)) * inv;
    f_m = (s_r * f_m_l - s_l * f_m_r + s_l * s_r * (h_r * un_r - h_l * un_l)) * inv;
    const double denom = h_r * (un_r - s_r) - h_l * (un_l - s_l);
    double s_star;
    if (std::abs(denom) > 0.0) {
      s_star = (s_l * h_r * (un_r - s_r) - s_r * h_l * (un_l - s_l)) / denom;
    } else {
      s_star = 0.5 * (s_l + s_r);
    }
    f_t = f_h * (s_star >= 0.0 ? ut_l : ut_r);
    out.alpha = s_r * inv;
  }

  // Unified depth from the wave-speed blend of the squared depths.
  const double h2 = out.alpha * h_r * h_r + (1.0 - out.alpha) * h_l * h_l;
  const double h_star = (h_l == h_r) ? h_l : std::sqrt(std::max(0.0, h2));
  out.h_star_l = out.h_star_r = h_star;
  out.eta_star_l = out.eta_star_r = h_star - d_lr;

  f_m -= 0.5 * g * d_lr * d_lr;
  out.flux = {f_h, f_m * n.x - f_t * n.y, f_m * n.y + f_t * n.x};
  return out;
}

FluxResult wall_flux(double h, double eta, double d, Vec2 n) {
  FluxResult out;
  const double p = 0.5 * kGravity * (eta * eta + 2.0 * eta * d);
  out.flux = {0.0, p * n.x, p * n.y};
  out.h_star_l = out.h_star_r = h;
  out.eta_star_l = out.eta_star_r = eta;
  out.d_star_l = out.d_star_r = d;
  return out;
}

}  // namespace subswe
