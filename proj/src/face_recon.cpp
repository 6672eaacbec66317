#include "subswe/face_recon.hpp"

#include <algorithm>
#include <cmath>

namespace subswe {

SideTrace extrapolate_raw(double etabar, Vec2 grad_eta, double ubar, Vec2 grad_u, double vbar, Vec2 grad_v,
                          Vec2 centroid, Vec2 face_midpoint, double sub_d, bool sub_wet) {
  const Vec2 dx = face_midpoint - centroid;
  SideTrace t;
  t.eta = etabar + dot(grad_eta, dx);
  t.d = sub_d;
  t.h = std::max(0.0, t.eta + t.d);
  t.u = ubar + dot(grad_u, dx);
  t.v = vbar + dot(grad_v, dx);
  t.wet = sub_wet;
  return t;
}

namespace {

// Assigns (h, eta) from a candidate surface over bathymetry d, clipping dry.
// Keeps eta bit-exact when no clipping occurs.
void set_side(double eta_in, double d, double& h_out, double& eta_out) {
  const double h = eta_in + d;
  if (h > 0.0) {
    h_out = h;
    eta_out = eta_in;
  } else {
    h_out = 0.0;
    eta_out = -d;
  }
}

// Case 1: both sides wet. Splits on whether either water height is below the
// bathymetry jump.
void reconstruct_case1(FaceTrace& out, const SideTrace& l, const SideTrace& r, bool promoted) {
  const double dd = std::abs(l.d - r.d);
  if (l.h < dd || r.h < dd) {
    out.tag = promoted ? FaceCase::C22Promoted : FaceCase::C12;
    const double d_lr = -std::min(-std::min(l.d, r.d), std::min(l.eta, r.eta));
    out.d_l = out.d_r = d_lr;
    out.h_l = std::min(l.eta + d_lr, l.h);
    out.h_r = std::min(r.eta + d_lr, r.h);
    out.eta_l = out.h_l - d_lr;
    out.eta_r = out.h_r - d_lr;
  } else {
    out.tag = promoted ? FaceCase::C22Promoted : FaceCase::C11;
    const double d_lr = 0.5 * (l.d + r.d);
    out.d_l = out.d_r = d_lr;
    set_side(l.eta, d_lr, out.h_l, out.eta_l);
    set_side(r.eta, d_lr, out.h_r, out.eta_r);
  }
  out.kind = FluxKind::Riemann;
  out.u_l = l.u;
  out.v_l = l.v;
  out.u_r = r.u;
  out.v_r = r.v;
}

}  // namespace

FaceTrace classify_and_reconstruct(const SideTrace& raw_l, const SideTrace& raw_r, const CoarseSide& coarse_l,
                                   const CoarseSide& coarse_r) {
  FaceTrace out;

  if (raw_l.wet && raw_r.wet) {
    reconstruct_case1(out, raw_l, raw_r, false);
    return out;
  }

  if (raw_l.wet != raw_r.wet) {
    const SideTrace& wet = raw_l.wet ? raw_l : raw_r;
    const SideTrace& dry = raw_l.wet ? raw_r : raw_l;
    if (wet.eta < -dry.d) {
      // Case 2.1: the dry bathymetry tops the wet free surface; wall. The wet
      // side keeps its own values, the dry side falls back to coarse values.
      out.tag = FaceCase::C21;
      out.kind = FluxKind::WallBothSides;
      const CoarseSide& dry_coarse = raw_l.wet ? coarse_r : coarse_l;
      double h_w, eta_w, h_d, eta_d;
      set_side(wet.eta, wet.d, h_w, eta_w);
      set_side(dry_coarse.etabar, dry_coarse.dbar, h_d, eta_d);
      if (raw_l.wet) {
        out.h_l = h_w, out.eta_l = eta_w, out.d_l = wet.d;
        out.u_l = wet.u, out.v_l = wet.v;
        out.h_r = h_d, out.eta_r = eta_d, out.d_r = dry_coarse.dbar;
      } else {
        out.h_r = h_w, out.eta_r = eta_w, out.d_r = wet.d;
        out.u_r = wet.u, out.v_r = wet.v;
        out.h_l = h_d, out.eta_l = eta_d, out.d_l = dry_coarse.dbar;
      }
      return out;
    }
    // Case 2.2: transport expected; re-enter Case 1 with the dry side pinned
    // to a zero-depth state at its own bathymetry and zero velocity.
    SideTrace dry_fixed = dry;
    dry_fixed.eta = -dry.d;
    dry_fixed.h = 0.0;
    dry_fixed.u = 0.0;
    dry_fixed.v = 0.0;
    if (raw_l.wet) {
      reconstruct_case1(out, wet, dry_fixed, true);
    } else {
      reconstruct_case1(out, dry_fixed, wet, true);
    }
    return out;
  }

  // Case 3: both sides dry, wall with per-side coarse values.
  out.tag = FaceCase::C3;
  out.kind = FluxKind::WallBothSides;
  out.d_l = coarse_l.dbar;
  out.d_r = coarse_r.dbar;
  set_side(coarse_l.etabar, coarse_l.dbar, out.h_l, out.eta_l);
  set_side(coarse_r.etabar, coarse_r.dbar, out.h_r, out.eta_r);
  return out;
}

}  // namespace subswe
