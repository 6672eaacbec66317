#pragma once

#include <cstdint>

#include "subswe/geom.hpp"

namespace subswe {

enum class FaceCase : std::uint8_t { C11, C12, C21, C22Promoted, C3 };
enum class FluxKind : std::uint8_t { Riemann, WallBothSides };

/// Plane-extrapolated values on one side of a subgrid face.
struct SideTrace {
  double h = 0.0;    // max(0, eta + d) at the face midpoint
  double eta = 0.0;  // plane value at the face midpoint
  double d = 0.0;    // adjacent subgrid cell bathymetry
  double u = 0.0, v = 0.0;
  bool wet = false;  // adjacent subgrid cell has positive depth
};

/// Coarse-cell fallback values used by the wall cases.
struct CoarseSide {
  double hbar = 0.0;
  double etabar = 0.0;
  double dbar = 0.0;
};

struct FaceTrace {
  FaceCase tag = FaceCase::C3;
  FluxKind kind = FluxKind::WallBothSides;
  double h_l = 0.0, h_r = 0.0;
  double eta_l = 0.0, eta_r = 0.0;
  double d_l = 0.0, d_r = 0.0;
  double u_l = 0.0, v_l = 0.0, u_r = 0.0, v_r = 0.0;
};

/// Builds the left-side trace from the owning cell's planes. The wet flag must
/// be supplied from the adjacent subgrid cell's depth by the caller.
SideTrace extrapolate_raw(double etabar, Vec2 grad_eta, double ubar, Vec2 grad_u, double vbar, Vec2 grad_v,
                          Vec2 centroid, Vec2 face_midpoint, double sub_d, bool sub_wet);

/// Hydrostatic-style face value reconstruction over the wet/dry cases.
FaceTrace classify_and_reconstruct(const SideTrace& raw_l, const SideTrace& raw_r, const CoarseSide& coarse_l,
                                   const CoarseSide& coarse_r);

}  // namespace subswe
