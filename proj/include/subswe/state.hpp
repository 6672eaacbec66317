#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "subswe/mesh.hpp"
#include "subswe/subgrid.hpp"

namespace subswe {

inline constexpr double kGravity = 9.81;        // m/s^2
inline constexpr double kDefaultEpsDry = 1e-4;  // m, velocity cut-off threshold
inline constexpr double kEpsVol = 1e-14;        // m, dry-cell classification

enum class Wetness : std::uint8_t { Dry, Partial, Wet };

struct InversionResult {
  double eta = 0.0;
  Wetness tag = Wetness::Dry;
  int iterations = 0;
  bool converged = true;
};

/// Solves the volume equality |T|*hbar = sum_k A_k * max(0, eta + offset_k + d_k)
/// for the cell free surface. `plane_offset` holds the frozen gradient term per
/// subcell and may be empty (constant reconstruction). Fully wet cells return
/// hbar - dbar_raw exactly; dry cells return -dbar_raw.
///
/// Newton with the wet-area slope, safeguarded by a bracketing bisection step
/// whenever an iterate leaves the enclosing interval.
InversionResult invert_free_surface(double hbar, double cell_area, std::span<const double> sub_area,
                                    std::span<const double> sub_d, std::span<const double> plane_offset,
                                    double dbar_raw);

/// h_k = max(0, eta + offset_k + d_k).
void subgrid_depths(double eta, std::span<const double> sub_d, std::span<const double> plane_offset,
                    std::span<double> out);

/// (0,0) below the dry tolerance, conserved-variable ratio otherwise.
Vec2 cutoff_velocity(double h, double hu, double hv, double eps_dry);

/// Coarse state plus the derived per-stage fields.
struct SimulationState {
  std::vector<double> h, hu, hv;  // conserved integral averages
  std::vector<double> eta;        // free surface after inversion
  std::vector<double> dwet;       // recomputed bathymetry, h - eta
  std::vector<Wetness> tag;
  std::vector<double> sub_h;  // subgrid depths, flat [cell * per_cell + k]

  void resize(int cells, int subcells) {
    h.assign(cells, 0.0);
    hu.assign(cells, 0.0);
    hv.assign(cells, 0.0);
    eta.assign(cells, 0.0);
    dwet.assign(cells, 0.0);
    tag.assign(cells, Wetness::Dry);
    sub_h.assign(subcells, 0.0);
  }
};

/// Pulls negative coarse depths back to zero by drawing volume
/// area-proportionally from wet face-neighbors. Returns the residual volume
/// (m^3) that had to be zeroed without compensation.
double redistribute_negative_depths(std::vector<double>& h, const CoarseMesh& mesh);

/// Total water volume sum |T| * hbar.
double total_volume(std::span<const double> h, const CoarseMesh& mesh);

}  // namespace subswe
