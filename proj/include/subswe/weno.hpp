#pragma once

#include <array>
#include <span>
#include <vector>

#include "subswe/mesh.hpp"
#include "subswe/state.hpp"

namespace subswe {

inline constexpr double kWenoLambdaCenter = 1e5;
inline constexpr double kWenoEps = 1e-14;
inline constexpr int kWenoPower = 4;

/// One reconstruction stencil with its precomputed least-squares operator:
/// gradient = sum_i coeff[i] * (qbar[members[i+1]] - qbar[self]).
struct Stencil {
  std::vector<int> members;  // members[0] is the cell itself
  std::vector<Vec2> coeff;   // one entry per member past the first
  bool valid = false;
};

/// Center stencil (index 0) plus three sector stencils per cell.
struct StencilSet {
  std::vector<std::array<Stencil, 4>> stencils;
};

/// Center stencil: the edge neighbors. Sector stencil s: cells whose
/// centroids fall in the open wedge spanned by the rays from the centroid
/// through the two vertices bounding edge s, collected breadth-first until
/// at least 3 cells or depth 3.
StencilSet build_stencils(const CoarseMesh& mesh);

struct ReconstructionPlanes {
  std::vector<Vec2> grad_eta, grad_u, grad_v;  // per cell, units of q per m
};

/// Diagnostics for one cell/variable blend.
struct CellBlend {
  std::array<Vec2, 4> candidate{};
  std::array<double, 4> weight{};
  std::array<bool, 4> admissible{};
  Vec2 blended;
};

/// WENO blend for a single variable on one cell; stencils containing a dry
/// cell are discarded, and with no admissible stencil the gradient is zero.
CellBlend blend_cell(const StencilSet& stencils, int cell, std::span<const double> q,
                     std::span<const Wetness> tags, double cell_area);

ReconstructionPlanes reconstruct_planes(const StencilSet& stencils, const CoarseMesh& mesh,
                                        std::span<const double> eta, std::span<const double> u,
                                        std::span<const double> v, std::span<const Wetness> tags);

ReconstructionPlanes first_order_planes(int cell_count);

/// Per-cell blended weights and gradients as CSV, for convergence diagnostics.
void write_weno_debug_csv(const StencilSet& stencils, const CoarseMesh& mesh,
                          std::span<const double> q, std::span<const Wetness> tags, std::ostream& out);

}  // namespace subswe
