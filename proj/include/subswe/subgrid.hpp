#pragma once

#include <array>
#include <functional>
#include <vector>

#include "subswe/mesh.hpp"

namespace subswe {

/// One subgrid face lying on a coarse edge, in the owning cell's orientation.
struct SubgridFace {
  int subcell = -1;  // local index k of the adjacent subcell
  Vec2 midpoint;
  double length = 0.0;
};

/// Uniform barycentric n^2 subtriangulation of every coarse cell.
///
/// Each coarse edge is split into n_sg faces of equal length; across an
/// interior coarse edge the r-th face of the owner pairs with face
/// n_sg-1-r of the neighbor (both cells order faces counterclockwise).
struct SubgridPartition {
  int n_sg = 1;
  int per_cell = 1;  // n_sg^2 subcells per coarse cell

  std::vector<double> subcell_area;   // flat [cell * per_cell + k]
  std::vector<Vec2> subcell_centroid; // flat
  std::vector<std::array<std::vector<SubgridFace>, 3>> edge_faces;  // [cell][local edge][r]

  int global_index(int cell, int k) const { return cell * per_cell + k; }
  int subcell_count() const { return static_cast<int>(subcell_area.size()); }
};

SubgridPartition subdivide(const CoarseMesh& mesh, int n_sg);

/// Piecewise-constant bathymetry on the subgrid, positive downward.
struct BathymetryField {
  std::vector<double> d;     // flat subcell values
  std::vector<double> dbar;  // raw per-cell integral average
};

/// Samples the field at subgrid-cell centroids (one-point rule).
BathymetryField sample_bathymetry(const CoarseMesh& mesh, const SubgridPartition& part,
                                  const std::function<double(double, double)>& field);

}  // namespace subswe
