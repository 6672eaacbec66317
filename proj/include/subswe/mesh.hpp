#pragma once

#include <array>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "subswe/geom.hpp"

namespace subswe {

inline constexpr int kNoNeighbor = -1;

/// One edge of a coarse triangle, as seen from its owning cell.
/// Edge i spans vertex i to vertex (i+1)%3, counterclockwise.
struct CellEdge {
  int neighbor = kNoNeighbor;  // adjacent cell index, kNoNeighbor on the boundary
  int neighbor_edge = -1;      // local edge index on the neighbor
  int boundary_tag = 0;        // nonzero only on boundary edges
  double length = 0.0;
  Vec2 normal;    // unit, outward
  Vec2 midpoint;  // edge midpoint
};

/// Deduplicated coarse edge; interior edges are listed once with both owners.
struct MeshEdge {
  int cell_l = -1;
  int edge_l = -1;
  int cell_r = kNoNeighbor;  // kNoNeighbor for boundary edges
  int edge_r = -1;
  int boundary_tag = 0;
};

/// Unstructured triangular mesh carrying the conserved variables.
struct CoarseMesh {
  std::vector<Vec2> vertices;
  std::vector<std::array<int, 3>> cells;  // CCW vertex indices
  std::vector<double> area;
  std::vector<Vec2> centroid;
  std::vector<std::array<CellEdge, 3>> edges;
  std::vector<MeshEdge> unique_edges;
  std::map<int, std::string> tag_names;

  Vec2 bbox_min, bbox_max;

  int cell_count() const { return static_cast<int>(cells.size()); }
  double domain_diameter() const { return (bbox_max - bbox_min).norm(); }
};

/// Boundary-side tags used by the built-in rectangle mesher.
enum RectTag : int { kTagWest = 1, kTagEast = 2, kTagSouth = 3, kTagNorth = 4 };

/// Structured right-triangle mesh over [x0,x1]x[y0,y1]. Legs are within
/// rounding of the target edge length. Boundary edges carry W/E/S/N tags.
CoarseMesh build_rect_mesh(double x0, double x1, double y0, double y1, double target_edge);

/// Same construction with explicit cell counts per direction.
CoarseMesh build_rect_mesh_n(double x0, double x1, double y0, double y1, int nx, int ny);

/// Reads a Gmsh MSH 2.2 ASCII file with 3-node triangles. Boundary tags come
/// from the physical groups of line elements; nearly-coincident nodes are
/// welded at 1e-9 * domain diameter.
CoarseMesh load_gmsh(const std::string& path);

/// Writes the MSH 2.2 ASCII representation (triangles + tagged boundary lines).
void write_gmsh(const CoarseMesh& mesh, std::ostream& out);

/// Per-cell summary: id, centroid, area, neighbor ids.
void write_mesh_summary_csv(const CoarseMesh& mesh, std::ostream& out);

/// Computes geometry and edge topology from vertices + cells. Boundary tags
/// are looked up in `boundary_tags`, keyed by sorted vertex-index pairs.
void finalize_topology(CoarseMesh& mesh, const std::map<std::pair<int, int>, int>& boundary_tags = {});

/// Checks the structural mesh invariants; returns human-readable violations.
std::vector<std::string> validate_mesh(const CoarseMesh& mesh);

}  // namespace subswe
