#include "subswe/weno.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

namespace subswe {

namespace {

// Least-squares operator for gradient = argmin sum_i (g . dx_i - dq_i)^2,
// with coordinates scaled by the cell diameter. Invalid when the normal
// matrix is near-singular (condition number above 1e8).
bool build_ls_coeff(Stencil& st, const CoarseMesh& mesh, double scale) {
  const int self = st.members[0];
  const size_t nrows = st.members.size() - 1;
  if (nrows < 2) return false;

  double axx = 0.0, axy = 0.0, ayy = 0.0;
  std::vector<Vec2> rows(nrows);
  for (size_t i = 0; i < nrows; ++i) {
    rows[i] = (mesh.centroid[st.members[i + 1]] - mesh.centroid[self]) / scale;
    axx += rows[i].x * rows[i].x;
    axy += rows[i].x * rows[i].y;
    ayy += rows[i].y * rows[i].y;
  }
  const double tr = axx + ayy;
  const double det = axx * ayy - axy * axy;
  if (det <= 0.0) return false;
  const double disc = std::sqrt(std::max(0.0, tr * tr - 4.0 * det));
  const double lmax = 0.5 * (tr + disc);
  const double lmin = 0.5 * (tr - disc);
  if (!(lmin > 0.0) || lmax / lmin > 1e8) return false;

  st.coeff.resize(nrows);
  for (size_t i = 0; i < nrows; ++i) {
    // (A^T A)^{-1} * row_i, then undo the coordinate scaling.
    const double gx = (ayy * rows[i].x - axy * rows[i].y) / det;
    const double gy = (-axy * rows[i].x + axx * rows[i].y) / det;
    st.coeff[i] = Vec2{gx, gy} / scale;
  }
  return true;
}

}  // namespace

StencilSet build_stencils(const CoarseMesh& mesh) {
  const int nc = mesh.cell_count();
  StencilSet set;
  set.stencils.resize(nc);

  std::vector<int> depth(nc, -1);
  std::vector<int> touched;

  for (int m = 0; m < nc; ++m) {
    const double scale = std::sqrt(mesh.area[m]);

    Stencil& center = set.stencils[m][0];
    center.members.push_back(m);
    for (int i = 0; i < 3; ++i) {
      const int nb = mesh.edges[m][i].neighbor;
      if (nb != kNoNeighbor) center.members.push_back(nb);
    }
    center.valid = build_ls_coeff(center, mesh, scale);

    for (int s = 0; s < 3; ++s) {
      Stencil& sector = set.stencils[m][s + 1];
      sector.members.push_back(m);

      // Open wedge through the two vertices bounding edge s.
      const Vec2 r1 = mesh.vertices[mesh.cells[m][s]] - mesh.centroid[m];
      const Vec2 r2 = mesh.vertices[mesh.cells[m][(s + 1) % 3]] - mesh.centroid[m];
      auto in_wedge = [&](const Vec2& p) {
        const Vec2 w = p - mesh.centroid[m];
        return cross(r1, w) > 0.0 && cross(w, r2) > 0.0;
      };

      touched.clear();
      depth[m] = 0;
      touched.push_back(m);
      std::vector<int> frontier{m};
      for (int level = 1; level <= 3 && !frontier.empty(); ++level) {
        std::vector<int> next;
        for (int cell : frontier) {
          for (int i = 0; i < 3; ++i) {
            const int nb = mesh.edges[cell][i].neighbor;
            if (nb == kNoNeighbor || depth[nb] >= 0) continue;
            depth[nb] = level;
            touched.push_back(nb);
            next.push_back(nb);
            if (in_wedge(mesh.centroid[nb])) sector.members.push_back(nb);
          }
        }
        frontier = std::move(next);
        if (sector.members.size() >= 4) break;  // self + 3
      }
      for (int cell : touched) depth[cell] = -1;

      sector.valid = build_ls_coeff(sector, mesh, scale);
    }
  }
  return set;
}

CellBlend blend_cell(const StencilSet& stencils, int cell, std::span<const double> q,
                     std::span<const Wetness> tags, double cell_area) {
  CellBlend out;
  double wsum = 0.0;
  std::array<double, 4> wraw{};

  for (int s = 0; s < 4; ++s) {
    const Stencil& st = stencils.stencils[cell][s];
    out.admissible[s] = st.valid;
    if (!st.valid) continue;
    for (int member : st.members) {
      if (tags[member] == Wetness::Dry) {
        out.admissible[s] = false;
        break;
      }
    }
    if (!out.admissible[s]) continue;

    Vec2 g{};
    for (size_t i = 0; i + 1 < st.members.size(); ++i) {
      g += st.coeff[i] * (q[st.members[i + 1]] - q[st.members[0]]);
    }
    out.candidate[s] = g;

    const double sigma = cell_area * g.norm2();
    const double lambda = (s == 0) ? kWenoLambdaCenter : 1.0;
    wraw[s] = lambda / std::pow(sigma + kWenoEps, kWenoPower);
    wsum += wraw[s];
  }

  if (wsum > 0.0) {
    for (int s = 0; s < 4; ++s) {
      out.weight[s] = wraw[s] / wsum;
      out.blended += out.candidate[s] * out.weight[s];
    }
  }
  return out;
}

ReconstructionPlanes reconstruct_planes(const StencilSet& stencils, const CoarseMesh& mesh,
                                        std::span<const double> eta, std::span<const double> u,
                                        std::span<const double> v, std::span<const Wetness> tags) {
  const int nc = mesh.cell_count();
  ReconstructionPlanes planes;
  planes.grad_eta.assign(nc, Vec2{});
  planes.grad_u.assign(nc, Vec2{});
  planes.grad_v.assign(nc, Vec2{});
  for (int m = 0; m < nc; ++m) {
    // Dry cells carry no meaningful value, and every one of their stencils
    // contains themselves. Partially wet cells keep a constant own plane: a
    // sloped surface over the wet sliver claims face depths the cell cannot
    // cover, which drains it negative at the moving shoreline. Both kinds
    // still serve as stencil members for their neighbors.
    if (tags[m] != Wetness::Wet) continue;
    planes.grad_eta[m] = blend_cell(stencils, m, eta, tags, mesh.area[m]).blended;
    planes.grad_u[m] = blend_cell(stencils, m, u, tags, mesh.area[m]).blended;
    planes.grad_v[m] = blend_cell(stencils, m, v, tags, mesh.area[m]).blended;
  }
  return planes;
}

ReconstructionPlanes first_order_planes(int cell_count) {
  ReconstructionPlanes planes;
  planes.grad_eta.assign(cell_count, Vec2{});
  planes.grad_u.assign(cell_count, Vec2{});
  planes.grad_v.assign(cell_count, Vec2{});
  return planes;
}

void write_weno_debug_csv(const StencilSet& stencils, const CoarseMesh& mesh,
                          std::span<const double> q, std::span<const Wetness> tags, std::ostream& out) {
  out << "cell,w0,w1,w2,w3,gx,gy\n";
  out.precision(17);
  for (int m = 0; m < mesh.cell_count(); ++m) {
    CellBlend b = blend_cell(stencils, m, q, tags, mesh.area[m]);
    out << m;
    for (int s = 0; s < 4; ++s) out << "," << b.weight[s];
    out << "," << b.blended.x << "," << b.blended.y << "\n";
  }
}

}  // namespace subswe
