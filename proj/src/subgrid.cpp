#include "subswe/subgrid.hpp"

#include <cmath>
#include <stdexcept>

namespace subswe {

SubgridPartition subdivide(const CoarseMesh& mesh, int n_sg) {
  if (n_sg < 1) {
    throw std::runtime_error("subdivide: n_sg must be >= 1");
  }
  const int n = n_sg;
  const int per_cell = n * n;
  const int nc = mesh.cell_count();

  SubgridPartition part;
  part.n_sg = n;
  part.per_cell = per_cell;
  part.subcell_area.resize(static_cast<size_t>(nc) * per_cell);
  part.subcell_centroid.resize(static_cast<size_t>(nc) * per_cell);
  part.edge_faces.resize(nc);

  // Local index table for the lattice: up-triangles (a,b) with a+b <= n-1,
  // down-triangles (a,b) with a+b <= n-2, enumerated row by row.
  std::vector<int> up_index(static_cast<size_t>(n) * n, -1);
  std::vector<int> down_index(static_cast<size_t>(n) * n, -1);
  {
    int k = 0;
    for (int b = 0; b < n; ++b) {
      for (int a = 0; a + b <= n - 1; ++a) up_index[b * n + a] = k++;
      for (int a = 0; a + b <= n - 2; ++a) down_index[b * n + a] = k++;
    }
  }

  for (int m = 0; m < nc; ++m) {
    const auto& c = mesh.cells[m];
    const Vec2 v0 = mesh.vertices[c[0]];
    const Vec2 e1 = mesh.vertices[c[1]] - v0;
    const Vec2 e2 = mesh.vertices[c[2]] - v0;
    const double sub_area = mesh.area[m] / per_cell;

    for (int b = 0; b < n; ++b) {
      for (int a = 0; a + b <= n - 1; ++a) {
        int k = up_index[b * n + a];
        part.subcell_area[part.global_index(m, k)] = sub_area;
        part.subcell_centroid[part.global_index(m, k)] =
            v0 + e1 * ((3.0 * a + 1.0) / (3.0 * n)) + e2 * ((3.0 * b + 1.0) / (3.0 * n));
      }
      for (int a = 0; a + b <= n - 2; ++a) {
        int k = down_index[b * n + a];
        part.subcell_area[part.global_index(m, k)] = sub_area;
        part.subcell_centroid[part.global_index(m, k)] =
            v0 + e1 * ((3.0 * a + 2.0) / (3.0 * n)) + e2 * ((3.0 * b + 2.0) / (3.0 * n));
      }
    }

    // Subgrid faces along each coarse edge, ordered in the edge direction.
    for (int i = 0; i < 3; ++i) {
      const Vec2 p = mesh.vertices[c[i]];
      const Vec2 q = mesh.vertices[c[(i + 1) % 3]];
      const double seg_len = mesh.edges[m][i].length / n;
      auto& faces = part.edge_faces[m][i];
      faces.resize(n);
      for (int r = 0; r < n; ++r) {
        SubgridFace f;
        f.length = seg_len;
        f.midpoint = p + (q - p) * ((r + 0.5) / n);
        switch (i) {
          case 0: f.subcell = up_index[0 * n + r]; break;            // row b = 0
          case 1: f.subcell = up_index[r * n + (n - 1 - r)]; break;  // hypotenuse a+b = n-1
          case 2: f.subcell = up_index[(n - 1 - r) * n + 0]; break;  // column a = 0
        }
        faces[r] = f;
      }
    }
  }
  return part;
}

BathymetryField sample_bathymetry(const CoarseMesh& mesh, const SubgridPartition& part,
                                  const std::function<double(double, double)>& field) {
  BathymetryField bath;
  bath.d.resize(part.subcell_count());
  bath.dbar.assign(mesh.cell_count(), 0.0);
  for (int m = 0; m < mesh.cell_count(); ++m) {
    double sum = 0.0;
    for (int k = 0; k < part.per_cell; ++k) {
      const int l = part.global_index(m, k);
      const Vec2 x = part.subcell_centroid[l];
      const double value = field(x.x, x.y);
      if (!std::isfinite(value)) {
        throw std::runtime_error("sample_bathymetry: non-finite sample");
      }
      bath.d[l] = value;
      sum += part.subcell_area[l] * value;
    }
    bath.dbar[m] = sum / mesh.area[m];
  }
  return bath;
}

}  // namespace subswe
