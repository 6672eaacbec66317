#include <doctest.h>

#include <cmath>

#include "subswe/subgrid.hpp"

using namespace subswe;

TEST_CASE("subdivide: n_sg = 3 gives 9 subcells and 3 faces per edge") {
  const CoarseMesh mesh = build_rect_mesh(0.0, 1.0, 0.0, 1.0, 1.0);
  const SubgridPartition part = subdivide(mesh, 3);
  CHECK(part.per_cell == 9);
  for (int m = 0; m < mesh.cell_count(); ++m) {
    for (int i = 0; i < 3; ++i) CHECK(part.edge_faces[m][i].size() == 3);
  }
}

TEST_CASE("subdivide: n_sg = 1 degenerates to the coarse mesh") {
  const CoarseMesh mesh = build_rect_mesh(0.0, 2.0, 0.0, 1.0, 0.5);
  const SubgridPartition part = subdivide(mesh, 1);
  CHECK(part.per_cell == 1);
  for (int m = 0; m < mesh.cell_count(); ++m) {
    CHECK(part.subcell_area[m] == doctest::Approx(mesh.area[m]).epsilon(1e-14));
    CHECK((part.subcell_centroid[m] - mesh.centroid[m]).norm() < 1e-14);
    for (int i = 0; i < 3; ++i) {
      CHECK(part.edge_faces[m][i][0].length ==
            doctest::Approx(mesh.edges[m][i].length).epsilon(1e-14));
    }
  }
}

TEST_CASE("subdivide: areas and face lengths partition the parent exactly") {
  const CoarseMesh mesh = build_rect_mesh(-1.0, 3.0, 0.5, 2.5, 0.8);
  for (int n : {1, 2, 4, 7}) {
    const SubgridPartition part = subdivide(mesh, n);
    for (int m = 0; m < mesh.cell_count(); ++m) {
      double sum = 0.0;
      for (int k = 0; k < part.per_cell; ++k) sum += part.subcell_area[part.global_index(m, k)];
      CHECK(sum == doctest::Approx(mesh.area[m]).epsilon(1e-12));
      for (int i = 0; i < 3; ++i) {
        double len = 0.0;
        for (const SubgridFace& f : part.edge_faces[m][i]) len += f.length;
        CHECK(len == doctest::Approx(mesh.edges[m][i].length).epsilon(1e-12));
        // n_sg = 4 example: per-face lengths are |E|/4 each.
        for (const SubgridFace& f : part.edge_faces[m][i]) {
          CHECK(f.length == doctest::Approx(mesh.edges[m][i].length / n).epsilon(1e-12));
        }
      }
    }
  }
}

TEST_CASE("subdivide: area-weighted subcell centroids recover the coarse centroid") {
  const CoarseMesh mesh = build_rect_mesh(0.0, 1.0, 0.0, 1.0, 0.5);
  const SubgridPartition part = subdivide(mesh, 5);
  for (int m = 0; m < mesh.cell_count(); ++m) {
    Vec2 acc{};
    for (int k = 0; k < part.per_cell; ++k) {
      const int l = part.global_index(m, k);
      acc += part.subcell_centroid[l] * part.subcell_area[l];
    }
    CHECK((acc / mesh.area[m] - mesh.centroid[m]).norm() < 1e-13);
  }
}

TEST_CASE("subdivide: paired faces across interior edges coincide with opposite order") {
  const CoarseMesh mesh = build_rect_mesh(0.0, 2.0, 0.0, 1.0, 0.5);
  const int n = 4;
  const SubgridPartition part = subdivide(mesh, n);
  const double tol = 1e-9 * mesh.domain_diameter();
  for (const MeshEdge& e : mesh.unique_edges) {
    if (e.cell_r == kNoNeighbor) continue;
    for (int r = 0; r < n; ++r) {
      const SubgridFace& fl = part.edge_faces[e.cell_l][e.edge_l][r];
      const SubgridFace& fr = part.edge_faces[e.cell_r][e.edge_r][n - 1 - r];
      CHECK((fl.midpoint - fr.midpoint).norm() < tol);
      CHECK(fl.length == doctest::Approx(fr.length).epsilon(1e-12));
    }
    // Opposite normals on the shared edge.
    const Vec2 nl = mesh.edges[e.cell_l][e.edge_l].normal;
    const Vec2 nr = mesh.edges[e.cell_r][e.edge_r].normal;
    CHECK((nl + nr).norm() < 1e-12);
  }
}

TEST_CASE("subdivide: face-adjacent subcells touch their coarse edge") {
  const CoarseMesh mesh = build_rect_mesh(0.0, 1.0, 0.0, 1.0, 1.0);
  for (int n : {2, 3, 5}) {
    const SubgridPartition part = subdivide(mesh, n);
    for (int m = 0; m < mesh.cell_count(); ++m) {
      for (int i = 0; i < 3; ++i) {
        for (const SubgridFace& f : part.edge_faces[m][i]) {
          const Vec2 c = part.subcell_centroid[part.global_index(m, f.subcell)];
          // The adjacent subcell centroid sits one third of a sub-edge height
          // from the face midpoint, well under a full subcell diameter.
          CHECK((c - f.midpoint).norm() < 2.0 * mesh.edges[m][i].length / n);
          // And the face midpoint lies on the coarse edge line.
          const Vec2 p = mesh.vertices[mesh.cells[m][i]];
          const Vec2 q = mesh.vertices[mesh.cells[m][(i + 1) % 3]];
          const double off = std::abs(cross(q - p, f.midpoint - p)) / (q - p).norm();
          CHECK(off < 1e-12);
        }
      }
    }
  }
}

TEST_CASE("subdivide: work count is 3 * Nc * n_sg faces on coarse edges") {
  const CoarseMesh mesh = build_rect_mesh(0.0, 2.0, 0.0, 1.0, 0.25);
  for (int n : {1, 2, 5}) {
    const SubgridPartition part = subdivide(mesh, n);
    long long count = 0;
    for (int m = 0; m < mesh.cell_count(); ++m) {
      for (int i = 0; i < 3; ++i) count += static_cast<long long>(part.edge_faces[m][i].size());
    }
    CHECK(count == 3LL * mesh.cell_count() * n);
  }
}

TEST_CASE("subdivide rejects n_sg < 1") {
  const CoarseMesh mesh = build_rect_mesh(0.0, 1.0, 0.0, 1.0, 1.0);
  CHECK_THROWS(subdivide(mesh, 0));
}

TEST_CASE("sample_bathymetry: constant and linear fields") {
  const CoarseMesh mesh = build_rect_mesh(0.0, 2.0, 0.0, 1.0, 0.5);
  const SubgridPartition part = subdivide(mesh, 3);

  const BathymetryField flat = sample_bathymetry(mesh, part, [](double, double) { return 2.5; });
  for (double d : flat.d) CHECK(d == 2.5);
  for (double db : flat.dbar) CHECK(db == doctest::Approx(2.5).epsilon(1e-14));

  // Centroid sampling of a linear field averages exactly to the centroid value.
  const BathymetryField lin = sample_bathymetry(mesh, part, [](double x, double) { return x; });
  for (int m = 0; m < mesh.cell_count(); ++m) {
    CHECK(lin.dbar[m] == doctest::Approx(mesh.centroid[m].x).epsilon(1e-12));
  }
}

TEST_CASE("sample_bathymetry: non-finite sample rejected") {
  const CoarseMesh mesh = build_rect_mesh(0.0, 1.0, 0.0, 1.0, 1.0);
  const SubgridPartition part = subdivide(mesh, 1);
  CHECK_THROWS(sample_bathymetry(mesh, part, [](double, double) { return std::nan(""); }));
}

TEST_CASE("sample_bathymetry: bump minimum resolved on the benchmark mesh") {
  // Gaussian-bump bed; the subgrid sampling must come within 1e-3 of the true
  // minimum 0.2 at (0.9, 0.5). Oracle: dense evaluation of the formula.
  auto bump = [](double x, double y) {
    return 1.0 - 0.8 * std::exp(-5.0 * (x - 0.9) * (x - 0.9) - 50.0 * (y - 0.5) * (y - 0.5));
  };
  double dense_min = 1e300;
  for (int i = 0; i <= 2000; ++i) {
    for (int j = 800; j <= 1200; ++j) {
      dense_min = std::min(dense_min, bump(0.1 + 2.0 * i / 2000.0, j / 2000.0));
    }
  }
  CHECK(dense_min == doctest::Approx(0.2).epsilon(1e-6));

  const CoarseMesh mesh = build_rect_mesh(0.1, 2.1, 0.0, 1.0, 1.0 / 50.0);
  const SubgridPartition part = subdivide(mesh, 2);
  const BathymetryField bath = sample_bathymetry(mesh, part, bump);
  double sub_min = 1e300;
  for (double d : bath.d) sub_min = std::min(sub_min, d);
  CHECK(std::abs(sub_min - dense_min) < 1e-3);
}
