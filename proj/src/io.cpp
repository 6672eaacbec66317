#include "subswe/io.hpp"

namespace subswe {

namespace {

const char* tag_name(Wetness t) {
  switch (t) {
    case Wetness::Dry: return "dry";
    case Wetness::Partial: return "partial";
    case Wetness::Wet: return "wet";
  }
  return "?";
}

}  // namespace

void write_snapshot_csv(const CoarseMesh& mesh, const SimulationState& state, std::ostream& out) {
  out << "cell,x,y,h,hu,hv,eta,tag\n";
  out.precision(17);
  for (int m = 0; m < mesh.cell_count(); ++m) {
    out << m << "," << mesh.centroid[m].x << "," << mesh.centroid[m].y << "," << state.h[m] << ","
        << state.hu[m] << "," << state.hv[m] << "," << state.eta[m] << "," << tag_name(state.tag[m])
        << "\n";
  }
}

void write_snapshot_vtk(const CoarseMesh& mesh, const SimulationState& state, std::ostream& out) {
  out << "# vtk DataFile Version 2.0\n";
  out << "subswe snapshot\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  out.precision(12);
  out << "POINTS " << mesh.vertices.size() << " double\n";
  for (const Vec2& v : mesh.vertices) out << v.x << " " << v.y << " 0\n";
  out << "CELLS " << mesh.cells.size() << " " << 4 * mesh.cells.size() << "\n";
  for (const auto& c : mesh.cells) out << "3 " << c[0] << " " << c[1] << " " << c[2] << "\n";
  out << "CELL_TYPES " << mesh.cells.size() << "\n";
  for (size_t i = 0; i < mesh.cells.size(); ++i) out << "5\n";
  out << "CELL_DATA " << mesh.cells.size() << "\n";
  auto scalar = [&](const char* name, auto&& get) {
    out << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
    for (int m = 0; m < mesh.cell_count(); ++m) out << get(m) << "\n";
  };
  scalar("h", [&](int m) { return state.h[m]; });
  scalar("eta", [&](int m) { return state.eta[m]; });
  scalar("hu", [&](int m) { return state.hu[m]; });
  scalar("hv", [&](int m) { return state.hv[m]; });
  scalar("wet_tag", [&](int m) { return static_cast<double>(static_cast<int>(state.tag[m])); });
}

void write_subgrid_vtk(const CoarseMesh& mesh, const SubgridPartition& part, const BathymetryField& bath,
                       const SimulationState& state, std::ostream& out) {
  // Rebuild the lattice points per cell; points are duplicated across cells,
  // which legacy VTK accepts.
  const int n = part.n_sg;
  out << "# vtk DataFile Version 2.0\n";
  out << "subswe subgrid snapshot\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  out.precision(12);

  const int pts_per_cell = (n + 1) * (n + 2) / 2;
  out << "POINTS " << mesh.cell_count() * pts_per_cell << " double\n";
  std::vector<int> lattice_id(static_cast<size_t>(n + 1) * (n + 1), -1);
  {
    int id = 0;
    for (int b = 0; b <= n; ++b) {
      for (int a = 0; a + b <= n; ++a) lattice_id[b * (n + 1) + a] = id++;
    }
  }
  for (int m = 0; m < mesh.cell_count(); ++m) {
    const auto& c = mesh.cells[m];
    const Vec2 v0 = mesh.vertices[c[0]];
    const Vec2 e1 = mesh.vertices[c[1]] - v0;
    const Vec2 e2 = mesh.vertices[c[2]] - v0;
    for (int b = 0; b <= n; ++b) {
      for (int a = 0; a + b <= n; ++a) {
        const Vec2 p = v0 + e1 * (static_cast<double>(a) / n) + e2 * (static_cast<double>(b) / n);
        out << p.x << " " << p.y << " 0\n";
      }
    }
  }

  const int tris = mesh.cell_count() * part.per_cell;
  out << "CELLS " << tris << " " << 4 * tris << "\n";
  for (int m = 0; m < mesh.cell_count(); ++m) {
    const int off = m * pts_per_cell;
    auto pid = [&](int a, int b) { return off + lattice_id[b * (n + 1) + a]; };
    // Order must match the subdivision enumeration (ups then downs per row).
    for (int b = 0; b < n; ++b) {
      for (int a = 0; a + b <= n - 1; ++a) {
        out << "3 " << pid(a, b) << " " << pid(a + 1, b) << " " << pid(a, b + 1) << "\n";
      }
      for (int a = 0; a + b <= n - 2; ++a) {
        out << "3 " << pid(a + 1, b) << " " << pid(a + 1, b + 1) << " " << pid(a, b + 1) << "\n";
      }
    }
  }
  out << "CELL_TYPES " << tris << "\n";
  for (int i = 0; i < tris; ++i) out << "5\n";
  out << "CELL_DATA " << tris << "\n";
  out << "SCALARS depth double 1\nLOOKUP_TABLE default\n";
  for (int l = 0; l < part.subcell_count(); ++l) out << state.sub_h[l] << "\n";
  out << "SCALARS bathymetry double 1\nLOOKUP_TABLE default\n";
  for (int l = 0; l < part.subcell_count(); ++l) out << bath.d[l] << "\n";
}

void write_probe_csv(const ProbeSeries& probe, std::ostream& out) {
  out << "t,h,hu,hv\n";
  out.precision(17);
  for (size_t i = 0; i < probe.t.size(); ++i) {
    out << probe.t[i] << "," << probe.h[i] << "," << probe.hu[i] << "," << probe.hv[i] << "\n";
  }
}

void write_mass_csv(const std::vector<MassSample>& samples, std::ostream& out) {
  out << "t,volume,residual_cum,boundary_in_cum\n";
  out.precision(17);
  for (const MassSample& s : samples) {
    out << s.t << "," << s.volume << "," << s.residual_cum << "," << s.boundary_in_cum << "\n";
  }
}

}  // namespace subswe
