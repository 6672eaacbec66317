#include "subswe/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace subswe {

namespace {

void compute_bbox(CoarseMesh& mesh) {
  double inf = std::numeric_limits<double>::infinity();
  mesh.bbox_min = {inf, inf};
  mesh.bbox_max = {-inf, -inf};
  for (const Vec2& v : mesh.vertices) {
    mesh.bbox_min.x = std::min(mesh.bbox_min.x, v.x);
    mesh.bbox_min.y = std::min(mesh.bbox_min.y, v.y);
    mesh.bbox_max.x = std::max(mesh.bbox_max.x, v.x);
    mesh.bbox_max.y = std::max(mesh.bbox_max.y, v.y);
  }
}

struct PairHash {
  size_t operator()(const std::pair<int, int>& p) const {
    return std::hash<long long>()((static_cast<long long>(p.first) << 32) ^ p.second);
  }
};

}  // namespace

void finalize_topology(CoarseMesh& mesh, const std::map<std::pair<int, int>, int>& boundary_tags) {
  const int nc = mesh.cell_count();
  mesh.area.assign(nc, 0.0);
  mesh.centroid.assign(nc, Vec2{});
  mesh.edges.assign(nc, {});
  compute_bbox(mesh);

  for (int m = 0; m < nc; ++m) {
    const auto& c = mesh.cells[m];
    const Vec2 a = mesh.vertices[c[0]];
    const Vec2 b = mesh.vertices[c[1]];
    const Vec2 d = mesh.vertices[c[2]];
    double twice = cross(b - a, d - a);
    if (twice <= 0.0) {
      throw std::runtime_error("mesh: cell " + std::to_string(m) +
                               " is degenerate or not counterclockwise");
    }
    mesh.area[m] = 0.5 * twice;
    mesh.centroid[m] = (a + b + d) / 3.0;

    for (int i = 0; i < 3; ++i) {
      const Vec2 p = mesh.vertices[c[i]];
      const Vec2 q = mesh.vertices[c[(i + 1) % 3]];
      CellEdge& e = mesh.edges[m][i];
      Vec2 t = q - p;
      e.length = t.norm();
      if (e.length <= 0.0) {
        throw std::runtime_error("mesh: zero-length edge in cell " + std::to_string(m));
      }
      e.normal = Vec2{t.y, -t.x} / e.length;  // outward for CCW ordering
      e.midpoint = (p + q) * 0.5;
    }
  }

  // Pair interior edges by their sorted vertex indices.
  std::unordered_map<std::pair<int, int>, std::pair<int, int>, PairHash> open_edges;
  mesh.unique_edges.clear();
  for (int m = 0; m < nc; ++m) {
    for (int i = 0; i < 3; ++i) {
      int v0 = mesh.cells[m][i];
      int v1 = mesh.cells[m][(i + 1) % 3];
      auto key = std::minmax(v0, v1);
      auto it = open_edges.find(key);
      if (it == open_edges.end()) {
        open_edges.emplace(key, std::make_pair(m, i));
      } else {
        auto [m2, i2] = it->second;
        mesh.edges[m][i].neighbor = m2;
        mesh.edges[m][i].neighbor_edge = i2;
        mesh.edges[m2][i2].neighbor = m;
        mesh.edges[m2][i2].neighbor_edge = i;
        MeshEdge ue;
        ue.cell_l = m2;
        ue.edge_l = i2;
        ue.cell_r = m;
        ue.edge_r = i;
        mesh.unique_edges.push_back(ue);
        open_edges.erase(it);
      }
    }
  }
  for (const auto& [key, owner] : open_edges) {
    MeshEdge ue;
    ue.cell_l = owner.first;
    ue.edge_l = owner.second;
    auto it = boundary_tags.find(key);
    ue.boundary_tag = (it != boundary_tags.end()) ? it->second : 0;
    mesh.edges[owner.first][owner.second].boundary_tag = ue.boundary_tag;
    mesh.unique_edges.push_back(ue);
  }
  // Deterministic ordering independent of hash iteration.
  std::sort(mesh.unique_edges.begin(), mesh.unique_edges.end(), [](const MeshEdge& a, const MeshEdge& b) {
    if (a.cell_l != b.cell_l) return a.cell_l < b.cell_l;
    return a.edge_l < b.edge_l;
  });
}

CoarseMesh build_rect_mesh_n(double x0, double x1, double y0, double y1, int nx, int ny) {
  if (!(x1 > x0) || !(y1 > y0)) {
    throw std::runtime_error("build_rect_mesh: degenerate domain extents");
  }
  if (nx < 1 || ny < 1) {
    throw std::runtime_error("build_rect_mesh: cell counts must be positive");
  }
  CoarseMesh mesh;
  const double dx = (x1 - x0) / nx;
  const double dy = (y1 - y0) / ny;
  mesh.vertices.reserve(static_cast<size_t>(nx + 1) * (ny + 1));
  for (int j = 0; j <= ny; ++j) {
    for (int i = 0; i <= nx; ++i) {
      mesh.vertices.push_back({x0 + i * dx, y0 + j * dy});
    }
  }
  auto vid = [nx](int i, int j) { return j * (nx + 1) + i; };
  mesh.cells.reserve(static_cast<size_t>(nx) * ny * 2);
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      int v00 = vid(i, j), v10 = vid(i + 1, j), v01 = vid(i, j + 1), v11 = vid(i + 1, j + 1);
      mesh.cells.push_back({v00, v10, v11});
      mesh.cells.push_back({v00, v11, v01});
    }
  }

  std::map<std::pair<int, int>, int> tags;
  for (int i = 0; i < nx; ++i) {
    tags[std::minmax(vid(i, 0), vid(i + 1, 0))] = kTagSouth;
    tags[std::minmax(vid(i, ny), vid(i + 1, ny))] = kTagNorth;
  }
  for (int j = 0; j < ny; ++j) {
    tags[std::minmax(vid(0, j), vid(0, j + 1))] = kTagWest;
    tags[std::minmax(vid(nx, j), vid(nx, j + 1))] = kTagEast;
  }
  finalize_topology(mesh, tags);
  mesh.tag_names = {{kTagWest, "W"}, {kTagEast, "E"}, {kTagSouth, "S"}, {kTagNorth, "N"}};
  return mesh;
}

CoarseMesh build_rect_mesh(double x0, double x1, double y0, double y1, double target_edge) {
  if (!(target_edge > 0.0)) {
    throw std::runtime_error("build_rect_mesh: target edge length must be positive");
  }
  if (!(x1 > x0) || !(y1 > y0)) {
    throw std::runtime_error("build_rect_mesh: degenerate domain extents");
  }
  int nx = std::max(1, static_cast<int>(std::lround((x1 - x0) / target_edge)));
  int ny = std::max(1, static_cast<int>(std::lround((y1 - y0) / target_edge)));
  return build_rect_mesh_n(x0, x1, y0, y1, nx, ny);
}

namespace {

// Welds nearly-coincident points; returns the representative index per input point.
std::vector<int> weld_points(const std::vector<Vec2>& pts, double tol, std::vector<Vec2>& out) {
  std::vector<int> remap(pts.size(), -1);
  struct CellHash {
    size_t operator()(const std::pair<long long, long long>& p) const {
      return std::hash<long long>()(p.first * 73856093LL ^ p.second * 19349663LL);
    }
  };
  std::unordered_map<std::pair<long long, long long>, std::vector<int>, CellHash> grid;
  const double cell = std::max(tol, 1e-300);
  for (size_t n = 0; n < pts.size(); ++n) {
    long long gx = static_cast<long long>(std::floor(pts[n].x / cell));
    long long gy = static_cast<long long>(std::floor(pts[n].y / cell));
    int found = -1;
    for (long long ix = gx - 1; ix <= gx + 1 && found < 0; ++ix) {
      for (long long iy = gy - 1; iy <= gy + 1 && found < 0; ++iy) {
        auto it = grid.find({ix, iy});
        if (it == grid.end()) continue;
        for (int cand : it->second) {
          if ((out[cand] - pts[n]).norm() <= tol) {
            found = cand;
            break;
          }
        }
      }
    }
    if (found >= 0) {
      remap[n] = found;
    } else {
      remap[n] = static_cast<int>(out.size());
      out.push_back(pts[n]);
      grid[{gx, gy}].push_back(remap[n]);
    }
  }
  return remap;
}

}  // namespace

CoarseMesh load_gmsh(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("load_gmsh: cannot open " + path);
  }

  std::vector<Vec2> raw_nodes;
  std::unordered_map<long long, int> node_index;  // gmsh id -> raw index
  struct RawTri {
    int v[3];
  };
  struct RawLine {
    int v[2];
    int tag;
  };
  std::vector<RawTri> tris;
  std::vector<RawLine> lines;
  std::map<int, std::string> physical_names;

  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind("$MeshFormat", 0) == 0) {
      std::getline(in, line);
      std::istringstream fs(line);
      double version = 0;
      int file_type = 0, data_size = 0;
      fs >> version >> file_type >> data_size;
      if (std::abs(version - 2.2) > 1e-9 || file_type != 0) {
        throw std::runtime_error("load_gmsh: unsupported MSH version (need 2.2 ASCII)");
      }
    } else if (line.rfind("$PhysicalNames", 0) == 0) {
      std::getline(in, line);
      int n = std::stoi(line);
      for (int k = 0; k < n; ++k) {
        std::getline(in, line);
        std::istringstream ls(line);
        int dim = 0, id = 0;
        std::string name;
        ls >> dim >> id;
        std::getline(ls, name);
        auto first = name.find('"');
        auto last = name.rfind('"');
        if (first != std::string::npos && last > first) {
          name = name.substr(first + 1, last - first - 1);
        }
        physical_names[id] = name;
      }
    } else if (line.rfind("$Nodes", 0) == 0) {
      std::getline(in, line);
      long long n = std::stoll(line);
      for (long long k = 0; k < n; ++k) {
        std::getline(in, line);
        std::istringstream ls(line);
        long long id;
        double x, y, z;
        if (!(ls >> id >> x >> y >> z)) {
          throw std::runtime_error("load_gmsh: malformed node line");
        }
        node_index[id] = static_cast<int>(raw_nodes.size());
        raw_nodes.push_back({x, y});
      }
    } else if (line.rfind("$Elements", 0) == 0) {
      std::getline(in, line);
      long long n = std::stoll(line);
      for (long long k = 0; k < n; ++k) {
        std::getline(in, line);
        std::istringstream ls(line);
        long long id;
        int type, ntags;
        ls >> id >> type >> ntags;
        std::vector<int> tags(ntags);
        for (int t = 0; t < ntags; ++t) ls >> tags[t];
        auto read_node = [&](long long& out_id) {
          if (!(ls >> out_id)) throw std::runtime_error("load_gmsh: malformed element line");
        };
        if (type == 2) {  // 3-node triangle
          RawTri tri{};
          for (int v = 0; v < 3; ++v) {
            long long nid;
            read_node(nid);
            auto it = node_index.find(nid);
            if (it == node_index.end()) {
              throw std::runtime_error("load_gmsh: element references undefined node " + std::to_string(nid));
            }
            tri.v[v] = it->second;
          }
          tris.push_back(tri);
        } else if (type == 1) {  // 2-node line
          RawLine bl{};
          bl.tag = ntags > 0 ? tags[0] : 0;
          for (int v = 0; v < 2; ++v) {
            long long nid;
            read_node(nid);
            auto it = node_index.find(nid);
            if (it == node_index.end()) {
              throw std::runtime_error("load_gmsh: element references undefined node " + std::to_string(nid));
            }
            bl.v[v] = it->second;
          }
          lines.push_back(bl);
        } else if (type == 15) {
          // point elements carry no mesh information here
        } else {
          throw std::runtime_error("load_gmsh: unsupported element type " + std::to_string(type) +
                                   " (only 3-node triangles are handled)");
        }
      }
    }
  }
  if (tris.empty()) {
    throw std::runtime_error("load_gmsh: no triangle elements in " + path);
  }

  double inf = std::numeric_limits<double>::infinity();
  Vec2 lo{inf, inf}, hi{-inf, -inf};
  for (const Vec2& p : raw_nodes) {
    lo.x = std::min(lo.x, p.x);
    lo.y = std::min(lo.y, p.y);
    hi.x = std::max(hi.x, p.x);
    hi.y = std::max(hi.y, p.y);
  }
  const double weld_tol = 1e-9 * (hi - lo).norm();

  CoarseMesh mesh;
  std::vector<int> remap = weld_points(raw_nodes, weld_tol, mesh.vertices);

  mesh.cells.reserve(tris.size());
  for (const RawTri& t : tris) {
    std::array<int, 3> c = {remap[t.v[0]], remap[t.v[1]], remap[t.v[2]]};
    const Vec2 a = mesh.vertices[c[0]], b = mesh.vertices[c[1]], d = mesh.vertices[c[2]];
    if (cross(b - a, d - a) < 0.0) std::swap(c[1], c[2]);  // enforce CCW
    mesh.cells.push_back(c);
  }

  std::map<std::pair<int, int>, int> boundary_tags;
  for (const RawLine& l : lines) {
    boundary_tags[std::minmax(remap[l.v[0]], remap[l.v[1]])] = l.tag;
  }

  finalize_topology(mesh, boundary_tags);
  mesh.tag_names = physical_names;
  return mesh;
}

void write_gmsh(const CoarseMesh& mesh, std::ostream& out) {
  out << "$MeshFormat\n2.2 0 8\n$EndMeshFormat\n";
  if (!mesh.tag_names.empty()) {
    out << "$PhysicalNames\n" << mesh.tag_names.size() << "\n";
    for (const auto& [tag, name] : mesh.tag_names) {
      out << "1 " << tag << " \"" << name << "\"\n";
    }
    out << "$EndPhysicalNames\n";
  }
  out << "$Nodes\n" << mesh.vertices.size() << "\n";
  out.precision(17);
  for (size_t i = 0; i < mesh.vertices.size(); ++i) {
    out << (i + 1) << " " << mesh.vertices[i].x << " " << mesh.vertices[i].y << " 0\n";
  }
  out << "$EndNodes\n";

  size_t nbdry = 0;
  for (const MeshEdge& e : mesh.unique_edges) {
    if (e.cell_r == kNoNeighbor) ++nbdry;
  }
  out << "$Elements\n" << (nbdry + mesh.cells.size()) << "\n";
  long long id = 1;
  for (const MeshEdge& e : mesh.unique_edges) {
    if (e.cell_r != kNoNeighbor) continue;
    const auto& c = mesh.cells[e.cell_l];
    int v0 = c[e.edge_l], v1 = c[(e.edge_l + 1) % 3];
    out << id++ << " 1 2 " << e.boundary_tag << " " << e.boundary_tag << " " << (v0 + 1) << " " << (v1 + 1)
        << "\n";
  }
  for (const auto& c : mesh.cells) {
    out << id++ << " 2 2 0 0 " << (c[0] + 1) << " " << (c[1] + 1) << " " << (c[2] + 1) << "\n";
  }
  out << "$EndElements\n";
}

void write_mesh_summary_csv(const CoarseMesh& mesh, std::ostream& out) {
  out << "cell,cx,cy,area,neighbor0,neighbor1,neighbor2\n";
  out.precision(17);
  for (int m = 0; m < mesh.cell_count(); ++m) {
    out << m << "," << mesh.centroid[m].x << "," << mesh.centroid[m].y << "," << mesh.area[m];
    for (int i = 0; i < 3; ++i) {
      out << "," << mesh.edges[m][i].neighbor;
    }
    out << "\n";
  }
}

std::vector<std::string> validate_mesh(const CoarseMesh& mesh) {
  std::vector<std::string> issues;
  const int nc = mesh.cell_count();
  for (int m = 0; m < nc; ++m) {
    if (!(mesh.area[m] > 0.0)) {
      issues.push_back("cell " + std::to_string(m) + ": non-positive area");
    }
    Vec2 closure{};
    for (int i = 0; i < 3; ++i) {
      const CellEdge& e = mesh.edges[m][i];
      closure += e.normal * e.length;
      if (dot(e.normal, e.midpoint - mesh.centroid[m]) <= 0.0) {
        issues.push_back("cell " + std::to_string(m) + " edge " + std::to_string(i) +
                         ": normal not outward");
      }
      if (e.neighbor != kNoNeighbor) {
        const CellEdge& back = mesh.edges[e.neighbor][e.neighbor_edge];
        if (back.neighbor != m) {
          issues.push_back("cell " + std::to_string(m) + " edge " + std::to_string(i) +
                           ": asymmetric neighbor link");
        }
      }
    }
    double scale = 0.0;
    for (int i = 0; i < 3; ++i) scale += mesh.edges[m][i].length;
    if (closure.norm() > 1e-12 * scale) {
      issues.push_back("cell " + std::to_string(m) + ": edge normals do not close");
    }
  }
  return issues;
}

}  // namespace subswe
