#include "subswe/harness.hpp"

#include <chrono>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace subswe {

double thacker_omega(const ThackerParams& p) { return std::sqrt(8.0 * kGravity * p.b0) / p.a; }

double thacker_amplitude_A(const ThackerParams& p) {
  return (p.a * p.a - p.r0 * p.r0) / (p.a * p.a + p.r0 * p.r0);
}

std::array<double, 3> thacker_exact_eta_uv(const ThackerParams& p, Vec2 x, double t) {
  const double A = thacker_amplitude_A(p);
  const double w = thacker_omega(p);
  const double cx = p.length / 2.0, cy = p.length / 2.0;
  const double r2 = (x.x - cx) * (x.x - cx) + (x.y - cy) * (x.y - cy);
  const double denom = 1.0 - A * std::cos(w * t);
  const double s = std::sqrt(1.0 - A * A);
  const double eta =
      p.b0 * (s / denom - 1.0 - (r2 / (p.a * p.a)) * ((1.0 - A * A) / (denom * denom) - 1.0));
  const double fac = 0.5 * w * A * std::sin(w * t) / denom;
  return {eta, fac * (x.x - cx), fac * (x.y - cy)};
}

double macdonald_depth(double x) { return 9.0 / 8.0 + 0.25 * std::sin(M_PI * x / 500.0); }

namespace {

constexpr double kMacLength = 5000.0;
constexpr double kMacDischarge = 2.0;
constexpr double kMacManningN = 0.03;  // n = 1/M

double macdonald_depth_dx(double x) { return 0.25 * (M_PI / 500.0) * std::cos(M_PI * x / 500.0); }

// Steady momentum balance solved for the bed slope:
//   z'(x) = (Fr^2 - 1) h'(x) - n^2 q^2 / h^(10/3).
double bed_slope(double x) {
  const double h = macdonald_depth(x);
  const double fr2 = kMacDischarge * kMacDischarge / (kGravity * h * h * h);
  return (fr2 - 1.0) * macdonald_depth_dx(x) -
         kMacManningN * kMacManningN * kMacDischarge * kMacDischarge / std::pow(h, 10.0 / 3.0);
}

}  // namespace

const std::vector<double>& macdonald_bed_table() {
  static const std::vector<double> table = [] {
    const int n = static_cast<int>(kMacLength);  // 1 m spacing
    std::vector<double> z(n + 1);
    z[0] = 0.0;
    const double dx = kMacLength / n;
    for (int i = 0; i < n; ++i) {
      const double x = i * dx;
      const double k1 = bed_slope(x);
      const double k2 = bed_slope(x + 0.5 * dx);
      const double k3 = bed_slope(x + 0.5 * dx);
      const double k4 = bed_slope(x + dx);
      z[i + 1] = z[i] + dx / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    const double z_end = z[n];
    for (double& v : z) v -= z_end;  // datum: z(L) = 0
    return z;
  }();
  return table;
}

double macdonald_bathymetry(double x) {
  const auto& z = macdonald_bed_table();
  const double xc = std::clamp(x, 0.0, kMacLength);
  const double pos = xc;  // 1 m spacing
  const int i = std::min(static_cast<int>(pos), static_cast<int>(z.size()) - 2);
  const double f = pos - i;
  return -((1.0 - f) * z[i] + f * z[i + 1]);
}

double macdonald_momentum_residual(double x) {
  const double dx = 1.0;
  auto flux = [](double xx) {
    const double h = macdonald_depth(xx);
    return kMacDischarge * kMacDischarge / h + 0.5 * kGravity * h * h;
  };
  const double lhs = (flux(x + dx) - flux(x - dx)) / (2.0 * dx);
  const double zp = (-macdonald_bathymetry(x + dx) + macdonald_bathymetry(x - dx)) / (2.0 * dx);
  const double h = macdonald_depth(x);
  const double fric = kGravity * kMacManningN * kMacManningN * kMacDischarge * kMacDischarge /
                      std::pow(h, 7.0 / 3.0);
  return lhs + kGravity * h * zp + fric;
}

namespace {

Case well_balance_base(double target_edge, double eta_level, double eps) {
  Case c;
  c.x0 = 0.1;
  c.x1 = 2.1;
  c.y0 = 0.0;
  c.y1 = 1.0;
  c.target_edge = target_edge;
  c.bathymetry = [](double x, double y) {
    return 1.0 - 0.8 * std::exp(-5.0 * (x - 0.9) * (x - 0.9) - 50.0 * (y - 0.5) * (y - 0.5));
  };
  c.eta0 = [eta_level, eps](double x, double) { return x <= 0.15 ? eta_level + eps : eta_level; };
  c.vel0 = [](double, double) { return Vec2{0.0, 0.0}; };
  c.boundary.by_tag[kTagWest] = {BcKind::Wall, 0.0, 0};
  c.boundary.by_tag[kTagEast] = {BcKind::Wall, 0.0, 0};
  c.boundary.by_tag[kTagSouth] = {BcKind::Periodic, 0.0, kTagNorth};
  c.boundary.by_tag[kTagNorth] = {BcKind::Periodic, 0.0, kTagSouth};
  return c;
}

}  // namespace

Case case_lake_at_rest(double target_edge) {
  Case c = well_balance_base(target_edge, -0.4, 0.0);
  c.name = "lake_at_rest";
  c.fixed_dt = 1e-3;
  c.t_end = 0.1;  // 100 fixed steps
  return c;
}

Case case_small_perturbation(double target_edge) {
  Case c = well_balance_base(target_edge, 0.0, 0.01);
  c.name = "small_perturbation";
  c.t_end = 0.48;
  c.snapshot_times = {0.12, 0.24, 0.36, 0.48};
  return c;
}

Case case_macdonald(double target_edge, int width_rows) {
  Case c;
  c.name = "macdonald";
  c.x0 = 0.0;
  c.x1 = kMacLength;
  c.y0 = 0.0;
  c.y1 = width_rows * target_edge;
  c.target_edge = target_edge;
  c.bathymetry = [](double x, double) { return macdonald_bathymetry(x); };
  const double eta_lake = macdonald_depth(kMacLength) - macdonald_bathymetry(kMacLength);
  c.eta0 = [eta_lake](double, double) { return eta_lake; };
  c.vel0 = [](double, double) { return Vec2{0.0, 0.0}; };
  c.manning = 1.0 / kMacManningN;
  c.boundary.by_tag[kTagWest] = {BcKind::Discharge, kMacDischarge, 0};
  c.boundary.by_tag[kTagEast] = {BcKind::FixedDepth, macdonald_depth(kMacLength), 0};
  c.boundary.by_tag[kTagSouth] = {BcKind::Periodic, 0.0, kTagNorth};
  c.boundary.by_tag[kTagNorth] = {BcKind::Periodic, 0.0, kTagSouth};
  c.t_end = 100.0 * 60.0;
  c.reference = [](Vec2 x, double) {
    return std::array<double, 3>{macdonald_depth(x.x), kMacDischarge, 0.0};
  };
  return c;
}

Case case_thacker(const ThackerParams& params, double target_edge) {
  Case c;
  c.name = "thacker";
  c.x0 = 0.0;
  c.x1 = params.length;
  c.y0 = 0.0;
  c.y1 = params.length;
  c.target_edge = target_edge;
  const ThackerParams p = params;
  c.bathymetry = [p](double x, double y) {
    const double cx = p.length / 2.0;
    const double r2 = (x - cx) * (x - cx) + (y - cx) * (y - cx);
    return p.b0 * (1.0 - r2 / (p.a * p.a));
  };
  c.eta0 = [p](double x, double y) { return thacker_exact_eta_uv(p, {x, y}, 0.0)[0]; };
  c.vel0 = [](double, double) { return Vec2{0.0, 0.0}; };  // sin(0) = 0
  const double period = 3.0 * 2.0 * M_PI / thacker_omega(p);
  c.t_end = 5.0 * period;
  c.probes = {{2.0, 2.0}, {3.0, 2.0}};
  c.reference = [p](Vec2 x, double t) {
    const auto [eta, u, v] = thacker_exact_eta_uv(p, x, t);
    const double cx = p.length / 2.0;
    const double r2 = (x.x - cx) * (x.x - cx) + (x.y - cx) * (x.y - cx);
    const double d = p.b0 * (1.0 - r2 / (p.a * p.a));
    const double h = std::max(0.0, eta + d);
    return std::array<double, 3>{h, h * u, h * v};
  };
  return c;
}

Case case_floodplain(std::string mesh_file, double target_edge) {
  Case c;
  c.name = "floodplain";
  c.x0 = 0.0;
  c.x1 = 6000.0;
  c.y0 = 0.0;
  c.y1 = 1000.0;
  c.target_edge = target_edge;
  c.mesh_file = std::move(mesh_file);
  c.bathymetry = [](double x, double y) {
    const double shift = -3.2;
    double z = -1e-4 * (x - 6000.0) + 1e-5 * (y - 500.0) * (y - 500.0) + shift;
    const double center = 100.0 * std::sin((x + 250.0) * (2.0 * M_PI / 1000.0)) + 500.0;
    if (y >= center - 10.0 && y <= center + 10.0) {
      z = std::min(z, -1e-4 * (x - 6000.0) - 2.0 + shift);
    }
    if (x <= 500.0 || x >= 5500.0) {
      z = std::min(z, -2.0 + shift);
    }
    return -z;
  };
  c.h0 = [](double, double) { return 0.0; };
  c.vel0 = [](double, double) { return Vec2{0.0, 0.0}; };
  c.manning = 1.0 / 0.03;
  c.boundary.by_tag[kTagWest] = {BcKind::Discharge, 2.0, 0};
  c.boundary.by_tag[kTagEast] = {BcKind::Wall, 0.0, 0};
  c.boundary.by_tag[kTagSouth] = {BcKind::Wall, 0.0, 0};
  c.boundary.by_tag[kTagNorth] = {BcKind::Wall, 0.0, 0};
  c.t_end = 100.0 * 60.0;
  return c;
}

AssembledCase assemble(const Case& c, int n_sg, StepConfig config) {
  AssembledCase out;
  if (!c.mesh_file.empty()) {
    out.mesh = load_gmsh(c.mesh_file);
  } else {
    out.mesh = build_rect_mesh(c.x0, c.x1, c.y0, c.y1, c.target_edge);
  }
  out.part = subdivide(out.mesh, n_sg);
  out.bath = sample_bathymetry(out.mesh, out.part, c.bathymetry);

  const int nc = out.mesh.cell_count();
  out.h_init.assign(nc, 0.0);
  out.hu_init.assign(nc, 0.0);
  out.hv_init.assign(nc, 0.0);
  for (int m = 0; m < nc; ++m) {
    double vol = 0.0, mom_x = 0.0, mom_y = 0.0;
    for (int k = 0; k < out.part.per_cell; ++k) {
      const int l = out.part.global_index(m, k);
      const Vec2 x = out.part.subcell_centroid[l];
      double depth;
      if (c.h0) {
        depth = std::max(0.0, c.h0(x.x, x.y));
      } else {
        depth = std::max(0.0, c.eta0(x.x, x.y) + out.bath.d[l]);
      }
      const Vec2 vel = c.vel0 ? c.vel0(x.x, x.y) : Vec2{};
      vol += out.part.subcell_area[l] * depth;
      mom_x += out.part.subcell_area[l] * depth * vel.x;
      mom_y += out.part.subcell_area[l] * depth * vel.y;
    }
    out.h_init[m] = vol / out.mesh.area[m];
    out.hu_init[m] = mom_x / out.mesh.area[m];
    out.hv_init[m] = mom_y / out.mesh.area[m];
  }

  if (c.fixed_dt > 0.0) config.fixed_dt = c.fixed_dt;
  out.sim = std::make_unique<Simulation>(out.mesh, out.part, out.bath, c.boundary, config);
  out.sim->set_state(out.h_init, out.hu_init, out.hv_init);
  if (c.manning > 0.0) {
    out.sim->set_manning(std::vector<double>(out.part.subcell_count(), c.manning));
  }
  return out;
}

ErrorReport error_norms(const CoarseMesh& mesh, const SimulationState& state,
                        const std::function<std::array<double, 3>(Vec2, double)>& reference, double t) {
  ErrorReport rep;
  double sum_h = 0.0, sum_hu = 0.0;
  for (int m = 0; m < mesh.cell_count(); ++m) {
    const auto [h_e, hu_e, hv_e] = reference(mesh.centroid[m], t);
    const double eh = std::abs(state.h[m] - h_e);
    const double eu = std::abs(state.hu[m] - hu_e);
    const double ev = std::abs(state.hv[m] - hv_e);
    rep.linf_h = std::max(rep.linf_h, eh);
    rep.linf_hu = std::max({rep.linf_hu, eu, ev});
    sum_h += mesh.area[m] * eh * eh;
    sum_hu += mesh.area[m] * (eu * eu + ev * ev);
    rep.domain_area += mesh.area[m];
  }
  rep.l2_h = std::sqrt(sum_h);
  rep.l2_hu = std::sqrt(sum_hu);
  return rep;
}

ErrorReport discrete_error_norms(const CoarseMesh& mesh, const SimulationState& state,
                                 std::span<const double> h_ref, std::span<const double> hu_ref,
                                 std::span<const double> hv_ref) {
  ErrorReport rep;
  double sum_h = 0.0, sum_hu = 0.0;
  for (int m = 0; m < mesh.cell_count(); ++m) {
    const double eh = std::abs(state.h[m] - h_ref[m]);
    const double eu = std::abs(state.hu[m] - hu_ref[m]);
    const double ev = std::abs(state.hv[m] - hv_ref[m]);
    rep.linf_h = std::max(rep.linf_h, eh);
    rep.linf_hu = std::max({rep.linf_hu, eu, ev});
    sum_h += mesh.area[m] * eh * eh;
    sum_hu += mesh.area[m] * (eu * eu + ev * ev);
    rep.domain_area += mesh.area[m];
  }
  rep.l2_h = std::sqrt(sum_h);
  rep.l2_hu = std::sqrt(sum_hu);
  return rep;
}

ConvergenceTable macdonald_convergence(std::span<const double> edges, std::span<const int> n_sgs,
                                       std::span<const int> orders, double cfl) {
  ConvergenceTable table;
  for (int order : orders) {
    for (int nsg : n_sgs) {
      for (double edge : edges) {
        const Case c = case_macdonald(edge, 1);
        StepConfig cfg;
        cfg.cfl = cfl;
        cfg.order = order;
        const auto start = std::chrono::steady_clock::now();
        AssembledCase ac = assemble(c, nsg, cfg);
        RunControl ctl;
        ctl.t_end = c.t_end;
        ctl.record_mass = false;
        const RunResult res = ac.sim->run(ctl);
        if (res.aborted) {
          throw std::runtime_error("macdonald_convergence: run aborted: " + res.abort_reason);
        }
        const ErrorReport err = error_norms(ac.mesh, ac.sim->state(), c.reference, res.t);
        const double seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        table.rows.push_back({order, nsg, edge, err.l2_h, err.l2_hu, err.linf_h, res.steps, seconds});
      }
    }
  }
  return table;
}

double fitted_order(std::span<const double> edges, std::span<const double> errors) {
  // Slope of log(err) vs log(edge) by least squares.
  const size_t n = edges.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < n; ++i) {
    const double x = std::log(edges[i]);
    const double y = std::log(std::max(errors[i], 1e-300));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

void write_convergence_csv(const ConvergenceTable& table, std::ostream& out) {
  out << "order,nsg,edge,l2_h,l2_hu,linf_h,steps,seconds\n";
  out.precision(12);
  for (const ConvergenceRow& r : table.rows) {
    out << r.order << "," << r.n_sg << "," << r.edge << "," << r.l2_h << "," << r.l2_hu << ","
        << r.linf_h << "," << r.steps << "," << r.seconds << "\n";
  }
}

void write_error_csv(const ErrorReport& report, std::ostream& out) {
  out << "linf_h,l2_h,linf_hu,l2_hu,domain_area\n";
  out.precision(12);
  out << report.linf_h << "," << report.l2_h << "," << report.linf_hu << "," << report.l2_hu << ","
      << report.domain_area << "\n";
}

}  // namespace subswe
