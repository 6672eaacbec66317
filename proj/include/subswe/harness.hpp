#pragma once

#include <array>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "subswe/stepper.hpp"

namespace subswe {

/// A fully described benchmark configuration. Initial data is sampled on the
/// subgrid, so coarse averages are consistent with the clipped depths.
struct Case {
  std::string name;
  double x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  double target_edge = 0.1;
  std::string mesh_file;  // Gmsh MSH 2.2; wins over the built-in mesher

  std::function<double(double, double)> bathymetry;  // d, positive down
  std::function<double(double, double)> eta0;        // initial free surface
  std::function<Vec2(double, double)> vel0;          // initial velocity
  std::function<double(double, double)> h0;          // depth-based init, wins over eta0

  double manning = 0.0;  // constant M (m^(1/3)/s); 0 disables friction
  BoundarySpec boundary;
  double t_end = 0.0;
  double fixed_dt = 0.0;
  std::vector<double> snapshot_times;
  std::vector<Vec2> probes;

  /// (x, t) -> exact (h, hu, hv); null when the case has no analytic solution.
  std::function<std::array<double, 3>(Vec2, double)> reference;
};

struct ThackerParams {
  double a = 1.0;   // paraboloid radius scale (m)
  double b0 = 0.1;  // center depth (m)
  double r0 = 0.8;  // initial shoreline radius (m)
  double length = 4.0;
};

double thacker_omega(const ThackerParams& p);
double thacker_amplitude_A(const ThackerParams& p);
/// Exact (eta, u, v) of the radially symmetric oscillation.
std::array<double, 3> thacker_exact_eta_uv(const ThackerParams& p, Vec2 x, double t);

/// Manufactured 1D steady depth 9/8 + 1/4 sin(pi x / 500).
double macdonald_depth(double x);
/// Bed elevation table integrated from the steady momentum balance at 1 m
/// resolution (RK4), shifted so z(5000) = 0. d = -z.
const std::vector<double>& macdonald_bed_table();
double macdonald_bathymetry(double x);
/// Discrete residual of the steady momentum balance on the generated bed.
double macdonald_momentum_residual(double x);

Case case_lake_at_rest(double target_edge = 1.0 / 32);
Case case_small_perturbation(double target_edge = 1.0 / 32);
Case case_macdonald(double target_edge = 50.0, int width_rows = 1);
Case case_thacker(const ThackerParams& params = {}, double target_edge = 0.1);
/// Meandering-channel floodplain. With an empty mesh file the built-in
/// uniform mesh at `target_edge` is used instead of the graded mesh.
Case case_floodplain(std::string mesh_file = "", double target_edge = 50.0);

/// Mesh + partition + bathymetry + ready-to-run simulation for a case.
struct AssembledCase {
  CoarseMesh mesh;
  SubgridPartition part;
  BathymetryField bath;
  std::unique_ptr<Simulation> sim;
  std::vector<double> h_init, hu_init, hv_init;
};

AssembledCase assemble(const Case& c, int n_sg, StepConfig config);

struct ErrorReport {
  double linf_h = 0.0, l2_h = 0.0;
  double linf_hu = 0.0, l2_hu = 0.0;
  double domain_area = 0.0;
};

/// Norms against the analytic reference at the coarse cell centers.
ErrorReport error_norms(const CoarseMesh& mesh, const SimulationState& state,
                        const std::function<std::array<double, 3>(Vec2, double)>& reference, double t);

/// Norms against stored discrete fields (fixed-point benchmarks).
ErrorReport discrete_error_norms(const CoarseMesh& mesh, const SimulationState& state,
                                 std::span<const double> h_ref, std::span<const double> hu_ref,
                                 std::span<const double> hv_ref);

struct ConvergenceRow {
  int order = 0;  // polynomial degree P_n
  int n_sg = 1;
  double edge = 0.0;
  double l2_h = 0.0, l2_hu = 0.0, linf_h = 0.0;
  long long steps = 0;
  double seconds = 0.0;
};

struct ConvergenceTable {
  std::vector<ConvergenceRow> rows;
};

/// Steady-channel convergence sweep over mesh sizes, subgrid divisions and
/// polynomial degrees.
ConvergenceTable macdonald_convergence(std::span<const double> edges, std::span<const int> n_sgs,
                                       std::span<const int> orders, double cfl = 0.45);

/// Least-squares slope of log(error) against log(edge).
double fitted_order(std::span<const double> edges, std::span<const double> errors);

void write_convergence_csv(const ConvergenceTable& table, std::ostream& out);
void write_error_csv(const ErrorReport& report, std::ostream& out);

}  // namespace subswe
