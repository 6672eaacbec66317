#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "subswe/casefile.hpp"
#include "subswe/harness.hpp"
#include "subswe/io.hpp"

namespace fs = std::filesystem;
using namespace subswe;

namespace {

std::string time_label(double t) {
  std::ostringstream os;
  os.precision(6);
  os << t;
  std::string s = os.str();
  for (char& ch : s) {
    if (ch == '.') ch = 'p';
  }
  return s;
}

int run_command(const std::string& case_arg, int order, int nsg, double cfl, double dt, double tend,
                const std::string& mesh_file, const std::string& out_dir,
                const std::vector<std::string>& probe_args, bool vtk, bool csv, double edge) {
  CaseFileConfig cfg;
  std::string name = case_arg;
  if (fs::exists(case_arg) && fs::is_regular_file(case_arg)) {
    cfg = parse_case_file(case_arg);
    name = cfg.case_name;
  }
  if (order > 0) cfg.order = order;
  if (nsg > 0) cfg.n_sg = nsg;
  if (cfl > 0) cfg.cfl = cfl;
  if (dt > 0) cfg.dt = dt;
  if (tend >= 0) cfg.t_end = tend;
  if (!mesh_file.empty()) cfg.mesh_file = mesh_file;
  if (!out_dir.empty()) cfg.out_dir = out_dir;
  if (edge > 0) cfg.edge = edge;
  cfg.vtk = cfg.vtk || vtk;
  cfg.csv = cfg.csv || csv;
  for (const std::string& p : probe_args) {
    std::istringstream ps(p);
    double x, y;
    char comma;
    if (!(ps >> x >> comma >> y)) {
      std::cerr << "bad --probe value '" << p << "' (expected x,y)\n";
      return 2;
    }
    cfg.probes.push_back({x, y});
  }

  Case c = make_named_case(name, cfg);

  StepConfig step_cfg;
  step_cfg.order = (cfg.order > 0 ? cfg.order : 2) - 1;
  step_cfg.cfl = cfg.cfl > 0 ? cfg.cfl : 0.45;
  const int n_sg = cfg.n_sg > 0 ? cfg.n_sg : 2;

  std::cout << "case " << c.name << ": order " << (step_cfg.order + 1) << ", nsg " << n_sg << ", cfl "
            << step_cfg.cfl << ", t_end " << c.t_end << " s\n";

  AssembledCase ac = assemble(c, n_sg, step_cfg);
  std::cout << "mesh: " << ac.mesh.cell_count() << " cells, " << ac.part.subcell_count()
            << " subcells\n";

  const std::string dir = cfg.out_dir.empty() ? "out" : cfg.out_dir;
  const bool write_files = cfg.vtk || cfg.csv || !cfg.out_dir.empty();
  if (write_files) fs::create_directories(dir);

  RunControl ctl;
  ctl.t_end = c.t_end;
  ctl.snapshot_times = c.snapshot_times;
  ctl.probe_points = cfg.probes.empty() ? c.probes : cfg.probes;
  if (write_files) {
    ctl.on_snapshot = [&](double t, const SimulationState& s) {
      if (cfg.csv || !cfg.vtk) {
        std::ofstream os(dir + "/snapshot_" + time_label(t) + ".csv");
        write_snapshot_csv(ac.mesh, s, os);
      }
      if (cfg.vtk) {
        std::ofstream os(dir + "/snapshot_" + time_label(t) + ".vtk");
        write_snapshot_vtk(ac.mesh, s, os);
        std::ofstream osg(dir + "/subgrid_" + time_label(t) + ".vtk");
        write_subgrid_vtk(ac.mesh, ac.part, ac.bath, s, osg);
      }
    };
  }

  const RunResult res = ac.sim->run(ctl);
  if (res.aborted) {
    std::cerr << "run aborted at t = " << res.t << ": " << res.abort_reason << "\n";
    if (write_files) {
      std::ofstream os(dir + "/snapshot_abort.csv");
      write_snapshot_csv(ac.mesh, ac.sim->state(), os);
    }
    return 1;
  }

  std::cout << "finished: t = " << res.t << " s in " << res.steps << " steps\n";
  std::cout.precision(12);
  std::cout << "volume: " << res.volume_initial << " -> " << res.volume_final
            << " m^3 (boundary in " << ac.sim->diagnostics().boundary_volume_in << " m^3, residual "
            << ac.sim->diagnostics().redistribution_residual << " m^3)\n";

  if (c.reference) {
    const ErrorReport err = error_norms(ac.mesh, ac.sim->state(), c.reference, res.t);
    std::cout << "errors vs reference: Linf(h) " << err.linf_h << ", L2(h) " << err.l2_h
              << ", Linf(hu) " << err.linf_hu << ", L2(hu) " << err.l2_hu << "\n";
    if (write_files) {
      std::ofstream os(dir + "/errors.csv");
      write_error_csv(err, os);
    }
  }

  if (write_files) {
    for (const ProbeSeries& p : res.probes) {
      std::ostringstream fn;
      fn << dir << "/probes_" << p.position.x << "_" << p.position.y << ".csv";
      std::ofstream os(fn.str());
      write_probe_csv(p, os);
    }
    std::ofstream os(dir + "/mass.csv");
    write_mass_csv(res.mass, os);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"subswe: subgrid finite-volume shallow water solver"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "run a benchmark case");
  std::string case_arg, mesh_file, out_dir;
  int order = 0, nsg = 0;
  double cfl = 0, dt = 0, tend = -1, edge = 0;
  std::vector<std::string> probes;
  bool vtk = false, csv = false;
  run->add_option("--case", case_arg, "case name or case file path")->required();
  run->add_option("--order", order, "scheme order: 1 or 2")->check(CLI::Range(1, 2));
  run->add_option("--nsg", nsg, "subgrid divisions per coarse edge");
  run->add_option("--cfl", cfl, "CFL number (< 0.5)");
  run->add_option("--dt", dt, "fixed time step (s)");
  run->add_option("--tend", tend, "end time (s)");
  run->add_option("--mesh", mesh_file, "Gmsh MSH 2.2 mesh file");
  run->add_option("--edge", edge, "target edge length for the built-in mesh (m)");
  run->add_option("--out", out_dir, "output directory");
  run->add_option("--probe", probes, "probe point x,y (repeatable)");
  run->add_flag("--vtk", vtk, "write VTK snapshots");
  run->add_flag("--csv", csv, "write CSV snapshots");

  auto* meshinfo = app.add_subcommand("meshinfo", "summarize a mesh as CSV");
  std::string mi_file, mi_out;
  meshinfo->add_option("--mesh", mi_file, "Gmsh MSH 2.2 mesh file")->required();
  meshinfo->add_option("--out", mi_out, "output CSV (default stdout)");

  auto* conv = app.add_subcommand("convergence", "steady-channel convergence study");
  std::vector<double> conv_edges{100.0, 50.0, 25.0};
  std::vector<int> conv_nsg{2};
  std::vector<int> conv_orders{0, 1};
  std::string conv_out;
  conv->add_option("--edges", conv_edges, "coarse edge lengths (m)");
  conv->add_option("--nsg", conv_nsg, "subgrid divisions");
  conv->add_option("--orders", conv_orders, "polynomial degrees (0 and/or 1)");
  conv->add_option("--out", conv_out, "output CSV (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      return run_command(case_arg, order, nsg, cfl, dt, tend, mesh_file, out_dir, probes, vtk, csv,
                         edge);
    }
    if (meshinfo->parsed()) {
      const CoarseMesh mesh = load_gmsh(mi_file);
      if (mi_out.empty()) {
        write_mesh_summary_csv(mesh, std::cout);
      } else {
        std::ofstream os(mi_out);
        write_mesh_summary_csv(mesh, os);
      }
      return 0;
    }
    if (conv->parsed()) {
      const ConvergenceTable table = macdonald_convergence(conv_edges, conv_nsg, conv_orders);
      if (conv_out.empty()) {
        write_convergence_csv(table, std::cout);
      } else {
        std::ofstream os(conv_out);
        write_convergence_csv(table, os);
      }
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
