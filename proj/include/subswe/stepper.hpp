#pragma once

#include <array>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "subswe/face_recon.hpp"
#include "subswe/mesh.hpp"
#include "subswe/riemann.hpp"
#include "subswe/state.hpp"
#include "subswe/subgrid.hpp"
#include "subswe/weno.hpp"

namespace subswe {

enum class BcKind : std::uint8_t { Wall, Periodic, Discharge, FixedDepth };

struct BcSpec {
  BcKind kind = BcKind::Wall;
  double value = 0.0;  // discharge (m^2/s, positive into the domain) or depth (m)
  int pair_tag = 0;    // partner tag for periodic boundaries
};

struct BoundarySpec {
  std::map<int, BcSpec> by_tag;  // untagged boundary edges default to walls
  BcSpec lookup(int tag) const {
    auto it = by_tag.find(tag);
    return it == by_tag.end() ? BcSpec{} : it->second;
  }
};

struct StepConfig {
  double cfl = 0.45;
  int order = 1;          // polynomial degree P_n: 0 or 1
  double fixed_dt = 0.0;  // > 0 overrides the CFL condition
  double eps_dry = kDefaultEpsDry;
  double dt_max = 1.0;  // fallback when every cell is dry and at rest
};

/// Per-cell external source hook (dh/dt, dhu/dt, dhv/dt), e.g. rain or
/// manufactured forcing, evaluated at the cell centroid and stage time.
using ExtraSource = std::function<std::array<double, 3>(Vec2 x, double t)>;

struct StepDiagnostics {
  long long steps = 0;
  double redistribution_residual = 0.0;  // cumulative zeroed volume (m^3)
  double boundary_volume_in = 0.0;       // cumulative net inflow through boundaries (m^3)
  std::array<long long, 5> face_case_count{};  // per FaceCase, last flux pass
};

struct ProbeSeries {
  Vec2 position;
  int cell = -1;
  std::vector<double> t, h, hu, hv;
};

struct MassSample {
  double t = 0.0;
  double volume = 0.0;
  double residual_cum = 0.0;
  double boundary_in_cum = 0.0;
};

struct RunControl {
  double t_end = 0.0;
  std::vector<double> snapshot_times;  // empty: snapshot at start and end only
  std::vector<Vec2> probe_points;
  std::function<void(double t, const SimulationState&)> on_snapshot;
  bool record_mass = true;
};

struct RunResult {
  double t = 0.0;
  long long steps = 0;
  bool aborted = false;
  std::string abort_reason;
  std::vector<ProbeSeries> probes;
  std::vector<MassSample> mass;
  double volume_initial = 0.0;
  double volume_final = 0.0;
};

/// One assembled simulation: mesh + partition + bathymetry + boundary spec.
/// Owns the state and the per-stage work arrays. Single-threaded and
/// deterministic: faces and cells are visited in a fixed order.
class Simulation {
 public:
  Simulation(const CoarseMesh& mesh, const SubgridPartition& part, const BathymetryField& bath,
             BoundarySpec boundary, StepConfig config);

  /// Sets coarse conserved averages and derives the stage fields.
  void set_state(std::vector<double> h, std::vector<double> hu, std::vector<double> hv);

  /// Per-subcell Manning values; empty disables friction.
  void set_manning(std::vector<double> manning);

  void set_extra_source(ExtraSource src) { extra_source_ = std::move(src); }

  double compute_dt() const;
  void step(double dt);
  RunResult run(const RunControl& control);

  const SimulationState& state() const { return state_; }
  const StepDiagnostics& diagnostics() const { return diag_; }
  const CoarseMesh& mesh() const { return mesh_; }
  const SubgridPartition& partition() const { return part_; }
  const BathymetryField& bathymetry() const { return bath_; }
  const StepConfig& config() const { return config_; }
  const ReconstructionPlanes& planes() const { return planes_; }
  double time() const { return t_; }

 private:
  struct Face {
    int cell_l = -1, cell_r = kNoNeighbor;
    int sub_l = -1, sub_r = -1;  // global subcell indices
    Vec2 mid_l, mid_r;           // evaluation points (differ across periodic pairs)
    Vec2 normal;                 // unit, out of the L cell
    double len = 0.0;
    BcKind bc = BcKind::Wall;
    double bc_value = 0.0;
  };

  void build_face_table();
  void derive_fields();  // zero-gradient inversion, tags, subgrid depths, velocities
  void reconstruct();    // WENO planes + volume-preserving plane shift (order 1)
  void flux_pass();
  void accumulate_cell_rates();
  void finish_stage();

  const CoarseMesh& mesh_;
  const SubgridPartition& part_;
  const BathymetryField& bath_;
  BoundarySpec boundary_;
  StepConfig config_;
  StencilSet stencils_;

  SimulationState state_;
  std::vector<double> u_, v_;        // cut-off velocities
  std::vector<double> eta_base_;     // zero-gradient inversion result
  ReconstructionPlanes planes_;
  std::vector<double> plane_offset_; // frozen gradient term per subcell

  std::vector<Face> faces_;
  // Flux-pass results. Wall faces carry independent per-side fluxes and
  // starred values; Riemann faces share them. flux_r_ is stored with the
  // L-side normal; the R cell adds it with a positive sign.
  std::vector<std::array<double, 3>> flux_l_, flux_r_;
  std::vector<double> eta_star_l_, eta_star_r_, d_star_l_, d_star_r_;
  // Fixed-order face list per cell: (face index, +1 if the cell is the L side).
  std::vector<std::vector<std::pair<int, int>>> cell_faces_;

  std::vector<double> rate_h_, rate_hu_, rate_hv_;  // dU/dt including gravity
  std::vector<double> h_n_, hu_n_, hv_n_;           // state at step start
  std::vector<double> manning_;
  ExtraSource extra_source_;

  StepDiagnostics diag_;
  double t_ = 0.0;
};

}  // namespace subswe
