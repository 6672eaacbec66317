#include "subswe/stepper.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "subswe/sources.hpp"

namespace subswe {

namespace {

void clipped_side(double eta_in, double d, double& h_out, double& eta_out) {
  const double h = eta_in + d;
  if (h > 0.0) {
    h_out = h;
    eta_out = eta_in;
  } else {
    h_out = 0.0;
    eta_out = -d;
  }
}

}  // namespace

Simulation::Simulation(const CoarseMesh& mesh, const SubgridPartition& part, const BathymetryField& bath,
                       BoundarySpec boundary, StepConfig config)
    : mesh_(mesh), part_(part), bath_(bath), boundary_(std::move(boundary)), config_(config) {
  const int nc = mesh_.cell_count();
  state_.resize(nc, part_.subcell_count());
  u_.assign(nc, 0.0);
  v_.assign(nc, 0.0);
  eta_base_.assign(nc, 0.0);
  planes_ = first_order_planes(nc);
  plane_offset_.assign(part_.subcell_count(), 0.0);
  rate_h_.assign(nc, 0.0);
  rate_hu_.assign(nc, 0.0);
  rate_hv_.assign(nc, 0.0);
  if (config_.order == 1) {
    stencils_ = build_stencils(mesh_);
  }
  build_face_table();
}

void Simulation::build_face_table() {
  const int nc = mesh_.cell_count();
  const int n = part_.n_sg;
  const double tol = 1e-9 * mesh_.domain_diameter() + 1e-30;

  struct Entry {
    int cell_l, edge_l;
    int cell_r = kNoNeighbor, edge_r = -1;
    BcKind bc = BcKind::Wall;
    double value = 0.0;
    bool periodic = false;
  };
  std::vector<Entry> entries;
  std::map<int, std::vector<MeshEdge>> periodic_edges;

  for (const MeshEdge& ue : mesh_.unique_edges) {
    if (ue.cell_r != kNoNeighbor) {
      entries.push_back({ue.cell_l, ue.edge_l, ue.cell_r, ue.edge_r, BcKind::Wall, 0.0, false});
      continue;
    }
    const BcSpec spec = boundary_.lookup(ue.boundary_tag);
    if (spec.kind == BcKind::Periodic) {
      periodic_edges[ue.boundary_tag].push_back(ue);
    } else {
      entries.push_back({ue.cell_l, ue.edge_l, kNoNeighbor, -1, spec.kind, spec.value, false});
    }
  }

  // Merge periodic tag pairs into pseudo-interior entries, matching edges by
  // the pair's common translation vector.
  std::vector<int> done_tags;
  for (auto& [tag, edges_a] : periodic_edges) {
    if (std::find(done_tags.begin(), done_tags.end(), tag) != done_tags.end()) continue;
    const BcSpec spec = boundary_.lookup(tag);
    auto itb = periodic_edges.find(spec.pair_tag);
    if (itb == periodic_edges.end() || spec.pair_tag == tag) {
      throw std::runtime_error("periodic boundary tag " + std::to_string(tag) + " has no partner edges");
    }
    done_tags.push_back(tag);
    done_tags.push_back(spec.pair_tag);
    auto& edges_b = itb->second;
    if (edges_a.size() != edges_b.size()) {
      throw std::runtime_error("periodic boundary pair has mismatched edge counts");
    }

    Vec2 mean_a{}, mean_b{};
    for (const MeshEdge& e : edges_a) mean_a += mesh_.edges[e.cell_l][e.edge_l].midpoint;
    for (const MeshEdge& e : edges_b) mean_b += mesh_.edges[e.cell_l][e.edge_l].midpoint;
    const Vec2 shift = (mean_b - mean_a) / static_cast<double>(edges_a.size());

    for (const MeshEdge& ea : edges_a) {
      const CellEdge& ce_a = mesh_.edges[ea.cell_l][ea.edge_l];
      const Vec2 target = ce_a.midpoint + shift;
      const MeshEdge* match = nullptr;
      for (const MeshEdge& eb : edges_b) {
        if ((mesh_.edges[eb.cell_l][eb.edge_l].midpoint - target).norm() <
            std::max(tol, 0.25 * ce_a.length)) {
          match = &eb;
          break;
        }
      }
      if (!match) {
        throw std::runtime_error("unmatched periodic edge (tags " + std::to_string(tag) + "/" +
                                 std::to_string(spec.pair_tag) + ")");
      }
      entries.push_back(
          {ea.cell_l, ea.edge_l, match->cell_l, match->edge_l, BcKind::Periodic, 0.0, true});
    }
  }

  faces_.clear();
  std::vector<std::array<std::vector<std::pair<int, int>>, 3>> slots(nc);
  for (int m = 0; m < nc; ++m) {
    for (int i = 0; i < 3; ++i) slots[m][i].assign(n, {-1, 0});
  }

  for (const Entry& e : entries) {
    const auto& faces_l = part_.edge_faces[e.cell_l][e.edge_l];
    for (int r = 0; r < n; ++r) {
      Face f;
      f.cell_l = e.cell_l;
      f.sub_l = part_.global_index(e.cell_l, faces_l[r].subcell);
      f.mid_l = faces_l[r].midpoint;
      f.normal = mesh_.edges[e.cell_l][e.edge_l].normal;
      f.len = faces_l[r].length;
      f.bc = e.bc;
      f.bc_value = e.value;

      const int fid = static_cast<int>(faces_.size());
      slots[e.cell_l][e.edge_l][r] = {fid, +1};

      if (e.cell_r != kNoNeighbor) {
        const auto& faces_r = part_.edge_faces[e.cell_r][e.edge_r];
        int rr = n - 1 - r;
        if (e.periodic) {
          const Vec2 target = f.mid_l + (mesh_.edges[e.cell_r][e.edge_r].midpoint -
                                         mesh_.edges[e.cell_l][e.edge_l].midpoint);
          rr = -1;
          for (int s = 0; s < n; ++s) {
            if ((faces_r[s].midpoint - target).norm() < 0.5 * f.len) {
              rr = s;
              break;
            }
          }
          if (rr < 0) throw std::runtime_error("unmatched periodic subgrid face");
        }
        f.cell_r = e.cell_r;
        f.sub_r = part_.global_index(e.cell_r, faces_r[rr].subcell);
        f.mid_r = faces_r[rr].midpoint;
        slots[e.cell_r][e.edge_r][rr] = {fid, -1};
      } else {
        f.mid_r = f.mid_l;
      }
      faces_.push_back(f);
    }
  }

  cell_faces_.assign(nc, {});
  for (int m = 0; m < nc; ++m) {
    cell_faces_[m].reserve(3 * n);
    for (int i = 0; i < 3; ++i) {
      for (int r = 0; r < n; ++r) {
        if (slots[m][i][r].first < 0) {
          throw std::logic_error("face table: unassigned face slot");
        }
        cell_faces_[m].push_back(slots[m][i][r]);
      }
    }
  }

  const size_t nf = faces_.size();
  flux_l_.assign(nf, {});
  flux_r_.assign(nf, {});
  eta_star_l_.assign(nf, 0.0);
  eta_star_r_.assign(nf, 0.0);
  d_star_l_.assign(nf, 0.0);
  d_star_r_.assign(nf, 0.0);
}

void Simulation::set_state(std::vector<double> h, std::vector<double> hu, std::vector<double> hv) {
  if (static_cast<int>(h.size()) != mesh_.cell_count()) {
    throw std::runtime_error("set_state: size mismatch");
  }
  state_.h = std::move(h);
  state_.hu = std::move(hu);
  state_.hv = std::move(hv);
  derive_fields();
}

void Simulation::set_manning(std::vector<double> manning) {
  if (!manning.empty() && static_cast<int>(manning.size()) != part_.subcell_count()) {
    throw std::runtime_error("set_manning: size mismatch");
  }
  manning_ = std::move(manning);
}

void Simulation::derive_fields() {
  const int nc = mesh_.cell_count();
  const int per = part_.per_cell;
  for (int m = 0; m < nc; ++m) {
    const int base = part_.global_index(m, 0);
    std::span<const double> areas(&part_.subcell_area[base], per);
    std::span<const double> d(&bath_.d[base], per);
    const InversionResult res = invert_free_surface(state_.h[m], mesh_.area[m], areas, d, {}, bath_.dbar[m]);
    if (!res.converged) {
      throw std::runtime_error("free-surface inversion failed for cell " + std::to_string(m));
    }
    eta_base_[m] = res.eta;
    state_.eta[m] = res.eta;
    state_.tag[m] = res.tag;
    state_.dwet[m] = state_.h[m] - res.eta;
    std::span<double> sub_h(&state_.sub_h[base], per);
    if (res.tag == Wetness::Dry) {
      // Dry subcells sit at their own bed level; the coarse -dbar surface
      // would fake wet pockets wherever the bed dips below the average.
      std::fill(sub_h.begin(), sub_h.end(), 0.0);
    } else {
      subgrid_depths(res.eta, d, {}, sub_h);
    }
    const Vec2 vel = cutoff_velocity(state_.h[m], state_.hu[m], state_.hv[m], config_.eps_dry);
    u_[m] = vel.x;
    v_[m] = vel.y;
  }
}

void Simulation::reconstruct() {
  if (config_.order == 0) {
    return;  // constant planes; derive_fields already produced the stage fields
  }
  planes_ = reconstruct_planes(stencils_, mesh_, eta_base_, u_, v_, state_.tag);

  // Shift each eta plane, gradient frozen, so the clipped subgrid volume
  // matches the coarse average again.
  const int per = part_.per_cell;
  for (int m = 0; m < mesh_.cell_count(); ++m) {
    if (state_.tag[m] == Wetness::Dry) continue;
    const Vec2 g = planes_.grad_eta[m];
    if (g.x == 0.0 && g.y == 0.0) continue;  // constant plane: derive_fields already holds
    const int base = part_.global_index(m, 0);
    std::span<double> offs(&plane_offset_[base], per);
    for (int k = 0; k < per; ++k) {
      offs[k] = dot(g, part_.subcell_centroid[base + k] - mesh_.centroid[m]);
    }
    std::span<const double> areas(&part_.subcell_area[base], per);
    std::span<const double> d(&bath_.d[base], per);
    const InversionResult res =
        invert_free_surface(state_.h[m], mesh_.area[m], areas, d, offs, bath_.dbar[m]);
    if (!res.converged) {
      throw std::runtime_error("free-surface inversion (gradient shift) failed for cell " +
                               std::to_string(m));
    }
    state_.eta[m] = res.eta;
    state_.tag[m] = res.tag;
    state_.dwet[m] = state_.h[m] - res.eta;
    subgrid_depths(res.eta, d, offs, std::span<double>(&state_.sub_h[base], per));
  }
}

void Simulation::flux_pass() {
  diag_.face_case_count = {};
  const int n_faces = static_cast<int>(faces_.size());

  for (int fid = 0; fid < n_faces; ++fid) {
    const Face& f = faces_[fid];
    const int m = f.cell_l;
    const SideTrace raw_l = extrapolate_raw(state_.eta[m], planes_.grad_eta[m], u_[m], planes_.grad_u[m],
                                            v_[m], planes_.grad_v[m], mesh_.centroid[m], f.mid_l,
                                            bath_.d[f.sub_l], state_.sub_h[f.sub_l] > 0.0);
    const CoarseSide coarse_l{state_.h[m], state_.eta[m], state_.dwet[m]};

    if (f.cell_r == kNoNeighbor && f.bc == BcKind::Wall) {
      // Domain wall: the interior side reflects off its own reconstruction; a
      // dry adjacent subcell falls back to coarse values like Case 3.
      double h_w, eta_w, d_w;
      if (raw_l.wet) {
        d_w = raw_l.d;
        clipped_side(raw_l.eta, raw_l.d, h_w, eta_w);
      } else {
        d_w = coarse_l.dbar;
        clipped_side(coarse_l.etabar, coarse_l.dbar, h_w, eta_w);
      }
      const FluxResult F = wall_flux(h_w, eta_w, d_w, f.normal);
      flux_l_[fid] = F.flux;
      eta_star_l_[fid] = eta_w;
      d_star_l_[fid] = d_w;
      continue;
    }

    SideTrace raw_r;
    CoarseSide coarse_r;
    if (f.cell_r != kNoNeighbor) {
      const int mr = f.cell_r;
      raw_r = extrapolate_raw(state_.eta[mr], planes_.grad_eta[mr], u_[mr], planes_.grad_u[mr], v_[mr],
                              planes_.grad_v[mr], mesh_.centroid[mr], f.mid_r, bath_.d[f.sub_r],
                              state_.sub_h[f.sub_r] > 0.0);
      coarse_r = {state_.h[mr], state_.eta[mr], state_.dwet[mr]};
    } else if (f.bc == BcKind::Discharge) {
      // Ghost with the prescribed inflow; a critical-depth floor keeps the
      // ghost velocity bounded when the interior is thin or dry. The incoming
      // water carries no tangential momentum.
      const double q = f.bc_value;
      raw_r = raw_l;
      const double h_crit = std::cbrt(q * q / kGravity);
      const double hg = std::max(raw_l.h, h_crit);
      raw_r.h = hg;
      raw_r.eta = hg - raw_l.d;
      raw_r.wet = hg > 0.0;
      const Vec2 vel = f.normal * (-q / std::max(hg, 1e-12));
      raw_r.u = vel.x;
      raw_r.v = vel.y;
      coarse_r = {raw_r.h, raw_r.eta, raw_r.d};
    } else {  // FixedDepth
      const double hb = f.bc_value;
      raw_r = raw_l;
      raw_r.h = hb;
      raw_r.eta = hb - raw_l.d;
      raw_r.wet = hb > 0.0;
      coarse_r = {raw_r.h, raw_r.eta, raw_r.d};
    }

    const FaceTrace trace = classify_and_reconstruct(raw_l, raw_r, coarse_l, coarse_r);
    diag_.face_case_count[static_cast<int>(trace.tag)]++;

    if (trace.kind == FluxKind::Riemann) {
      const FluxResult F = hllc_flux(trace.h_l, trace.h_r, {trace.u_l, trace.v_l},
                                     {trace.u_r, trace.v_r}, trace.d_l, f.normal);
      flux_l_[fid] = F.flux;
      flux_r_[fid] = F.flux;
      eta_star_l_[fid] = F.eta_star_l;
      eta_star_r_[fid] = F.eta_star_r;
      d_star_l_[fid] = F.d_star_l;
      d_star_r_[fid] = F.d_star_r;
    } else {
      const FluxResult FL = wall_flux(trace.h_l, trace.eta_l, trace.d_l, f.normal);
      const FluxResult FR = wall_flux(trace.h_r, trace.eta_r, trace.d_r, f.normal);
      flux_l_[fid] = FL.flux;
      flux_r_[fid] = FR.flux;
      eta_star_l_[fid] = trace.eta_l;
      eta_star_r_[fid] = trace.eta_r;
      d_star_l_[fid] = trace.d_l;
      d_star_r_[fid] = trace.d_r;
    }
  }
}

void Simulation::accumulate_cell_rates() {
  const int nc = mesh_.cell_count();
  for (int m = 0; m < nc; ++m) {
    double acc_h = 0.0, acc_x = 0.0, acc_y = 0.0;
    double grav_x = 0.0, grav_y = 0.0;
    for (const auto& [fid, side] : cell_faces_[m]) {
      const Face& f = faces_[fid];
      if (side > 0) {
        acc_h -= flux_l_[fid][0] * f.len;
        acc_x -= flux_l_[fid][1] * f.len;
        acc_y -= flux_l_[fid][2] * f.len;
        const double w = (eta_star_l_[fid] + state_.eta[m]) * (d_star_l_[fid] - state_.dwet[m]) * f.len;
        grav_x += f.normal.x * w;
        grav_y += f.normal.y * w;
      } else {
        acc_h += flux_r_[fid][0] * f.len;
        acc_x += flux_r_[fid][1] * f.len;
        acc_y += flux_r_[fid][2] * f.len;
        const double w = (eta_star_r_[fid] + state_.eta[m]) * (d_star_r_[fid] - state_.dwet[m]) * f.len;
        grav_x -= f.normal.x * w;
        grav_y -= f.normal.y * w;
      }
    }
    const double inv_area = 1.0 / mesh_.area[m];
    rate_h_[m] = acc_h * inv_area;
    rate_hu_[m] = (acc_x + 0.5 * kGravity * grav_x) * inv_area;
    rate_hv_[m] = (acc_y + 0.5 * kGravity * grav_y) * inv_area;
  }
}

double Simulation::compute_dt() const {
  double best = std::numeric_limits<double>::infinity();
  const int per = part_.per_cell;
  for (int m = 0; m < mesh_.cell_count(); ++m) {
    double hmax = 0.0;
    const int base = part_.global_index(m, 0);
    for (int k = 0; k < per; ++k) hmax = std::max(hmax, state_.sub_h[base + k]);
    const double lambda = std::hypot(u_[m], v_[m]) + std::sqrt(kGravity * hmax);
    if (lambda <= 0.0) continue;
    best = std::min(best, std::sqrt(mesh_.area[m]) / lambda);
  }
  // Forced boundaries imply a wave speed even over a dry bed; without this
  // the first inflow step on a dry domain is uncontrolled.
  for (const Face& f : faces_) {
    if (f.cell_r != kNoNeighbor) continue;
    double lambda = 0.0;
    if (f.bc == BcKind::Discharge && f.bc_value != 0.0) {
      const double h_crit = std::cbrt(f.bc_value * f.bc_value / kGravity);
      lambda = std::abs(f.bc_value) / h_crit + std::sqrt(kGravity * h_crit);
    } else if (f.bc == BcKind::FixedDepth && f.bc_value > 0.0) {
      lambda = 2.0 * std::sqrt(kGravity * f.bc_value);
    }
    if (lambda > 0.0) best = std::min(best, std::sqrt(mesh_.area[f.cell_l]) / lambda);
  }
  if (!std::isfinite(best)) return config_.dt_max;
  return config_.cfl * best;
}

void Simulation::step(double dt) {
  if (!(dt > 0.0)) {
    throw std::runtime_error("step: dt must be positive");
  }
  const int nc = mesh_.cell_count();
  h_n_ = state_.h;
  hu_n_ = state_.hu;
  hv_n_ = state_.hv;

  auto stage_rates = [&](double t_stage) {
    reconstruct();
    flux_pass();
    accumulate_cell_rates();
    if (extra_source_) {
      for (int m = 0; m < nc; ++m) {
        const auto s = extra_source_(mesh_.centroid[m], t_stage);
        rate_h_[m] += s[0];
        rate_hu_[m] += s[1];
        rate_hv_[m] += s[2];
      }
    }
  };

  auto boundary_mass_rate = [&]() {
    double out = 0.0;
    for (size_t fid = 0; fid < faces_.size(); ++fid) {
      if (faces_[fid].cell_r == kNoNeighbor) out += flux_l_[fid][0] * faces_[fid].len;
    }
    return out;
  };

  // Implicit Manning damping on the freshly derived state; writes
  // hu = w_base*base + (1 - w_base)*corrected-momentum and refreshes the
  // cut-off velocities.
  auto friction_pass = [&](std::span<const double> mom_x, std::span<const double> mom_y, double w_base,
                           std::span<const double> base_x, std::span<const double> base_y) {
    const int per = part_.per_cell;
    for (int m = 0; m < nc; ++m) {
      double mx = mom_x[m], my = mom_y[m];
      if (!manning_.empty() && state_.h[m] >= config_.eps_dry && state_.tag[m] != Wetness::Dry) {
        const int base = part_.global_index(m, 0);
        std::span<const double> areas(&part_.subcell_area[base], per);
        std::span<const double> sub_h(&state_.sub_h[base], per);
        std::span<const double> man(&manning_[base], per);
        const double c = friction_coefficient(areas, sub_h, man);
        const Vec2 w_expl{mx / state_.h[m], my / state_.h[m]};
        const Vec2 w = implicit_friction_correct(w_expl, c / state_.h[m], dt);
        const double speed = w.norm();
        mx -= dt * c * speed * w.x;
        my -= dt * c * speed * w.y;
      }
      state_.hu[m] = w_base * base_x[m] + (1.0 - w_base) * mx;
      state_.hv[m] = w_base * base_y[m] + (1.0 - w_base) * my;
      if (state_.h[m] < config_.eps_dry) {
        state_.hu[m] = 0.0;
        state_.hv[m] = 0.0;
      }
      const Vec2 vel = cutoff_velocity(state_.h[m], state_.hu[m], state_.hv[m], config_.eps_dry);
      u_[m] = vel.x;
      v_[m] = vel.y;
    }
  };

  // Stage 1: Euler step with implicit friction.
  stage_rates(t_);
  const double bdry_rate_1 = boundary_mass_rate();
  std::vector<double> mom_x(nc), mom_y(nc);
  for (int m = 0; m < nc; ++m) {
    state_.h[m] = h_n_[m] + dt * rate_h_[m];
    mom_x[m] = hu_n_[m] + dt * rate_hu_[m];
    mom_y[m] = hv_n_[m] + dt * rate_hv_[m];
  }
  const double residual_1 = redistribute_negative_depths(state_.h, mesh_);
  derive_fields();
  friction_pass(mom_x, mom_y, 0.0, mom_x, mom_y);

  if (config_.order == 0) {
    diag_.redistribution_residual += residual_1;
    diag_.boundary_volume_in += -bdry_rate_1 * dt;
    t_ += dt;
    finish_stage();
    return;
  }

  // Stage 2: Euler step from U^(1), then the TVD average. Friction corrects
  // only the bracketed Euler expression, using the post-redistribution depth.
  const std::vector<double> h1 = state_.h;
  const std::vector<double> hu1 = state_.hu;
  const std::vector<double> hv1 = state_.hv;
  stage_rates(t_ + dt);
  const double bdry_rate_2 = boundary_mass_rate();
  for (int m = 0; m < nc; ++m) {
    state_.h[m] = 0.5 * (h_n_[m] + h1[m] + dt * rate_h_[m]);
    mom_x[m] = hu1[m] + dt * rate_hu_[m];
    mom_y[m] = hv1[m] + dt * rate_hv_[m];
  }
  const double residual_2 = redistribute_negative_depths(state_.h, mesh_);
  derive_fields();
  friction_pass(mom_x, mom_y, 0.5, hu_n_, hv_n_);

  // The TVD average halves the volume effect of the stage-1 residual.
  diag_.redistribution_residual += 0.5 * residual_1 + residual_2;
  diag_.boundary_volume_in += -0.5 * dt * (bdry_rate_1 + bdry_rate_2);
  t_ += dt;
  finish_stage();
}

void Simulation::finish_stage() {
  for (int m = 0; m < mesh_.cell_count(); ++m) {
    if (!std::isfinite(state_.h[m]) || !std::isfinite(state_.hu[m]) || !std::isfinite(state_.hv[m])) {
      throw std::runtime_error("non-finite state in cell " + std::to_string(m));
    }
  }
  diag_.steps++;
}

RunResult Simulation::run(const RunControl& control) {
  RunResult result;
  result.volume_initial = total_volume(state_.h, mesh_);

  for (const Vec2& p : control.probe_points) {
    ProbeSeries series;
    series.position = p;
    double best = std::numeric_limits<double>::infinity();
    for (int m = 0; m < mesh_.cell_count(); ++m) {
      const double dist = (mesh_.centroid[m] - p).norm2();
      if (dist < best) {
        best = dist;
        series.cell = m;
      }
    }
    result.probes.push_back(std::move(series));
  }

  auto record = [&](double t) {
    for (ProbeSeries& p : result.probes) {
      p.t.push_back(t);
      p.h.push_back(state_.h[p.cell]);
      p.hu.push_back(state_.hu[p.cell]);
      p.hv.push_back(state_.hv[p.cell]);
    }
    if (control.record_mass) {
      result.mass.push_back(
          {t, total_volume(state_.h, mesh_), diag_.redistribution_residual, diag_.boundary_volume_in});
    }
  };

  std::vector<double> snaps = control.snapshot_times;
  std::sort(snaps.begin(), snaps.end());
  const bool default_snaps = control.on_snapshot && snaps.empty();
  size_t next_snap = 0;
  while (next_snap < snaps.size() && snaps[next_snap] <= 1e-14) {
    if (control.on_snapshot) control.on_snapshot(0.0, state_);
    ++next_snap;
  }
  if (default_snaps) control.on_snapshot(0.0, state_);
  record(0.0);

  const double t_eps = 1e-12 * std::max(1.0, control.t_end);
  double dt_prev = std::numeric_limits<double>::infinity();
  try {
    while (t_ < control.t_end - t_eps) {
      double dt = config_.fixed_dt > 0.0 ? config_.fixed_dt : compute_dt();
      // Growth limiter: a domain that is briefly almost dry must not produce
      // one huge step before the inflow establishes a realistic wave speed.
      dt = std::min(dt, 1.1 * dt_prev);
      dt = std::min(dt, control.t_end - t_);
      if (next_snap < snaps.size()) dt = std::min(dt, snaps[next_snap] - t_);
      step(dt);
      dt_prev = dt;
      record(t_);
      while (next_snap < snaps.size() && t_ >= snaps[next_snap] - t_eps) {
        if (control.on_snapshot) control.on_snapshot(t_, state_);
        ++next_snap;
      }
    }
    if (default_snaps && control.t_end > 0.0) control.on_snapshot(t_, state_);
  } catch (const std::exception& e) {
    // Roll back to the last completed step so diagnostics stay usable.
    state_.h = h_n_;
    state_.hu = hu_n_;
    state_.hv = hv_n_;
    derive_fields();
    result.aborted = true;
    result.abort_reason = e.what();
  }

  result.t = t_;
  result.steps = diag_.steps;
  result.volume_final = total_volume(state_.h, mesh_);
  return result;
}

}  // namespace subswe
