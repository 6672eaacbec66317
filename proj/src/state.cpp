#include "subswe/state.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace subswe {

namespace {

// Volume deficit at a trial free surface: f(eta) = |T|*hbar - wet volume(eta).
// Nonincreasing and piecewise linear in eta.
double volume_residual(double eta, double target_volume, std::span<const double> sub_area,
                       std::span<const double> sub_d, std::span<const double> plane_offset,
                       double& wet_area) {
  double vol = 0.0;
  wet_area = 0.0;
  const size_t n = sub_d.size();
  for (size_t k = 0; k < n; ++k) {
    const double off = plane_offset.empty() ? 0.0 : plane_offset[k];
    const double depth = eta + off + sub_d[k];
    if (depth > 0.0) {
      vol += sub_area[k] * depth;
      wet_area += sub_area[k];
    }
  }
  return target_volume - vol;
}

}  // namespace

InversionResult invert_free_surface(double hbar, double cell_area, std::span<const double> sub_area,
                                    std::span<const double> sub_d, std::span<const double> plane_offset,
                                    double dbar_raw) {
  InversionResult res;
  const size_t n = sub_d.size();

  if (hbar <= kEpsVol) {
    res.eta = -dbar_raw;
    res.tag = Wetness::Dry;
    return res;
  }

  // Fully wet fast path: exact closed form, no iteration drift. A plane
  // anchored at the cell centroid has zero mean offset, but the general
  // contract subtracts it.
  {
    double eta_try = hbar - dbar_raw;
    if (!plane_offset.empty()) {
      double off_mean = 0.0, total_area = 0.0;
      for (size_t k = 0; k < n; ++k) {
        off_mean += sub_area[k] * plane_offset[k];
        total_area += sub_area[k];
      }
      eta_try -= off_mean / total_area;
    }
    bool all_wet = true;
    for (size_t k = 0; k < n; ++k) {
      const double off = plane_offset.empty() ? 0.0 : plane_offset[k];
      if (eta_try + off + sub_d[k] <= 0.0) {
        all_wet = false;
        break;
      }
    }
    if (all_wet) {
      res.eta = eta_try;
      res.tag = Wetness::Wet;
      return res;
    }
  }

  const double target = cell_area * hbar;
  double a_min = std::numeric_limits<double>::infinity();
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (size_t k = 0; k < n; ++k) {
    const double off = plane_offset.empty() ? 0.0 : plane_offset[k];
    lo = std::min(lo, -(off + sub_d[k]));
    hi = std::max(hi, -(off + sub_d[k]));
    a_min = std::min(a_min, sub_area[k]);
  }
  hi += target / a_min;  // at hi the wet volume is at least the target

  const double tol = 1e-12 * cell_area * std::max(hbar, 1.0);
  double eta = 0.5 * (lo + hi);
  double wet_area = 0.0;
  double f = volume_residual(eta, target, sub_area, sub_d, plane_offset, wet_area);

  const int max_newton = 50;
  int it = 0;
  for (; it < max_newton; ++it) {
    if (std::abs(f) <= tol) break;
    if (f > 0.0) {
      lo = std::max(lo, eta);  // surface too low
    } else {
      hi = std::min(hi, eta);
    }
    const double slope = std::max(wet_area, a_min);
    double next = eta + f / slope;
    if (!(next > lo) || !(next < hi)) {
      next = 0.5 * (lo + hi);  // Newton stalled on a kink; bisect
    }
    eta = next;
    f = volume_residual(eta, target, sub_area, sub_d, plane_offset, wet_area);
  }
  // Pure bisection tail for pathological bathymetries.
  int extra = 0;
  while (std::abs(f) > tol && extra < 200) {
    if (f > 0.0) {
      lo = eta;
    } else {
      hi = eta;
    }
    eta = 0.5 * (lo + hi);
    f = volume_residual(eta, target, sub_area, sub_d, plane_offset, wet_area);
    ++extra;
    if (hi - lo <= 1e-16 * std::max(1.0, std::abs(eta))) break;
  }

  res.eta = eta;
  res.iterations = it + extra;
  res.converged = std::abs(f) <= tol || (hi - lo) <= 1e-15 * std::max(1.0, std::abs(eta));

  bool all_wet = true;
  for (size_t k = 0; k < n && all_wet; ++k) {
    const double off = plane_offset.empty() ? 0.0 : plane_offset[k];
    all_wet = eta + off + sub_d[k] > 0.0;
  }
  res.tag = all_wet ? Wetness::Wet : Wetness::Partial;
  return res;
}

void subgrid_depths(double eta, std::span<const double> sub_d, std::span<const double> plane_offset,
                    std::span<double> out) {
  const size_t n = sub_d.size();
  for (size_t k = 0; k < n; ++k) {
    const double off = plane_offset.empty() ? 0.0 : plane_offset[k];
    out[k] = std::max(0.0, eta + off + sub_d[k]);
  }
}

Vec2 cutoff_velocity(double h, double hu, double hv, double eps_dry) {
  if (h < eps_dry) return {0.0, 0.0};
  return {hu / h, hv / h};
}

double redistribute_negative_depths(std::vector<double>& h, const CoarseMesh& mesh) {
  double residual = 0.0;
  const int nc = mesh.cell_count();
  for (int m = 0; m < nc; ++m) {
    if (h[m] >= 0.0) continue;
    double deficit = -h[m] * mesh.area[m];  // volume to find
    h[m] = 0.0;

    double donor_area = 0.0;
    for (int i = 0; i < 3; ++i) {
      const int nb = mesh.edges[m][i].neighbor;
      if (nb != kNoNeighbor && h[nb] > 0.0) donor_area += mesh.area[nb];
    }
    if (donor_area > 0.0) {
      double collected = 0.0;
      for (int i = 0; i < 3; ++i) {
        const int nb = mesh.edges[m][i].neighbor;
        if (nb == kNoNeighbor || h[nb] <= 0.0) continue;
        const double share = deficit * mesh.area[nb] / donor_area;
        const double avail = h[nb] * mesh.area[nb];
        const double take = std::min(share, avail);
        h[nb] = (avail - take) / mesh.area[nb];  // exact zero when fully drained
        collected += take;
      }
      deficit -= collected;
    }
    residual += std::max(deficit, 0.0);
  }
  return residual;
}

double total_volume(std::span<const double> h, const CoarseMesh& mesh) {
  double vol = 0.0;
  for (int m = 0; m < mesh.cell_count(); ++m) vol += h[m] * mesh.area[m];
  return vol;
}

}  // namespace subswe
