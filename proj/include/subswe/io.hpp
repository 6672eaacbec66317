#pragma once

#include <ostream>
#include <string>

#include "subswe/mesh.hpp"
#include "subswe/state.hpp"
#include "subswe/stepper.hpp"
#include "subswe/subgrid.hpp"

namespace subswe {

/// Per-cell snapshot: id, centroid, conserved averages, free surface, tag.
void write_snapshot_csv(const CoarseMesh& mesh, const SimulationState& state, std::ostream& out);

/// Legacy-VTK unstructured grid of the coarse cells with h, eta, hu, hv, tag.
void write_snapshot_vtk(const CoarseMesh& mesh, const SimulationState& state, std::ostream& out);

/// Legacy-VTK grid of the subtriangles with the subgrid depth and bathymetry.
void write_subgrid_vtk(const CoarseMesh& mesh, const SubgridPartition& part, const BathymetryField& bath,
                       const SimulationState& state, std::ostream& out);

void write_probe_csv(const ProbeSeries& probe, std::ostream& out);

void write_mass_csv(const std::vector<MassSample>& samples, std::ostream& out);

}  // namespace subswe
