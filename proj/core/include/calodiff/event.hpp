#pragma once
#include <vector>

#include "calodiff/geometry.hpp"

namespace calodiff {

// Conditioning record of the particle that caused a shower.
struct IncidentParticle {
  double momentum = 1.0;  // GeV/c, log10-uniform in [1, 125]
  double theta = 17.0;    // degrees, fixed
  double phi = 0.0;       // degrees, uniform in [0, 360)

  void validate() const;
};

// Zero-suppressed shower record: at most max_points cell hits, each cell
// appearing once with its summed energy, all at or above threshold.
struct PointCloudEvent {
  IncidentParticle incident;
  std::vector<CellHit> hits;

  int n_hits() const { return static_cast<int>(hits.size()); }
  double total_energy() const;  // MeV

  // Checks the structural invariants against a geometry; throws on breach.
  void validate(const GeometrySpec& g) const;
};

// Dense voxelized view of one shower, energies in MeV.
struct VoxelImage {
  IncidentParticle incident;
  int n_per_axis = 11;
  std::vector<double> energies;  // n^3, x fastest, then y, then z

  double& at(int vx, int vy, int vz) {
    return energies[vx + n_per_axis * (vy + n_per_axis * vz)];
  }
  double at(int vx, int vy, int vz) const {
    return energies[vx + n_per_axis * (vy + n_per_axis * vz)];
  }
  double total_energy() const;  // MeV
};

}  // namespace calodiff
