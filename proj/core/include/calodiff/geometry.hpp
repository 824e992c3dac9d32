#pragma once
#include <array>
#include <cstdint>
#include <vector>

#include "calodiff/config.hpp"
#include "calodiff/rng.hpp"

namespace calodiff {

using Vec3 = std::array<double, 3>;

// Regular cell lattice of a sampling calorimeter. x and y are centered on
// the beam axis; z counts layers from the front face. All lengths in cm,
// energies in MeV. front_face_z is carried as metadata only.
struct GeometrySpec {
  int n_cells_per_axis = 55;
  double cell_pitch_xy = 10.0;   // cm
  double cell_pitch_z = 2.3;     // cm (2.0 cm absorber + 0.3 cm scintillator)
  double front_face_z = 3.8;     // m, metadata
  double energy_threshold = 0.3; // MeV, inclusive cut
  int voxel_group = 5;
  int max_points = 200;

  void validate() const;  // throws std::invalid_argument on a bad spec

  int voxels_per_axis() const { return n_cells_per_axis / voxel_group; }
  int cells_total() const {
    return n_cells_per_axis * n_cells_per_axis * n_cells_per_axis;
  }
  int voxels_total() const {
    const int v = voxels_per_axis();
    return v * v * v;
  }
  // Transverse extent of the lattice: x, y in [-half_extent_xy, +half_extent_xy].
  double half_extent_xy() const { return 0.5 * n_cells_per_axis * cell_pitch_xy; }
  // Longitudinal extent: z in [0, depth].
  double depth() const { return n_cells_per_axis * cell_pitch_z; }

  std::uint64_t content_hash() const;

  static GeometrySpec from_config(const Config& cfg);
  void to_config(Config& cfg) const;
};

struct CellIndex {
  int ix = 0, iy = 0, iz = 0;
  bool operator==(const CellIndex&) const = default;
};

// One readout cell with deposited energy. Positions are cell centers for
// digitized hits, or continuous coordinates once smearing has been applied.
struct CellHit {
  Vec3 position{};   // cm
  double energy = 0; // MeV
  bool is_smeared = false;
};

bool in_bounds(const GeometrySpec& g, const CellIndex& idx);

// Geometric center of a cell; injective over valid indices.
Vec3 cell_center(const GeometrySpec& g, const CellIndex& idx);

// Nearest-cell index of a position inside the lattice. Cells are half-open
// [lo, hi) along each axis, so a coordinate on a shared boundary belongs to
// the higher-index cell; the global upper edge is inclusive.
CellIndex quantize(const GeometrySpec& g, const Vec3& position);

// Uniform within-cell displacement of a digitized hit; energy untouched.
CellHit smear(const GeometrySpec& g, const CellHit& hit, Rng& rng);

// Keeps hits with energy >= threshold, order preserved. Idempotent.
std::vector<CellHit> apply_threshold(const GeometrySpec& g,
                                     const std::vector<CellHit>& hits);

inline int flat_cell_index(const GeometrySpec& g, const CellIndex& idx) {
  return idx.ix + g.n_cells_per_axis * (idx.iy + g.n_cells_per_axis * idx.iz);
}

}  // namespace calodiff
