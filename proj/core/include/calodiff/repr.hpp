#pragma once
#include <array>
#include <cstdint>
#include <vector>

#include "calodiff/event.hpp"
#include "calodiff/geometry.hpp"

namespace calodiff {

// Fixed-size training view of a point cloud: max_points rows of
// (x, y, z, E), padded rows exactly zero, plus the conditioning record.
struct MaskedCloud {
  int max_points = 200;
  std::vector<double> features;     // max_points x 4, row-major
  std::vector<std::uint8_t> mask;   // 1 = real hit
  IncidentParticle incident;
  bool is_smeared = false;

  int n_hits() const;
  // Conditioning pair: (log10 momentum, hit count).
  std::array<double, 2> condition() const;
};

// Per-layer deposited energy of a voxel image (z-indexed, MeV).
using LayerEnergyVector = std::vector<double>;

VoxelImage voxelize(const GeometrySpec& g, const PointCloudEvent& event);

// Count of voxels with energy >= threshold (inclusive, like the cell cut).
int voxel_hits(const VoxelImage& img, double threshold);

LayerEnergyVector layer_energies(const VoxelImage& img);

MaskedCloud to_masked(const GeometrySpec& g, const PointCloudEvent& event);
PointCloudEvent from_masked(const MaskedCloud& mc);

// Dataset-level normalization constants. Coordinate bounds come from the
// lattice; energy and conditioning statistics from one pass over the
// training set. Stored with every checkpoint and reused verbatim when
// denormalizing samples.
struct CloudStats {
  double x_lo = 0, x_hi = 0, y_lo = 0, y_hi = 0, z_lo = 0, z_hi = 0;
  double e_log_mean = 0, e_log_std = 1;
  double p_log_mean = 0, p_log_std = 1;
  double n_log_mean = 0, n_log_std = 1;
};

CloudStats compute_cloud_stats(const GeometrySpec& g,
                               const std::vector<PointCloudEvent>& events);

// Coordinates to [-1, 1] over the lattice extent, energy to standardized
// log10. Masked rows stay zero. Throws on non-positive energies.
MaskedCloud normalize_cloud(const MaskedCloud& mc, const CloudStats& stats);
MaskedCloud denormalize_cloud(const MaskedCloud& mc, const CloudStats& stats);

// Per-z-layer unit-sum normalization of an image. Layers with zero energy
// stay zero and are flagged.
struct NormalizedImage {
  VoxelImage voxels;                  // each populated layer sums to 1
  LayerEnergyVector layers;           // original per-layer energies, MeV
  std::vector<std::uint8_t> zero_layer;
};

NormalizedImage normalize_image(const VoxelImage& img);
VoxelImage denormalize_image(const NormalizedImage& norm);

}  // namespace calodiff
