#pragma once
#include <cstdint>
#include <string>

#include "calodiff/config.hpp"
#include "calodiff/event.hpp"
#include "calodiff/geometry.hpp"
#include "calodiff/rng.hpp"

namespace calodiff {

// Parametric toy shower model. These constants shape the ground-truth
// distribution the generative models are trained against; they are
// generator metadata, not calibrated detector physics.
struct ShowerModelParams {
  double sampling_fraction = 0.02;   // mean visible fraction of incident energy
  double stochastic_term = 0.5;      // sqrt(GeV) resolution term
  double constant_term = 0.05;       // relative resolution floor
  double longitudinal_a0 = 2.0;      // gamma shape at 1 GeV
  double longitudinal_a1 = 0.4;      // shape growth per ln(E/GeV)
  double longitudinal_b = 0.15;      // 1/layer
  double transverse_width_front = 1.2;  // cells, at the front face
  double transverse_width_back = 2.5;   // cells, at the last layer
  double hits_per_gev = 1500.0;      // spatial points per visible GeV

  void validate() const;

  static ShowerModelParams from_config(const Config& cfg);
  void to_config(Config& cfg) const;

  // Relative energy resolution at a given incident momentum (GeV).
  double relative_sigma(double momentum_gev) const;
};

// Momentum from a unit draw: log10-uniform over [1, 125] GeV/c.
double momentum_from_unit(double u);

// Draws (momentum, theta = 17 deg, phi uniform) for one event.
IncidentParticle sample_incident(Rng& rng);

// Produces one digitized ground-truth shower: discrete cell centers,
// per-cell summed energies, thresholded, capped at max_points by energy
// rank. Deterministic given the rng stream.
PointCloudEvent generate_shower(const GeometrySpec& g, const ShowerModelParams& p,
                                const IncidentParticle& inc, Rng& rng);

// Writes n_events showers to a dataset file (pointcloud format). Event i is
// a pure function of (seed, i); workers only change wall time, not bytes.
void build_dataset(const GeometrySpec& g, const ShowerModelParams& p, int n_events,
                   std::uint64_t seed, const std::string& path, int workers = 1);

}  // namespace calodiff
