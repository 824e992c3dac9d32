#include "calodiff/shower.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <unordered_map>

#include "calodiff/dataset_io.hpp"

namespace calodiff {

namespace {
constexpr double kMomentumLo = 1.0;
constexpr double kMomentumHi = 125.0;
}  // namespace

void IncidentParticle::validate() const {
  if (!(momentum >= kMomentumLo && momentum <= kMomentumHi))
    throw std::invalid_argument("incident: momentum outside [1, 125] GeV/c");
  if (theta != 17.0) throw std::invalid_argument("incident: theta must be 17 degrees");
  if (!(phi >= 0.0 && phi < 360.0))
    throw std::invalid_argument("incident: phi outside [0, 360)");
}

double PointCloudEvent::total_energy() const {
  double sum = 0;
  for (const auto& h : hits) sum += h.energy;
  return sum;
}

void PointCloudEvent::validate(const GeometrySpec& g) const {
  incident.validate();
  if (n_hits() > g.max_points)
    throw std::invalid_argument("event: more hits than max_points");
  std::vector<int> flat;
  flat.reserve(hits.size());
  for (const auto& h : hits) {
    if (!(h.energy >= g.energy_threshold))
      throw std::invalid_argument("event: hit below energy threshold");
    flat.push_back(flat_cell_index(g, quantize(g, h.position)));
  }
  std::sort(flat.begin(), flat.end());
  if (std::adjacent_find(flat.begin(), flat.end()) != flat.end())
    throw std::invalid_argument("event: duplicate cell in hit list");
}

double VoxelImage::total_energy() const {
  double sum = 0;
  for (double e : energies) sum += e;
  return sum;
}

void ShowerModelParams::validate() const {
  const bool ok = sampling_fraction > 0 && sampling_fraction < 1 && stochastic_term > 0 &&
                  constant_term > 0 && longitudinal_a0 > 0 && longitudinal_a1 > 0 &&
                  longitudinal_b > 0 && transverse_width_front > 0 &&
                  transverse_width_back > 0 && hits_per_gev > 0;
  if (!ok) throw std::invalid_argument("shower params: all terms must be positive "
                                       "and sampling_fraction < 1");
}

ShowerModelParams ShowerModelParams::from_config(const Config& cfg) {
  ShowerModelParams p;
  p.sampling_fraction = cfg.get_double("shower.sampling_fraction", p.sampling_fraction);
  p.stochastic_term = cfg.get_double("shower.stochastic_term", p.stochastic_term);
  p.constant_term = cfg.get_double("shower.constant_term", p.constant_term);
  p.longitudinal_a0 = cfg.get_double("shower.longitudinal_a0", p.longitudinal_a0);
  p.longitudinal_a1 = cfg.get_double("shower.longitudinal_a1", p.longitudinal_a1);
  p.longitudinal_b = cfg.get_double("shower.longitudinal_b", p.longitudinal_b);
  p.transverse_width_front =
      cfg.get_double("shower.transverse_width_front_cells", p.transverse_width_front);
  p.transverse_width_back =
      cfg.get_double("shower.transverse_width_back_cells", p.transverse_width_back);
  p.hits_per_gev = cfg.get_double("shower.hits_per_gev", p.hits_per_gev);
  p.validate();
  return p;
}

void ShowerModelParams::to_config(Config& cfg) const {
  auto num = [](double v) { return std::to_string(v); };
  cfg.set("shower.sampling_fraction", num(sampling_fraction));
  cfg.set("shower.stochastic_term", num(stochastic_term));
  cfg.set("shower.constant_term", num(constant_term));
  cfg.set("shower.longitudinal_a0", num(longitudinal_a0));
  cfg.set("shower.longitudinal_a1", num(longitudinal_a1));
  cfg.set("shower.longitudinal_b", num(longitudinal_b));
  cfg.set("shower.transverse_width_front_cells", num(transverse_width_front));
  cfg.set("shower.transverse_width_back_cells", num(transverse_width_back));
  cfg.set("shower.hits_per_gev", num(hits_per_gev));
}

double ShowerModelParams::relative_sigma(double momentum_gev) const {
  const double s = stochastic_term / std::sqrt(momentum_gev);
  return std::sqrt(s * s + constant_term * constant_term);
}

double momentum_from_unit(double u) {
  return std::pow(10.0, u * std::log10(kMomentumHi / kMomentumLo)) * kMomentumLo;
}

IncidentParticle sample_incident(Rng& rng) {
  IncidentParticle inc;
  inc.momentum = momentum_from_unit(rng.uniform01());
  inc.theta = 17.0;
  inc.phi = rng.uniform01() * 360.0;
  return inc;
}

PointCloudEvent generate_shower(const GeometrySpec& g, const ShowerModelParams& p,
                                const IncidentParticle& inc, Rng& rng) {
  inc.validate();
  const int n_layers = g.n_cells_per_axis;
  const double deg = std::numbers::pi / 180.0;
  const double tan_theta = std::tan(inc.theta * deg);
  const double axis_dx = tan_theta * std::cos(inc.phi * deg);
  const double axis_dy = tan_theta * std::sin(inc.phi * deg);
  // The shower axis enters at the center of the front face; it must stay
  // inside the lattice through the last layer.
  if (tan_theta * g.depth() >= g.half_extent_xy())
    throw std::domain_error("generate_shower: shower axis exits the lattice");

  const double e_inc_mev = inc.momentum * 1000.0;
  const double sigma_rel = p.relative_sigma(inc.momentum);
  const double shape = p.longitudinal_a0 + p.longitudinal_a1 * std::log(inc.momentum);

  std::unordered_map<int, double> cell_energy;
  std::vector<double> weights;
  std::vector<int> cells;

  for (;;) {  // redraw until at least one cell survives the threshold
    cell_energy.clear();
    weights.clear();
    cells.clear();

    const double z_lo = std::min(4.0, 0.9 / sigma_rel);
    const double z = std::clamp(rng.normal(), -z_lo, 4.0);
    const double e_visible = p.sampling_fraction * e_inc_mev * (1.0 + sigma_rel * z);

    std::uint32_t n_points = rng.poisson(p.hits_per_gev * e_visible / 1000.0);
    while (n_points == 0) n_points = rng.poisson(p.hits_per_gev * e_visible / 1000.0);

    double weight_sum = 0;
    weights.reserve(n_points);
    cells.reserve(n_points);
    for (std::uint32_t i = 0; i < n_points; ++i) {
      const double w = rng.exponential();
      const double depth_layers = rng.gamma(shape, 1.0 / p.longitudinal_b);
      const double frac = depth_layers / n_layers;
      const double width_cells =
          p.transverse_width_front + (p.transverse_width_back - p.transverse_width_front) * frac;
      const double sigma_cm = width_cells * g.cell_pitch_xy;
      const double depth_cm = depth_layers * g.cell_pitch_z;
      const double x = axis_dx * depth_cm + sigma_cm * rng.normal();
      const double y = axis_dy * depth_cm + sigma_cm * rng.normal();
      weight_sum += w;
      if (depth_layers >= n_layers) continue;  // longitudinal leakage
      if (std::abs(x) >= g.half_extent_xy() || std::abs(y) >= g.half_extent_xy())
        continue;  // transverse leakage
      const CellIndex idx = quantize(g, Vec3{x, y, (std::floor(depth_layers) + 0.5) * g.cell_pitch_z});
      weights.push_back(w);
      cells.push_back(flat_cell_index(g, idx));
    }
    for (std::size_t i = 0; i < cells.size(); ++i)
      cell_energy[cells[i]] += e_visible * weights[i] / weight_sum;

    std::vector<std::pair<int, double>> kept;
    kept.reserve(cell_energy.size());
    for (const auto& [cell, e] : cell_energy)
      if (e >= g.energy_threshold) kept.emplace_back(cell, e);
    if (kept.empty()) continue;

    if (static_cast<int>(kept.size()) > g.max_points) {
      std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
        return a.second != b.second ? a.second > b.second : a.first < b.first;
      });
      kept.resize(g.max_points);
    }
    std::sort(kept.begin(), kept.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });

    PointCloudEvent ev;
    ev.incident = inc;
    ev.hits.reserve(kept.size());
    const int n = g.n_cells_per_axis;
    for (const auto& [flat, e] : kept) {
      CellIndex idx{flat % n, (flat / n) % n, flat / (n * n)};
      ev.hits.push_back(CellHit{cell_center(g, idx), e, false});
    }
    return ev;
  }
}

void build_dataset(const GeometrySpec& g, const ShowerModelParams& p, int n_events,
                   std::uint64_t seed, const std::string& path, int workers) {
  if (n_events < 1) throw std::invalid_argument("build_dataset: n_events must be >= 1");
  std::vector<PointCloudEvent> events(n_events);
  const auto make_event = [&](int i) {
    Rng rng(seed, static_cast<std::uint64_t>(i));
    const IncidentParticle inc = sample_incident(rng);
    events[i] = generate_shower(g, p, inc, rng);
  };
  parallel_for(n_events, workers, make_event);
  write_dataset(g, events, path, DatasetFormat::pointcloud);
}

}  // namespace calodiff
