#include "calodiff/repr.hpp"

#include <cmath>
#include <stdexcept>

namespace calodiff {

int MaskedCloud::n_hits() const {
  int n = 0;
  for (auto m : mask) n += m != 0;
  return n;
}

std::array<double, 2> MaskedCloud::condition() const {
  return {std::log10(incident.momentum), static_cast<double>(n_hits())};
}

VoxelImage voxelize(const GeometrySpec& g, const PointCloudEvent& event) {
  VoxelImage img;
  img.incident = event.incident;
  img.n_per_axis = g.voxels_per_axis();
  img.energies.assign(static_cast<std::size_t>(g.voxels_total()), 0.0);
  for (const auto& h : event.hits) {
    const CellIndex c = quantize(g, h.position);
    img.at(c.ix / g.voxel_group, c.iy / g.voxel_group, c.iz / g.voxel_group) += h.energy;
  }
  return img;
}

int voxel_hits(const VoxelImage& img, double threshold) {
  int n = 0;
  for (double e : img.energies) n += e >= threshold;
  return n;
}

LayerEnergyVector layer_energies(const VoxelImage& img) {
  const int n = img.n_per_axis;
  LayerEnergyVector layers(n, 0.0);
  for (int vz = 0; vz < n; ++vz)
    for (int vy = 0; vy < n; ++vy)
      for (int vx = 0; vx < n; ++vx) layers[vz] += img.at(vx, vy, vz);
  return layers;
}

MaskedCloud to_masked(const GeometrySpec& g, const PointCloudEvent& event) {
  if (event.n_hits() > g.max_points)
    throw std::length_error("to_masked: event exceeds max_points capacity");
  MaskedCloud mc;
  mc.max_points = g.max_points;
  mc.features.assign(static_cast<std::size_t>(g.max_points) * 4, 0.0);
  mc.mask.assign(static_cast<std::size_t>(g.max_points), 0);
  mc.incident = event.incident;
  for (int i = 0; i < event.n_hits(); ++i) {
    const auto& h = event.hits[i];
    mc.features[i * 4 + 0] = h.position[0];
    mc.features[i * 4 + 1] = h.position[1];
    mc.features[i * 4 + 2] = h.position[2];
    mc.features[i * 4 + 3] = h.energy;
    mc.mask[i] = 1;
    mc.is_smeared = mc.is_smeared || h.is_smeared;
  }
  return mc;
}

PointCloudEvent from_masked(const MaskedCloud& mc) {
  PointCloudEvent ev;
  ev.incident = mc.incident;
  for (int i = 0; i < mc.max_points; ++i) {
    if (!mc.mask[i]) continue;
    CellHit h;
    h.position = {mc.features[i * 4 + 0], mc.features[i * 4 + 1], mc.features[i * 4 + 2]};
    h.energy = mc.features[i * 4 + 3];
    h.is_smeared = mc.is_smeared;
    ev.hits.push_back(h);
  }
  return ev;
}

CloudStats compute_cloud_stats(const GeometrySpec& g,
                               const std::vector<PointCloudEvent>& events) {
  CloudStats s;
  s.x_lo = -g.half_extent_xy();
  s.x_hi = g.half_extent_xy();
  s.y_lo = s.x_lo;
  s.y_hi = s.x_hi;
  s.z_lo = 0.0;
  s.z_hi = g.depth();

  auto moments = [](const std::vector<double>& xs, double& mean, double& std_out) {
    double sum = 0;
    for (double x : xs) sum += x;
    mean = xs.empty() ? 0.0 : sum / static_cast<double>(xs.size());
    double var = 0;
    for (double x : xs) var += (x - mean) * (x - mean);
    std_out = xs.size() > 1 ? std::sqrt(var / static_cast<double>(xs.size())) : 1.0;
    if (std_out <= 0) std_out = 1.0;
  };

  std::vector<double> log_e, log_p, log_n;
  for (const auto& ev : events) {
    log_p.push_back(std::log10(ev.incident.momentum));
    log_n.push_back(std::log10(static_cast<double>(std::max(1, ev.n_hits()))));
    for (const auto& h : ev.hits) {
      if (!(h.energy > 0)) throw std::domain_error("cloud stats: non-positive hit energy");
      log_e.push_back(std::log10(h.energy));
    }
  }
  moments(log_e, s.e_log_mean, s.e_log_std);
  moments(log_p, s.p_log_mean, s.p_log_std);
  moments(log_n, s.n_log_mean, s.n_log_std);
  return s;
}

namespace {

double to_unit(double v, double lo, double hi) { return 2.0 * (v - lo) / (hi - lo) - 1.0; }
double from_unit(double u, double lo, double hi) { return lo + (u + 1.0) * 0.5 * (hi - lo); }

}  // namespace

MaskedCloud normalize_cloud(const MaskedCloud& mc, const CloudStats& stats) {
  MaskedCloud out = mc;
  for (int i = 0; i < mc.max_points; ++i) {
    if (!mc.mask[i]) continue;
    const double e = mc.features[i * 4 + 3];
    if (!(e > 0)) throw std::domain_error("normalize_cloud: non-positive energy");
    out.features[i * 4 + 0] = to_unit(mc.features[i * 4 + 0], stats.x_lo, stats.x_hi);
    out.features[i * 4 + 1] = to_unit(mc.features[i * 4 + 1], stats.y_lo, stats.y_hi);
    out.features[i * 4 + 2] = to_unit(mc.features[i * 4 + 2], stats.z_lo, stats.z_hi);
    out.features[i * 4 + 3] = (std::log10(e) - stats.e_log_mean) / stats.e_log_std;
  }
  return out;
}

MaskedCloud denormalize_cloud(const MaskedCloud& mc, const CloudStats& stats) {
  MaskedCloud out = mc;
  for (int i = 0; i < mc.max_points; ++i) {
    if (!mc.mask[i]) continue;
    out.features[i * 4 + 0] = from_unit(mc.features[i * 4 + 0], stats.x_lo, stats.x_hi);
    out.features[i * 4 + 1] = from_unit(mc.features[i * 4 + 1], stats.y_lo, stats.y_hi);
    out.features[i * 4 + 2] = from_unit(mc.features[i * 4 + 2], stats.z_lo, stats.z_hi);
    out.features[i * 4 + 3] =
        std::pow(10.0, mc.features[i * 4 + 3] * stats.e_log_std + stats.e_log_mean);
  }
  return out;
}

NormalizedImage normalize_image(const VoxelImage& img) {
  const int n = img.n_per_axis;
  NormalizedImage out;
  out.voxels = img;
  out.layers = layer_energies(img);
  out.zero_layer.assign(n, 0);
  for (double e : img.energies)
    if (e < 0) throw std::domain_error("normalize_image: negative voxel energy");
  for (int vz = 0; vz < n; ++vz) {
    if (out.layers[vz] > 0) {
      for (int vy = 0; vy < n; ++vy)
        for (int vx = 0; vx < n; ++vx) out.voxels.at(vx, vy, vz) /= out.layers[vz];
    } else {
      out.zero_layer[vz] = 1;
    }
  }
  return out;
}

VoxelImage denormalize_image(const NormalizedImage& norm) {
  VoxelImage img = norm.voxels;
  const int n = img.n_per_axis;
  for (int vz = 0; vz < n; ++vz) {
    const double scale = norm.zero_layer[vz] ? 0.0 : norm.layers[vz];
    for (int vy = 0; vy < n; ++vy)
      for (int vx = 0; vx < n; ++vx) img.at(vx, vy, vz) *= scale;
  }
  return img;
}

}  // namespace calodiff
